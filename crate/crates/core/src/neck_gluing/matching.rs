//! Cauchy-data matching across the neck sphere `|z| = r_ε`.
//!
//! The outer data `x = (h, k)` prescribe the outer perturbation at `r_ε`
//! (value `h + ℓ(k)` and scaled Laplacian `k`) and the inner data
//! `y = (h̃, k̃)` prescribe `ε²` times the inner perturbation at `R_ε`.
//! In dimension two the radial outer mode carries `(k/2) ln r`, whose
//! constant `ℓ(k) = (k/2) ln(r_ε/r0)` is part of the outer value, and the
//! inner side is shifted by [`m2_log_shift`]; otherwise `ℓ = 0`.
//!
//! The value and Laplacian conditions fix `y` in terms of `x` and the scaled
//! traces `T` of the model's excess over `|u|²/2`.  The normal-derivative
//! jumps `D` are driven to zero by the Picard map `x ↦ x + 𝒫⁻¹(D)`, where
//! `𝒫` is the exact mismatch map of the biharmonic extensions.  The
//! linearized map is nearly nilpotent, so single-step correction ratios
//! oscillate; the contraction factor is estimated from two-step ratios
//! `(|δ_n|/|δ_{n−2}|)^{1/2}`.  A Newton iteration on all four unknowns with
//! a finite-difference Jacobian cross-checks the fixed point.

use serde::{Deserialize, Serialize};

use super::solve::{inner_radial, outer_radial, InnerSolution, OuterSolution, SolveSummary};
use super::{m2_log_shift, neck_radii, GluingConfig, GluingError};
use crate::ale_models::AleModel;
use crate::kahler_calculus::potential::log_to_linear_derivatives;
use crate::kahler_calculus::radial::{radial_r_derivatives, scaled_traces};
use crate::mode_analysis::{invert_p, CauchyData, ModeVector};

/// Relative step below which the matching iteration is at roundoff.
const NOISE_STEP: f64 = 1e-9;
/// Relative step at which the matching iteration is declared converged.
const CONVERGED_STEP: f64 = 1e-12;
/// Contraction factor above which the iteration is declared divergent when
/// exceeded on two consecutive estimates (a single excess can be transient).
const MAX_CONTRACTION: f64 = 0.9;
/// Iteration cap of the Newton cross-check.
const NEWTON_MAX: usize = 25;

/// Boundary data at the neck sphere and the achieved curvature offset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryState {
    /// Outer Cauchy data `(h, k)`.
    pub data: CauchyData,
    /// Inner Cauchy data `(h̃, k̃)`.
    pub data_tilde: CauchyData,
    /// Scalar curvature offset ν.
    pub nu: f64,
}

/// Size of the converged data relative to the matching-ball radii.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallReport {
    /// `|h|/r_ε⁴`.
    pub h_ratio: f64,
    /// `|k|/r_ε⁴`.
    pub k_ratio: f64,
    /// `|h̃|/R_ε^{4−2m}`.
    pub h_tilde_ratio: f64,
    /// `|k̃|/R_ε^{4−2m}`.
    pub k_tilde_ratio: f64,
    /// All four ratios are at most κ and `|ν| ≤ 1` (flat base).
    pub within_ball: bool,
}

/// Result of a converged gluing run.
#[derive(Clone, Debug)]
pub struct GluedSolution {
    /// Configuration used.
    pub config: GluingConfig,
    /// Gluing parameter.
    pub eps: f64,
    /// Neck radius in base coordinates.
    pub r_eps: f64,
    /// Neck radius in model coordinates.
    pub big_r_eps: f64,
    /// Common scalar curvature of the glued profile.
    pub nu: f64,
    /// Outer-minus-inner scaled traces `[f, r∂_r f, r²Δ₀f, r³∂_rΔ₀f]` at `r_ε`.
    pub mismatch: [f64; 4],
    /// Picard iterations performed.
    pub iterations: usize,
    /// Constant added to the inner side in dimension two.
    pub m2_log_shift: Option<f64>,
    /// Scaled traces of the unperturbed jump (`x = y = 0`).
    pub pre_iteration_traces: [f64; 4],
    /// `max |pre_iteration_traces|`.
    pub pre_iteration_defect: f64,
    /// Two-step contraction estimates `(|δ_n|/|δ_{n−2}|)^{1/2}` above roundoff.
    pub contraction_factors: Vec<f64>,
    /// ν from the Newton cross-check.
    pub newton_nu: f64,
    /// Newton cross-check iterations.
    pub newton_iterations: usize,
    /// Largest distance between the Picard and Newton boundary data.
    pub newton_data_gap: f64,
    /// `r_ε^k |∂_r^k(outer − inner)|` at `r_ε` for `k = 0..4`.
    pub c4_jumps: [f64; 5],
    /// Converged boundary data.
    pub boundary: BoundaryState,
    /// Ball-size diagnostics.
    pub ball: BallReport,
    /// Outer solve at the fixed point.
    pub outer: OuterSolution,
    /// Inner solve at the fixed point (model coordinates).
    pub inner: InnerSolution,
}

impl GluedSolution {
    /// Asymptotic contraction factor (last estimate above roundoff).
    pub fn contraction_factor(&self) -> Option<f64> {
        self.contraction_factors.last().copied()
    }

    /// `max |mismatch|`.
    pub fn mismatch_max(&self) -> f64 {
        self.mismatch.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// Serializable summary.
    pub fn report(&self) -> GluedReport {
        GluedReport {
            config: self.config.clone(),
            eps: self.eps,
            r_eps: self.r_eps,
            big_r_eps: self.big_r_eps,
            nu: self.nu,
            mismatch: self.mismatch,
            iterations: self.iterations,
            m2_log_shift: self.m2_log_shift,
            pre_iteration_defect: self.pre_iteration_defect,
            contraction_factors: self.contraction_factors.clone(),
            newton_nu: self.newton_nu,
            newton_iterations: self.newton_iterations,
            c4_jumps: self.c4_jumps,
            boundary: self.boundary.clone(),
            ball: self.ball.clone(),
            outer: SolveSummary::from(&self.outer),
            inner: SolveSummary::from(&self.inner),
        }
    }
}

/// JSON form of a [`GluedSolution`]; profiles are given by their series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluedReport {
    pub config: GluingConfig,
    pub eps: f64,
    pub r_eps: f64,
    #[serde(rename = "R_eps")]
    pub big_r_eps: f64,
    pub nu: f64,
    pub mismatch: [f64; 4],
    pub iterations: usize,
    pub m2_log_shift: Option<f64>,
    pub pre_iteration_defect: f64,
    pub contraction_factors: Vec<f64>,
    pub newton_nu: f64,
    pub newton_iterations: usize,
    pub c4_jumps: [f64; 5],
    pub boundary: BoundaryState,
    pub ball: BallReport,
    pub outer: SolveSummary,
    pub inner: SolveSummary,
}

struct Evaluation {
    outer: OuterSolution,
    inner: InnerSolution,
    mismatch: [f64; 4],
    shift: f64,
}

struct Matcher<'a> {
    cfg: &'a GluingConfig,
    model: &'a AleModel,
    r_eps: f64,
    big_r_eps: f64,
    tail: [f64; 4],
    outer_guess: Option<Vec<f64>>,
    inner_guess: Option<Vec<f64>>,
}

impl<'a> Matcher<'a> {
    fn new(cfg: &'a GluingConfig, model: &'a AleModel) -> Result<Self, GluingError> {
        let (r_eps, big_r_eps) = neck_radii(cfg)?;
        let t1 = big_r_eps * big_r_eps;
        let excess = model.excess().derivatives(t1)?;
        let e2 = cfg.eps * cfg.eps;
        let tail = scaled_traces(cfg.m, big_r_eps, excess).map(|v| e2 * v);
        Ok(Self { cfg, model, r_eps, big_r_eps, tail, outer_guess: None, inner_guess: None })
    }

    /// Constant of the outer radial log mode contained in the outer value.
    fn outer_offset(&self, k: f64) -> f64 {
        if self.cfg.m == 2 {
            0.5 * k * (self.r_eps / self.cfg.r0).ln()
        } else {
            0.0
        }
    }

    fn shift(&self, k: f64) -> Result<f64, GluingError> {
        if self.cfg.m == 2 {
            m2_log_shift(self.cfg, k)
        } else {
            Ok(0.0)
        }
    }

    /// Inner data compatible with the outer data through the value and
    /// Laplacian conditions.
    fn compatible_inner(&self, x: [f64; 2]) -> Result<[f64; 2], GluingError> {
        Ok([x[0] + self.outer_offset(x[1]) - self.tail[0] - self.shift(x[1])?, x[1] - self.tail[2]])
    }

    fn evaluate(&mut self, x: [f64; 2], y: [f64; 2]) -> Result<Evaluation, GluingError> {
        let cfg = self.cfg;
        let (outer, oc) =
            outer_radial(cfg, self.r_eps, x[0] + self.outer_offset(x[1]), x[1], self.outer_guess.as_deref())?;
        let (inner, ic) =
            inner_radial(cfg, self.model, self.big_r_eps, y[0], y[1], outer.nu, self.inner_guess.as_deref())?;
        self.outer_guess = Some(oc);
        self.inner_guess = Some(ic);
        let s0 = self.r_eps * self.r_eps;
        let po = log_to_linear_derivatives(s0, outer.series.derivatives(s0.ln()));
        let to = scaled_traces(cfg.m, self.r_eps, po);
        let t1 = self.big_r_eps * self.big_r_eps;
        let pi = log_to_linear_derivatives(t1, inner.series.derivatives(t1.ln()));
        let ti = scaled_traces(cfg.m, self.big_r_eps, pi);
        let shift = self.shift(x[1])?;
        let e2 = cfg.eps * cfg.eps;
        let mut mismatch = [0.0; 4];
        for q in 0..4 {
            mismatch[q] = to[q] - (self.tail[q] + e2 * ti[q]);
        }
        mismatch[0] -= shift;
        Ok(Evaluation { outer, inner, mismatch, shift })
    }

    /// `r_ε^k ∂_r^k` jumps of the two sides at the neck.
    fn c4_jumps(&self, ev: &Evaluation) -> Result<[f64; 5], GluingError> {
        let s0 = self.r_eps * self.r_eps;
        let po = log_to_linear_derivatives(s0, ev.outer.series.derivatives(s0.ln()));
        let t1 = self.big_r_eps * self.big_r_eps;
        let ex = self.model.excess().derivatives(t1)?;
        let pi = log_to_linear_derivatives(t1, ev.inner.series.derivatives(t1.ln()));
        let e2 = self.cfg.eps * self.cfg.eps;
        let mut scale = e2;
        let mut inner_s = [0.0; 5];
        for k in 0..5 {
            inner_s[k] = scale * (ex[k] + pi[k]);
            scale /= e2;
        }
        inner_s[0] += ev.shift;
        let (ro, ri) = (radial_r_derivatives(self.r_eps, po), radial_r_derivatives(self.r_eps, inner_s));
        let mut rk = 1.0;
        Ok(std::array::from_fn(|k| {
            let j = rk * (ro[k] - ri[k]).abs();
            rk *= self.r_eps;
            j
        }))
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

fn radial_cauchy(cfg: &GluingConfig, h: f64, k: f64) -> Result<CauchyData, GluingError> {
    let group = cfg.group()?;
    let hv = ModeVector::single(cfg.m, group, cfg.gamma_max, 0, h)?;
    let kv = ModeVector::single(cfg.m, group, cfg.gamma_max, 0, k)?;
    Ok(CauchyData::new(hv, kv)?)
}

/// Runs the matching iteration for the model described by `cfg`.
pub fn solve_matching(cfg: &GluingConfig) -> Result<GluedSolution, GluingError> {
    let model = cfg.build_model()?;
    solve_matching_with_model(cfg, &model)
}

/// Runs the matching iteration with a prebuilt model (which must match `cfg`).
pub fn solve_matching_with_model(cfg: &GluingConfig, model: &AleModel) -> Result<GluedSolution, GluingError> {
    cfg.validate()?;
    if model.m() != cfg.m || model.kind() != cfg.ale || model.weight() != cfg.a_weight {
        return Err(GluingError::InvalidConfig("model does not match the configuration".into()));
    }
    let mut matcher = Matcher::new(cfg, model)?;
    let mut pre = matcher.tail;
    pre[0] += matcher.shift(0.0)?;
    let pre_iteration_defect = max_abs(&pre);
    let group = cfg.group()?;

    let mut x = [0.0f64; 2];
    let mut steps: Vec<f64> = Vec::new();
    let mut contraction_factors = Vec::new();
    let mut iterations = 0;
    let (ev, y) = loop {
        iterations += 1;
        let y = matcher.compatible_inner(x)?;
        let ev = matcher.evaluate(x, y)?;
        let d1 = ModeVector::single(cfg.m, group, 0, 0, ev.mismatch[1])?;
        let d2 = ModeVector::single(cfg.m, group, 0, 0, ev.mismatch[3])?;
        let corr = invert_p(&d1, &d2)?;
        let delta = [corr.h.get(0), corr.k.get(0)];
        let step = max_abs(&delta);
        let scale = max_abs(&x).max(pre_iteration_defect);
        let factor = (steps.len() >= 2).then(|| {
            let p = steps[steps.len() - 2];
            if p > 0.0 {
                (step / p).sqrt()
            } else {
                0.0
            }
        });
        let above_noise = step > NOISE_STEP * scale;
        if let Some(f) = factor {
            if above_noise {
                let persistent = contraction_factors.last().is_some_and(|&g| g > MAX_CONTRACTION);
                contraction_factors.push(f);
                if f > MAX_CONTRACTION && persistent {
                    return Err(GluingError::FixedPointDivergence { iteration: iterations, factor: f });
                }
            }
        }
        let stalled = !above_noise && factor.is_some_and(|f| f > MAX_CONTRACTION);
        if step <= CONVERGED_STEP * scale || stalled {
            break (ev, y);
        }
        if iterations >= cfg.max_iterations {
            return Err(GluingError::NotConverged { mismatch: max_abs(&ev.mismatch), iterations });
        }
        x = [x[0] + delta[0], x[1] + delta[1]];
        steps.push(step);
    };
    let mismatch = ev.mismatch;
    if !(max_abs(&mismatch) <= cfg.matching_tol) {
        return Err(GluingError::NotConverged { mismatch: max_abs(&mismatch), iterations });
    }
    let c4_jumps = matcher.c4_jumps(&ev)?;

    // Newton cross-check on (h, k, h̃, k̃) from the unperturbed point.
    let mut cross = Matcher::new(cfg, model)?;
    let mut z = {
        let y0 = cross.compatible_inner([0.0, 0.0])?;
        [0.0, 0.0, y0[0], y0[1]]
    };
    let mut newton_iterations = 0;
    let mut newton_ev = cross.evaluate([z[0], z[1]], [z[2], z[3]])?;
    for it in 1..=NEWTON_MAX {
        newton_iterations = it;
        let g0 = newton_ev.mismatch;
        let h = 1e-6 * max_abs(&z).max(pre_iteration_defect);
        let mut jac = nalgebra::Matrix4::zeros();
        for j in 0..4 {
            let mut zp = z;
            zp[j] += h;
            let gp = cross.evaluate([zp[0], zp[1]], [zp[2], zp[3]])?.mismatch;
            for i in 0..4 {
                jac[(i, j)] = (gp[i] - g0[i]) / h;
            }
        }
        let rhs = -nalgebra::Vector4::from(g0);
        let dz = jac.lu().solve(&rhs).ok_or(GluingError::NotConverged { mismatch: max_abs(&g0), iterations: it })?;
        for i in 0..4 {
            z[i] += dz[i];
        }
        newton_ev = cross.evaluate([z[0], z[1]], [z[2], z[3]])?;
        if dz.amax() <= 1e-10 * max_abs(&z) {
            break;
        }
    }
    let newton_data_gap = max_abs(&[z[0] - x[0], z[1] - x[1], z[2] - y[0], z[3] - y[1]]);

    let (r_eps, big_r_eps) = (matcher.r_eps, matcher.big_r_eps);
    let nu = ev.outer.nu;
    let ball = {
        let (r4, rt) = (r_eps.powi(4), big_r_eps.powi(4 - 2 * cfg.m as i32));
        let ratios = [x[0].abs() / r4, x[1].abs() / r4, y[0].abs() / rt, y[1].abs() / rt];
        BallReport {
            h_ratio: ratios[0],
            k_ratio: ratios[1],
            h_tilde_ratio: ratios[2],
            k_tilde_ratio: ratios[3],
            within_ball: ratios.iter().all(|r| *r <= cfg.kappa) && nu.abs() <= 1.0,
        }
    };
    let boundary =
        BoundaryState { data: radial_cauchy(cfg, x[0], x[1])?, data_tilde: radial_cauchy(cfg, y[0], y[1])?, nu };
    Ok(GluedSolution {
        config: cfg.clone(),
        eps: cfg.eps,
        r_eps,
        big_r_eps,
        nu,
        mismatch,
        iterations,
        m2_log_shift: (cfg.m == 2).then_some(ev.shift),
        pre_iteration_traces: pre,
        pre_iteration_defect,
        contraction_factors,
        newton_nu: newton_ev.outer.nu,
        newton_iterations,
        newton_data_gap,
        c4_jumps,
        boundary,
        ball,
        outer: ev.outer,
        inner: ev.inner,
    })
}
