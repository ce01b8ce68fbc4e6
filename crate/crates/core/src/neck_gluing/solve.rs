//! The outer and inner radial boundary value problems.
//!
//! Outer: `p` on `s ∈ [r_ε², r0²]` with `scal(s/2 + p) = ν`, `ν` unknown,
//! Dirichlet data `p = h`, `r²Δ₀p = k` (scaled to the unit sphere) at `r_ε`
//! and a flat cell at `r0`: `p = ∂_r p = ∂_rΔ₀p = 0`.
//!
//! Inner: `p` on `t ∈ [R0², R_ε²]` with `scal(F_a + p) = ε²ν`, data
//! `ε²p = h̃`, `ε²R_ε²Δ₀p = k̃` at `R_ε`, and at `R0` the two first
//! integrals of the radial cscK equation fixed to the values forced by a
//! smooth exceptional divisor with the model's normal bundle.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::collocation::{chain_row, combine, damped_newton, scal_with_gradient, Grid};
use super::{neck_radii, GluingConfig, GluingError, Region};
use crate::ale_models::AleModel;
use crate::kahler_calculus::RadialKahlerPotential;
use crate::mode_analysis::CauchyData;
use crate::numerics::chebyshev::ChebyshevSeries;
use crate::numerics::{Dual, Real};

/// Number of log-spaced points at which converged residuals are reported.
const CHECK_POINTS: usize = 400;

/// Converged outer solve.
#[derive(Clone, Debug)]
pub struct OuterSolution {
    /// Perturbation `p` as a Chebyshev series in `ln s`.
    pub series: ChebyshevSeries,
    /// `s/2 + p` on `[r_ε², r0²]`.
    pub potential: RadialKahlerPotential,
    /// Achieved scalar curvature.
    pub nu: f64,
    /// Newton steps taken.
    pub newton_iterations: usize,
    /// Largest `|scal − ν|` over a dense check grid.
    pub residual_max: f64,
}

/// Converged inner solve (model coordinates).
#[derive(Clone, Debug)]
pub struct InnerSolution {
    /// Perturbation `p` as a Chebyshev series in `ln t`.
    pub series: ChebyshevSeries,
    /// `F_a + p` on `[R0², R_ε²]`.
    pub potential: RadialKahlerPotential,
    /// Prescribed scalar curvature `ε²ν`.
    pub scal_target: f64,
    /// Newton steps taken.
    pub newton_iterations: usize,
    /// Largest `|scal − ε²ν|` over a dense check grid.
    pub residual_max: f64,
}

/// First integrals `(A, B)` of the radial cscK equation with constant
/// `σ′ = scal/(2m(m+1))`, from `[F′, F″, F‴]` at `t`.
///
/// With `τ = tF′`, `Ψ = t dτ/dt` and `Θ = τ^{m−1}Ψ`, a solution satisfies
/// `Θ = τ^m + Aτ + B − σ′τ^{m+1}` identically.
pub fn momentum_constants<T: Real>(m: usize, t: f64, d: [T; 3], sigma_p: f64) -> [T; 2] {
    let [f1, f2, f3] = d;
    let (tc, mi) = (T::cst(t), m as i32);
    let tau = tc * f1;
    let psi = tc * (f1 + tc * f2);
    let psi_x = tc * (f1 + T::cst(3.0 * t) * f2 + T::cst(t * t) * f3);
    let theta = tau.powi(mi - 1) * psi;
    let theta_x = T::cst((m - 1) as f64) * tau.powi(mi - 2) * psi * psi + tau.powi(mi - 1) * psi_x;
    let sp = T::cst(sigma_p);
    let a = theta_x / psi - T::cst(m as f64) * tau.powi(mi - 1) + T::cst((m + 1) as f64) * sp * tau.powi(mi);
    let b = theta - tau.powi(mi) - a * tau + sp * tau.powi(mi + 1);
    [a, b]
}

/// Values of `(A, B)` forced by a smooth divisor `𝒪(−k)` at moment `τ0`.
pub fn divisor_constants(m: usize, k: u32, tau0: f64, sigma_p: f64) -> [f64; 2] {
    let mi = m as i32;
    let a = (k as f64 - m as f64) * tau0.powi(mi - 1) + (m + 1) as f64 * sigma_p * tau0.powi(mi);
    let b = -tau0.powi(mi) - a * tau0 + sigma_p * tau0.powi(mi + 1);
    [a, b]
}

/// `σ′` for scalar curvature `scal` in dimension `m`.
pub fn sigma_prime(m: usize, scal: f64) -> f64 {
    scal / (2.0 * (m * (m + 1)) as f64)
}

/// Radial data `(h, k)` of the γ = 0 mode, rejecting non-radial input.
pub(crate) fn radial_data(cfg: &GluingConfig, data: &CauchyData) -> Result<(f64, f64), GluingError> {
    if data.m() != cfg.m {
        return Err(GluingError::InvalidConfig(format!("boundary data for m = {}, config m = {}", data.m(), cfg.m)));
    }
    let nonradial = data.h.coeffs.iter().chain(&data.k.coeffs).any(|(&g, &v)| g > 0 && v != 0.0);
    if nonradial {
        return Err(GluingError::InvalidConfig("only radial (γ = 0) boundary data can be solved".into()));
    }
    Ok((data.h.get(0), data.k.get(0)))
}

fn check_grid(lo: f64, hi: f64) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..CHECK_POINTS).map(|i| (a + (b - a) * i as f64 / (CHECK_POINTS - 1) as f64).exp()).collect()
}

fn initial(guess: Option<&[f64]>, len: usize) -> DVector<f64> {
    match guess {
        Some(g) if g.len() == len => DVector::from_column_slice(g),
        _ => DVector::zeros(len),
    }
}

/// Outer solve with radial data; `guess` warm-starts `[coeffs…, ν]`.
pub(crate) fn outer_radial(
    cfg: &GluingConfig,
    r_eps: f64,
    h: f64,
    k: f64,
    guess: Option<&[f64]>,
) -> Result<(OuterSolution, Vec<f64>), GluingError> {
    let (m, n) = (cfg.m, cfg.degree);
    let (s0, s1) = (r_eps * r_eps, cfg.r0 * cfg.r0);
    let grid = Grid::new(s0, s1, n);
    let (b0, b1) = (grid.basis_at(s0), grid.basis_at(s1));
    let mf = m as f64;
    let system = |u: &DVector<f64>| -> Result<(DVector<f64>, DMatrix<f64>), GluingError> {
        let c = &u.as_slice()[..=n];
        let nu = u[n + 1];
        let rows = n + 2;
        let mut r = DVector::zeros(rows);
        let mut jac = DMatrix::zeros(rows, n + 2);
        for (i, (&s, basis)) in grid.nodes.iter().zip(&grid.basis).enumerate() {
            let p = combine(basis, c);
            let f = [0.5 * s + p[0], 0.5 + p[1], p[2], p[3], p[4]];
            let (val, grad) = scal_with_gradient(Region::Outer, m, s, f)?;
            r[i] = val - nu;
            for (j, v) in chain_row(basis, &grad, 1).into_iter().enumerate() {
                jac[(i, j)] = v;
            }
            jac[(i, n + 1)] = -1.0;
        }
        let base = n - 3;
        let p0 = combine(&b0, c);
        let p1 = combine(&b1, c);
        r[base] = p0[0] - h;
        r[base + 1] = 4.0 * s0 * (s0 * p0[2] + mf * p0[1]) - k;
        r[base + 2] = p1[0];
        r[base + 3] = p1[1];
        r[base + 4] = s1 * p1[3] + (mf + 1.0) * p1[2];
        for j in 0..=n {
            jac[(base, j)] = b0[0][j];
            jac[(base + 1, j)] = 4.0 * s0 * (s0 * b0[2][j] + mf * b0[1][j]);
            jac[(base + 2, j)] = b1[0][j];
            jac[(base + 3, j)] = b1[1][j];
            jac[(base + 4, j)] = s1 * b1[3][j] + (mf + 1.0) * b1[2][j];
        }
        Ok((r, jac))
    };
    let out = damped_newton(Region::Outer, initial(guess, n + 2), cfg.newton_tol, system)?;
    let coeffs = out.u.as_slice().to_vec();
    let nu = coeffs[n + 1];
    let series = grid.series(&coeffs);
    let pert = RadialKahlerPotential::from_log_chebyshev(m, series.clone(), 0.0)?;
    let potential = RadialKahlerPotential::flat(m, (s0, s1))?.add_scaled(&pert, 1.0)?;
    let mut residual_max = 0.0f64;
    for s in check_grid(s0, s1) {
        let d = potential.derivatives(s)?;
        let (val, _) = scal_with_gradient(Region::Outer, m, s, d)?;
        residual_max = residual_max.max((val - nu).abs());
    }
    let sol = OuterSolution { series, potential, nu, newton_iterations: out.iterations, residual_max };
    Ok((sol, coeffs))
}

/// Inner solve with radial data; `guess` warm-starts the coefficients.
pub(crate) fn inner_radial(
    cfg: &GluingConfig,
    model: &AleModel,
    big_r_eps: f64,
    y_h: f64,
    y_k: f64,
    nu: f64,
    guess: Option<&[f64]>,
) -> Result<(InnerSolution, Vec<f64>), GluingError> {
    let (m, n) = (cfg.m, cfg.degree);
    let e2 = cfg.eps * cfg.eps;
    let (t0, t1) = (cfg.big_r0 * cfg.big_r0, big_r_eps * big_r_eps);
    let grid = Grid::new(t0, t1, n);
    let base_at = |t: f64| model.potential().derivatives(t);
    let node_base: Vec<[f64; 5]> = grid.nodes.iter().map(|&t| base_at(t)).collect::<Result<_, _>>()?;
    let (b0, b1) = (grid.basis_at(t0), grid.basis_at(t1));
    let f_core = base_at(t0)?;
    let target = e2 * nu;
    let sp = sigma_prime(m, target);
    let core = divisor_constants(m, model.divisor_multiplicity(), model.tau0(), sp);
    let mf = m as f64;
    let system = |u: &DVector<f64>| -> Result<(DVector<f64>, DMatrix<f64>), GluingError> {
        let c = u.as_slice();
        let mut r = DVector::zeros(n + 1);
        let mut jac = DMatrix::zeros(n + 1, n + 1);
        for (i, ((&t, basis), fb)) in grid.nodes.iter().zip(&grid.basis).zip(&node_base).enumerate() {
            let p = combine(basis, c);
            let f: [f64; 5] = std::array::from_fn(|q| fb[q] + p[q]);
            let (val, grad) = scal_with_gradient(Region::Inner, m, t, f)?;
            r[i] = val - target;
            for (j, v) in chain_row(basis, &grad, 1).into_iter().enumerate() {
                jac[(i, j)] = v;
            }
        }
        let base = n - 3;
        let p1 = combine(&b1, c);
        r[base] = e2 * p1[0] - y_h;
        r[base + 1] = e2 * 4.0 * t1 * (t1 * p1[2] + mf * p1[1]) - y_k;
        let p0 = combine(&b0, c);
        let fc: [f64; 3] = std::array::from_fn(|q| f_core[q + 1] + p0[q + 1]);
        let ab = momentum_constants(m, t0, fc, sp);
        r[base + 2] = ab[0] - core[0];
        r[base + 3] = ab[1] - core[1];
        let mut grads = [[0.0; 3]; 2];
        for l in 0..3 {
            let d: [Dual; 3] = std::array::from_fn(|q| Dual::new(fc[q], if q == l { 1.0 } else { 0.0 }));
            let ab = momentum_constants(m, t0, d, sp);
            grads[0][l] = ab[0].d;
            grads[1][l] = ab[1].d;
        }
        let row_a = chain_row(&b0, &grads[0], 1);
        let row_b = chain_row(&b0, &grads[1], 1);
        for j in 0..=n {
            jac[(base, j)] = e2 * b1[0][j];
            jac[(base + 1, j)] = e2 * 4.0 * t1 * (t1 * b1[2][j] + mf * b1[1][j]);
            jac[(base + 2, j)] = row_a[j];
            jac[(base + 3, j)] = row_b[j];
        }
        Ok((r, jac))
    };
    let out = damped_newton(Region::Inner, initial(guess, n + 1), cfg.newton_tol, system)?;
    let coeffs = out.u.as_slice().to_vec();
    let series = grid.series(&coeffs);
    let pert = RadialKahlerPotential::from_log_chebyshev(m, series.clone(), 0.0)?;
    let potential = model.potential().with_domain((t0, t1))?.add_scaled(&pert, 1.0)?;
    let mut residual_max = 0.0f64;
    for t in check_grid(t0, t1) {
        let d = potential.derivatives(t)?;
        let (val, _) = scal_with_gradient(Region::Inner, m, t, d)?;
        residual_max = residual_max.max((val - target).abs());
    }
    let sol = InnerSolution { series, potential, scal_target: target, newton_iterations: out.iterations, residual_max };
    Ok((sol, coeffs))
}

/// Solves the outer problem for radial Cauchy data at `r_ε`.
///
/// The scalar curvature constant is an unknown of the problem and is
/// returned as [`OuterSolution::nu`] (the flat base has zero curvature).
pub fn solve_outer(cfg: &GluingConfig, boundary: &CauchyData) -> Result<OuterSolution, GluingError> {
    cfg.validate()?;
    let (r_eps, _) = neck_radii(cfg)?;
    let (h, k) = radial_data(cfg, boundary)?;
    Ok(outer_radial(cfg, r_eps, h, k, None)?.0)
}

/// Solves the inner problem with scalar curvature `ε²ν` for radial data at `R_ε`.
pub fn solve_inner(
    cfg: &GluingConfig,
    model: &AleModel,
    boundary_tilde: &CauchyData,
    nu: f64,
) -> Result<InnerSolution, GluingError> {
    cfg.validate()?;
    let (_, big_r_eps) = neck_radii(cfg)?;
    let (h, k) = radial_data(cfg, boundary_tilde)?;
    Ok(inner_radial(cfg, model, big_r_eps, h, k, nu, None)?.0)
}

/// Serializable summary of a boundary value solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    /// Newton steps.
    pub newton_iterations: usize,
    /// Dense-grid curvature residual.
    pub residual_max: f64,
    /// Chebyshev coefficients of the perturbation in the log variable.
    pub series: ChebyshevSeries,
}

impl From<&OuterSolution> for SolveSummary {
    fn from(s: &OuterSolution) -> Self {
        Self { newton_iterations: s.newton_iterations, residual_max: s.residual_max, series: s.series.clone() }
    }
}

impl From<&InnerSolution> for SolveSummary {
    fn from(s: &InnerSolution) -> Self {
        Self { newton_iterations: s.newton_iterations, residual_max: s.residual_max, series: s.series.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ale_models::AleKind;

    #[test]
    fn flat_and_burns_constants() {
        let flat = momentum_constants(3, 2.0, [0.5, 0.0, 0.0], 0.0);
        assert!(flat[0].abs() < 1e-15 && flat[1].abs() < 1e-15);
        // Burns: F = t/2 + ln t.
        let t = 3.0;
        let ab = momentum_constants(2, t, [0.5 + 1.0 / t, -1.0 / (t * t), 2.0 / (t * t * t)], 0.0);
        let core = divisor_constants(2, 1, 1.0, 0.0);
        assert!((ab[0] - core[0]).abs() < 1e-14 && (ab[1] - core[1]).abs() < 1e-14);
    }

    #[test]
    fn zero_data_gives_zero_solutions() {
        let cfg = GluingConfig::new(2, AleKind::Burns, 1e-2);
        let zero = CauchyData::radial(2, 0.0, 0.0).unwrap();
        let outer = solve_outer(&cfg, &zero).unwrap();
        assert_eq!(outer.nu, 0.0);
        assert!(outer.series.coeffs.iter().all(|c| *c == 0.0));
        let model = cfg.build_model().unwrap();
        let inner = solve_inner(&cfg, &model, &zero, 0.0).unwrap();
        assert!(inner.series.coeffs.iter().all(|c| c.abs() < 1e-14));
        assert!(inner.residual_max < 1e-12);
    }
}
