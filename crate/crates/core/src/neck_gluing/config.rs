//! Gluing configuration, neck radii and the m = 2 constant adjustment.

use serde::{Deserialize, Serialize};

use super::GluingError;
use crate::ale_models::{solve_simanca_ode, AleKind, AleModel};
use crate::mode_analysis::GroupDescriptor;

/// Parameters of one gluing run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GluingConfig {
    /// Complex dimension.
    pub m: usize,
    /// Gluing parameter ε ∈ (0, 1).
    pub eps: f64,
    /// Neck exponent θ with `r_ε = ε^θ`; `None` selects `(m−1)/m`.
    pub neck_exponent: Option<f64>,
    /// Outer cutoff radius.
    pub r0: f64,
    /// Inner cutoff radius (in model coordinates).
    #[serde(rename = "R0")]
    pub big_r0: f64,
    /// Which ALE model is glued in.
    pub ale: AleKind,
    /// Kähler-class weight `a > 0` of the model.
    pub a_weight: f64,
    /// Mode truncation of the boundary data (only γ = 0 carries data).
    pub gamma_max: u32,
    /// Matching-ball constant (reported, not enforced).
    pub kappa: f64,
    /// Chebyshev degree of each collocation solve.
    pub degree: usize,
    /// Relative Newton tolerance.
    pub newton_tol: f64,
    /// Absolute tolerance on the four matching residuals.
    pub matching_tol: f64,
    /// Iteration cap of the matching map.
    pub max_iterations: usize,
    /// Largest ε accepted (empirical smallness gate).
    pub eps_gate: f64,
    /// Integration horizon of the scalar-flat ODE (m ≥ 3 models).
    pub simanca_s_max: f64,
    /// Step tolerance of the scalar-flat ODE.
    pub simanca_tol: f64,
}

impl Default for GluingConfig {
    fn default() -> Self {
        Self {
            m: 2,
            eps: 1e-2,
            neck_exponent: None,
            r0: 1.0,
            big_r0: 1.0,
            ale: AleKind::Burns,
            a_weight: 1.0,
            gamma_max: 0,
            kappa: 100.0,
            degree: 48,
            newton_tol: 1e-10,
            matching_tol: 1e-9,
            max_iterations: 100,
            eps_gate: 0.2,
            simanca_s_max: 1e5,
            simanca_tol: 1e-12,
        }
    }
}

impl GluingConfig {
    /// Configuration for a model with defaults elsewhere.
    pub fn new(m: usize, ale: AleKind, eps: f64) -> Self {
        Self { m, ale, eps, ..Self::default() }
    }

    /// The effective neck exponent θ.
    pub fn theta(&self) -> f64 {
        self.neck_exponent.unwrap_or((self.m as f64 - 1.0) / self.m as f64)
    }

    /// Group acting on the model's asymptotic cone.
    pub fn group(&self) -> Result<GroupDescriptor, GluingError> {
        Ok(match self.ale {
            AleKind::CalabiZm => GroupDescriptor::cyclic_diagonal(self.m as u32)?,
            _ => GroupDescriptor::TRIVIAL,
        })
    }

    /// Checks ranges and the model/dimension pairing.
    pub fn validate(&self) -> Result<(), GluingError> {
        let bad = |msg: String| Err(GluingError::InvalidConfig(msg));
        if self.m < 2 {
            return bad(format!("m = {} < 2", self.m));
        }
        match self.ale {
            AleKind::Burns if self.m != 2 => return bad("the Burns model lives in m = 2".into()),
            AleKind::Simanca if !(3..=8).contains(&self.m) => {
                return bad("the scalar-flat ODE model needs 3 ≤ m ≤ 8".into())
            }
            _ => {}
        }
        if !(self.a_weight > 0.0) || !self.a_weight.is_finite() {
            return bad(format!("weight a = {} must be positive", self.a_weight));
        }
        if !(self.r0 > 0.0 && self.big_r0 > 0.0) {
            return bad("cutoff radii must be positive".into());
        }
        if self.degree < 8 {
            return bad(format!("collocation degree {} < 8", self.degree));
        }
        if !(self.newton_tol > 0.0 && self.matching_tol > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if !(self.eps < self.eps_gate) {
            return Err(GluingError::AboveGate { eps: self.eps, gate: self.eps_gate });
        }
        Ok(())
    }

    /// Builds the weighted, normalized model.
    pub fn build_model(&self) -> Result<AleModel, GluingError> {
        self.validate()?;
        Ok(match self.ale {
            AleKind::Burns => AleModel::burns(self.a_weight)?,
            AleKind::Simanca => {
                let profile = solve_simanca_ode(self.m, self.simanca_s_max, self.simanca_tol)?;
                AleModel::simanca(&profile, self.a_weight)?
            }
            AleKind::CalabiZm => AleModel::calabi(self.m, self.a_weight)?,
        })
    }
}

/// `(r_ε, R_ε) = (ε^θ, ε^{θ−1})`, checking `ε·R0 < r_ε < r0`.
pub fn neck_radii(cfg: &GluingConfig) -> Result<(f64, f64), GluingError> {
    let theta = cfg.theta();
    if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
        return Err(GluingError::InvalidConfig(format!("ε = {} outside (0, 1)", cfg.eps)));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(GluingError::InvalidConfig(format!("θ = {theta} outside (0, 1)")));
    }
    let r_eps = cfg.eps.powf(theta);
    let big_r_eps = r_eps / cfg.eps;
    let eps_r0 = cfg.eps * cfg.big_r0;
    if !(eps_r0 < r_eps && r_eps < cfg.r0) {
        return Err(GluingError::NeckCollision { eps_r0, r_eps, r0: cfg.r0 });
    }
    Ok((r_eps, big_r_eps))
}

/// Coefficient `a_j` of `ln|u|` in the model's excess over `|u|²/2`
/// (`2a` for the weighted Burns model, zero for the Ricci-flat one).
pub fn model_log_coefficient(cfg: &GluingConfig) -> f64 {
    match cfg.ale {
        AleKind::Burns => 2.0 * cfg.a_weight,
        _ => 0.0,
    }
}

/// Additive constant `−ε² a_j ln R_ε + (k0/2) ln r_ε` applied to the inner
/// potential in dimension two, where `a_j` is [`model_log_coefficient`].
pub fn m2_log_shift(cfg: &GluingConfig, k0: f64) -> Result<f64, GluingError> {
    if cfg.m != 2 {
        return Err(GluingError::WrongDimension(cfg.m));
    }
    let (r_eps, big_r_eps) = neck_radii(cfg)?;
    Ok(-cfg.eps * cfg.eps * model_log_coefficient(cfg) * big_r_eps.ln() + 0.5 * k0 * r_eps.ln())
}
