use crate::ale_models::AleError;
use crate::kahler_calculus::CalculusError;
use crate::mode_analysis::ModeError;

/// Which boundary value problem a solver failure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// The annulus `r_ε ≤ |z| ≤ r0` of the base.
    Outer,
    /// The region `R0 ≤ |u| ≤ R_ε` of the ALE model.
    Inner,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Region::Outer => "outer",
            Region::Inner => "inner",
        })
    }
}

/// Failures of the gluing pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GluingError {
    /// The neck radii violate `ε·R0 < r_ε < r0`.
    #[error("neck collision: need ε·R0 = {eps_r0} < r_ε = {r_eps} < r0 = {r0}")]
    NeckCollision { eps_r0: f64, r_eps: f64, r0: f64 },
    /// Configuration outside the supported range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// An m = 2 only quantity was requested in another dimension.
    #[error("operation requires m = 2, got m = {0}")]
    WrongDimension(usize),
    /// ε exceeds the configured smallness gate.
    #[error("ε = {eps} exceeds the smallness gate {gate}")]
    AboveGate { eps: f64, gate: f64 },
    /// Damped Newton failed on a boundary value problem.
    #[error("{region} Newton iteration diverged after {iterations} steps (residual {residual:e})")]
    NewtonDivergence { region: Region, iterations: usize, residual: f64 },
    /// A Newton system was numerically singular.
    #[error("{0} collocation Jacobian is singular")]
    SingularJacobian(Region),
    /// An iterate left the space of Kähler potentials.
    #[error("degenerate metric in the {region} region at s = {s}")]
    DegenerateMetric { region: Region, s: f64 },
    /// The matching iteration is not contracting.
    #[error("matching iteration {iteration} has contraction factor {factor} > 0.9")]
    FixedPointDivergence { iteration: usize, factor: f64 },
    /// The matching iteration stopped without meeting the tolerance.
    #[error("matching residual {mismatch:e} above tolerance after {iterations} iterations")]
    NotConverged { mismatch: f64, iterations: usize },
    /// Model construction failed.
    #[error(transparent)]
    Ale(#[from] AleError),
    /// Mode bookkeeping failed.
    #[error(transparent)]
    Mode(#[from] ModeError),
    /// Curvature evaluation failed.
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}
