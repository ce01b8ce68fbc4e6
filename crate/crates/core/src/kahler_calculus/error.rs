use crate::numerics::spline::SplineError;

/// Failures of metric, curvature and norm evaluations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalculusError {
    /// Evaluation point outside the profile's domain.
    #[error("s = {s} outside the profile domain [{min}, {max}]")]
    Domain { s: f64, min: f64, max: f64 },
    /// The induced Hermitian metric is not positive definite.
    #[error("degenerate metric at s = {s}: tangential eigenvalue {g_tangent}, radial eigenvalue {g_radial}")]
    DegenerateMetric { s: f64, g_tangent: f64, g_radial: f64 },
    /// A grid evaluation point lacks the stencil margin or is not a grid node.
    #[error("point outside the sampled region or off-grid: {0}")]
    OutOfRegion(String),
    /// Invalid construction parameters.
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    /// Spline construction failed.
    #[error(transparent)]
    Spline(#[from] SplineError),
    /// Profile document could not be parsed.
    #[error("profile document: {0}")]
    Document(String),
}
