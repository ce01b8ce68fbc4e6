use crate::kahler_calculus::CalculusError;
use crate::numerics::rk::RkError;

/// Failures while constructing or analysing ALE model potentials.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AleError {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Adaptive step control could not meet the tolerance.
    #[error("ODE integration failed: {0}")]
    IntegrationFailure(#[from] RkError),
    /// The profile has not settled at the integration horizon.
    #[error("ζ has not settled: s_max·|ζ(s_max) − ζ(s_max/2)| = {defect}")]
    NonConvergence { defect: f64 },
    /// A logarithm argument left the region where the principal branch is valid.
    #[error("log argument {re} + {im}i left the right half-plane")]
    BranchError { re: f64, im: f64 },
    /// The summed closed form is not real to the required accuracy.
    #[error("closed form has imaginary part {0}")]
    NotReal(f64),
    /// Samples do not span enough of the radius range.
    #[error("fit window [{lo}, {hi}] spans fewer than 1.5 decades")]
    InsufficientWindow { lo: f64, hi: f64 },
    /// The least-squares design matrix is too ill-conditioned.
    #[error("least-squares condition number {0:e} exceeds the threshold")]
    IllConditionedFit(f64),
    /// Failure in the underlying curvature calculus.
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}
