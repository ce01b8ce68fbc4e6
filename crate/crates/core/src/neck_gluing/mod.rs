//! Gluing an ALE model into a flat cell across a neck, in the rotationally
//! symmetric reduction: outer and inner constant-scalar-curvature boundary
//! value problems coupled by fourth-order Cauchy-data matching.

mod collocation;
mod config;
mod error;
mod matching;
mod solve;
mod study;

pub use config::{m2_log_shift, model_log_coefficient, neck_radii, GluingConfig};
pub use error::{GluingError, Region};
pub use matching::{solve_matching, solve_matching_with_model, BallReport, BoundaryState, GluedReport, GluedSolution};
pub use solve::{
    divisor_constants, momentum_constants, sigma_prime, solve_inner, solve_outer, InnerSolution, OuterSolution,
    SolveSummary,
};
pub use study::{convergence_study, ConvergenceStudy, StudyRow, StudyStatus};
