//! Cohomological bookkeeping of blow-ups: Kähler and Chern intersection
//! numbers, average scalar curvature as a function of ε, its monotonicity,
//! and the parameter solve for zero average scalar curvature.

mod classes;
mod error;
mod family;

pub use classes::{
    average_scal, average_scal_derivative, blowup_classes, derivative_numerator, monotonicity_check, BlowupClassData,
    ClassNumbers, MonotonicityReport,
};
pub use error::ClassError;
pub use family::{family_member, zero_scal_solve, BaseFamily, ZERO_SCAL_TOL};
