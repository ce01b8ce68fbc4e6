//! Numerical toolkit for constant scalar curvature Kähler metrics on blow-ups:
//! radial curvature calculus, ALE model metrics, indicial-root and
//! biharmonic-extension analysis, Cauchy-data matching across a neck, and
//! blow-up class arithmetic.

// Negated comparisons are deliberate: `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Truncated power-series recurrences read most clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod ale_models;
pub mod class_arithmetic;
pub mod kahler_calculus;
pub mod mode_analysis;
pub mod neck_gluing;
pub mod numerics;
