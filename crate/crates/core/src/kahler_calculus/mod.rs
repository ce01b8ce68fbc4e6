//! Metric data, scalar curvature, its linearization and nonlinear remainder,
//! and weighted norms of Kähler potentials.

mod error;
pub mod grid;
pub mod norms;
pub mod potential;
pub mod radial;

pub use error::CalculusError;
pub use grid::{scalar_curvature_grid, GridPotential};
pub use norms::{weighted_norm, NormMode, WeightedNormReport};
pub use potential::{ProfileDocument, ProfileRepr, RadialKahlerPotential};
pub use radial::{
    linearized_scal_apply, linearized_scal_at, nonlinear_remainder, nonlinear_remainder_at, radial_metric_data,
    radial_scalar_curvature, scalar_curvature_profile, MetricData, RadialProfile,
};
