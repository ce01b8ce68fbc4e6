//! Explicit ALE model potentials (scalar-flat blow-ups of ℂ^m and the
//! Ricci-flat resolution of ℂ^m/ℤ_m), their normalization, and fits of their
//! asymptotic expansions.

mod asymptotics;
mod burns;
mod calabi;
mod error;
mod models;
mod simanca;

pub use asymptotics::{fit_refined_asymptotics, log_spaced, AsymptoticFit, FIT_CONDITION_LIMIT, MIN_WINDOW_DECADES};
pub use burns::{burns_potential, CLOSED_FORM_DOMAIN};
pub use calabi::{calabi_zm_excess, calabi_zm_potential, calabi_zm_radial};
pub use error::AleError;
pub use models::{ale_rescale, AleKind, AleModel};
pub use simanca::{solve_simanca_ode, SimancaDocument, SimancaProfile, SIMANCA_S_MIN};
