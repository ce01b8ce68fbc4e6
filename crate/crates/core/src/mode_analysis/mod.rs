//! Sphere-eigenmode bookkeeping on ℂ^m/Γ: indicial roots of the Euclidean
//! bi-Laplacian, exact biharmonic extensions of Cauchy data, and the
//! Cauchy-data mismatch map with its inverse.

mod error;
mod extension;
mod indicial;
mod mismatch;
mod modes;

pub use error::ModeError;
pub use extension::{
    biharmonic_inner, biharmonic_outer, evaluate_extension, laplacian_factor, BiharmonicExtension, ModeTerms,
    ModeTraces, Side,
};
pub use indicial::{indicial_roots, mode_roots, IndicialRootSet};
pub use mismatch::{invert_p, mismatch_map_p};
pub use modes::{
    invariant_gammas, representative_harmonic, sphere_eigenvalue, CauchyData, GroupDescriptor, GroupKind, ModeVector,
};
