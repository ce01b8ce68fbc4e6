//! Numerical building blocks: Taylor jets, dual numbers, Chebyshev series,
//! quintic splines, adaptive Runge–Kutta integration and regression helpers.

pub mod chebyshev;
pub mod dual;
pub mod fit;
pub mod jet;
pub mod rk;
pub mod spline;

pub use dual::{Dual, Real};
pub use jet::Jet;
