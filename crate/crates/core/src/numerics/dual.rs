//! Scalar abstraction shared by plain evaluation and forward-mode
//! differentiation.
//!
//! Closed-form curvature expressions are written once, generically over
//! [`Real`], and evaluated either on `f64` or on [`Dual`] numbers to obtain
//! exact directional derivatives (linearizations and Newton Jacobians).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Minimal field-like scalar interface used by the curvature formulas.
pub trait Real:
    Copy + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    /// Embeds a constant.
    fn cst(v: f64) -> Self;
    /// Natural logarithm.
    fn ln(self) -> Self;
    /// Integer power.
    fn powi(self, n: i32) -> Self;
    /// Primal value.
    fn value(self) -> f64;
}

impl Real for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn value(self) -> f64 {
        self
    }
}

/// Dual number `v + d·ϵ` with `ϵ² = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Dual {
    /// Primal part.
    pub v: f64,
    /// Tangent part.
    pub d: f64,
}

impl Dual {
    /// Dual number with the given primal and tangent parts.
    pub fn new(v: f64, d: f64) -> Self {
        Self { v, d }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, r: Dual) -> Dual {
        Dual::new(self.v + r.v, self.d + r.d)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, r: Dual) -> Dual {
        Dual::new(self.v - r.v, self.d - r.d)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, r: Dual) -> Dual {
        Dual::new(self.v * r.v, self.d * r.v + self.v * r.d)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, r: Dual) -> Dual {
        let q = self.v / r.v;
        Dual::new(q, (self.d - q * r.d) / r.v)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.v, -self.d)
    }
}

impl Real for Dual {
    fn cst(v: f64) -> Self {
        Dual::new(v, 0.0)
    }
    fn ln(self) -> Self {
        Dual::new(self.v.ln(), self.d / self.v)
    }
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Dual::cst(1.0);
        }
        let p = self.v.powi(n - 1);
        Dual::new(p * self.v, n as f64 * p * self.d)
    }
    fn value(self) -> f64 {
        self.v
    }
}
