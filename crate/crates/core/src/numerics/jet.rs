//! Truncated Taylor arithmetic of fixed order.
//!
//! A [`Jet`] stores the normalized Taylor coefficients `c_k = f^(k)(x0) / k!`
//! of a function at a point, truncated after order [`JET_ORDER`].  Arithmetic
//! on jets is exact up to the truncation, so evaluating a closed-form
//! expression on the identity jet yields its first four derivatives to
//! floating-point accuracy.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Highest retained Taylor order (derivatives through the fourth).
pub const JET_ORDER: usize = 4;
const N: usize = JET_ORDER + 1;
const FACTORIALS: [f64; N] = [1.0, 1.0, 2.0, 6.0, 24.0];

/// Truncated Taylor polynomial `Σ_{k≤4} c_k (x − x0)^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    /// Normalized Taylor coefficients.
    pub c: [f64; N],
}

impl Jet {
    /// The constant jet.
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = v;
        Self { c }
    }

    /// The identity jet `x ↦ x` expanded at `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = x0;
        c[1] = 1.0;
        Self { c }
    }

    /// Builds a jet from derivative values `[f, f′, f″, f‴, f⁗]`.
    pub fn from_derivatives(d: [f64; N]) -> Self {
        let mut c = [0.0; N];
        for k in 0..N {
            c[k] = d[k] / FACTORIALS[k];
        }
        Self { c }
    }

    /// Derivative values `[f, f′, f″, f‴, f⁗]`.
    pub fn derivatives(&self) -> [f64; N] {
        let mut d = [0.0; N];
        for k in 0..N {
            d[k] = self.c[k] * FACTORIALS[k];
        }
        d
    }

    /// Value at the expansion point.
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Formal derivative (the top coefficient becomes zero).
    pub fn differentiate(&self) -> Self {
        let mut c = [0.0; N];
        for k in 0..JET_ORDER {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Self { c }
    }

    /// Composition `g ∘ self` where `g` is given by its derivative values at
    /// `self.value()`.
    fn compose(&self, g: [f64; N]) -> Self {
        // Powers of the increment δ = self − self.value().
        let mut delta = *self;
        delta.c[0] = 0.0;
        let mut out = Self::constant(g[0]);
        let mut pow = Self::constant(1.0);
        for (k, gk) in g.iter().enumerate().skip(1) {
            pow = pow * delta;
            out += pow * (gk / FACTORIALS[k]);
        }
        out
    }

    /// Natural logarithm.
    pub fn ln(self) -> Self {
        let a = self.c[0];
        let mut l = [0.0; N];
        l[0] = a.ln();
        for k in 1..N {
            let mut acc = self.c[k];
            for j in 1..k {
                acc -= (j as f64) * l[j] * self.c[k - j] / k as f64;
            }
            l[k] = acc / a;
        }
        Self { c: l }
    }

    /// Exponential.
    pub fn exp(self) -> Self {
        let mut e = [0.0; N];
        e[0] = self.c[0].exp();
        for k in 1..N {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (j as f64) * self.c[j] * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Self { c: e }
    }

    /// Real power `self^p` (requires a positive value).
    pub fn powf(self, p: f64) -> Self {
        let a = self.c[0];
        // Recurrence for b = a^p: k b_0 b_k = Σ_{j=1}^{k} (p j − (k − j)) a_j b_{k−j}.
        let mut b = [0.0; N];
        b[0] = a.powf(p);
        for k in 1..N {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (p * j as f64 - (k - j) as f64) * self.c[j] * b[k - j];
            }
            b[k] = acc / (k as f64 * a);
        }
        Self { c: b }
    }

    /// Integer power by repeated multiplication (valid for any sign of the value).
    pub fn powi(self, n: i32) -> Self {
        if n < 0 {
            return Self::constant(1.0) / self.powi(-n);
        }
        let mut out = Self::constant(1.0);
        for _ in 0..n {
            out = out * self;
        }
        out
    }

    /// Square root.
    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    /// Arctangent, through composition with its derivative values.
    pub fn atan(self) -> Self {
        let x = self.c[0];
        let q = 1.0 + x * x;
        let d1 = 1.0 / q;
        let d2 = -2.0 * x / (q * q);
        let d3 = (6.0 * x * x - 2.0) / (q * q * q);
        let d4 = 24.0 * x * (1.0 - x * x) / (q * q * q * q);
        self.compose([x.atan(), d1, d2, d3, d4])
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for k in 0..N {
            self.c[k] += rhs.c[k];
        }
        self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        for k in 0..N {
            self.c[k] -= rhs.c[k];
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for v in &mut self.c {
            *v = -*v;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut c = [0.0; N];
        for i in 0..N {
            for j in 0..N - i {
                c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let mut q = [0.0; N];
        for k in 0..N {
            let mut acc = self.c[k];
            for j in 0..k {
                acc -= q[j] * rhs.c[k - j];
            }
            q[k] = acc / rhs.c[0];
        }
        Jet { c: q }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: f64) -> Jet {
        for v in &mut self.c {
            *v *= rhs;
        }
        self
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self * (1.0 / rhs)
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        -rhs + self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs * self
    }
}

impl Div<Jet> for f64 {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        Jet::constant(self) / rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn log_and_exp_derivatives() {
        let x = Jet::variable(2.0);
        let d = x.ln().derivatives();
        let expect = [2f64.ln(), 0.5, -0.25, 0.25, -0.375];
        for k in 0..N {
            assert!(close(d[k], expect[k], 1e-14), "k={k}: {} vs {}", d[k], expect[k]);
        }
        let e = (x * 3.0).exp().derivatives();
        for (k, v) in e.iter().enumerate() {
            assert!(close(*v, 3f64.powi(k as i32) * 6f64.exp(), 1e-13));
        }
    }

    #[test]
    fn powf_matches_closed_form() {
        let x = Jet::variable(1.7);
        let p = 0.3;
        let d = x.powf(p).derivatives();
        let mut coef = 1.0;
        for k in 0..N {
            let expect = coef * 1.7f64.powf(p - k as f64);
            assert!(close(d[k], expect, 1e-13));
            coef *= p - k as f64;
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = Jet::variable(0.4);
        let f = x.exp() + x * x;
        let g = (f * x.sqrt()) / x.sqrt();
        for k in 0..N {
            assert!(close(g.c[k], f.c[k], 1e-14));
        }
    }

    #[test]
    fn atan_derivatives() {
        let x = Jet::variable(0.7);
        let d = x.atan().derivatives();
        // Compare with finite differences of atan′ = 1/(1+x²).
        let f1 = |t: f64| 1.0 / (1.0 + t * t);
        let h = 1e-4;
        assert!(close(d[1], f1(0.7), 1e-14));
        let fd2 = (f1(0.7 + h) - f1(0.7 - h)) / (2.0 * h);
        assert!(close(d[2], fd2, 1e-7));
    }
}
