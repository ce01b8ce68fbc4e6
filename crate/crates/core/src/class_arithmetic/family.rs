//! Base families of classes and the zero-scalar-curvature parameter solve.

use serde::{Deserialize, Serialize};

use super::{average_scal, BlowupClassData, ClassError};

/// Tolerance on `|s|` at the returned parameter.
pub const ZERO_SCAL_TOL: f64 = 1e-12;

/// Sampled monotone table `t ↦ s(t)` of base average scalar curvatures,
/// interpolated by monotone piecewise-cubic Hermite splines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseFamily {
    t: Vec<f64>,
    s: Vec<f64>,
    #[serde(skip)]
    slopes: Vec<f64>,
}

impl BaseFamily {
    /// Builds the family from strictly increasing `t` samples and monotone
    /// `s` values with a sign change.
    pub fn new(t: Vec<f64>, s: Vec<f64>) -> Result<Self, ClassError> {
        if t.len() != s.len() || t.len() < 2 {
            return Err(ClassError::InvalidFamily("need at least two (t, s) samples".into()));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) || t.iter().chain(&s).any(|v| !v.is_finite()) {
            return Err(ClassError::InvalidFamily("t must be strictly increasing and all values finite".into()));
        }
        let increasing = s.windows(2).all(|w| w[1] >= w[0]);
        let decreasing = s.windows(2).all(|w| w[1] <= w[0]);
        if !(increasing || decreasing) {
            return Err(ClassError::InvalidFamily("s must be monotone".into()));
        }
        let (s0, s1) = (s[0], s[s.len() - 1]);
        if !(s0 * s1 < 0.0) {
            return Err(ClassError::NoSignChange { t_lo: t[0], s_lo: s0, t_hi: t[t.len() - 1], s_hi: s1 });
        }
        let slopes = pchip_slopes(&t, &s);
        Ok(Self { t, s, slopes })
    }

    /// A linear family `s(t) = c·t` on `[−t0, t0]`.
    pub fn linear(c: f64, t0: f64) -> Result<Self, ClassError> {
        Self::new(vec![-t0, t0], vec![-c * t0, c * t0])
    }

    /// Parameter interval.
    pub fn range(&self) -> (f64, f64) {
        (self.t[0], self.t[self.t.len() - 1])
    }

    /// Interpolated `s(t)`.
    pub fn s_of_t(&self, t: f64) -> Result<f64, ClassError> {
        let (lo, hi) = self.range();
        if !(t >= lo && t <= hi) {
            return Err(ClassError::InvalidFamily(format!("t = {t} outside [{lo}, {hi}]")));
        }
        let i = self.t.partition_point(|&x| x <= t).clamp(1, self.t.len() - 1) - 1;
        let h = self.t[i + 1] - self.t[i];
        let u = (t - self.t[i]) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u),
            u * (1.0 - u) * (1.0 - u),
            u * u * (3.0 - 2.0 * u),
            u * u * (u - 1.0),
        );
        Ok(h00 * self.s[i] + h10 * h * self.slopes[i] + h01 * self.s[i + 1] + h11 * h * self.slopes[i + 1])
    }
}

/// Fritsch–Carlson monotone slopes.
fn pchip_slopes(t: &[f64], s: &[f64]) -> Vec<f64> {
    let n = t.len();
    let d: Vec<f64> = (0..n - 1).map(|i| (s[i + 1] - s[i]) / (t[i + 1] - t[i])).collect();
    if n == 2 {
        return vec![d[0], d[0]];
    }
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let (h0, h1) = (t[i] - t[i - 1], t[i + 1] - t[i]);
            let (w1, w2) = (2.0 * h1 + h0, h1 + 2.0 * h0);
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    m
}

/// Class data of the family member `t`: the Chern pairing implied by `s(t)`.
pub fn family_member(family: &BaseFamily, template: &BlowupClassData, t: f64) -> Result<BlowupClassData, ClassError> {
    let s = family.s_of_t(t)?;
    Ok(BlowupClassData { chern_pair: s * template.vol_class / template.m as f64, ..template.clone() })
}

/// Bisection root `t_ε` of `t ↦ s(ω(t, ε))` over the family.
pub fn zero_scal_solve(family: &BaseFamily, template: &BlowupClassData, eps: f64) -> Result<f64, ClassError> {
    template.validate()?;
    let f = |t: f64| average_scal(&family_member(family, template, t)?, eps);
    let (mut lo, mut hi) = family.range();
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(ClassError::NoSignChange { t_lo: lo, s_lo: f_lo, t_hi: hi, s_hi: f_hi });
    }
    loop {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs()) && fm.abs() <= ZERO_SCAL_TOL {
            return Ok(mid);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pchip_preserves_monotonicity() {
        let fam = BaseFamily::new(vec![-1.0, 0.0, 0.1, 1.0], vec![-1.0, -0.1, 0.5, 0.6]).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=200 {
            let v = fam.s_of_t(-1.0 + 2.0 * i as f64 / 200.0).unwrap();
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn linear_family_root() {
        let fam = BaseFamily::linear(1.0, 1.0).unwrap();
        let tpl = BlowupClassData::new(2, 1.0, 0.0, vec![1.0]).unwrap();
        let t = zero_scal_solve(&fam, &tpl, 0.1).unwrap();
        assert!((t - 2.0 * 0.01).abs() < 1e-12);
        assert_eq!(zero_scal_solve(&fam, &tpl, 0.0).unwrap(), 0.0);
    }
}
