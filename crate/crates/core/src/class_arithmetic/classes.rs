//! Intersection numbers of the blown-up class and its average scalar
//! curvature as a function of ε.
//!
//! With `Σ = Σ_j a_j`:
//! `[ω_ε]^m = V + (−1)^{m−1} ε^{2m} Σ`,
//! `c₁ ∪ [ω_ε]^{m−1} = C − ε^{2m−2}(m−1) Σ`,
//! `s(ε) = m (C − ε^{2m−2}(m−1)Σ) / (V + (−1)^{m−1} ε^{2m} Σ)`.
//! The weights enter linearly in all three expressions.

use serde::{Deserialize, Serialize};

use super::ClassError;

/// Samples used to locate sign changes of the derivative numerator.
const SCAN_SAMPLES: usize = 4096;

/// Cohomological data of the base and the blow-up weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupClassData {
    /// Complex dimension.
    pub m: usize,
    /// `[ω]^m([M])`.
    pub vol_class: f64,
    /// `c₁(M) ∪ [ω]^{m−1}([M])`.
    pub chern_pair: f64,
    /// Weights `a_j > 0`, one per blown-up point.
    pub weights: Vec<f64>,
}

/// Intersection numbers of the blown-up class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassNumbers {
    /// `[ω_ε]^m([M̃])`.
    pub volume: f64,
    /// `c₁(M̃) ∪ [ω_ε]^{m−1}([M̃])`.
    pub chern_pair: f64,
}

impl BlowupClassData {
    /// Validated class data.
    pub fn new(m: usize, vol_class: f64, chern_pair: f64, weights: Vec<f64>) -> Result<Self, ClassError> {
        let data = Self { m, vol_class, chern_pair, weights };
        data.validate()?;
        Ok(data)
    }

    /// Checks `m ≥ 2`, `V > 0`, finite `C` and positive weights.
    pub fn validate(&self) -> Result<(), ClassError> {
        if self.m < 2 {
            return Err(ClassError::InvalidData(format!("m = {} < 2", self.m)));
        }
        if !(self.vol_class > 0.0 && self.vol_class.is_finite()) {
            return Err(ClassError::InvalidData(format!("volume {} must be positive", self.vol_class)));
        }
        if !self.chern_pair.is_finite() {
            return Err(ClassError::InvalidData("Chern pairing must be finite".into()));
        }
        if let Some(a) = self.weights.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(ClassError::InvalidData(format!("weight {a} must be positive")));
        }
        Ok(())
    }

    /// Number of blown-up points.
    pub fn n_points(&self) -> usize {
        self.weights.len()
    }

    /// `Σ_j a_j`.
    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `(−1)^{m−1}`, the self-intersection sign of the exceptional divisor.
    pub fn self_intersection_sign(&self) -> f64 {
        if self.m.is_multiple_of(2) {
            -1.0
        } else {
            1.0
        }
    }

    /// Average scalar curvature of the base, `m·C/V`.
    pub fn base_scal(&self) -> f64 {
        self.m as f64 * self.chern_pair / self.vol_class
    }
}

fn check_eps(eps: f64) -> Result<(), ClassError> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(ClassError::InvalidData(format!("ε = {eps} must be non-negative")));
    }
    Ok(())
}

/// Intersection numbers of `[ω_ε]` on the blow-up.
pub fn blowup_classes(data: &BlowupClassData, eps: f64) -> Result<ClassNumbers, ClassError> {
    data.validate()?;
    check_eps(eps)?;
    let (m, sum) = (data.m as i32, data.weight_sum());
    let volume = data.vol_class + data.self_intersection_sign() * eps.powi(2 * m) * sum;
    let chern_pair = data.chern_pair - eps.powi(2 * m - 2) * (m - 1) as f64 * sum;
    if !(volume > 0.0) {
        return Err(ClassError::NegativeVolume { eps, volume });
    }
    Ok(ClassNumbers { volume, chern_pair })
}

/// Average scalar curvature `m·(c₁∪[ω_ε]^{m−1})/[ω_ε]^m`.
pub fn average_scal(data: &BlowupClassData, eps: f64) -> Result<f64, ClassError> {
    let n = blowup_classes(data, eps)?;
    Ok(data.m as f64 * n.chern_pair / n.volume)
}

/// `ds/dε`, computed analytically.
pub fn average_scal_derivative(data: &BlowupClassData, eps: f64) -> Result<f64, ClassError> {
    let n = blowup_classes(data, eps)?;
    let q = derivative_numerator(data, eps);
    let mi = data.m as i32;
    Ok(data.m as f64 * eps.powi(2 * mi - 3) * q / (n.volume * n.volume))
}

/// `q(ε)` with `ds/dε = m ε^{2m−3} q(ε) / [ω_ε]^{2m}`:
/// `q = −(2m−2)αV − 2mβCε² + 2αβε^{2m}` with `α = (m−1)Σ`, `β = (−1)^{m−1}Σ`.
pub fn derivative_numerator(data: &BlowupClassData, eps: f64) -> f64 {
    let mf = data.m as f64;
    let sum = data.weight_sum();
    let alpha = (mf - 1.0) * sum;
    let beta = data.self_intersection_sign() * sum;
    let e2 = eps * eps;
    -(2.0 * mf - 2.0) * alpha * data.vol_class - 2.0 * mf * beta * data.chern_pair * e2
        + 2.0 * alpha * beta * e2.powi(data.m as i32)
}

/// Result of [`monotonicity_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    /// Upper end of the examined range.
    pub eps_max: f64,
    /// `s(ε)` is constant (no weights).
    pub constant: bool,
    /// `ds/dε < 0` on all of `(0, ε_max]`.
    pub decreasing: bool,
    /// Smallest ε in the range where monotone decrease fails (a root of the
    /// derivative numerator, or where the volume stops being positive).
    pub first_violation: Option<f64>,
}

fn first_root(f: impl Fn(f64) -> f64, hi: f64) -> Option<f64> {
    let mut prev_x = 0.0;
    let mut prev_f = f(0.0);
    for i in 1..=SCAN_SAMPLES {
        let x = hi * i as f64 / SCAN_SAMPLES as f64;
        let fx = f(x);
        if fx == 0.0 || fx.signum() != prev_f.signum() {
            let (mut a, mut b) = (prev_x, x);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if f(mid).signum() == prev_f.signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return Some(b);
        }
        prev_x = x;
        prev_f = fx;
    }
    None
}

/// Checks `ds/dε < 0` on `(0, ε_max]` from the sign of the derivative numerator.
pub fn monotonicity_check(data: &BlowupClassData, eps_max: f64) -> Result<MonotonicityReport, ClassError> {
    data.validate()?;
    if !(eps_max > 0.0 && eps_max.is_finite()) {
        return Err(ClassError::InvalidData(format!("ε_max = {eps_max} must be positive")));
    }
    if data.weights.is_empty() {
        return Ok(MonotonicityReport { eps_max, constant: true, decreasing: false, first_violation: None });
    }
    let mi = data.m as i32;
    let volume = |e: f64| data.vol_class + data.self_intersection_sign() * e.powi(2 * mi) * data.weight_sum();
    let candidates = [first_root(|e| derivative_numerator(data, e), eps_max), first_root(volume, eps_max)];
    let first_violation = candidates.into_iter().flatten().reduce(f64::min);
    Ok(MonotonicityReport { eps_max, constant: false, decreasing: first_violation.is_none(), first_violation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(m: usize) -> BlowupClassData {
        BlowupClassData::new(m, 1.0, 0.0, vec![1.0]).unwrap()
    }

    #[test]
    fn worked_example() {
        let s = average_scal(&data(2), 0.1).unwrap();
        assert!((s - 2.0 * -1e-2 / (1.0 - 1e-4)).abs() < 1e-15);
    }

    #[test]
    fn zero_eps_is_base() {
        let d = BlowupClassData::new(3, 2.0, 0.7, vec![0.5, 1.5]).unwrap();
        let n = blowup_classes(&d, 0.0).unwrap();
        assert_eq!((n.volume, n.chern_pair), (2.0, 0.7));
        assert_eq!(average_scal(&d, 0.0).unwrap(), d.base_scal());
    }

    #[test]
    fn negative_volume() {
        assert!(matches!(blowup_classes(&data(2), 1.5), Err(ClassError::NegativeVolume { .. })));
    }

    #[test]
    fn violation_radius_is_numerator_root() {
        let d = BlowupClassData::new(2, 1.0, 2.0, vec![1.0]).unwrap();
        let rep = monotonicity_check(&d, 0.9).unwrap();
        assert!(!rep.decreasing);
        let e = rep.first_violation.unwrap();
        assert!(derivative_numerator(&d, e).abs() < 1e-12);
        assert!(monotonicity_check(&d, 0.3).unwrap().decreasing);
    }
}
