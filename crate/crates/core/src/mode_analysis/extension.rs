//! Exact biharmonic extensions of Cauchy data on the unit sphere.
//!
//! Mode by mode, the inner extension on the ball uses the exponents
//! `γ, γ+2` and the outer extension on the complement uses `2−2m−γ, 4−2m−γ`;
//! for m = 2 the outer radial mode uses `|z|^{−2}` and `ln|z|` instead, since
//! the two exponents collide.  The coefficients follow from
//! `Δ₀(r^a e_γ) = [a(a+2m−2) − γ(γ+2m−2)] r^{a−2} e_γ`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{representative_harmonic, sphere_eigenvalue, CauchyData, ModeError, ModeVector};
use crate::mode_analysis::GroupDescriptor;

/// Which side of the unit sphere the extension lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The punctured ball.
    Inner,
    /// The exterior of the ball.
    Outer,
}

/// Radial factor of one mode: `Σ c_i r^{a_i} + c_log ln r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeTerms {
    /// `(exponent, coefficient)` pairs.
    pub terms: Vec<(i64, f64)>,
    /// Coefficient of `ln r` (outer, m = 2, γ = 0 only).
    pub log_coefficient: f64,
}

/// Mode-wise biharmonic extension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiharmonicExtension {
    /// Side of the sphere.
    pub side: Side,
    /// Complex dimension.
    pub m: usize,
    /// Acting group.
    pub group: GroupDescriptor,
    /// Radial factors keyed by γ.
    pub modes: BTreeMap<u32, ModeTerms>,
}

/// Radial traces `(f, ∂_r f, Δ₀f, ∂_rΔ₀f)` of one mode at a radius.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModeTraces {
    /// Value.
    pub value: f64,
    /// Radial derivative.
    pub dr: f64,
    /// Euclidean Laplacian.
    pub lap: f64,
    /// Radial derivative of the Laplacian.
    pub dr_lap: f64,
}

/// Laplacian factor of `r^a e_γ`: `a(a+2m−2) − γ(γ+2m−2)`.
pub fn laplacian_factor(m: usize, gamma: u32, a: i64) -> f64 {
    (a * (a + 2 * m as i64 - 2)) as f64 - sphere_eigenvalue(gamma, m) as f64
}

/// Inner extension: `(h − k/(4(m+γ)))r^γ + (k/(4(m+γ)))r^{γ+2}` per mode.
pub fn biharmonic_inner(data: &CauchyData) -> Result<BiharmonicExtension, ModeError> {
    let m = data.m();
    let modes = data
        .h
        .coeffs
        .iter()
        .map(|(&g, &h)| {
            let k = data.k.get(g);
            let b = k / (4.0 * (m as f64 + g as f64));
            (g, ModeTerms { terms: vec![(g as i64, h - b), (g as i64 + 2, b)], log_coefficient: 0.0 })
        })
        .collect();
    Ok(BiharmonicExtension { side: Side::Inner, m, group: data.h.group, modes })
}

/// Outer extension: `(h + k/(4(γ+m−2)))r^{2−2m−γ} − (k/(4(γ+m−2)))r^{4−2m−γ}`
/// per mode, and `h r^{−2} + (k/2) ln r` for the m = 2 radial mode.
pub fn biharmonic_outer(data: &CauchyData) -> Result<BiharmonicExtension, ModeError> {
    let m = data.m();
    let mi = m as i64;
    let modes = data
        .h
        .coeffs
        .iter()
        .map(|(&g, &h)| {
            let k = data.k.get(g);
            let gi = g as i64;
            let terms = if m == 2 && g == 0 {
                ModeTerms { terms: vec![(-2, h)], log_coefficient: k / 2.0 }
            } else {
                let b = k / (4.0 * (g as f64 + m as f64 - 2.0));
                ModeTerms { terms: vec![(2 - 2 * mi - gi, h + b), (4 - 2 * mi - gi, -b)], log_coefficient: 0.0 }
            };
            (g, terms)
        })
        .collect();
    Ok(BiharmonicExtension { side: Side::Outer, m, group: data.h.group, modes })
}

impl BiharmonicExtension {
    /// Analytic traces of every mode at radius `r`.
    pub fn traces(&self, r: f64) -> Result<BTreeMap<u32, ModeTraces>, ModeError> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(ModeError::Domain(r));
        }
        let m = self.m;
        Ok(self
            .modes
            .iter()
            .map(|(&g, t)| {
                let mut out = ModeTraces::default();
                for &(a, c) in &t.terms {
                    let af = a as f64;
                    let lf = laplacian_factor(m, g, a);
                    out.value += c * r.powi(a as i32);
                    out.dr += c * af * r.powi(a as i32 - 1);
                    out.lap += c * lf * r.powi(a as i32 - 2);
                    out.dr_lap += c * lf * (af - 2.0) * r.powi(a as i32 - 3);
                }
                if t.log_coefficient != 0.0 {
                    // Δ₀ ln r = (2m − 2)/r² for the radial mode.
                    let c = t.log_coefficient;
                    let l = (2 * m - 2) as f64;
                    out.value += c * r.ln();
                    out.dr += c / r;
                    out.lap += c * l / (r * r);
                    out.dr_lap -= 2.0 * c * l / (r * r * r);
                }
                (g, out)
            })
            .collect())
    }

    /// Value of the assembled extension `Σ_γ H_γ(r) e_γ(x/r)` at a real point.
    pub fn value_at(&self, x: &[f64]) -> Result<f64, ModeError> {
        if x.len() != 2 * self.m {
            return Err(ModeError::Invalid(format!("expected {} coordinates", 2 * self.m)));
        }
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let traces = self.traces(r)?;
        let mut acc = 0.0;
        for (&g, t) in &traces {
            acc += t.value * representative_harmonic(self.group, g, x)?;
        }
        Ok(acc)
    }
}

/// Mode-wise traces at `radius`, each optionally multiplied by a weight
/// (e.g. the value of the mode's eigenfunction at a point of the sphere).
pub fn evaluate_extension(
    ext: &BiharmonicExtension,
    radius: f64,
    gamma_weights: Option<&ModeVector>,
) -> Result<BTreeMap<u32, ModeTraces>, ModeError> {
    let mut traces = ext.traces(radius)?;
    if let Some(w) = gamma_weights {
        for (g, t) in traces.iter_mut() {
            let c = w.get(*g);
            *t = ModeTraces { value: c * t.value, dr: c * t.dr, lap: c * t.lap, dr_lap: c * t.dr_lap };
        }
    }
    Ok(traces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_radial_example() {
        let d = CauchyData::radial(2, 0.0, 1.0).unwrap();
        let e = biharmonic_inner(&d).unwrap();
        assert_eq!(e.modes[&0].terms, vec![(0, -0.125), (2, 0.125)]);
    }

    #[test]
    fn outer_examples() {
        let e = biharmonic_outer(&CauchyData::radial(3, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!(e.modes[&0].terms, vec![(-4, 1.0), (-2, 0.0)]);
        assert_eq!(e.traces(1.0).unwrap()[&0].dr, -4.0);
        let e = biharmonic_outer(&CauchyData::radial(2, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!(e.modes[&0].log_coefficient, 0.5);
        let t = e.traces(1.0).unwrap()[&0];
        assert_eq!((t.value, t.lap), (0.0, 1.0));
    }
}
