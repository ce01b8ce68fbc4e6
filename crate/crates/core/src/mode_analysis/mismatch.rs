//! The Cauchy-data mismatch map and its inverse.
//!
//! For data `(h, k)` on the unit sphere, the map returns the jumps of the
//! normal derivative and of the normal derivative of the Laplacian between
//! the inner and outer biharmonic extensions.  Per mode (m ≥ 3 or γ > 0):
//!
//! `d₁ = 2(γ+m−1)[h + k/(2(γ+m)(γ+m−2))]`, `d₂ = 2(γ+m−1)k`;
//!
//! for m = 2, γ = 0 the outer extension carries `ln r` and the block is
//! `d₁ = 2h − k/4`, `d₂ = 2k`.

use std::collections::BTreeMap;

use super::{CauchyData, ModeError, ModeVector};

fn block(m: usize, gamma: u32) -> Result<[[f64; 2]; 2], ModeError> {
    let (g, mf) = (gamma as f64, m as f64);
    if m == 2 && gamma == 0 {
        return Ok([[2.0, -0.25], [0.0, 2.0]]);
    }
    if g + mf - 2.0 == 0.0 {
        return Err(ModeError::SingularMode { gamma, m });
    }
    let a = 2.0 * (g + mf - 1.0);
    Ok([[a, a / (2.0 * (g + mf) * (g + mf - 2.0))], [0.0, a]])
}

/// `(d₁, d₂) = (∂_r(Hⁱ − Hᵒ), ∂_rΔ₀(Hⁱ − Hᵒ))` at the unit sphere.
pub fn mismatch_map_p(data: &CauchyData) -> Result<(ModeVector, ModeVector), ModeError> {
    let m = data.m();
    let mut d1 = BTreeMap::new();
    let mut d2 = BTreeMap::new();
    for (&g, &h) in &data.h.coeffs {
        let k = data.k.get(g);
        let b = block(m, g)?;
        d1.insert(g, b[0][0] * h + b[0][1] * k);
        d2.insert(g, b[1][0] * h + b[1][1] * k);
    }
    Ok((ModeVector { coeffs: d1, ..data.h.clone() }, ModeVector { coeffs: d2, ..data.h.clone() }))
}

/// Exact mode-diagonal inverse of [`mismatch_map_p`].
pub fn invert_p(d1: &ModeVector, d2: &ModeVector) -> Result<CauchyData, ModeError> {
    if !d1.same_shape(d2) {
        return Err(ModeError::Mismatch("d1 and d2 have different mode index sets".into()));
    }
    let m = d1.m;
    let mut h = BTreeMap::new();
    let mut k = BTreeMap::new();
    for (&g, &x1) in &d1.coeffs {
        let x2 = d2.get(g);
        let b = block(m, g)?;
        let kg = x2 / b[1][1];
        h.insert(g, (x1 - b[0][1] * kg) / b[0][0]);
        k.insert(g, kg);
    }
    CauchyData::new(ModeVector { coeffs: h, ..d1.clone() }, ModeVector { coeffs: k, ..d1.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m3_radial_examples() {
        let (d1, d2) = mismatch_map_p(&CauchyData::radial(3, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!((d1.get(0), d2.get(0)), (4.0, 0.0));
        let (d1, d2) = mismatch_map_p(&CauchyData::radial(3, 0.0, 1.0).unwrap()).unwrap();
        assert!((d1.get(0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(d2.get(0), 4.0);
        let back = invert_p(
            &ModeVector::single(3, d1.group, 0, 0, 4.0).unwrap(),
            &ModeVector::single(3, d1.group, 0, 0, 0.0).unwrap(),
        )
        .unwrap();
        assert_eq!((back.h.get(0), back.k.get(0)), (1.0, 0.0));
    }
}
