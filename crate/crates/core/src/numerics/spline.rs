//! Quintic B-spline interpolation with not-a-knot end conditions.
//!
//! The interpolant is C⁴ across interior knots, so fourth derivatives are
//! continuous, which the fourth-order curvature operators require.

use serde::{Deserialize, Serialize};

const DEGREE: usize = 5;
const ORDER: usize = DEGREE + 1;

/// Quintic interpolating spline on strictly increasing data sites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuinticSpline {
    knots: Vec<f64>,
    coeffs: Vec<f64>,
}

/// Failure modes of spline construction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SplineError {
    /// Fewer than six data sites.
    #[error("quintic interpolation needs at least {ORDER} sites, got {0}")]
    TooFewSites(usize),
    /// Sites not strictly increasing or values not finite.
    #[error("interpolation data must be finite with strictly increasing sites")]
    BadData,
    /// Elimination hit a zero pivot.
    #[error("singular collocation matrix")]
    Singular,
}

impl QuinticSpline {
    /// Interpolates `values` at strictly increasing `sites`.
    pub fn interpolate(sites: &[f64], values: &[f64]) -> Result<Self, SplineError> {
        let n = sites.len();
        if n < ORDER {
            return Err(SplineError::TooFewSites(n));
        }
        if values.len() != n
            || sites.windows(2).any(|w| !(w[0] < w[1]))
            || sites.iter().chain(values).any(|v| !v.is_finite())
        {
            return Err(SplineError::BadData);
        }
        let mut knots = Vec::with_capacity(n + ORDER);
        knots.extend(std::iter::repeat_n(sites[0], ORDER));
        knots.extend_from_slice(&sites[3..n - 3]);
        knots.extend(std::iter::repeat_n(sites[n - 1], ORDER));

        // Banded collocation system; row i stores columns i−5 … i+5.
        const HALF: usize = DEGREE;
        const WIDTH: usize = 2 * HALF + 1;
        let mut band = vec![[0.0f64; WIDTH]; n];
        let mut rhs = values.to_vec();
        for (i, &x) in sites.iter().enumerate() {
            let span = find_span(&knots, n, x);
            let ders = basis_derivatives(&knots, span, x, 0);
            for (j, v) in ders[0].iter().enumerate() {
                let col = span - DEGREE + j;
                let off = col as isize - i as isize + HALF as isize;
                if !(0..WIDTH as isize).contains(&off) {
                    if *v != 0.0 {
                        return Err(SplineError::Singular);
                    }
                    continue;
                }
                band[i][off as usize] = *v;
            }
        }
        // Gaussian elimination without pivoting (B-spline collocation matrices
        // are totally positive).
        for k in 0..n {
            let pivot = band[k][HALF];
            if pivot.abs() < 1e-300 {
                return Err(SplineError::Singular);
            }
            for i in k + 1..(k + HALF + 1).min(n) {
                let off_ik = k + HALF - i;
                let factor = band[i][off_ik] / pivot;
                if factor == 0.0 {
                    continue;
                }
                for col in k..(k + HALF + 1).min(n) {
                    let a_kc = band[k][col + HALF - k];
                    band[i][col + HALF - i] -= factor * a_kc;
                }
                rhs[i] -= factor * rhs[k];
            }
        }
        let mut coeffs = vec![0.0; n];
        for k in (0..n).rev() {
            let mut acc = rhs[k];
            for col in k + 1..(k + HALF + 1).min(n) {
                acc -= band[k][col + HALF - k] * coeffs[col];
            }
            coeffs[k] = acc / band[k][HALF];
        }
        Ok(Self { knots, coeffs })
    }

    /// Left end of the interpolation interval.
    pub fn start(&self) -> f64 {
        self.knots[0]
    }

    /// Right end of the interpolation interval.
    pub fn end(&self) -> f64 {
        self.knots[self.knots.len() - 1]
    }

    /// Value and derivatives through fourth order at `x` (clamped to the interval).
    pub fn derivatives(&self, x: f64) -> [f64; 5] {
        let n = self.coeffs.len();
        let x = x.clamp(self.start(), self.end());
        let span = find_span(&self.knots, n, x);
        let ders = basis_derivatives(&self.knots, span, x, 4);
        let mut out = [0.0; 5];
        for (k, row) in ders.iter().enumerate() {
            out[k] = row.iter().enumerate().map(|(j, b)| b * self.coeffs[span - DEGREE + j]).sum();
        }
        out
    }
}

/// Knot span index `i` with `knots[i] ≤ x < knots[i+1]`, clamped to valid spans.
fn find_span(knots: &[f64], n_basis: usize, x: f64) -> usize {
    if x >= knots[n_basis] {
        return n_basis - 1;
    }
    if x <= knots[DEGREE] {
        return DEGREE;
    }
    let (mut lo, mut hi) = (DEGREE, n_basis);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if x < knots[mid] {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// Derivatives `0..=n_ders` of the non-vanishing basis functions on `span`
/// (the standard triangular recurrence for B-spline derivatives).
fn basis_derivatives(knots: &[f64], span: usize, x: f64, n_ders: usize) -> Vec<[f64; ORDER]> {
    let p = DEGREE;
    let mut ndu = [[0.0f64; ORDER]; ORDER];
    let mut left = [0.0f64; ORDER];
    let mut right = [0.0f64; ORDER];
    ndu[0][0] = 1.0;
    for j in 1..=p {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    let mut ders = vec![[0.0f64; ORDER]; n_ders + 1];
    for j in 0..=p {
        ders[0][j] = ndu[j][p];
    }
    let mut a = [[0.0f64; ORDER]; 2];
    for r in 0..=p {
        let (mut s1, mut s2) = (0usize, 1usize);
        a[0][0] = 1.0;
        for k in 1..=n_ders.min(p) {
            let mut d = 0.0;
            let rk = r as isize - k as isize;
            let pk = p - k;
            if r >= k {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                d = a[s2][0] * ndu[rk as usize][pk];
            }
            let j1: usize = if rk >= -1 { 1 } else { (-rk) as usize };
            let j2: usize = if r as isize - 1 <= pk as isize { k - 1 } else { p - r };
            for j in j1..=j2 {
                let idx = (rk + j as isize) as usize;
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                d += a[s2][j] * ndu[idx][pk];
            }
            if r <= pk {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::mem::swap(&mut s1, &mut s2);
        }
    }
    let mut factor = p as f64;
    for (k, row) in ders.iter_mut().enumerate().skip(1) {
        for v in row.iter_mut() {
            *v *= factor;
        }
        factor *= (p - k) as f64;
    }
    ders
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_quintic_polynomials_exactly() {
        let sites: Vec<f64> = (0..12).map(|i| (i as f64 * 0.37).powf(1.2)).collect();
        let p = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3) + 0.1 * x.powi(5);
        let values: Vec<f64> = sites.iter().map(|&x| p(x)).collect();
        let s = QuinticSpline::interpolate(&sites, &values).unwrap();
        let x = 1.234;
        let d = s.derivatives(x);
        assert!((d[0] - p(x)).abs() < 1e-12);
        assert!((d[1] - (-2.0 + 1.5 * x * x + 0.5 * x.powi(4))).abs() < 1e-11);
        assert!((d[4] - 12.0 * x).abs() < 1e-8);
    }

    #[test]
    fn converges_on_smooth_function() {
        let n = 200;
        let sites: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64 * 3.0).collect();
        let values: Vec<f64> = sites.iter().map(|x| x.sin()).collect();
        let s = QuinticSpline::interpolate(&sites, &values).unwrap();
        let d = s.derivatives(1.111);
        assert!((d[0] - 1.111f64.sin()).abs() < 1e-12);
        assert!((d[2] + 1.111f64.sin()).abs() < 1e-8);
        assert!((d[4] - 1.111f64.sin()).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_data() {
        assert_eq!(QuinticSpline::interpolate(&[0.0, 1.0], &[0.0, 1.0]), Err(SplineError::TooFewSites(2)));
        let sites = [0.0, 1.0, 1.0, 2.0, 3.0, 4.0];
        assert_eq!(QuinticSpline::interpolate(&sites, &[0.0; 6]), Err(SplineError::BadData));
    }
}
