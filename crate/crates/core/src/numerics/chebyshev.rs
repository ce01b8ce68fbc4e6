//! Chebyshev polynomial series on an interval, with derivatives through
//! fourth order.  Used as the trial space of the radial collocation solvers.

use serde::{Deserialize, Serialize};

/// Number of derivative orders (value plus four derivatives) tracked per point.
pub const DERIV_LEVELS: usize = 5;

/// Truncated Chebyshev series `Σ_j a_j T_j(y)`, `y = (2x − a − b)/(b − a)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevSeries {
    /// Left end of the interval.
    pub a: f64,
    /// Right end of the interval.
    pub b: f64,
    /// Coefficients `a_0 … a_N`.
    pub coeffs: Vec<f64>,
}

impl ChebyshevSeries {
    /// A series with the given coefficients on `[a, b]`.
    pub fn new(a: f64, b: f64, coeffs: Vec<f64>) -> Self {
        Self { a, b, coeffs }
    }

    /// The zero series of degree `degree`.
    pub fn zeros(a: f64, b: f64, degree: usize) -> Self {
        Self::new(a, b, vec![0.0; degree + 1])
    }

    /// Value and derivatives (with respect to `x`) through fourth order.
    pub fn derivatives(&self, x: f64) -> [f64; DERIV_LEVELS] {
        let basis = basis_derivatives(self.coeffs.len() - 1, self.a, self.b, x);
        let mut out = [0.0; DERIV_LEVELS];
        for (k, row) in basis.iter().enumerate() {
            out[k] = row.iter().zip(&self.coeffs).map(|(t, c)| t * c).sum();
        }
        out
    }
}

/// Derivatives through fourth order of every basis function `T_0 … T_N`
/// (mapped to `[a, b]`) at `x`; entry `[k][j]` is `d^k/dx^k T_j`.
pub fn basis_derivatives(degree: usize, a: f64, b: f64, x: f64) -> [Vec<f64>; DERIV_LEVELS] {
    let n = degree + 1;
    let y = (2.0 * x - a - b) / (b - a);
    let scale = 2.0 / (b - a);
    let mut t: [Vec<f64>; DERIV_LEVELS] = std::array::from_fn(|_| vec![0.0; n]);
    // T_{j+1}^{(k)} = 2y T_j^{(k)} + 2k T_j^{(k−1)} − T_{j−1}^{(k)}.
    t[0][0] = 1.0;
    if n > 1 {
        t[0][1] = y;
        t[1][1] = 1.0;
    }
    for j in 1..n.saturating_sub(1) {
        for k in 0..DERIV_LEVELS {
            let lower = if k > 0 { 2.0 * k as f64 * t[k - 1][j] } else { 0.0 };
            t[k][j + 1] = 2.0 * y * t[k][j] + lower - t[k][j - 1];
        }
    }
    let mut factor = 1.0;
    for row in t.iter_mut() {
        for v in row.iter_mut() {
            *v *= factor;
        }
        factor *= scale;
    }
    t
}

/// Chebyshev–Gauss points (roots of `T_n`) mapped to `[a, b]`, ascending.
pub fn gauss_points(n: usize, a: f64, b: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let theta = std::f64::consts::PI * (2.0 * (n - 1 - i) as f64 + 1.0) / (2.0 * n as f64);
            0.5 * (a + b) + 0.5 * (b - a) * theta.cos()
        })
        .collect()
}

/// Chebyshev–Lobatto points (extrema of `T_{n−1}`) mapped to `[a, b]`, ascending.
pub fn lobatto_points(n: usize, a: f64, b: f64) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n)
        .map(|i| {
            let theta = std::f64::consts::PI * (n - 1 - i) as f64 / (n - 1) as f64;
            0.5 * (a + b) + 0.5 * (b - a) * theta.cos()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_cubic() {
        // T_3(y) = 4y³ − 3y on [−1, 1].
        let s = ChebyshevSeries::new(-1.0, 1.0, vec![0.0, 0.0, 0.0, 1.0]);
        let d = s.derivatives(0.3);
        let y: f64 = 0.3;
        assert!((d[0] - (4.0 * y.powi(3) - 3.0 * y)).abs() < 1e-15);
        assert!((d[1] - (12.0 * y * y - 3.0)).abs() < 1e-14);
        assert!((d[2] - 24.0 * y).abs() < 1e-14);
        assert!((d[3] - 24.0).abs() < 1e-13);
        assert!(d[4].abs() < 1e-13);
    }

    #[test]
    fn mapped_interval_chain_rule() {
        // T_2 on [1, 3]: y = x − 2, T_2 = 2y² − 1, d/dx = 4y, d²/dx² = 4.
        let s = ChebyshevSeries::new(1.0, 3.0, vec![0.0, 0.0, 1.0]);
        let d = s.derivatives(2.5);
        assert!((d[0] - (2.0 * 0.25 - 1.0)).abs() < 1e-15);
        assert!((d[1] - 2.0).abs() < 1e-14);
        assert!((d[2] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn point_sets_are_ascending_and_inside() {
        let g = gauss_points(7, 2.0, 5.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g[0] > 2.0 && g[6] < 5.0);
        let l = lobatto_points(5, 2.0, 5.0);
        assert!((l[0] - 2.0).abs() < 1e-15 && (l[4] - 5.0).abs() < 1e-15);
    }
}
