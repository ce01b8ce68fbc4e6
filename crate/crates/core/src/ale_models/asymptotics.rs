//! Least-squares fits of refined asymptotic expansions at infinity.
//!
//! Radial samples `φ(R)` of the excess over `|u|²/2` are fitted by
//! `b + c·q(R) + d·R^{3−2m}` with `q(R) = R^{4−2m}` (m ≥ 3) or `q = ln R`
//! (m = 2, where the remainder term is `R^{−1}`).  The reported remainder is
//! `φ − b − c·q`; its decay order is the log-log slope of its magnitude.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::AleError;
use crate::numerics::fit::loglog_slope;

/// Largest accepted condition number of the column-scaled design matrix.
pub const FIT_CONDITION_LIMIT: f64 = 1e12;
/// Minimum number of decades covered by the samples.
pub const MIN_WINDOW_DECADES: f64 = 1.5;

/// Result of an asymptotic fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    /// Coefficient of the linear term `a·u` (radial input: identically zero).
    #[serde(rename = "a")]
    pub a_lin: [f64; 2],
    /// Constant term.
    #[serde(rename = "b")]
    pub b_const: f64,
    /// Coefficient of `|u|^{4−2m}` (m ≥ 3) or `ln|u|` (m = 2).
    #[serde(rename = "c")]
    pub c_decay: f64,
    /// Fitted decay exponent of the remainder; `None` when the remainder is
    /// at roundoff level (input inside the span of the basis).
    pub remainder_order: Option<f64>,
    /// Largest least-squares residual of the full three-term fit.
    pub fit_residual_max: f64,
    /// Radius window of the samples.
    #[serde(rename = "window")]
    pub fit_window: [f64; 2],
}

fn decay_basis(m: usize, r: f64) -> (f64, f64) {
    if m == 2 {
        (r.ln(), 1.0 / r)
    } else {
        (r.powi(4 - 2 * m as i32), r.powi(3 - 2 * m as i32))
    }
}

/// Fits `(R, φ(R))` samples of a radial excess in complex dimension `m`.
pub fn fit_refined_asymptotics(samples: &[(f64, f64)], m: usize) -> Result<AsymptoticFit, AleError> {
    if m < 2 {
        return Err(AleError::InvalidParameter(format!("m = {m} < 2")));
    }
    if samples.len() < 4 || samples.iter().any(|&(r, v)| !(r > 0.0) || !v.is_finite()) {
        return Err(AleError::InvalidParameter("need at least four finite samples at positive radii".into()));
    }
    let lo = samples.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|p| p.0).fold(0.0, f64::max);
    if (hi / lo).log10() < MIN_WINDOW_DECADES {
        return Err(AleError::InsufficientWindow { lo, hi });
    }
    let n = samples.len();
    let mut design = DMatrix::zeros(n, 3);
    for (i, &(r, _)) in samples.iter().enumerate() {
        let (q, rem) = decay_basis(m, r);
        design[(i, 0)] = 1.0;
        design[(i, 1)] = q;
        design[(i, 2)] = rem;
    }
    let scales: Vec<f64> = (0..3).map(|j| design.column(j).norm()).collect();
    for (j, sc) in scales.iter().enumerate() {
        design.column_mut(j).scale_mut(1.0 / sc);
    }
    let rhs = DVector::from_iterator(n, samples.iter().map(|p| p.1));
    let svd = design.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(cond <= FIT_CONDITION_LIMIT) {
        return Err(AleError::IllConditionedFit(cond));
    }
    let coef = svd.solve(&rhs, 0.0).map_err(|e| AleError::InvalidParameter(e.to_string()))?;
    let coef: Vec<f64> = (0..3).map(|j| coef[j] / scales[j]).collect();
    let (b, c, d) = (coef[0], coef[1], coef[2]);

    let scale = samples.iter().map(|p| p.1.abs()).fold(0.0, f64::max).max(1.0);
    let mut fit_residual_max = 0.0f64;
    let mut radii = Vec::with_capacity(n);
    let mut remainders = Vec::with_capacity(n);
    for &(r, v) in samples {
        let (q, rem) = decay_basis(m, r);
        let remainder = v - b - c * q;
        fit_residual_max = fit_residual_max.max((remainder - d * rem).abs());
        radii.push(r);
        remainders.push(remainder.abs());
    }
    let noise = 1e-12 * scale;
    let remainder_order = if remainders.iter().all(|&x| x > noise) { loglog_slope(&radii, &remainders) } else { None };
    Ok(AsymptoticFit {
        a_lin: [0.0, 0.0],
        b_const: b,
        c_decay: c,
        remainder_order,
        fit_residual_max,
        fit_window: [lo, hi],
    })
}

/// Log-spaced radii covering `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp()).collect()
}
