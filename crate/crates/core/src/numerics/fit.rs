//! Small regression helpers.

/// Ordinary least-squares slope and intercept of `y` against `x`.
///
/// Returns `None` when fewer than two points are given or all `x` coincide.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for i in 0..n {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx).powi(2);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Log-log slope of `|y|` against `x` (both must be positive after `abs`).
///
/// Points with a zero or non-finite ordinate are skipped.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && b.abs() > 0.0 && b.is_finite())
        .map(|(a, b)| (a.ln(), b.abs().ln()))
        .unzip();
    linear_fit(&lx, &ly).map(|(s, _)| s)
}
