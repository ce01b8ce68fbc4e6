//! Closed-form curvature of rotationally symmetric Kähler metrics.
//!
//! For `ω = i∂∂̄F(|z|²)` write `a = F′`, `b = (sF′)′ = F′ + sF″` and
//! `L = ln det g = (m−1) ln a + ln b`.  The Riemannian scalar curvature
//! `−2 g^{ab̄}∂_a∂_b̄ L` reduces to
//!
//! `scal = −2 [ (m−1) L′/a + (sL′)′/b ]`,
//!
//! which needs `F′ … F⁗`.  The linearization at `F` is the exact first
//! variation obtained by forward-mode differentiation of this expression;
//! at the flat metric it equals `½Δ₀²`.

use serde::{Deserialize, Serialize};

use super::{CalculusError, RadialKahlerPotential};
use crate::numerics::{Dual, Real};

/// How the linearized operator is evaluated (recorded in output metadata).
pub const LINEARIZATION_METHOD: &str = "forward-mode dual numbers on the radial closed form";

/// Samples of a radial scalar function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    /// Abscissae in `s = |z|²`.
    pub s: Vec<f64>,
    /// Function values.
    pub values: Vec<f64>,
}

impl RadialProfile {
    /// Supremum norm of the samples.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Eigenvalues and determinant of the metric of `F` at `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricData {
    /// Tangential eigenvalue `F′` (multiplicity `m − 1`).
    pub g_tangent: f64,
    /// Radial eigenvalue `F′ + sF″`.
    pub g_radial: f64,
    /// Determinant `F′^{m−1}(F′ + sF″)`.
    pub det_g: f64,
}

/// Scalar curvature from the derivatives `[F′, F″, F‴, F⁗]` at `s`.
///
/// Generic over the scalar type so that it can be differentiated exactly.
pub fn scalar_curvature_from_derivatives<T: Real>(m: usize, s: f64, d: [T; 4]) -> T {
    scalar_curvature_split(m, s, d, T::cst(0.0))
}

/// Scalar curvature of `F = G + c·ln s` from `[G′, G″, G‴, G⁗]` and `c`.
///
/// The radial eigenvalue `(sF′)′ = (sG′)′` and its derivatives are formed
/// from `G` alone, which avoids cancelling the large log terms near `s = 0`.
pub fn scalar_curvature_split<T: Real>(m: usize, s: f64, g: [T; 4], c: T) -> T {
    let [g1, g2, g3, g4] = g;
    let sc = T::cst(s);
    let mm1 = T::cst((m - 1) as f64);
    let a = g1 + c / sc;
    let a1 = g2 - c / (sc * sc);
    let a2 = g3 + T::cst(2.0) * c / (sc * sc * sc);
    let b = g1 + sc * g2;
    let b1 = T::cst(2.0) * g2 + sc * g3;
    let b2 = T::cst(3.0) * g3 + sc * g4;
    let ra = a1 / a;
    let rb = b1 / b;
    let l1 = mm1 * ra + rb;
    let l2 = mm1 * (a2 / a - ra * ra) + b2 / b - rb * rb;
    -T::cst(2.0) * (mm1 * l1 / a + (l1 + sc * l2) / b)
}

fn metric_split(s: f64, g: &[f64; 5], c: f64, m: usize) -> Result<MetricData, CalculusError> {
    let g_tangent = g[1] + c / s;
    let g_radial = g[1] + s * g[2];
    if !(g_tangent > 0.0 && g_radial > 0.0) {
        return Err(CalculusError::DegenerateMetric { s, g_tangent, g_radial });
    }
    Ok(MetricData { g_tangent, g_radial, det_g: g_tangent.powi(m as i32 - 1) * g_radial })
}

/// Metric eigenvalues and determinant at `s`.
pub fn radial_metric_data(f: &RadialKahlerPotential, s: f64) -> Result<MetricData, CalculusError> {
    let (g, c) = f.split_derivatives(s)?;
    metric_split(s, &g, c, f.m())
}

/// Scalar curvature of `i∂∂̄F(|z|²)` at `s`.
pub fn radial_scalar_curvature(f: &RadialKahlerPotential, s: f64) -> Result<f64, CalculusError> {
    let (g, c) = f.split_derivatives(s)?;
    metric_split(s, &g, c, f.m())?;
    Ok(scalar_curvature_split(f.m(), s, [g[1], g[2], g[3], g[4]], c))
}

/// `𝕃_F φ(s) = −d/dt|₀ scal(F + tφ)(s)`, computed exactly.
pub fn linearized_scal_at(
    f: &RadialKahlerPotential,
    phi: &RadialKahlerPotential,
    s: f64,
) -> Result<f64, CalculusError> {
    let (g, c) = f.split_derivatives(s)?;
    metric_split(s, &g, c, f.m())?;
    let (p, pc) = phi.split_derivatives(s)?;
    let dual: [Dual; 4] = std::array::from_fn(|k| Dual::new(g[k + 1], p[k + 1]));
    Ok(-scalar_curvature_split(f.m(), s, dual, Dual::new(c, pc)).d)
}

/// Nonlinear remainder `Q(φ) = scal(F + φ) − scal(F) + 𝕃_F φ` at `s`.
pub fn nonlinear_remainder_at(
    f: &RadialKahlerPotential,
    phi: &RadialKahlerPotential,
    s: f64,
) -> Result<f64, CalculusError> {
    let (g, c) = f.split_derivatives(s)?;
    let (p, pc) = phi.split_derivatives(s)?;
    let sum: [f64; 5] = std::array::from_fn(|k| g[k] + p[k]);
    metric_split(s, &sum, c + pc, f.m())?;
    let s_sum = scalar_curvature_split(f.m(), s, [sum[1], sum[2], sum[3], sum[4]], c + pc);
    let s_base = radial_scalar_curvature(f, s)?;
    Ok(s_sum - s_base + linearized_scal_at(f, phi, s)?)
}

fn check_dims(f: &RadialKahlerPotential, phi: &RadialKahlerPotential) -> Result<(), CalculusError> {
    if f.m() != phi.m() {
        return Err(CalculusError::InvalidProfile(format!(
            "dimension mismatch: base m = {}, perturbation m = {}",
            f.m(),
            phi.m()
        )));
    }
    Ok(())
}

/// `𝕃_F φ` sampled at the given points.
pub fn linearized_scal_apply(
    f: &RadialKahlerPotential,
    phi: &RadialKahlerPotential,
    s_points: &[f64],
) -> Result<RadialProfile, CalculusError> {
    check_dims(f, phi)?;
    let values = s_points.iter().map(|&s| linearized_scal_at(f, phi, s)).collect::<Result<_, _>>()?;
    Ok(RadialProfile { s: s_points.to_vec(), values })
}

/// `Q(φ)` sampled at the given points.
pub fn nonlinear_remainder(
    f: &RadialKahlerPotential,
    phi: &RadialKahlerPotential,
    s_points: &[f64],
) -> Result<RadialProfile, CalculusError> {
    check_dims(f, phi)?;
    let values = s_points.iter().map(|&s| nonlinear_remainder_at(f, phi, s)).collect::<Result<_, _>>()?;
    Ok(RadialProfile { s: s_points.to_vec(), values })
}

/// Scalar curvature sampled at the given points.
pub fn scalar_curvature_profile(f: &RadialKahlerPotential, s_points: &[f64]) -> Result<RadialProfile, CalculusError> {
    let values = s_points.iter().map(|&s| radial_scalar_curvature(f, s)).collect::<Result<_, _>>()?;
    Ok(RadialProfile { s: s_points.to_vec(), values })
}

/// Radial derivatives `[f, f_r, f_rr, f_rrr, f_rrrr]` of `f(r) = F(r²)` from
/// `s`-derivatives at `s = r²`.
pub fn radial_r_derivatives(r: f64, d: [f64; 5]) -> [f64; 5] {
    let r2 = r * r;
    [
        d[0],
        2.0 * r * d[1],
        2.0 * d[1] + 4.0 * r2 * d[2],
        12.0 * r * d[2] + 8.0 * r * r2 * d[3],
        12.0 * d[2] + 48.0 * r2 * d[3] + 16.0 * r2 * r2 * d[4],
    ]
}

/// Boundary traces of a radial function at radius `r`, in the scaled
/// variable `v = z/r`: `[f, r∂_r f, r²Δ₀f, r³∂_rΔ₀f]`, where `Δ₀` is the
/// Euclidean Laplacian on ℝ^{2m}.  Generic over the scalar type.
pub fn scaled_traces<T: Real>(m: usize, r: f64, d: [T; 5]) -> [T; 4] {
    // With s = r²: Δ₀f = 4(s f_ss + m f_s), ∂_r = 2r ∂_s.
    let s = r * r;
    let sc = T::cst(s);
    let mc = T::cst(m as f64);
    let value = d[0];
    let dr = T::cst(2.0 * s) * d[1];
    let lap = T::cst(4.0 * s) * (sc * d[2] + mc * d[1]);
    let dlap = T::cst(8.0 * s * s) * (sc * d[3] + (mc + T::cst(1.0)) * d[2]);
    [value, dr, lap, dlap]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_metric_data_and_curvature() {
        let f = RadialKahlerPotential::flat(3, (0.1, 10.0)).unwrap();
        let md = radial_metric_data(&f, 1.0).unwrap();
        assert_eq!((md.g_tangent, md.g_radial, md.det_g), (0.5, 0.5, 0.125));
        for m in 2..=6 {
            let f = RadialKahlerPotential::flat(m, (0.1, 10.0)).unwrap();
            assert_eq!(radial_scalar_curvature(&f, 2.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn burns_metric_data() {
        let f = RadialKahlerPotential::closed_form(2, (0.1, 10.0), 1.0, |s| s).unwrap();
        let md = radial_metric_data(&f, 1.0).unwrap();
        assert!((md.g_tangent - 2.0).abs() < 1e-15);
        assert!((md.g_radial - 1.0).abs() < 1e-15);
        assert!((md.det_g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_metric_is_reported() {
        let f = RadialKahlerPotential::closed_form(2, (0.1, 10.0), 0.0, |s| -s).unwrap();
        assert!(matches!(radial_scalar_curvature(&f, 1.0), Err(CalculusError::DegenerateMetric { .. })));
    }

    #[test]
    fn traces_of_quadratic() {
        // f = |z|² on ℝ^{2m}: Δ₀f = 4m, at r = 1: [1, 2, 4m, 0].
        let t = scaled_traces::<f64>(3, 1.0, [1.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(t, [1.0, 2.0, 12.0, 0.0]);
    }
}
