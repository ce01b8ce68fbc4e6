//! The Ricci-flat Calabi metric on the resolution of ℂ^m/ℤ_m.
//!
//! With `ρ = (r^{2m} + 1)^{1/m}` and `ζ = e^{2πi/m}` the potential is
//! `φ = ρ + (1/m) Σ_j ζ^j ln(ρ − ζ^j)`.  Since `ρ > 1`, every log argument
//! has real part `ρ − cos(2πj/m) > 0`, so the principal branch is valid for
//! all `r > 0`.  In `s = r²` one has `φ′(s) = ρ/s`.

use num_complex::Complex64;

use super::AleError;
use crate::kahler_calculus::RadialKahlerPotential;
use crate::numerics::Jet;

/// `ρ − 1` and `ρ` at `s = r²`, accurate for small `s`.
fn rho(m: usize, s: f64) -> (f64, f64) {
    let t = (m as f64 * s.ln()).exp();
    let rm1 = (t.ln_1p() / m as f64).exp_m1();
    (rm1, 1.0 + rm1)
}

/// The closed-form potential at radius `r`, summed over the conjugate pairs.
pub fn calabi_zm_potential(m: usize, r: f64) -> Result<f64, AleError> {
    if m < 2 {
        return Err(AleError::InvalidParameter(format!("m = {m} < 2")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(AleError::InvalidParameter(format!("radius {r} must be positive")));
    }
    let (rm1, rho) = rho(m, r * r);
    let mut sum = Complex64::new(rho, 0.0);
    for j in 0..m {
        let root = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64);
        let arg = if j == 0 { Complex64::new(rm1, 0.0) } else { Complex64::new(rho, 0.0) - root };
        if !(arg.re > 0.0) {
            return Err(AleError::BranchError { re: arg.re, im: arg.im });
        }
        sum += root * arg.ln() / m as f64;
    }
    if sum.im.abs() > 1e-12 * sum.re.abs().max(1.0) {
        return Err(AleError::NotReal(sum.im));
    }
    Ok(sum.re)
}

/// `φ(s) − s` for the closed form, without cancellation at large `s`.
fn excess_value(m: usize, s: f64) -> f64 {
    let (_, rho) = rho(m, s);
    // ρ − s = 1 / Σ_i ρ^{m−1−i} s^i.
    let denom: f64 = (0..m).map(|i| rho.powi((m - 1 - i) as i32) * s.powi(i as i32)).sum();
    let rho_minus_s = 1.0 / denom;
    let logs = if rho > 2.0 {
        // (1/m) Σ_j ζ^j ln(1 − ζ^j/ρ) = −Σ_{q≥1} ρ^{1−qm}/(qm − 1).
        let mut acc = 0.0;
        let mut q = 1;
        loop {
            let e = (q * m - 1) as i32;
            let term = rho.powi(-e) / e as f64;
            acc -= term;
            if term < 1e-18 * acc.abs() || q > 200 {
                break acc;
            }
            q += 1;
        }
    } else {
        calabi_zm_potential(m, s.sqrt()).map_or(f64::NAN, |v| v - rho)
    };
    rho_minus_s + logs
}

/// Slope of the regular part `φ(s) − s − ln s`, i.e. `(ρ − 1)/s − 1`, on jets.
///
/// `ρ − 1 = s^m / Σ_i ρ^{m−1−i}` is formed without cancellation.
fn excess_regular_slope(m: usize, s: Jet) -> Jet {
    rho_minus_one_over_s(m, s) - 1.0
}

/// `(ρ − 1)/s` on jets.
fn rho_minus_one_over_s(m: usize, s: Jet) -> Jet {
    let sm = s.powi(m as i32);
    let rho = (sm + 1.0).powf(1.0 / m as f64);
    let mut denom = Jet::constant(0.0);
    for i in 0..m {
        denom += rho.powi(i as i32);
    }
    sm / (s * denom)
}

/// `φ(s) − s` as a radial profile whose `ln s` singular part is carried
/// analytically.
pub fn calabi_zm_excess(m: usize, domain: (f64, f64)) -> Result<RadialKahlerPotential, AleError> {
    if m < 2 {
        return Err(AleError::InvalidParameter(format!("m = {m} < 2")));
    }
    Ok(RadialKahlerPotential::from_value_and_slope(
        m,
        domain,
        1.0,
        move |s| excess_value(m, s) - s.ln(),
        move |s| excess_regular_slope(m, s),
    )?)
}

/// The full potential `φ(s)` as a radial profile.
pub fn calabi_zm_radial(m: usize, domain: (f64, f64)) -> Result<RadialKahlerPotential, AleError> {
    if m < 2 {
        return Err(AleError::InvalidParameter(format!("m = {m} < 2")));
    }
    // Regular part φ − ln s with slope (ρ − 1)/s, so that (sφ′)′ = ρ′ is never
    // formed by cancellation.
    Ok(RadialKahlerPotential::from_value_and_slope(
        m,
        domain,
        1.0,
        move |s| s + excess_value(m, s) - s.ln(),
        move |s| rho_minus_one_over_s(m, s),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn excess_matches_closed_form() {
        for m in 2..=4 {
            for &r in &[0.3, 1.0, 1.5, 3.0] {
                let s: f64 = r * r;
                let direct = calabi_zm_potential(m, r).unwrap() - s;
                assert!((excess_value(m, s) - direct).abs() < 1e-12, "m={m} r={r}");
            }
        }
    }

    #[test]
    fn slope_is_rho_over_s() {
        let m = 3;
        let s = 0.7f64;
        let rho = (s.powi(3) + 1.0).powf(1.0 / 3.0);
        let d = calabi_zm_radial(m, (0.1, 10.0)).unwrap().derivatives(s).unwrap();
        assert!((d[1] - rho / s).abs() < 1e-13);
        let h = 1e-5;
        let fd = (calabi_zm_potential(m, (s + h).sqrt()).unwrap() - calabi_zm_potential(m, (s - h).sqrt()).unwrap())
            / (2.0 * h);
        assert!((fd - rho / s).abs() < 1e-8);
    }
}
