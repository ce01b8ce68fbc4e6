//! Weighted norm estimators on dyadic shells.
//!
//! For a shell radius `r` the rescaled function `φ_r(ρ) = φ(rρ)` is examined on
//! `ρ ∈ [1, 2]` and the shell value is `r^{−δ} Σ_{j ≤ k} sup_ρ |∂_ρ^j φ_r(ρ)|`
//! (radial derivatives; the Hölder seminorm is not estimated).  Inner norms use
//! shells `r̄·2^{−i−1}` accumulating at the puncture, outer norms use shells
//! `R̄·2^{i}` running to infinity.

use std::io;

use serde::{Deserialize, Serialize};

use super::radial::radial_r_derivatives;
use super::{CalculusError, RadialKahlerPotential};

/// Sample points per shell.
const SHELL_SAMPLES: usize = 33;

/// Which end of the weighted space the norm measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMode {
    /// Shells `r ≤ r̄` shrinking toward the puncture.
    Inner,
    /// Shells `R ≥ R̄` growing toward infinity.
    Outer,
}

/// Per-shell weighted values and their maximum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedNormReport {
    /// Weight exponent.
    pub delta: f64,
    /// Maximum of the shell values.
    pub norm_estimate: f64,
    /// `(r, r^{−δ}‖φ(r·)‖)` pairs in shell order.
    pub per_shell: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct ShellRow {
    r: f64,
    shell_value: f64,
}

impl WeightedNormReport {
    /// Writes the shells as CSV with columns `r, shell_value`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for &(r, shell_value) in &self.per_shell {
            w.serialize(ShellRow { r, shell_value })?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Weighted norm of the radial function `φ(|z|) = F(|z|²)`.
///
/// `bound` is `r̄` (inner) or `R̄` (outer); `shells` is the number of dyadic
/// shells, each of which must lie inside the domain of `phi`.
pub fn weighted_norm(
    phi: &RadialKahlerPotential,
    delta: f64,
    mode: NormMode,
    k_max: usize,
    bound: f64,
    shells: usize,
) -> Result<WeightedNormReport, CalculusError> {
    if k_max > 4 {
        return Err(CalculusError::InvalidProfile(format!("derivative order {k_max} exceeds 4")));
    }
    if !(bound > 0.0) || shells == 0 {
        return Err(CalculusError::InvalidProfile("need a positive bound and at least one shell".into()));
    }
    let radii: Vec<f64> = (0..shells)
        .map(|i| match mode {
            NormMode::Inner => bound * 0.5f64.powi(i as i32 + 1),
            NormMode::Outer => bound * 2f64.powi(i as i32),
        })
        .collect();
    let mut per_shell = Vec::with_capacity(shells);
    for r in radii {
        let mut sups = [0.0f64; 5];
        for q in 0..SHELL_SAMPLES {
            let rho = 1.0 + q as f64 / (SHELL_SAMPLES - 1) as f64;
            let x = r * rho;
            let dr = radial_r_derivatives(x, phi.derivatives(x * x)?);
            let mut scale = 1.0;
            for j in 0..=k_max {
                sups[j] = sups[j].max((scale * dr[j]).abs());
                scale *= r;
            }
        }
        let value = r.powf(-delta) * sups[..=k_max].iter().sum::<f64>();
        per_shell.push((r, value));
    }
    let norm_estimate = per_shell.iter().fold(0.0f64, |acc, &(_, v)| acc.max(v));
    Ok(WeightedNormReport { delta, norm_estimate, per_shell })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(delta: f64) -> RadialKahlerPotential {
        RadialKahlerPotential::closed_form(2, (1e-12, 1e12), 0.0, move |s| s.powf(delta / 2.0)).unwrap()
    }

    #[test]
    fn homogeneous_function_has_constant_shells() {
        let rep = weighted_norm(&power(1.5), 1.5, NormMode::Inner, 2, 1.0, 8).unwrap();
        let first = rep.per_shell[0].1;
        for &(_, v) in &rep.per_shell {
            assert!((v - first).abs() < 1e-12 * first);
        }
        assert_eq!(rep.norm_estimate, rep.per_shell.iter().map(|p| p.1).fold(0.0, f64::max));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rep = weighted_norm(&power(1.0), 1.0, NormMode::Outer, 0, 1.0, 3).unwrap();
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("r,shell_value\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
