//! ε-sweeps of the matching iteration with fitted scaling exponents.

use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{neck_radii, solve_matching_with_model, GluingConfig, GluingError};
use crate::numerics::fit::loglog_slope;

/// Outcome of one sweep point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyStatus {
    /// The run converged.
    Ok,
    /// The run failed with the given diagnostic.
    Failed(String),
}

/// One row of a convergence study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub eps: f64,
    pub r_eps: f64,
    pub pre_iteration_defect: f64,
    pub mismatch: f64,
    pub nu: f64,
    pub iterations: usize,
    /// Last Picard contraction estimate (NaN when every correction was at roundoff).
    pub contraction_factor: f64,
    pub status: StudyStatus,
}

impl StudyRow {
    /// Whether the run converged.
    pub fn ok(&self) -> bool {
        self.status == StudyStatus::Ok
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    eps: f64,
    r_eps: f64,
    pre_iteration_defect: f64,
    mismatch: f64,
    nu: f64,
    iterations: usize,
    contraction_factor: f64,
    status: &'a str,
}

/// Sweep table with log-log slopes against `r_ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    /// Rows in the order of the input ε list.
    pub rows: Vec<StudyRow>,
    /// Slope of the pre-iteration defect against `r_ε` (converged rows).
    pub defect_slope: Option<f64>,
    /// Slope of `|ν|` against `r_ε` (converged rows).
    pub nu_slope: Option<f64>,
}

impl ConvergenceStudy {
    /// Writes the rows as CSV.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            let status = match &r.status {
                StudyStatus::Ok => "ok".to_string(),
                StudyStatus::Failed(msg) => format!("failed: {msg}"),
            };
            w.serialize(CsvRow {
                eps: r.eps,
                r_eps: r.r_eps,
                pre_iteration_defect: r.pre_iteration_defect,
                mismatch: r.mismatch,
                nu: r.nu,
                iterations: r.iterations,
                contraction_factor: r.contraction_factor,
                status: &status,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    /// Whether every converged row has contraction factor < 1 and the factors
    /// do not increase as ε decreases (rows at roundoff are skipped).
    pub fn contraction_certified(&self) -> bool {
        let factors: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.ok() && r.contraction_factor.is_finite())
            .map(|r| r.contraction_factor)
            .collect();
        factors.iter().all(|f| *f < 1.0) && factors.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Runs [`solve_matching_with_model`] for every ε in parallel.
///
/// `eps_list` must be sorted descending and lie below the gate; per-point
/// failures are recorded in the table instead of aborting the sweep.
pub fn convergence_study(template: &GluingConfig, eps_list: &[f64]) -> Result<ConvergenceStudy, GluingError> {
    if eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(GluingError::InvalidConfig("ε list must be strictly decreasing".into()));
    }
    if let Some(&eps) = eps_list.iter().find(|&&e| !(e < template.eps_gate)) {
        return Err(GluingError::AboveGate { eps, gate: template.eps_gate });
    }
    if eps_list.is_empty() {
        return Ok(ConvergenceStudy { rows: Vec::new(), defect_slope: None, nu_slope: None });
    }
    let model = GluingConfig { eps: eps_list[0], ..template.clone() }.build_model()?;
    let rows: Vec<StudyRow> = eps_list
        .par_iter()
        .map(|&eps| {
            let cfg = GluingConfig { eps, ..template.clone() };
            let r_eps = neck_radii(&cfg).map(|r| r.0).unwrap_or(f64::NAN);
            match solve_matching_with_model(&cfg, &model) {
                Ok(sol) => StudyRow {
                    eps,
                    r_eps,
                    pre_iteration_defect: sol.pre_iteration_defect,
                    mismatch: sol.mismatch_max(),
                    nu: sol.nu,
                    iterations: sol.iterations,
                    contraction_factor: sol.contraction_factor().unwrap_or(f64::NAN),
                    status: StudyStatus::Ok,
                },
                Err(e) => StudyRow {
                    eps,
                    r_eps,
                    pre_iteration_defect: f64::NAN,
                    mismatch: f64::NAN,
                    nu: f64::NAN,
                    iterations: 0,
                    contraction_factor: f64::NAN,
                    status: StudyStatus::Failed(e.to_string()),
                },
            }
        })
        .collect();
    let ok: Vec<&StudyRow> = rows.iter().filter(|r| r.ok()).collect();
    let radii: Vec<f64> = ok.iter().map(|r| r.r_eps).collect();
    let defects: Vec<f64> = ok.iter().map(|r| r.pre_iteration_defect).collect();
    let nus: Vec<f64> = ok.iter().map(|r| r.nu.abs()).collect();
    let (defect_slope, nu_slope) =
        if ok.len() >= 2 { (loglog_slope(&radii, &defects), loglog_slope(&radii, &nus)) } else { (None, None) };
    Ok(ConvergenceStudy { rows, defect_slope, nu_slope })
}
