//! The subcommands: each resolves its flags into a serializable configuration
//! and produces its output files in memory.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use cscx_core::ale_models::{fit_refined_asymptotics, log_spaced, solve_simanca_ode, AleModel, AsymptoticFit};
use cscx_core::class_arithmetic::{
    average_scal, blowup_classes, monotonicity_check, BlowupClassData, MonotonicityReport,
};
use cscx_core::mode_analysis::{indicial_roots, GroupDescriptor, GroupKind};
use cscx_core::neck_gluing::{convergence_study, solve_matching, GluingConfig};

use crate::error::CliError;
use crate::manifest::{self, Artifact, Layout, RunManifest};

/// Result of executing a command.
pub struct Outcome {
    /// Files to write, primary output first.
    pub artifacts: Vec<Artifact>,
    /// Human-readable summary lines.
    pub summary: Vec<String>,
    /// Failure to report after the outputs are written.
    pub failure: Option<CliError>,
}

/// A command with a resolved configuration.
pub trait Command: Serialize + for<'de> Deserialize<'de> + PartialEq {
    /// Subcommand name recorded in the manifest.
    const NAME: &'static str;

    /// Runs the computation without touching the file system.
    fn execute(&self, layout: &Layout) -> Result<Outcome, CliError>;
}

/// Runs `cmd`, then either writes its outputs and manifest or, with
/// `verify`, compares them with the recorded run.
pub fn drive<C: Command>(cmd: &C, layout: &Layout, verify: bool) -> Result<(), CliError> {
    let recorded = if verify { Some(manifest::read(layout)?) } else { None };
    let start = Instant::now();
    let outcome = cmd.execute(layout)?;
    let elapsed = start.elapsed().as_secs_f64();
    for line in &outcome.summary {
        println!("{line}");
    }
    match recorded {
        Some(recorded) => {
            let n = manifest::verify(layout, &recorded, C::NAME, cmd, &outcome.artifacts)?;
            println!("verified {n} output file(s) against {}", layout.manifest_path().display());
        }
        None => {
            let man = RunManifest::new(C::NAME, cmd, &outcome.artifacts, elapsed)?;
            let path = manifest::write_all(layout, &outcome.artifacts, &man)?;
            println!("wrote {} file(s) and {}", outcome.artifacts.len(), path.display());
        }
    }
    outcome.failure.map_or(Ok(()), Err)
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes<R: Serialize>(rows: &[R]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"))
}

/// Scalar-flat ODE profile and its asymptotic fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimancaCommand {
    pub m: usize,
    pub s_max: f64,
    pub tol: f64,
    /// Fail unless the ODE residual is at most `10·tol`.
    pub check: bool,
    /// Number of radii in the asymptotic fit.
    pub fit_points: usize,
}

#[derive(Serialize)]
struct AsymptoticsRow {
    radius: f64,
    excess: f64,
    remainder: f64,
}

#[derive(Serialize)]
struct SimancaFit {
    m: usize,
    lambda: f64,
    #[serde(flatten)]
    fit: AsymptoticFit,
}

impl Command for SimancaCommand {
    const NAME: &'static str = "simanca";

    fn execute(&self, layout: &Layout) -> Result<Outcome, CliError> {
        if !(3..=8).contains(&self.m) {
            return Err(CliError::Usage(format!(
                "simanca needs 3 ≤ m ≤ 8, got m = {} (the m = 2 model is Burns)",
                self.m
            )));
        }
        if self.fit_points < 4 {
            return Err(CliError::Usage("--fit-points must be at least 4".into()));
        }
        let profile = solve_simanca_ode(self.m, self.s_max, self.tol)?;
        let document = profile.to_document()?;

        // Fit the excess of the unit-normalized model over |u|²/2 on the
        // upper part of its radius range.
        let model = AleModel::simanca(&profile, 1.0)?;
        let r_hi = 0.9 * model.excess().domain().1.sqrt();
        let radii = log_spaced(r_hi / 10f64.powf(1.6), r_hi, self.fit_points);
        let samples =
            radii.iter().map(|&r| Ok((r, model.excess().value(r * r)?))).collect::<Result<Vec<_>, CliError>>()?;
        let fit = fit_refined_asymptotics(&samples, self.m)?;
        let q = |r: f64| r.powi(4 - 2 * self.m as i32);
        let rows: Vec<AsymptoticsRow> = samples
            .iter()
            .map(|&(radius, excess)| AsymptoticsRow {
                radius,
                excess,
                remainder: excess - fit.b_const - fit.c_decay * q(radius),
            })
            .collect();

        let summary = vec![
            format!("m = {}: λ = {:.15}", self.m, document.lambda),
            format!("ODE residual max = {:e} (tol {:e})", document.ode_residual_max, self.tol),
            format!(
                "fit on [{:.3}, {:.3}]: c = {:.10}, remainder order = {}",
                fit.fit_window[0],
                fit.fit_window[1],
                fit.c_decay,
                fmt_opt(fit.remainder_order)
            ),
        ];
        let failure = (self.check && !(document.ode_residual_max <= 10.0 * self.tol)).then(|| {
            CliError::Check(format!(
                "ODE residual {:e} exceeds 10·tol = {:e}",
                document.ode_residual_max,
                10.0 * self.tol
            ))
        });
        let fit_doc = SimancaFit { m: self.m, lambda: document.lambda, fit };
        Ok(Outcome {
            artifacts: vec![
                Artifact { name: layout.primary().into(), bytes: json_bytes(&document)? },
                Artifact { name: layout.companion("asymptotics.csv"), bytes: csv_bytes(&rows)? },
                Artifact { name: layout.companion("fit.json"), bytes: json_bytes(&fit_doc)? },
            ],
            summary,
            failure,
        })
    }
}

/// Parses `trivial` or `z<k>` (also `cyclic_diagonal(<k>)`).
pub fn parse_group(text: &str) -> Result<GroupDescriptor, String> {
    let t = text.trim().to_ascii_lowercase();
    if t == "trivial" {
        return Ok(GroupDescriptor::TRIVIAL);
    }
    let k = t
        .strip_prefix('z')
        .or_else(|| t.strip_prefix("cyclic_diagonal(").and_then(|r| r.strip_suffix(')')))
        .ok_or_else(|| format!("unknown group {text:?}; expected trivial or z<k>"))?;
    let k: u32 = k.parse().map_err(|_| format!("bad group order in {text:?}"))?;
    GroupDescriptor::cyclic_diagonal(k).map_err(|e| e.to_string())
}

fn group_name(g: GroupDescriptor) -> String {
    match g.kind {
        GroupKind::Trivial => "trivial".into(),
        GroupKind::CyclicDiagonal => format!("z{}", g.k),
    }
}

/// Indicial-root table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootsCommand {
    pub m: usize,
    pub group: GroupDescriptor,
    pub gamma_max: u32,
}

impl Command for RootsCommand {
    const NAME: &'static str = "roots";

    fn execute(&self, layout: &Layout) -> Result<Outcome, CliError> {
        let set = indicial_roots(self.m, self.group, self.gamma_max)?;
        let mut bytes = Vec::new();
        set.write_csv(&mut bytes)?;
        let values: Vec<String> = set.values().iter().map(i64::to_string).collect();
        let mut summary = vec![format!(
            "m = {}, group {}, γ ≤ {}: roots {{{}}}",
            self.m,
            group_name(self.group),
            self.gamma_max,
            values.join(", ")
        )];
        if self.m >= 3 {
            summary.push(format!("roots in {}..=-1: {:?}", 5 - 2 * self.m as i64, set.forbidden_hits()));
        }
        Ok(Outcome { artifacts: vec![Artifact { name: layout.primary().into(), bytes }], summary, failure: None })
    }
}

/// One matching run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlueCommand {
    pub gluing: GluingConfig,
}

impl Command for GlueCommand {
    const NAME: &'static str = "glue";

    fn execute(&self, layout: &Layout) -> Result<Outcome, CliError> {
        let solution = solve_matching(&self.gluing)?;
        let report = solution.report();
        let summary = vec![
            format!("ε = {:e}: r_ε = {:.6e}, R_ε = {:.6e}", report.eps, report.r_eps, report.big_r_eps),
            format!("ν = {:.17e} after {} iterations", report.nu, report.iterations),
            format!("max |mismatch| = {:e}, Newton ν = {:.17e}", solution.mismatch_max(), report.newton_nu),
        ];
        Ok(Outcome {
            artifacts: vec![Artifact { name: layout.primary().into(), bytes: json_bytes(&report)? }],
            summary,
            failure: None,
        })
    }
}

/// Convergence study over a list of ε.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCommand {
    pub template: GluingConfig,
    pub eps: Vec<f64>,
}

#[derive(Serialize)]
struct SweepSlopes {
    converged: usize,
    failed: usize,
    defect_slope: Option<f64>,
    nu_slope: Option<f64>,
    contraction_certified: bool,
}

impl Command for SweepCommand {
    const NAME: &'static str = "sweep";

    fn execute(&self, layout: &Layout) -> Result<Outcome, CliError> {
        let study = convergence_study(&self.template, &self.eps)?;
        let mut table = Vec::new();
        study.write_csv(&mut table)?;
        let converged = study.rows.iter().filter(|r| r.ok()).count();
        let slopes = SweepSlopes {
            converged,
            failed: study.rows.len() - converged,
            defect_slope: study.defect_slope,
            nu_slope: study.nu_slope,
            contraction_certified: study.contraction_certified(),
        };
        let mut summary: Vec<String> = study
            .rows
            .iter()
            .map(|r| match &r.status {
                cscx_core::neck_gluing::StudyStatus::Ok => {
                    format!("ε = {:e}: ν = {:e}, contraction {:.3}", r.eps, r.nu, r.contraction_factor)
                }
                cscx_core::neck_gluing::StudyStatus::Failed(msg) => format!("ε = {:e}: failed: {msg}", r.eps),
            })
            .collect();
        summary.push(format!(
            "slopes against r_ε: defect {}, ν {}",
            fmt_opt(study.defect_slope),
            fmt_opt(study.nu_slope)
        ));
        let failure =
            (converged == 0 && !study.rows.is_empty()).then(|| CliError::Check("every sweep point failed".into()));
        Ok(Outcome {
            artifacts: vec![
                Artifact { name: layout.primary().into(), bytes: table },
                Artifact { name: layout.companion("slopes.json"), bytes: json_bytes(&slopes)? },
            ],
            summary,
            failure,
        })
    }
}

/// Average scalar curvature of the blown-up class over an ε grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalCommand {
    pub classes: BlowupClassData,
    pub eps_max: f64,
    /// Number of grid intervals on `[0, eps_max]`.
    pub intervals: usize,
}

#[derive(Serialize)]
struct ScalRow {
    eps: f64,
    volume: Option<f64>,
    chern_pair: Option<f64>,
    s: Option<f64>,
    status: String,
}

impl Command for ScalCommand {
    const NAME: &'static str = "scal";

    fn execute(&self, layout: &Layout) -> Result<Outcome, CliError> {
        if self.intervals == 0 {
            return Err(CliError::Usage("--intervals must be positive".into()));
        }
        let report: MonotonicityReport = monotonicity_check(&self.classes, self.eps_max)?;
        let rows: Vec<ScalRow> = (0..=self.intervals)
            .map(|i| {
                let eps = self.eps_max * i as f64 / self.intervals as f64;
                match blowup_classes(&self.classes, eps).and_then(|c| Ok((c, average_scal(&self.classes, eps)?))) {
                    Ok((c, s)) => ScalRow {
                        eps,
                        volume: Some(c.volume),
                        chern_pair: Some(c.chern_pair),
                        s: Some(s),
                        status: "ok".into(),
                    },
                    Err(e) => ScalRow { eps, volume: None, chern_pair: None, s: None, status: format!("failed: {e}") },
                }
            })
            .collect();
        let ok = rows.iter().filter(|r| r.s.is_some()).count();
        let summary = vec![
            format!("{ok} of {} grid points evaluated on [0, {}]", rows.len(), self.eps_max),
            match (report.constant, report.first_violation) {
                (true, _) => "s(ε) is constant (no weights)".to_string(),
                (false, None) => "s(ε) is strictly decreasing on the range".to_string(),
                (false, Some(e)) => format!("monotone decrease fails at ε = {e:.12}"),
            },
        ];
        let failure = (ok == 0).then(|| CliError::Check("no grid point could be evaluated".into()));
        Ok(Outcome {
            artifacts: vec![
                Artifact { name: layout.primary().into(), bytes: csv_bytes(&rows)? },
                Artifact { name: layout.companion("monotonicity.json"), bytes: json_bytes(&report)? },
            ],
            summary,
            failure,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_names_parse_and_print() {
        assert_eq!(parse_group("trivial").unwrap(), GroupDescriptor::TRIVIAL);
        for text in ["z3", "Z3", "cyclic_diagonal(3)"] {
            assert_eq!(parse_group(text).unwrap(), GroupDescriptor::cyclic_diagonal(3).unwrap());
        }
        assert_eq!(group_name(parse_group("z5").unwrap()), "z5");
        assert!(parse_group("z").is_err());
        assert!(parse_group("s3").is_err());
    }
}
