//! `cscx`: command-line front end of the toolkit.
//!
//! Every subcommand writes its primary output to `--out`, companion files
//! next to it sharing its stem, and a `<stem>.manifest.json` listing the
//! resolved configuration and the SHA-256 of every output.  With `--verify`
//! nothing is written; the run is recomputed and compared to the manifest.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure or failed
//! check/verification, 4 I/O failure.

// Negated comparisons are deliberate: `!(x <= tol)` also catches NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cscx_core::ale_models::AleKind;
use cscx_core::class_arithmetic::BlowupClassData;
use cscx_core::mode_analysis::GroupDescriptor;
use cscx_core::neck_gluing::GluingConfig;

use commands::{drive, parse_group, GlueCommand, RootsCommand, ScalCommand, SimancaCommand, SweepCommand};
use error::CliError;
use manifest::Layout;

#[derive(Parser, Debug)]
#[command(
    name = "cscx",
    version,
    about = "Radial cscK gluing toolkit: ALE models, indicial roots, neck matching, class arithmetic"
)]
struct Cli {
    /// Cap on worker threads for parallel sweeps.
    #[arg(long, env = "CSCX_THREADS", global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Solve the scalar-flat radial ODE and fit its asymptotics.
    Simanca(SimancaArgs),
    /// Tabulate indicial roots of the bi-Laplacian per invariant mode.
    Roots(RootsArgs),
    /// Run one Cauchy-data matching across the neck.
    Glue(GlueArgs),
    /// Run the matching for several ε and fit scaling slopes.
    Sweep(SweepArgs),
    /// Tabulate the average scalar curvature of the blown-up class against ε.
    #[command(alias = "scal-sweep")]
    Scal(ScalArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Recompute and compare with the manifest of a previous run instead of writing.
    #[arg(long)]
    verify: bool,
}

#[derive(Args, Debug)]
struct SimancaArgs {
    #[arg(long)]
    m: usize,
    /// Integration horizon in s = |z|².
    #[arg(long = "smax", default_value_t = 1e5)]
    s_max: f64,
    /// Step-control tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Fail (exit 3) unless the ODE residual is at most 10·tol.
    #[arg(long)]
    check: bool,
    /// Number of radii in the asymptotic fit.
    #[arg(long, default_value_t = 60)]
    fit_points: usize,
    /// Profile JSON; companions `<stem>.asymptotics.csv` and `<stem>.fit.json`.
    #[arg(long, default_value = "simanca.json")]
    out: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct RootsArgs {
    #[arg(long)]
    m: usize,
    /// `trivial` or `z<k>` (ℤ_k acting diagonally).
    #[arg(long, default_value = "trivial", value_parser = parse_group)]
    group: GroupDescriptor,
    #[arg(long, default_value_t = 4)]
    gamma_max: u32,
    /// CSV root table.
    #[arg(long, default_value = "roots.csv")]
    out: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AleArg {
    Burns,
    Simanca,
    Calabi,
}

impl From<AleArg> for AleKind {
    fn from(a: AleArg) -> Self {
        match a {
            AleArg::Burns => AleKind::Burns,
            AleArg::Simanca => AleKind::Simanca,
            AleArg::Calabi => AleKind::CalabiZm,
        }
    }
}

#[derive(Args, Debug)]
struct GluingArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum)]
    ale: AleArg,
    /// Neck exponent θ, r_ε = ε^θ; default (m−1)/m.
    #[arg(long)]
    theta: Option<f64>,
    /// Kähler-class weight of the model.
    #[arg(long = "a", default_value_t = 1.0)]
    a_weight: f64,
    /// Chebyshev degree of the collocation solves.
    #[arg(long, default_value_t = 48)]
    degree: usize,
    /// Tolerance on the matching residuals.
    #[arg(long, default_value_t = 1e-9)]
    matching_tol: f64,
}

impl GluingArgs {
    fn config(&self, eps: f64) -> GluingConfig {
        GluingConfig {
            neck_exponent: self.theta,
            a_weight: self.a_weight,
            degree: self.degree,
            matching_tol: self.matching_tol,
            ..GluingConfig::new(self.m, self.ale.into(), eps)
        }
    }
}

#[derive(Args, Debug)]
struct GlueArgs {
    #[command(flatten)]
    gluing: GluingArgs,
    #[arg(long)]
    eps: f64,
    /// JSON run report.
    #[arg(long, default_value = "run.json")]
    out: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    gluing: GluingArgs,
    /// Strictly decreasing comma-separated ε list.
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    /// CSV table; companion `<stem>.slopes.json`.
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ScalArgs {
    #[arg(long)]
    m: usize,
    /// Volume [ω]^m of the base class.
    #[arg(long)]
    vol: f64,
    /// Chern pairing c₁ ∪ [ω]^{m−1} of the base.
    #[arg(long)]
    chern: f64,
    /// Comma-separated blow-up weights.
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<f64>,
    #[arg(long, default_value_t = 0.3)]
    eps_max: f64,
    /// Number of grid intervals on [0, eps-max].
    #[arg(long, default_value_t = 30)]
    intervals: usize,
    /// CSV table; companion `<stem>.monotonicity.json`.
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n.into()).build_global()?;
    }
    match cli.command {
        Cmd::Simanca(a) => {
            let cmd = SimancaCommand { m: a.m, s_max: a.s_max, tol: a.tol, check: a.check, fit_points: a.fit_points };
            drive(&cmd, &Layout::new(&a.out)?, a.output.verify)
        }
        Cmd::Roots(a) => {
            let cmd = RootsCommand { m: a.m, group: a.group, gamma_max: a.gamma_max };
            drive(&cmd, &Layout::new(&a.out)?, a.output.verify)
        }
        Cmd::Glue(a) => {
            let cmd = GlueCommand { gluing: a.gluing.config(a.eps) };
            drive(&cmd, &Layout::new(&a.out)?, a.output.verify)
        }
        Cmd::Sweep(a) => {
            let first = *a.eps.first().ok_or_else(|| CliError::Usage("empty ε list".into()))?;
            let cmd = SweepCommand { template: a.gluing.config(first), eps: a.eps };
            drive(&cmd, &Layout::new(&a.out)?, a.output.verify)
        }
        Cmd::Scal(a) => {
            let classes = BlowupClassData::new(a.m, a.vol, a.chern, a.weights)?;
            let cmd = ScalCommand { classes, eps_max: a.eps_max, intervals: a.intervals };
            drive(&cmd, &Layout::new(&a.out)?, a.output.verify)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cscx: {e}");
            e.exit_code()
        }
    }
}
