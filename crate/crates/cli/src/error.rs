//! Command failures and their mapping to process exit codes.

use std::path::PathBuf;
use std::process::ExitCode;

use cscx_core::ale_models::AleError;
use cscx_core::class_arithmetic::ClassError;
use cscx_core::kahler_calculus::CalculusError;
use cscx_core::mode_analysis::ModeError;
use cscx_core::neck_gluing::GluingError;

/// Exit status for invalid inputs or flags.
pub const EXIT_PRECONDITION: u8 = 2;
/// Exit status for solver failures and failed checks.
pub const EXIT_NUMERICAL: u8 = 3;
/// Exit status for file-system and serialization failures.
pub const EXIT_IO: u8 = 4;

/// Failure class of a command, deciding the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Precondition,
    Numerical,
    Io,
}

/// Everything a command can fail with.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A flag or its combination is invalid.
    #[error("{0}")]
    Usage(String),
    /// A post-run check did not hold.
    #[error("check failed: {0}")]
    Check(String),
    /// Recomputed outputs differ from the recorded ones.
    #[error("verification failed: {0}")]
    Verify(String),
    #[error(transparent)]
    Ale(#[from] AleError),
    #[error(transparent)]
    Mode(#[from] ModeError),
    #[error(transparent)]
    Gluing(#[from] GluingError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    /// Reading or writing a file failed.
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    /// Wraps an I/O error with the offending path.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Failure class of this error.
    pub fn kind(&self) -> Kind {
        match self {
            CliError::Usage(_) => Kind::Precondition,
            CliError::Check(_) | CliError::Verify(_) => Kind::Numerical,
            CliError::Ale(e) => ale_kind(e),
            CliError::Mode(_) => Kind::Precondition,
            CliError::Gluing(e) => gluing_kind(e),
            CliError::Class(e) => class_kind(e),
            CliError::Calculus(e) => calculus_kind(e),
            CliError::Io { .. } | CliError::Csv(_) | CliError::Json(_) | CliError::Threads(_) => Kind::Io,
        }
    }

    /// Process exit code of this error.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self.kind() {
            Kind::Precondition => EXIT_PRECONDITION,
            Kind::Numerical => EXIT_NUMERICAL,
            Kind::Io => EXIT_IO,
        })
    }
}

fn calculus_kind(e: &CalculusError) -> Kind {
    match e {
        CalculusError::DegenerateMetric { .. } => Kind::Numerical,
        _ => Kind::Precondition,
    }
}

fn ale_kind(e: &AleError) -> Kind {
    match e {
        AleError::InvalidParameter(_) | AleError::InsufficientWindow { .. } => Kind::Precondition,
        AleError::Calculus(c) => calculus_kind(c),
        _ => Kind::Numerical,
    }
}

fn class_kind(e: &ClassError) -> Kind {
    match e {
        ClassError::InvalidData(_) | ClassError::InvalidFamily(_) => Kind::Precondition,
        ClassError::NegativeVolume { .. } | ClassError::NoSignChange { .. } => Kind::Numerical,
    }
}

fn gluing_kind(e: &GluingError) -> Kind {
    match e {
        GluingError::NeckCollision { .. }
        | GluingError::InvalidConfig(_)
        | GluingError::WrongDimension(_)
        | GluingError::AboveGate { .. }
        | GluingError::Mode(_) => Kind::Precondition,
        GluingError::Ale(a) => ale_kind(a),
        GluingError::Calculus(c) => calculus_kind(c),
        _ => Kind::Numerical,
    }
}
