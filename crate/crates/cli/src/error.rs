use std::path::PathBuf;

use qwalk_core::{CoinError, MatrixError, ShiftError, WalkError};
use thiserror::Error;

/// Failure of a CLI command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Precondition(String),
    #[error("operator is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    /// The full verification report, printed before exiting.
    #[error("{0}")]
    VerificationFailed(String),
}

impl CliError {
    /// 0 ok, 1 I/O or parse, 2 precondition, 3 non-unitary, 4 verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Precondition(_) => 2,
            CliError::NotUnitary { .. } => 3,
            CliError::VerificationFailed(_) => 4,
        }
    }
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<ShiftError> for CliError {
    fn from(e: ShiftError) -> Self {
        match e {
            ShiftError::NotUnitary { residual } => CliError::NotUnitary { residual },
            ShiftError::Incomplete { column, row } => CliError::NotUnitary {
                residual: column.max(row),
            },
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<CoinError> for CliError {
    fn from(e: CoinError) -> Self {
        match e {
            CoinError::NotUnitary { residual, .. } => CliError::NotUnitary { residual },
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        CliError::Precondition(e.to_string())
    }
}
