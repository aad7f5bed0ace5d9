use std::io;
use std::path::PathBuf;

use ctlab_core::coarse::CoarseError;
use ctlab_core::kleinian::KleinianError;
use ctlab_core::ladder::LadderError;
use ctlab_core::lamination::LaminationError;
use ctlab_core::words::WordError;
use thiserror::Error;

/// Exit status of a run whose criteria were evaluated and not met.
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Input(_) | CliError::Io { .. } => EXIT_INPUT,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<KleinianError> for CliError {
    fn from(e: KleinianError) -> Self {
        match e {
            KleinianError::NoConvergence { .. }
            | KleinianError::FuchsianBranch(_)
            | KleinianError::Degenerate(_)
            | KleinianError::Hyp(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<CoarseError> for CliError {
    fn from(e: CoarseError) -> Self {
        match e {
            CoarseError::RepairLimit(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<LadderError> for CliError {
    fn from(e: LadderError) -> Self {
        match e {
            LadderError::Coarse(c) => c.into(),
            LadderError::Kleinian(k) => k.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<LaminationError> for CliError {
    fn from(e: LaminationError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<WordError> for CliError {
    fn from(e: WordError) -> Self {
        CliError::Input(e.to_string())
    }
}
