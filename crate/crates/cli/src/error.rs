use thiserror::Error;

use swallowtail_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Config {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for bad input, 3 for a loop through a degeneracy, 4 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                CoreError::NonFinite { .. }
                | CoreError::NegativeMagnitude { .. }
                | CoreError::MalformedMatrix(_)
                | CoreError::OffLocus(_)
                | CoreError::InputMismatch(_)
                | CoreError::InvalidArgument(_)
                | CoreError::NotOnPhp(_) => 2,
                CoreError::LoopTouchesDegeneracy { .. } => 3,
                CoreError::SymmetryViolation { .. }
                | CoreError::NoConvergence { .. }
                | CoreError::GaugeUnavailable { .. }
                | CoreError::NoInverseFound { .. }
                | CoreError::SingularMap { .. }
                | CoreError::Discontinuous { .. }
                | CoreError::AmbiguousMatching(_)
                | CoreError::OpenStrands(_)
                | CoreError::Resolution { .. } => 4,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
