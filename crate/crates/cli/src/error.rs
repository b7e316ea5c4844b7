use std::path::PathBuf;

use thiserror::Error;
use zrp_core::ZrpError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ZrpError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("oracle check failed: {0}")]
    OracleFailed(String),
}

impl CliError {
    /// 2 for bad input, 3 for resource limits, 4 for a failed oracle, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model(ZrpError::Resource(_)) => 3,
            CliError::Model(
                ZrpError::InvalidModel(_) | ZrpError::Domain(_) | ZrpError::InvalidLattice(_),
            ) => 2,
            CliError::OracleFailed(_) => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
