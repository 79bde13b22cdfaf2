//! Experiment harness for `cascade-lab`: configuration, orchestration of
//! sweeps and rate fits, and CSV output.
//!
//! Every CSV starts with `#` lines echoing the code version and the fully
//! resolved configuration, followed by one header row and the data.

pub mod config;
pub mod experiments;
pub mod fit;
pub mod output;
pub mod pool;

use std::path::{Path, PathBuf};

pub use config::{ConfigFields, ConfigFile, Experiment, ExperimentConfig};
pub use experiments::{run, RunSummary};
pub use fit::{fit_convergence_rate, RateFitResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Model(#[from] cascade_lab::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }
}
