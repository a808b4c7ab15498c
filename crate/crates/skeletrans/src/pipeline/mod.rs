//! Pipeline orchestration: configuration, workspaces, toolchain driving,
//! caching, and the end-to-end `run` flow behind the CLI.

mod toolchain;

pub use toolchain::{run_binary, Toolchain};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("toolchain missing: {0}")]
    ToolchainMissing(String),
    #[error("toolchain failed without diagnostics: {0}")]
    NonDiagnosticFailure(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("workspace is locked by another pipeline: {0}")]
    WorkspaceLocked(std::path::PathBuf),
    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
}

impl PipelineError {
    pub(crate) fn stage(
        stage: &'static str,
        source: impl std::error::Error + Send + Sync + 'static,
    ) -> Self {
        PipelineError::Stage {
            stage,
            source: Box::new(source),
        }
    }
}
