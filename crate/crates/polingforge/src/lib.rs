//! Command-line companion to `polingforge-core`: run-spec parsing, file
//! formats, and the `suggest`/`design`/`evaluate`/`jsa` pipelines behind
//! the `polingforge` binary.

pub mod files;
pub mod material;
pub mod pipeline;
pub mod runspec;

use std::path::PathBuf;

/// Everything that can go wrong between a spec file and the emitted
/// artifacts. Module errors carry the file they arose from.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", .path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    /// A well-formed file whose content violates an invariant; the message
    /// names the offending field or line.
    #[error("{}: {message}", .path.display())]
    Invalid { path: PathBuf, message: String },
    #[error("dispersion model: {0}")]
    Dispersion(#[from] polingforge_core::DispersionError),
    #[error("phase matching: {0}")]
    Phasematch(#[from] polingforge_core::PhasematchError),
    #[error("annealing: {0}")]
    Anneal(#[from] polingforge_core::AnnealError),
    #[error("joint spectrum: {0}")]
    Jsa(#[from] polingforge_core::JsaError),
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }
}
