//! End-to-end runs: configuration, the evaluation pipeline, and report rendering.

mod config;
mod pipeline;
mod render;

use std::path::Path;

use thiserror::Error;

pub use config::{OntologySource, RunConfig, Thresholds};
pub use pipeline::{run_pipeline, run_pipeline_with, FileSyntax, LevelStatus, Report, Skipped, TOOL_VERSION};
pub use render::{parse_report_json, render_report, RenderFormat};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl ReportError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        ReportError::Io { path: path.display().to_string(), source }
    }
}
