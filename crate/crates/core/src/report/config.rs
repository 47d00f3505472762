use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ReportError;
use crate::context::DEFAULT_TRIPLE_CAP;
use crate::corpus::{DEFAULT_TOP_K, DEFAULT_WINDOW};
use crate::framework::{Exclusion, Purpose, ResourceFlags};
use crate::gold::DEFAULT_THRESHOLD;
use crate::rdf::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OntologySource {
    pub path: PathBuf,
    /// Guessed from the extension when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl OntologySource {
    pub fn format(&self) -> Format {
        self.format.unwrap_or_else(|| Format::from_path(&self.path))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Minimum label similarity for gold-standard alignment, in (0, 1].
    pub similarity: f64,
    /// Number of corpus terms ranked for lexical focus.
    pub term_k: usize,
    /// Co-occurrence window, in tokens, for structural fit.
    pub window: usize,
    /// Maximum number of triples materialization may derive.
    pub triple_cap: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { similarity: DEFAULT_THRESHOLD, term_k: DEFAULT_TOP_K, window: DEFAULT_WINDOW, triple_cap: DEFAULT_TRIPLE_CAP }
    }
}

/// One evaluation run. Relative paths resolve against the config file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub ontologies: Vec<OntologySource>,
    pub purposes: BTreeSet<Purpose>,
    #[serde(default)]
    pub resources: ResourceFlags,
    #[serde(default)]
    pub exclusions: Vec<Exclusion>,
    #[serde(default)]
    pub include_structure_level: bool,
    #[serde(default)]
    pub gold_path: Option<PathBuf>,
    #[serde(default)]
    pub corpus_dir: Option<PathBuf>,
    #[serde(default)]
    pub rules_path: Option<PathBuf>,
    #[serde(default)]
    pub suite_path: Option<PathBuf>,
    #[serde(default)]
    pub expert_scores_path: Option<PathBuf>,
    /// Plain text, one expected domain term per line.
    #[serde(default)]
    pub expected_terms_path: Option<PathBuf>,
    /// JSON list of `{method, level, grade}` cells.
    #[serde(default)]
    pub matrix_overlay: Option<PathBuf>,
    #[serde(default)]
    pub thresholds: Thresholds,
    /// Keep per-task wall times in the report (makes output non-reproducible).
    #[serde(default)]
    pub record_timings: bool,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self, ReportError> {
        let mut cfg: RunConfig = serde_json::from_str(text).map_err(|e| ReportError::Config(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ReportError> {
        let text = std::fs::read_to_string(path).map_err(|e| ReportError::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(&text, &base)
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        let bad = |m: &str| Err(ReportError::Config(m.to_string()));
        if self.ontologies.is_empty() {
            return bad("at least one ontology is required");
        }
        if self.purposes.is_empty() {
            return bad("at least one purpose is required");
        }
        let t = &self.thresholds;
        if !(t.similarity > 0.0 && t.similarity <= 1.0) {
            return bad("thresholds.similarity must be in (0, 1]");
        }
        if t.term_k == 0 {
            return bad("thresholds.term_k must be positive");
        }
        if t.window < 2 {
            return bad("thresholds.window must be at least 2");
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Starting point written by `onteval init`: every field with its default.
    pub fn template() -> serde_json::Value {
        let cfg = RunConfig {
            ontologies: vec![OntologySource { path: "ontology.ttl".into(), format: Some(Format::Turtle) }],
            purposes: BTreeSet::from([Purpose::DecisionSupport]),
            resources: ResourceFlags::default(),
            exclusions: Vec::new(),
            include_structure_level: false,
            gold_path: None,
            corpus_dir: None,
            rules_path: None,
            suite_path: None,
            expert_scores_path: None,
            expected_terms_path: None,
            matrix_overlay: None,
            thresholds: Thresholds::default(),
            record_timings: false,
            base_dir: PathBuf::new(),
        };
        serde_json::to_value(cfg).expect("config serializes")
    }
}
