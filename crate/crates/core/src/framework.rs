//! Purposes, evaluation levels, evaluation methods, the method×level
//! suitability matrix, and purpose-driven plan construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Purpose {
    ShareVocabulariesIntegrateData,
    KnowledgeSearchExploration,
    SystemInteroperability,
    DecisionSupport,
}

impl Purpose {
    pub const ALL: [Purpose; 4] = [
        Purpose::ShareVocabulariesIntegrateData,
        Purpose::KnowledgeSearchExploration,
        Purpose::SystemInteroperability,
        Purpose::DecisionSupport,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    Lexical,
    Hierarchy,
    SemanticRelations,
    Context,
    Syntactic,
    StructureArchitectureDesign,
}

impl Level {
    pub const ALL: [Level; 6] = [
        Level::Lexical,
        Level::Hierarchy,
        Level::SemanticRelations,
        Level::Context,
        Level::Syntactic,
        Level::StructureArchitectureDesign,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn title(self) -> &'static str {
        match self {
            Level::Lexical => "Lexical, vocabulary or data",
            Level::Hierarchy => "Hierarchy or taxonomy",
            Level::SemanticRelations => "Other semantic relations",
            Level::Context => "Context",
            Level::Syntactic => "Syntactic",
            Level::StructureArchitectureDesign => "Structure, architecture and design",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    GoldStandard,
    ApplicationBased,
    CriteriaBased,
    DataDriven,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::GoldStandard, Method::ApplicationBased, Method::CriteriaBased, Method::DataDriven];

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Grade {
    Unsuitable,
    Suitable,
    Preferred,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixCell {
    pub method: Method,
    pub level: Level,
    pub grade: Grade,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("at least one purpose is required")]
    NoPurposes,
    #[error("exclusion of {0} has an empty rationale")]
    EmptyRationale(Level),
    #[error("{0} is excluded more than once")]
    DuplicateExclusion(Level),
    #[error("{0} is not selected by any purpose and was not requested; it cannot be excluded")]
    LevelNotSelectable(Level),
    #[error("matrix overlay cannot change ({method}, {level}): the cell is Unsuitable")]
    OverlayOnUnsuitable { method: Method, level: Level },
    #[error("matrix overlay cannot mark ({method}, {level}) Unsuitable")]
    OverlayToUnsuitable { method: Method, level: Level },
}

/// Grades for all 24 (method, level) cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "MatrixRepr", try_from = "MatrixRepr")]
pub struct SuitabilityMatrix {
    grades: [[Grade; 6]; 4],
    overlay_source: String,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    overlay_source: String,
    cells: Vec<MatrixCell>,
}

impl From<SuitabilityMatrix> for MatrixRepr {
    fn from(m: SuitabilityMatrix) -> Self {
        MatrixRepr { cells: m.cells(), overlay_source: m.overlay_source }
    }
}

impl TryFrom<MatrixRepr> for SuitabilityMatrix {
    type Error = String;

    fn try_from(r: MatrixRepr) -> Result<Self, Self::Error> {
        let mut seen = BTreeSet::new();
        let mut grades = [[Grade::Unsuitable; 6]; 4];
        for c in &r.cells {
            if !seen.insert((c.method, c.level)) {
                return Err(format!("duplicate matrix cell ({}, {})", c.method, c.level));
            }
            grades[c.method.index()][c.level.index()] = c.grade;
        }
        if seen.len() != 24 {
            return Err(format!("matrix has {} cells, expected 24", seen.len()));
        }
        Ok(SuitabilityMatrix { grades, overlay_source: r.overlay_source })
    }
}

/// Levels at which each method applies at all.
fn applicable(method: Method, level: Level) -> bool {
    use Level::*;
    match method {
        Method::CriteriaBased => true,
        Method::DataDriven => matches!(level, Lexical | Hierarchy | SemanticRelations),
        Method::GoldStandard => matches!(level, Lexical | Hierarchy | SemanticRelations | Syntactic),
        Method::ApplicationBased => matches!(level, Lexical | Hierarchy | SemanticRelations | Context),
    }
}

/// The default matrix: every method suits the lexical, hierarchy and semantic
/// relations levels; context takes application- and criteria-based methods;
/// syntactic takes gold-standard and criteria-based; structure/architecture/
/// design takes criteria-based only. Preferred cells: data-driven at the
/// lexical level, gold-standard and criteria-based at the hierarchy level, and
/// application-based at the context level.
pub fn default_matrix() -> SuitabilityMatrix {
    let mut grades = [[Grade::Unsuitable; 6]; 4];
    for m in Method::ALL {
        for l in Level::ALL {
            if applicable(m, l) {
                grades[m.index()][l.index()] = Grade::Suitable;
            }
        }
    }
    for (m, l) in [
        (Method::DataDriven, Level::Lexical),
        (Method::GoldStandard, Level::Hierarchy),
        (Method::CriteriaBased, Level::Hierarchy),
        (Method::ApplicationBased, Level::Context),
    ] {
        grades[m.index()][l.index()] = Grade::Preferred;
    }
    SuitabilityMatrix { grades, overlay_source: "paper-default".to_string() }
}

impl SuitabilityMatrix {
    pub fn grade(&self, method: Method, level: Level) -> Grade {
        self.grades[method.index()][level.index()]
    }

    pub fn overlay_source(&self) -> &str {
        &self.overlay_source
    }

    pub fn cells(&self) -> Vec<MatrixCell> {
        Method::ALL
            .iter()
            .flat_map(|&method| Level::ALL.iter().map(move |&level| (method, level)))
            .map(|(method, level)| MatrixCell { method, level, grade: self.grade(method, level) })
            .collect()
    }

    /// Re-weights cells between Suitable and Preferred. Unsuitable cells are fixed.
    pub fn with_overlay(mut self, cells: &[MatrixCell], source: impl Into<String>) -> Result<Self, PlanError> {
        for c in cells {
            let current = self.grade(c.method, c.level);
            if current == Grade::Unsuitable && c.grade != Grade::Unsuitable {
                return Err(PlanError::OverlayOnUnsuitable { method: c.method, level: c.level });
            }
            if current != Grade::Unsuitable && c.grade == Grade::Unsuitable {
                return Err(PlanError::OverlayToUnsuitable { method: c.method, level: c.level });
            }
            self.grades[c.method.index()][c.level.index()] = c.grade;
        }
        self.overlay_source = source.into();
        Ok(self)
    }

    /// Non-Unsuitable methods at a level, Preferred first, ties in enumeration order.
    pub fn ranked_methods(&self, level: Level) -> Vec<Method> {
        let mut ms: Vec<Method> = Method::ALL.into_iter().filter(|&m| self.grade(m, level) != Grade::Unsuitable).collect();
        ms.sort_by_key(|&m| (std::cmp::Reverse(self.grade(m, level)), m));
        ms
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Importance {
    Primary,
    Universal,
}

/// Levels that matter for a purpose: its primary levels followed by the
/// universal lexical and syntactic levels.
pub fn levels_for_purpose(p: Purpose) -> Vec<(Level, Importance)> {
    let primary: &[Level] = match p {
        Purpose::KnowledgeSearchExploration => &[Level::Hierarchy],
        Purpose::DecisionSupport => &[Level::Context],
        Purpose::ShareVocabulariesIntegrateData => &[Level::SemanticRelations, Level::Context],
        Purpose::SystemInteroperability => &[Level::SemanticRelations],
    };
    primary
        .iter()
        .map(|&l| (l, Importance::Primary))
        .chain([(Level::Lexical, Importance::Universal), (Level::Syntactic, Importance::Universal)])
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntryStatus {
    Selected,
    Excluded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub purpose: Purpose,
    pub level: Level,
    pub importance: Importance,
    pub methods: Vec<Method>,
    pub status: EntryStatus,
    pub rationale: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default)]
pub struct ResourceFlags {
    pub gold_standard_available: bool,
    pub corpus_available: bool,
    pub application_available: bool,
    pub built_from_data_sources: bool,
}

impl Default for ResourceFlags {
    fn default() -> Self {
        ResourceFlags {
            gold_standard_available: true,
            corpus_available: true,
            application_available: true,
            built_from_data_sources: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub level: Level,
    pub rationale: String,
}

impl Exclusion {
    pub fn new(level: Level, rationale: impl Into<String>) -> Self {
        Exclusion { level, rationale: rationale.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationPlan {
    pub purposes: BTreeSet<Purpose>,
    pub entries: Vec<PlanEntry>,
    pub resource_flags: ResourceFlags,
}

impl EvaluationPlan {
    /// Levels with at least one Selected entry.
    pub fn selected_levels(&self) -> BTreeSet<Level> {
        self.entries.iter().filter(|e| e.status == EntryStatus::Selected).map(|e| e.level).collect()
    }

    /// Distinct (level, method) pairs to execute, in level then method-rank order.
    pub fn selected_pairs(&self) -> Vec<(Level, Method)> {
        let mut by_level: BTreeMap<Level, Vec<Method>> = BTreeMap::new();
        for e in self.entries.iter().filter(|e| e.status == EntryStatus::Selected) {
            let ms = by_level.entry(e.level).or_default();
            for &m in &e.methods {
                if !ms.contains(&m) {
                    ms.push(m);
                }
            }
        }
        by_level.into_iter().flat_map(|(l, ms)| ms.into_iter().map(move |m| (l, m))).collect()
    }
}

/// Knobs beyond the purpose/flags/exclusions triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanOptions {
    pub matrix: SuitabilityMatrix,
    /// Add the structure/architecture/design level under every purpose.
    pub include_structure_level: bool,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions { matrix: default_matrix(), include_structure_level: false }
    }
}

pub const DATA_SOURCES_RATIONALE: &str =
    "the ontology was built from existing data sources, so comparing its vocabulary against those sources would be redundant";
const NO_METHOD_RATIONALE: &str = "no suitable method is available with the declared resources";

pub fn build_plan(purposes: &BTreeSet<Purpose>, flags: ResourceFlags, exclusions: &[Exclusion]) -> Result<EvaluationPlan, PlanError> {
    build_plan_with(purposes, flags, exclusions, &PlanOptions::default())
}

pub fn build_plan_with(
    purposes: &BTreeSet<Purpose>,
    flags: ResourceFlags,
    exclusions: &[Exclusion],
    opts: &PlanOptions,
) -> Result<EvaluationPlan, PlanError> {
    let Some(&first_purpose) = purposes.iter().next() else {
        return Err(PlanError::NoPurposes);
    };

    let mut excluded: BTreeMap<Level, &str> = BTreeMap::new();
    for ex in exclusions {
        if ex.rationale.trim().is_empty() {
            return Err(PlanError::EmptyRationale(ex.level));
        }
        if ex.level == Level::StructureArchitectureDesign && !opts.include_structure_level {
            return Err(PlanError::LevelNotSelectable(ex.level));
        }
        if excluded.insert(ex.level, ex.rationale.as_str()).is_some() {
            return Err(PlanError::DuplicateExclusion(ex.level));
        }
    }

    let gated_methods = |level: Level| -> (Vec<Method>, Vec<String>) {
        let mut notes = Vec::new();
        let methods = opts
            .matrix
            .ranked_methods(level)
            .into_iter()
            .filter(|&m| {
                let missing = match m {
                    Method::GoldStandard if !flags.gold_standard_available => Some("no gold standard available"),
                    Method::ApplicationBased if !flags.application_available => Some("no application available"),
                    Method::DataDriven if !flags.corpus_available => Some("no corpus available"),
                    _ => None,
                };
                if let Some(reason) = missing {
                    notes.push(format!("{m} omitted: {reason}"));
                }
                missing.is_none()
            })
            .collect();
        (methods, notes)
    };

    let make_entry = |purpose: Purpose, level: Level, importance: Importance| -> PlanEntry {
        let (methods, notes) = gated_methods(level);
        let (status, mut rationale) = if let Some(r) = excluded.get(&level) {
            (EntryStatus::Excluded, (*r).to_string())
        } else if level == Level::Lexical && flags.built_from_data_sources {
            (EntryStatus::Excluded, DATA_SOURCES_RATIONALE.to_string())
        } else if methods.is_empty() {
            (EntryStatus::Excluded, NO_METHOD_RATIONALE.to_string())
        } else {
            let why = match importance {
                Importance::Primary => format!("{level} is a primary level for {purpose:?}"),
                Importance::Universal => format!("{level} is evaluated for every ontology"),
            };
            (EntryStatus::Selected, why)
        };
        if !notes.is_empty() {
            rationale.push_str("; ");
            rationale.push_str(&notes.join("; "));
        }
        PlanEntry { purpose, level, importance, methods, status, rationale }
    };

    let mut entries = Vec::new();
    let mut reached = BTreeSet::new();
    for &p in purposes {
        let mut levels = levels_for_purpose(p);
        if opts.include_structure_level {
            levels.push((Level::StructureArchitectureDesign, Importance::Universal));
        }
        for (level, importance) in levels {
            reached.insert(level);
            entries.push(make_entry(p, level, importance));
        }
    }
    // Exclusions of levels no declared purpose reaches are still recorded.
    for (&level, _) in excluded.iter().filter(|(l, _)| !reached.contains(*l)) {
        entries.push(make_entry(first_purpose, level, Importance::Primary));
    }

    Ok(EvaluationPlan { purposes: purposes.clone(), entries, resource_flags: flags })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanViolation {
    pub entry: Option<usize>,
    pub message: String,
}

/// Checks entry and plan invariants against a matrix. Empty means valid.
pub fn validate_plan(plan: &EvaluationPlan, m: &SuitabilityMatrix) -> Vec<PlanViolation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, e) in plan.entries.iter().enumerate() {
        let mut bad = |msg: String| out.push(PlanViolation { entry: Some(i), message: msg });
        if !plan.purposes.contains(&e.purpose) {
            bad(format!("purpose {:?} is not among the plan purposes", e.purpose));
        }
        if !seen.insert((e.purpose, e.level)) {
            bad(format!("duplicate entry for ({:?}, {})", e.purpose, e.level));
        }
        for &method in &e.methods {
            if m.grade(method, e.level) == Grade::Unsuitable {
                bad(format!("{method} is unsuitable at the {} level", e.level));
            }
        }
        let distinct: BTreeSet<_> = e.methods.iter().collect();
        if distinct.len() != e.methods.len() {
            bad("methods list repeats a method".to_string());
        }
        let ranks: Vec<_> = e.methods.iter().map(|&x| (std::cmp::Reverse(m.grade(x, e.level)), x)).collect();
        if ranks.windows(2).any(|w| w[0] > w[1]) {
            bad("methods are not ordered Preferred before Suitable".to_string());
        }
        match e.status {
            EntryStatus::Excluded if e.rationale.trim().is_empty() => bad("excluded entry has no rationale".to_string()),
            EntryStatus::Selected if e.methods.is_empty() => bad("selected entry lists no method".to_string()),
            _ => {}
        }
    }
    for level in [Level::Lexical, Level::Syntactic] {
        if !plan.entries.iter().any(|e| e.level == level) {
            out.push(PlanViolation { entry: None, message: format!("plan has no {level} entry") });
        }
    }
    out
}
