//! RDF terms, the N-Triples and Turtle-subset parsers, and the indexed
//! [`OntologyGraph`] every evaluator reads from.

mod graph;
pub(crate) mod lexer;
mod ntriples;
mod term;
mod turtle;
pub mod vocab;

pub use graph::{build_ontology, build_ontology_strict, humanize_local_name, ModelError, OntologyGraph};
pub use ntriples::{parse_ntriples, serialize_ntriples, SyntaxError};
pub use term::{Iri, Literal, Term, TermError, Triple, TripleSet};
pub use turtle::parse_turtle_subset;

use serde::{Deserialize, Serialize};

/// Supported input serializations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Ntriples,
    Turtle,
}

impl Format {
    /// Guess from a file extension; `.ttl` is Turtle, anything else N-Triples.
    pub fn from_path(path: &std::path::Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("ttl") => Format::Turtle,
            _ => Format::Ntriples,
        }
    }

    pub fn parse(self, text: &str) -> Result<TripleSet, SyntaxError> {
        match self {
            Format::Ntriples => parse_ntriples(text),
            Format::Turtle => parse_turtle_subset(text),
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ntriples" | "nt" => Ok(Format::Ntriples),
            "turtle" | "ttl" => Ok(Format::Turtle),
            other => Err(format!("unknown format '{other}' (expected ntriples or turtle)")),
        }
    }
}
