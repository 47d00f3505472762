use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use onteval_core::context::{self, GraphPatternQuery};
use onteval_core::corpus;
use onteval_core::framework::{build_plan_with, default_matrix, validate_plan, MatrixCell, PlanOptions};
use onteval_core::gold;
use onteval_core::rdf::{build_ontology, Format, OntologyGraph};
use onteval_core::report::{render_report, run_pipeline_with, RenderFormat, ReportError, RunConfig};
use onteval_core::syntactic::{check_syntax_bytes, Severity};
use onteval_core::Execution;
use serde_json::json;

const EXIT_ERRORS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "onteval", version, about = "Purpose-driven ontology evaluation")]
struct Cli {
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check syntax and referential hygiene of one ontology file.
    Validate {
        file: PathBuf,
        /// ntriples or turtle; guessed from the extension by default.
        #[arg(long)]
        format: Option<Format>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the evaluation plan for a config.
    Plan {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the full evaluation described by a config.
    Evaluate {
        #[arg(long)]
        config: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a Markdown report.
        #[arg(long)]
        markdown: Option<PathBuf>,
    },
    /// Align a candidate ontology with a gold standard.
    Compare {
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        #[arg(long, default_value_t = gold::DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Lexical coverage and structural fit against a directory of .txt documents.
    CorpusFit {
        #[arg(long)]
        ontology: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = corpus::DEFAULT_TOP_K)]
        top_k: usize,
        #[arg(long, default_value_t = corpus::DEFAULT_WINDOW)]
        window: usize,
    },
    /// Run a graph-pattern query.
    Query {
        #[arg(long)]
        ontology: PathBuf,
        #[arg(long)]
        query: PathBuf,
        /// Rules applied when materializing.
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Query the inferred closure instead of the asserted triples.
        #[arg(long)]
        materialize: bool,
    },
    /// Print a config with every field at its default.
    Init,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }

    fn errors(message: impl ToString) -> Self {
        Failure { code: EXIT_ERRORS, message: message.to_string() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: format!("cannot read {}: {e}", path.display()) }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Config(_) => Failure::usage(e),
            ReportError::Io { .. } => Failure { code: EXIT_IO, message: e.to_string() },
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = if cli.sequential { Execution::Sequential } else { Execution::default() };
    let outcome = match cli.command {
        Command::Validate { file, format, json } => validate(&file, format, json),
        Command::Plan { config } => plan(&config),
        Command::Evaluate { config, out, markdown } => evaluate(&config, out.as_deref(), markdown.as_deref(), mode),
        Command::Compare { candidate, gold, threshold } => compare(&candidate, &gold, threshold, mode),
        Command::CorpusFit { ontology, corpus, top_k, window } => corpus_fit(&ontology, &corpus, top_k, window, mode),
        Command::Query { ontology, query, rules, materialize } => run_query(&ontology, &query, rules.as_deref(), materialize),
        Command::Init => {
            print_json(&RunConfig::template());
            Ok(0)
        }
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::io(path, e))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    String::from_utf8(read(path)?).map_err(|_| Failure::errors(format!("{} is not valid UTF-8", path.display())))
}

fn load_graph(path: &Path) -> Result<OntologyGraph, Failure> {
    let text = read_text(path)?;
    let ts = Format::from_path(path).parse(&text).map_err(|e| Failure::errors(format!("{}: {e}", path.display())))?;
    Ok(build_ontology(ts.with_name(path.display().to_string())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure { code: EXIT_IO, message: format!("cannot write {}: {e}", path.display()) })
}

/// Exit code 2 here means the file could not be read.
fn validate(file: &Path, format: Option<Format>, as_json: bool) -> CmdResult {
    let bytes = std::fs::read(file).map_err(|e| Failure { code: 2, message: format!("cannot read {}: {e}", file.display()) })?;
    let report = check_syntax_bytes(&bytes, format.unwrap_or_else(|| Format::from_path(file)));
    if as_json {
        print_json(&report);
    } else {
        for i in &report.issues {
            let at = match (i.line, i.column) {
                (Some(l), Some(c)) => format!(" (line {l}, column {c})"),
                (Some(l), None) => format!(" (line {l})"),
                _ => String::new(),
            };
            let subject = i.subject.as_ref().map(|s| format!(" {s}")).unwrap_or_default();
            println!("{:?} {}{subject}: {}{at}", i.severity, i.code, i.message);
        }
        println!(
            "{}: {} error(s), {} warning(s)",
            file.display(),
            report.count(Severity::Error),
            report.count(Severity::Warning)
        );
    }
    Ok(if report.has_errors() { EXIT_ERRORS } else { 0 })
}

fn plan(config: &Path) -> CmdResult {
    let cfg = RunConfig::load(config)?;
    let mut matrix = default_matrix();
    if let Some(p) = &cfg.matrix_overlay {
        let full = cfg.resolve(p);
        let cells: Vec<MatrixCell> = serde_json::from_str(&read_text(&full)?).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
        matrix = matrix.with_overlay(&cells, p.display().to_string()).map_err(Failure::usage)?;
    }
    let opts = PlanOptions { matrix, include_structure_level: cfg.include_structure_level };
    let plan = build_plan_with(&cfg.purposes, cfg.resources, &cfg.exclusions, &opts).map_err(Failure::usage)?;
    let violations = validate_plan(&plan, &opts.matrix);
    print_json(&plan);
    if violations.is_empty() {
        Ok(0)
    } else {
        for v in violations {
            eprintln!("plan violation: {}", v.message);
        }
        Ok(EXIT_ERRORS)
    }
}

fn evaluate(config: &Path, out: Option<&Path>, markdown: Option<&Path>, mode: Execution) -> CmdResult {
    let cfg = RunConfig::load(config)?;
    let report = run_pipeline_with(&cfg, mode)?;
    let json = render_report(&report, RenderFormat::Json);
    match out {
        Some(p) => write(p, &json)?,
        None => print!("{json}"),
    }
    if let Some(p) = markdown {
        write(p, &render_report(&report, RenderFormat::Markdown))?;
    }
    Ok(if report.has_syntax_errors() { EXIT_ERRORS } else { 0 })
}

fn compare(candidate: &Path, gold_path: &Path, threshold: f64, mode: Execution) -> CmdResult {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Failure::usage(format!("--threshold must be in (0, 1], got {threshold}")));
    }
    let c = load_graph(candidate)?;
    let g = load_graph(gold_path)?;
    let cmp = gold::compare(&c, &g, threshold, mode).map_err(Failure::errors)?;
    print_json(&cmp);
    Ok(0)
}

fn corpus_fit(ontology: &Path, dir: &Path, top_k: usize, window: usize, mode: Execution) -> CmdResult {
    if window < 2 {
        return Err(Failure::usage("--window must be at least 2"));
    }
    let g = load_graph(ontology)?;
    let c = corpus::load_corpus_dir(dir, mode).map_err(|e| match e {
        corpus::CorpusError::Io { .. } => Failure { code: EXIT_IO, message: e.to_string() },
        other => Failure::usage(other),
    })?;
    let coverage = corpus::lexical_coverage(&g, &c, top_k).map_err(Failure::errors)?;
    let fit = corpus::structural_fit(&g, &c, window).map_err(Failure::errors)?;
    let terms = corpus::extract_terms(&c, top_k);
    let [cov, focus] = coverage;
    print_json(&json!({ "documents": c.documents.len(), "top_terms": terms, "metrics": [cov, focus, fit] }));
    Ok(0)
}

fn run_query(ontology: &Path, query_path: &Path, rules_path: Option<&Path>, materialize: bool) -> CmdResult {
    let mut g = load_graph(ontology)?;
    let q: GraphPatternQuery = context::parse_query(&read_text(query_path)?).map_err(Failure::usage)?;
    if materialize {
        let rules = match rules_path {
            Some(p) => context::parse_rules(&read_text(p)?).map_err(Failure::usage)?,
            None => Vec::new(),
        };
        g = context::materialize_inferences(&g, &rules, context::DEFAULT_TRIPLE_CAP).map_err(Failure::errors)?;
    } else if rules_path.is_some() {
        eprintln!("note: --rules has no effect without --materialize");
    }
    let rows = context::evaluate_query(&g, &q);
    print_json(&rows);
    Ok(0)
}
