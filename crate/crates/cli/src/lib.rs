//! The `softscale` command line. `run` takes the argument list and output
//! streams so the binary and the tests share one entry point.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use softscale_core::lattice::enriched_concepts;
use softscale_core::markup::{load_dataset, parse_collection, parse_ontology, CollectionDoc, OntologyDoc};
use softscale_core::pipeline::concrete_scales;
use softscale_core::{ConceptualSpace, PipelineError, PipelineOptions, VValue, Valuation, ValuationKind};
use softscale_service::ServiceConfig;

#[derive(Debug, Parser)]
#[command(name = "softscale", version, about = "Soft concept analysis workbench", arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Inputs {
    /// Ontology document (.ckml.xml)
    #[arg(long)]
    ontology: PathBuf,
    /// Attribute collection document (.ckml.xml)
    #[arg(long)]
    collection: PathBuf,
    /// Dataset (.csv)
    #[arg(long, alias = "dataset")]
    data: PathBuf,
    #[command(flatten)]
    options: Options,
}

#[derive(Debug, Args)]
struct Options {
    /// Truth values: boolean, fuzzy or real
    #[arg(long, default_value = "boolean")]
    valuation: ValuationKind,
    /// Reference date for relative date queries (YYYY-MM-DD)
    #[arg(long)]
    reference_date: Option<NaiveDate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check scales and their query bindings against the implication basis
    Validate {
        #[arg(long)]
        ontology: PathBuf,
        /// Also bind this collection's queries and report violations
        #[arg(long)]
        collection: Option<PathBuf>,
        #[arg(long)]
        reference_date: Option<NaiveDate>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scale a dataset and print the facet as JSON
    Scale {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the concept lattice of the scaled dataset
    Lattice {
        #[command(flatten)]
        inputs: Inputs,
        /// Output format; defaults to dot for an `--out` ending in `.dot`,
        /// json otherwise
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Grades for enriched concepts (non-boolean valuations); defaults
        /// to every value occurring in the facet
        #[arg(long, value_delimiter = ',')]
        grades: Vec<f64>,
        /// Maximum number of enriched concepts
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the browsing server
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Idle session lifetime in seconds
        #[arg(long, default_value_t = 1800)]
        session_ttl: u64,
    },
}

enum Failure {
    /// Exit 2: bad arguments or unreadable inputs.
    Usage(String),
    /// Exit 1: documents that do not validate.
    Invalid { module: &'static str, message: String },
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::Invalid { module: e.module(), message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => stdout.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn documents(inputs: &Inputs) -> Result<(OntologyDoc, CollectionDoc, String), Failure> {
    let onto = parse_ontology(&read(&inputs.ontology)?).map_err(PipelineError::from)?;
    let collection = parse_collection(&read(&inputs.collection)?, &onto).map_err(PipelineError::from)?;
    Ok((onto, collection, read(&inputs.data)?))
}

fn build(inputs: &Inputs) -> Result<ConceptualSpace, Failure> {
    let (onto, collection, csv) = documents(inputs)?;
    let dataset = load_dataset(&csv, &onto).map_err(PipelineError::from)?;
    let options = PipelineOptions {
        valuation: Valuation::new(inputs.options.valuation),
        reference_date: inputs.options.reference_date,
    };
    log::debug!("scaling {} objects with {}", dataset.objects.len(), options.valuation);
    Ok(ConceptualSpace::build(&onto, &collection, &dataset, options)?)
}

fn validate(
    ontology: &Path,
    collection: Option<&Path>,
    reference_date: Option<NaiveDate>,
    report: &mut String,
) -> Result<(), Failure> {
    let onto = parse_ontology(&read(ontology)?).map_err(PipelineError::from)?;
    let _ = writeln!(report, "ontology {} {}", onto.name, onto.version);
    for decl in &onto.scales {
        let s = &decl.scale;
        let _ = writeln!(report, "scale {} over {}: {} terms", s.name(), decl.category, s.len());
        for imp in s.basis() {
            let _ = writeln!(report, "  {imp}");
        }
    }
    let Some(path) = collection else { return Ok(()) };
    let c = parse_collection(&read(path)?, &onto).map_err(PipelineError::from)?;
    let scales = concrete_scales(&onto, &c, reference_date)?;
    for cs in &scales {
        let _ = writeln!(report, "scale {}: constraints satisfied", cs.abstract_scale().name());
        for (term, q) in cs.contingents() {
            let _ = writeln!(report, "  contingent {term}: {q}");
        }
    }
    Ok(())
}

fn grade_values(space: &ConceptualSpace, grades: &[f64]) -> Result<Vec<VValue>, Failure> {
    let v = space.valuation();
    if grades.is_empty() {
        let mut out: Vec<VValue> = space.facet().relation().rows().flatten().copied().collect();
        out.sort_by(|a, b| a.as_f64().total_cmp(&b.as_f64()));
        out.dedup();
        return Ok(out);
    }
    grades.iter().map(|&x| v.value(x).map_err(|e| Failure::Usage(format!("grade {x}: {e}")))).collect()
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { ontology, collection, reference_date, out } => {
            let mut report = String::new();
            let result = validate(&ontology, collection.as_deref(), reference_date, &mut report);
            if let Err(Failure::Invalid { message, .. }) = &result {
                let _ = writeln!(report, "invalid: {message}");
            }
            emit(out.as_deref(), &report, stdout)?;
            result
        }
        Command::Scale { inputs, out } => {
            let space = build(&inputs)?;
            let json = serde_json::to_string_pretty(space.facet()).expect("facets serialize");
            emit(out.as_deref(), &(json + "\n"), stdout)
        }
        Command::Lattice { inputs, format, grades, limit, out } => {
            let space = build(&inputs)?;
            let format = format.unwrap_or(match out.as_deref().and_then(Path::extension) {
                Some(ext) if ext == "dot" => Format::Dot,
                _ => Format::Json,
            });
            let text = match (space.valuation().kind(), format) {
                (ValuationKind::Boolean, Format::Json) => space.lattice()?.to_json() + "\n",
                (ValuationKind::Boolean, Format::Dot) => space.lattice()?.to_dot(),
                (_, Format::Dot) => return Err(Failure::Usage("DOT output needs --valuation boolean".into())),
                (_, Format::Json) => {
                    let grades = grade_values(&space, &grades)?;
                    let concepts = enriched_concepts(space.facet(), &grades, limit).map_err(PipelineError::from)?;
                    serde_json::to_string_pretty(&concepts).expect("concepts serialize") + "\n"
                }
            };
            emit(out.as_deref(), &text, stdout)
        }
        Command::Serve { addr, session_ttl } => {
            let config = ServiceConfig { session_ttl: Duration::from_secs(session_ttl) };
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Usage(e.to_string()))?;
            runtime
                .block_on(softscale_service::serve(addr, config))
                .map_err(|e| Failure::Usage(format!("server on {addr}: {e}")))
        }
    }
}

/// Runs one command. Returns the exit code: 0 on success, 1 when the
/// inputs fail validation, 2 on usage errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{e}");
            return e.exit_code();
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => 0,
        Err(Failure::Usage(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            2
        }
        Err(Failure::Invalid { module, message }) => {
            let _ = writeln!(stderr, "error [{module}]: {message}");
            1
        }
    }
}

pub fn main_with_env() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SOFTSCALE_LOG")).init();
    let code = run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    let _ = io::stdout().flush();
    code
}
