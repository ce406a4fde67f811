use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};

use super::campaign::{assemble, run_campaign_with_cap, run_job, Report};
use super::document::{parse_and_validate, Degree, Document, Job, JobSpec, DEFAULT_CAP};

#[derive(Debug, Parser)]
#[command(name = "regrade", version, about = "Verify change-of-grading results on graded modules")]
pub struct Cli {
    /// Cap on resolution lengths. Without it the document's cap applies, then
    /// `REGRADE_CAP`, then 8.
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Document to read.
    pub file: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a document and validate every object in it.
    Validate(Input),
    /// Minimal graded projective resolution of a module.
    Resolve {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
    },
    /// Dimension of a graded Ext group.
    Ext {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        degree: usize,
    },
    /// Graded injective dimension of a module.
    Injdim {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
    },
    /// Regrade a module along a group morphism.
    Regrade {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[arg(long)]
        morphism: String,
    },
    /// Compare injective dimensions before and after regrading.
    VerifyInequality {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[arg(long)]
        morphism: String,
    },
    /// Unit, counit, triangle identities and Hom bijections.
    VerifyAdjunction {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        /// Module over the regraded algebra.
        #[arg(long)]
        target: String,
        #[arg(long)]
        morphism: String,
    },
    /// The decomposition of a pulled-back pushforward into shifted copies.
    VerifyLemma {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        window: Option<u32>,
        /// Check the product form instead.
        #[arg(long)]
        product: bool,
    },
    /// Windowed two-term resolution for a morphism with kernel Z.
    VerifyResolution {
        #[command(flatten)]
        input: Input,
        /// Algebra before regrading.
        #[arg(long)]
        algebra: String,
        /// Module over the regraded algebra.
        #[arg(long)]
        module: String,
        #[arg(long)]
        morphism: String,
        #[arg(long, default_value_t = 4)]
        window: u32,
    },
    /// Vanishing of Ext from a regraded module into a regraded injective.
    VerifyAcyclicity {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        vertex: String,
        /// Shift of the injective, as comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
    },
    /// Injective dimensions of the k[t] examples and their sharpness.
    DemoPid,
    /// Run every job of a document.
    Campaign {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn read(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
    parse_and_validate(&text).map_err(|e| Error::Document(format!("{}: {e}", path.display())))
}

fn single(doc: &Document, spec: JobSpec, cap: usize) -> Report {
    let source = format!("{}\n{}", doc.source, serde_json::to_string(&spec).expect("job specs serialize"));
    let job = Job { id: spec.kind.clone(), spec };
    let report = run_job(doc, &job, 0, cap);
    assemble(&source, 0, cap, vec![report])
}

fn parse_shift(s: &str) -> Result<Degree> {
    let coords = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Document(format!("bad shift '{s}'"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Degree::Many(coords))
}

fn emit(report: &Report, json: Option<&Path>, table: bool) -> Result<ExitCode> {
    match json {
        Some(path) => {
            std::fs::write(path, report.to_json()).map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
            print!("{}", report.table());
        }
        None if table => {
            eprint!("{}", report.table());
            print!("{}", report.to_json());
        }
        None => print!("{}", report.to_json()),
    }
    Ok(if report.failed() { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn default_cap() -> Result<usize> {
    match std::env::var(CAP_VARIABLE) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Document(format!("{CAP_VARIABLE}={v} is not a number"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

/// Environment variable holding the default cap.
pub const CAP_VARIABLE: &str = "REGRADE_CAP";

/// Executes a parsed command line.
pub fn execute(cli: Cli) -> Result<ExitCode> {
    let fallback = default_cap()?;
    let cap = cli.cap.unwrap_or(fallback);
    let json = cli.json.as_deref();
    let job = |kind: &str| JobSpec { kind: kind.to_string(), ..JobSpec::default() };
    let (file, spec) = match cli.command {
        Command::Validate(input) => {
            let doc = read(&input.file)?;
            println!(
                "{}: ok ({} groups, {} morphisms, {} algebras, {} modules, {} jobs)",
                input.file.display(),
                doc.groups.len(),
                doc.morphisms.len(),
                doc.algebras.len(),
                doc.modules.len(),
                doc.jobs.len()
            );
            return Ok(ExitCode::SUCCESS);
        }
        Command::DemoPid => {
            let doc = Document::default();
            return emit(&single(&doc, job("pid"), cap), json, true);
        }
        Command::Campaign { input, seed } => {
            let doc = read(&input.file)?;
            let seed = seed.or(doc.seed).unwrap_or(0);
            let cap = cli.cap.or(doc.cap).unwrap_or(fallback);
            let report = run_campaign_with_cap(&doc, seed, cap);
            return emit(&report, json, true);
        }
        Command::Resolve { input, module } => (input.file, JobSpec { module: Some(module), ..job("resolve") }),
        Command::Ext { input, module, target, degree } => (
            input.file,
            JobSpec { module: Some(module), target: Some(target), degree: Some(degree), ..job("ext") },
        ),
        Command::Injdim { input, module } => (input.file, JobSpec { module: Some(module), ..job("injdim") }),
        Command::Regrade { input, module, morphism } => {
            (input.file, JobSpec { module: Some(module), morphism: Some(morphism), ..job("regrade") })
        }
        Command::VerifyInequality { input, module, morphism } => {
            (input.file, JobSpec { module: Some(module), morphism: Some(morphism), ..job("inequality") })
        }
        Command::VerifyAdjunction { input, module, target, morphism } => (
            input.file,
            JobSpec { module: Some(module), target: Some(target), morphism: Some(morphism), ..job("adjunction") },
        ),
        Command::VerifyLemma { input, module, morphism, window, product } => (
            input.file,
            JobSpec {
                module: Some(module),
                morphism: Some(morphism),
                window,
                ..job(if product { "product" } else { "lemma" })
            },
        ),
        Command::VerifyResolution { input, algebra, module, morphism, window } => (
            input.file,
            JobSpec {
                algebra: Some(algebra),
                module: Some(module),
                morphism: Some(morphism),
                window: Some(window),
                ..job("resolution")
            },
        ),
        Command::VerifyAcyclicity { input, module, morphism, vertex, shift } => (
            input.file,
            JobSpec {
                module: Some(module),
                morphism: Some(morphism),
                vertex: Some(vertex),
                shift: shift.as_deref().map(parse_shift).transpose()?,
                ..job("acyclicity")
            },
        ),
    };
    let doc = read(&file)?;
    let cap = cli.cap.or(doc.cap).unwrap_or(fallback);
    emit(&single(&doc, spec, cap), json, false)
}

/// Entry point used by the binary.
pub fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
