//! `ample`: batch front end. Loads versioned JSON inputs, runs one module
//! operation and prints a replayable report.
//!
//! Exit codes: 0 pass or evidence, 1 fail with witness, 2 inconclusive,
//! 3 input error.

mod commands;
mod report;
mod schema;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use report::{ReplaySection, Report};
use schema::Loader;

pub use schema::BudgetDoc as Budgets;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{file}{pointer}: {message}", pointer = if pointer.is_empty() { String::new() } else { format!("#{pointer}") })]
    Input {
        file: String,
        pointer: String,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser, Debug)]
#[command(
    name = "ample",
    version,
    about = "Certificates for ample groupoids, partial actions and graph algebras"
)]
struct Cli {
    /// JSON run configuration with default budgets.
    #[arg(long, global = true)]
    config: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    output: Option<String>,
    /// Path-length truncation L for graph groupoids.
    #[arg(long, global = true, env = "AMPLE_BUDGET_DEPTH")]
    depth: Option<usize>,
    /// Truncation level N of a quotient chain.
    #[arg(long = "n", global = true, env = "AMPLE_BUDGET_N")]
    n: Option<usize>,
    /// Word-length radius l.
    #[arg(long = "l", global = true, env = "AMPLE_BUDGET_L")]
    l: Option<usize>,
    /// Search budget (nodes, labels or L1 norm, depending on the operation).
    #[arg(long = "budget", global = true, env = "AMPLE_BUDGET_SEARCH")]
    search: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Check a document against its schema and the module's axioms.
    Validate { kind: DocKind, file: String },
    #[command(subcommand)]
    Grp(GrpOp),
    #[command(subcommand)]
    Gpd(GpdOp),
    #[command(subcommand)]
    Pact(PactOp),
    #[command(subcommand)]
    Hls(HlsOp),
    #[command(subcommand)]
    Dr(DrOp),
    #[command(subcommand)]
    Coarse(CoarseOp),
    #[command(subcommand)]
    Kzero(KzeroOp),
    /// Re-run the command recorded in a report and compare byte for byte.
    Replay { report: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DocKind {
    Group,
    Chain,
    Groupoid,
    Paction,
    Graph,
    Kgraph,
    Coarse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainPreset {
    Z,
    F2,
    Oplus,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrpOp {
    /// Ball of radius l in the standard generators.
    Ball {
        #[arg(long)]
        group: String,
    },
    /// Print a built-in chain with levels 0..=N as a chain document.
    Export {
        #[arg(long, value_enum)]
        preset: ChainPreset,
        /// Number of Z/2 summands for the oplus preset.
        #[arg(long, default_value_t = 4)]
        rank: usize,
    },
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GpdOp {
    /// Search for an isomorphism within the search budget.
    Iso {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PactOp {
    /// Transformation groupoid with its projection cocycle.
    Groupoid {
        #[arg(long)]
        paction: String,
    },
    /// Fiber audit of the canonical H over all units and arrows.
    Delta {
        #[arg(long)]
        paction: String,
    },
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HlsOp {
    Build {
        #[arg(long)]
        chain: String,
    },
    Afs {
        #[arg(long)]
        chain: String,
    },
    /// Forced pairs over the radius-l ball at level N.
    Witness {
        #[arg(long)]
        chain: String,
    },
    /// Equicontinuity certificate for the full cover of one level.
    Equicont {
        #[arg(long)]
        chain: String,
        /// Level whose points form the cover; defaults to N.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Isomorphism between the truncation and the top partial action.
    Iso {
        #[arg(long)]
        chain: String,
    },
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DrOp {
    /// `Z(mu) \ Z(nu)` as disjoint cylinders.
    Cylinders {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
    Cocycle {
        #[arg(long)]
        graph: String,
    },
    Purity {
        #[arg(long)]
        graph: String,
    },
    /// Same-degree H audit over all units and arrows.
    Delta {
        #[arg(long)]
        graph: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Labelling {
    Z,
    F2,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoarseOp {
    /// Injectivity and label sets of a map into a group.
    Check {
        #[arg(long)]
        space: String,
        #[arg(long)]
        map: String,
    },
    /// Map to cocycle and back.
    Roundtrip {
        #[arg(long)]
        space: String,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Greedy matching with distinct labels against the maximal structure.
    Refute {
        #[arg(long)]
        map: String,
    },
    /// Fiber sizes of a built-in pair labelling on growing windows.
    Profile {
        #[arg(long, value_enum)]
        labelling: Labelling,
        #[arg(long, value_delimiter = ',', required = true)]
        windows: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        gamma: Vec<String>,
    },
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KzeroOp {
    /// K₀ from the Smith normal form of I − Aᵗ.
    Oracle {
        #[arg(long)]
        graph: String,
    },
    /// Paradoxical decompositions of vertex cylinders.
    Witness {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// A compact open set in the class of a vertex vector, with its proof steps.
    Realize {
        #[arg(long)]
        graph: String,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        target: Vec<i64>,
    },
}

/// Flags and environment first, then the config file.
fn budgets(cli: &Cli) -> Result<Budgets, CliError> {
    let file = match &cli.config {
        Some(path) => schema::read_config(path)?.budgets,
        None => Budgets::default(),
    };
    Ok(Budgets {
        depth: cli.depth.or(file.depth),
        n: cli.n.or(file.n),
        l: cli.l.or(file.l),
        search: cli.search.or(file.search),
    })
}

/// Runs a command and wraps the outcome in a report.
pub fn run(command: &Command, budgets: &Budgets, loader: &mut Loader) -> Result<Report, CliError> {
    let outcome = commands::dispatch(command, budgets, loader)?;
    let replay = ReplaySection {
        command: command.clone(),
        budgets: budgets.clone(),
        inputs: loader.records.clone(),
    };
    Ok(Report::new(outcome, replay, loader.digest()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, CliError> {
    let budgets = budgets(cli)?;
    if let Command::Grp(GrpOp::Export { preset, rank }) = &cli.command {
        let doc = commands::export_chain(*preset, *rank, budgets.n.unwrap_or(commands::DEFAULT_N))?;
        let text = report::render_json(&serde_json::to_value(doc).expect("documents serialize"));
        emit(cli, &text, &text)?;
        return Ok(0);
    }
    let report = run(&cli.command, &budgets, &mut Loader::disk())?;
    let json = report.to_json();
    let shown = match cli.format {
        Format::Json => json.clone(),
        Format::Text => report.to_text(),
    };
    emit(cli, &shown, &json)?;
    Ok(report.verdict.exit_code())
}

fn emit(cli: &Cli, shown: &str, json: &str) -> Result<(), CliError> {
    print!("{shown}");
    if let Some(path) = &cli.output {
        std::fs::write(path, json)
            .map_err(|e| CliError::Usage(format!("cannot write {path}: {e}")))?;
    }
    Ok(())
}
