//! `vkf`: deleted-product heights, characteristic-class verdicts and PL
//! coincidence checks from the command line. Every run prints one JSON
//! report; see `report.rs` for the envelope.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use vkf_core::{Error, MemoryBudget};

#[derive(Debug, Parser)]
#[command(
    name = "vkf",
    version,
    about = "Deleted-product heights and van Kampen-Flores type verdicts"
)]
struct Cli {
    /// Memory budget for GF(2) matrices, e.g. 512M or 2G. Defaults to
    /// $VKF_MEMORY_BUDGET, then 2G.
    #[arg(long, global = true, value_name = "SIZE")]
    memory_budget: Option<String>,

    /// Write the report to this file instead of stdout.
    #[arg(long, short, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

/// A complex: a built-in name (`rp2_6`, `torus_7`, `cp2_9`, `simplex:4`,
/// `boundary_simplex:3`, `cross_polytope_boundary:3`) or a JSON file.
#[derive(Debug, Args)]
struct ComplexArg {
    #[arg(value_name = "COMPLEX")]
    complex: String,

    /// Replace the complex by its n-skeleton first.
    #[arg(long, value_name = "N")]
    skeleton: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stiefel-Whitney height of the deleted product (or of a quotient file).
    Height {
        #[command(flatten)]
        input: ComplexArg,
        /// Highest cup power examined.
        #[arg(long, value_name = "N")]
        max_degree: Option<usize>,
        /// Use the antipodal involution of a cross-polytope boundary
        /// instead of the deleted product.
        #[arg(long)]
        antipodal: bool,
        /// Take the n-skeleton of the free Z2-complex before the quotient.
        #[arg(long, value_name = "N")]
        equivariant_skeleton: Option<usize>,
        /// Examine every degree instead of stopping at the first vanishing power.
        #[arg(long)]
        all_degrees: bool,
    },
    /// Build the triangulated deleted product and its quotient.
    Delprod {
        #[command(flatten)]
        input: ComplexArg,
        /// Write the quotient complex with its cocycle to this file.
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
        /// Also compute mod-2 Betti numbers of the quotient.
        #[arg(long)]
        betti: bool,
    },
    /// Classes w^(k) of a cohomology model.
    Wk {
        /// Model name (rp5, cp2, sphere3, product(rp2,sphere1), generic4) or JSON file.
        #[arg(long)]
        model: String,
        #[arg(long = "k", value_name = "K")]
        k: usize,
    },
    /// Verdicts implied by a model's classes.
    Claims {
        #[arg(long)]
        model: String,
        /// Manifold dimension D.
        #[arg(long, value_name = "D")]
        dim: usize,
        /// Exit with status 1 when no claim is emitted.
        #[arg(long)]
        strict: bool,
    },
    /// Check h(deleted product) >= D + k on a triangulation.
    Certify {
        #[command(flatten)]
        input: ComplexArg,
        #[arg(long, value_name = "D")]
        dim: usize,
        #[arg(long = "k", value_name = "K")]
        k: usize,
        /// Cohomology model of the manifold; built-in complexes supply their own.
        #[arg(long)]
        model: Option<String>,
        #[arg(long, value_name = "N")]
        max_degree: Option<usize>,
        /// Exit with status 1 unless the bound is certified.
        #[arg(long)]
        strict: bool,
    },
    /// Search a PL map for two disjoint simplices with intersecting images.
    Radon {
        #[command(flatten)]
        input: ComplexArg,
        /// PL map file: {"target_dim": m, "coordinates": {"<label>": [..]}}.
        #[arg(
            long,
            value_name = "PATH",
            required_unless_present = "random",
            conflicts_with = "random"
        )]
        map: Option<PathBuf>,
        /// Seed for a random integer map.
        #[arg(long, value_name = "SEED")]
        random: Option<u64>,
        /// Target dimension m.
        #[arg(long, value_name = "M")]
        target: usize,
        /// Largest dim σ + dim τ scanned; defaults to the target dimension.
        #[arg(long, value_name = "S")]
        bound: Option<usize>,
        /// Coordinate range for random maps, inclusive.
        #[arg(
            long,
            value_name = "LO:HI",
            default_value = "-100:100",
            allow_hyphen_values = true
        )]
        range: String,
        /// Exit with status 1 when no pair is found.
        #[arg(long)]
        strict: bool,
    },
    /// Sample the deformation of K* onto the simplicial deleted product.
    RetractCheck {
        #[command(flatten)]
        input: ComplexArg,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Built-in triangulations.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Subcommand)]
enum CorpusAction {
    /// List the shipped complexes with their checks.
    List,
}

/// What a command produced besides its report.
pub(crate) enum Outcome {
    Done,
    /// `--strict` and an empty or negative result.
    Unsatisfied,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Parse(_) | Error::Domain(_) | Error::Io(_) => 2,
        Error::Integrity(_) | Error::Resource { .. } => 3,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli, argv, start) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Unsatisfied) => ExitCode::from(1),
        Err(e) => {
            eprintln!("vkf: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(cli: Cli, argv: Vec<String>, start: Instant) -> vkf_core::Result<Outcome> {
    let budget = match &cli.memory_budget {
        Some(s) => MemoryBudget::parse(s)?,
        None => MemoryBudget::from_env()?,
    };
    let (outcome, mut report) = commands::dispatch(cli.command, &budget, argv)?;
    report
        .timings
        .insert("total_ms".into(), (start.elapsed().as_millis() as u64).into());
    let text = report.to_pretty_json();
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
            _ => {}
        },
    }
    Ok(outcome)
}
