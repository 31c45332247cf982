use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pgv::catalog::CATALOG;
use pgv::report::{self, RunOptions, VerificationReport};
use pgv::{CharacterTable, GroupSpec};

#[derive(Parser)]
#[command(name = "pgv", version, about = "Exact verification of p-group character and subgroup-family constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for the per-subgroup loops (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Refuse groups larger than this.
    #[arg(long, global = true, default_value_t = pgv::group::ORDER_CAP)]
    max_order: usize,
    /// Record wall time per section (reports are then no longer byte-identical).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct GroupArg {
    /// Group descriptor, e.g. `heisenberg:3`, `elemab:3,3`, `product:cyclic:3,heisenberg:3`, `file:path`.
    #[arg(long)]
    group: String,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in group constructors.
    Catalog,
    /// Print the character table of a group.
    Table(GroupArg),
    /// The class-function pipeline: restrictions, freeness, types, subfamilies, factorization.
    CheckChi(GroupArg),
    /// The star-shaped diagram over classes of prime-order subgroups.
    CheckRank1 {
        #[command(flatten)]
        group: GroupArg,
        /// Common degree n; must be a multiple of every m_d (default: their lcm).
        #[arg(long)]
        n: Option<usize>,
    },
    /// The coset composition map for every valid (H, K, L), or one triple.
    CheckBiset {
        #[command(flatten)]
        group: GroupArg,
        /// Subgroups H K L as hex bitsets.
        #[arg(long, num_args = 3, value_names = ["H", "K", "L"])]
        triple: Option<Vec<String>>,
    },
    /// Every pipeline.
    CheckAll {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        n: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when some applicable check failed.
fn run(cli: &Cli) -> anyhow::Result<bool> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global().context("thread pool")?;
    }
    let load = |arg: &GroupArg| -> anyhow::Result<_> {
        let spec = GroupSpec::parse(&arg.group)?;
        let g = spec.build()?;
        if g.order() > cli.max_order {
            bail!("group order {} exceeds --max-order {}", g.order(), cli.max_order);
        }
        Ok((spec.to_string(), g))
    };
    let mut opts = RunOptions { timings: cli.timings, ..RunOptions::default() };
    let report: VerificationReport = match &cli.command {
        Command::Catalog => {
            let text = match cli.format {
                Format::Json => {
                    let entries: Vec<_> = CATALOG
                        .iter()
                        .map(|e| serde_json::json!({ "name": e.name, "example": e.example, "description": e.description }))
                        .collect();
                    serde_json::to_string_pretty(&entries)? + "\n"
                }
                Format::Text => CATALOG.iter().map(|e| format!("{:<14} {:<34} {}\n", e.name, e.example, e.description)).collect(),
            };
            emit(cli, &text)?;
            return Ok(true);
        }
        Command::Table(arg) => {
            let (desc, g) = load(arg)?;
            let table = CharacterTable::compute(&g)?;
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report::table_json(&desc, &table))? + "\n",
                Format::Text => table.to_text(),
            };
            emit(cli, &text)?;
            return Ok(true);
        }
        Command::CheckChi(arg) => {
            let (desc, g) = load(arg)?;
            report::jackson_report(&desc, &g, &opts)?
        }
        Command::CheckRank1 { group, n } => {
            let (desc, g) = load(group)?;
            opts.rank_one_n = *n;
            report::rank_one_report(&desc, &g, &opts)?
        }
        Command::CheckBiset { group, triple } => {
            let (desc, g) = load(group)?;
            opts.triple = triple.as_ref().map(|t| (t[0].clone(), t[1].clone(), t[2].clone()));
            report::biset_report(&desc, &g, &opts)?
        }
        Command::CheckAll { group, n } => {
            let (desc, g) = load(group)?;
            opts.rank_one_n = *n;
            report::all_report(&desc, &g, &opts)?
        }
    };
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    emit(cli, &text)?;
    Ok(!report.failed())
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
