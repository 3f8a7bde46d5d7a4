//! `cobacs` — crowd answer aggregation toolkit.
//!
//! Four subcommands: `sweep` runs seeded population filter-sweep
//! experiments, `analyze` runs the bootstrap filter comparison on a
//! trials CSV, `predict` tabulates closed-form error predictions against
//! Monte Carlo, and `roc` scores AUROC1/AUROC2 from a trials CSV.
//!
//! Configuration comes from an optional TOML file plus flag overrides
//! (flags win). Identical configuration and seed produce byte-identical
//! output files at any thread count.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{config_hash, FileConfig};
use output::OutputDir;

const OUT_DIR_ENV: &str = "COBACS_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "cobacs", version, about = "Crowd answer aggregation toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed recorded in every output.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (default: $COBACS_OUT_DIR or ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for parallel sections (0 = automatic).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep recruitment filters over simulated populations.
    Sweep {
        /// Population replicates per filter cell.
        #[arg(long)]
        replicates: Option<usize>,
    },
    /// Bootstrap filter comparison on a trials CSV.
    Analyze {
        /// Input trials CSV.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Bootstrap resamples.
        #[arg(long)]
        replicates: Option<usize>,
    },
    /// Closed-form error predictions vs Monte Carlo over a grid.
    Predict {
        /// Monte Carlo task replicates per grid point.
        #[arg(long)]
        replicates: Option<usize>,
    },
    /// AUROC1 / AUROC2 scores and ROC points from a trials CSV.
    Roc {
        /// Input trials CSV.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut file_config = FileConfig::load(cli.global.config.as_deref())?;

    let threads = cli.global.threads.or(file_config.threads).unwrap_or(0);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }

    let seed = cli.global.seed.or(file_config.seed).unwrap_or(0);
    let out_dir = cli
        .global
        .out
        .or_else(|| file_config.out_dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));

    // Apply flag overrides into the effective config, then hash it.
    match &cli.command {
        Command::Sweep { replicates } => {
            if let Some(r) = replicates {
                file_config.sweep.replicates = *r;
            }
        }
        Command::Analyze { input, replicates } => {
            if let Some(path) = input {
                file_config.analyze.input = Some(path.clone());
            }
            if let Some(r) = replicates {
                file_config.analyze.resamples = *r;
            }
        }
        Command::Predict { replicates } => {
            if let Some(r) = replicates {
                file_config.predict.replicates = *r;
            }
        }
        Command::Roc { input } => {
            if let Some(path) = input {
                file_config.roc.input = Some(path.clone());
            }
        }
    }

    let effective = toml::to_string(&file_config).context("serializing effective config")?;
    let hash = config_hash(&format!("seed={seed}\n{effective}"));

    let mut out = OutputDir::create(&out_dir, seed, hash)?;
    let result = match &cli.command {
        Command::Sweep { .. } => commands::cmd_sweep(&file_config.sweep, &mut out),
        Command::Analyze { .. } => commands::cmd_analyze(&file_config.analyze, &mut out),
        Command::Predict { .. } => commands::cmd_predict(&file_config.predict, &mut out),
        Command::Roc { .. } => commands::cmd_roc(&file_config.roc, &mut out),
    };
    match result {
        Ok(()) => {
            for file in out.files() {
                println!("wrote {}", file.display());
            }
            Ok(())
        }
        Err(err) => {
            out.cleanup();
            Err(err)
        }
    }
}
