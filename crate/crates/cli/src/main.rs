use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use commloyalty::pipeline::{
    cmd_ingest, cmd_loyalty, cmd_network, cmd_predict, cmd_synth, cmd_userlevel, PredictTask, RunConfig, RunOutcome,
};
use log::error;

#[derive(Parser)]
#[command(name = "commloyalty", version, about = "Community loyalty analysis over comment corpora")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load the dumps and report admitted and skipped records.
    Ingest,
    /// Loyalty rates, tiers, descriptives and category summaries.
    Loyalty,
    /// Interaction networks, null comparisons, tier tests and regressions.
    Network,
    /// Selected-post and paired-comment comparisons of loyal and vagrant users.
    Userlevel,
    /// Loyalty prediction.
    Predict {
        #[arg(long, value_enum)]
        task: Task,
    },
    /// Write a synthetic planted-truth corpus.
    Synth,
}

#[derive(Clone, Copy, ValueEnum)]
enum Task {
    #[value(name = "first_k")]
    FirstK,
    Loco,
}

fn load_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p).with_context(|| format!("loading config {}", p.display()))?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.paths.out = Some(out.clone());
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> anyhow::Result<RunOutcome> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    let cfg = load_config(cli)?;
    let outcome = match cli.command {
        Command::Ingest => cmd_ingest(&cfg)?,
        Command::Loyalty => cmd_loyalty(&cfg)?,
        Command::Network => cmd_network(&cfg)?,
        Command::Userlevel => cmd_userlevel(&cfg)?,
        Command::Predict { task } => {
            let task = match task {
                Task::FirstK => PredictTask::FirstK,
                Task::Loco => PredictTask::Loco,
            };
            cmd_predict(&cfg, task)?
        }
        Command::Synth => cmd_synth(&cfg)?,
    };
    Ok(outcome)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors are fatal (1); clap's own default of 2 would read as a partial run
            let _ = e.print();
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.dir.display());
            if outcome.is_partial() {
                eprintln!("completed with {} warning(s)", outcome.warnings.len());
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            error!("{e:#}");
            ExitCode::from(1)
        }
    }
}
