//! CLI entry point:
//! `polarwave <experiment> --config path.json [--output dir] [--seed N] [--threads N]`
//! plus `polarwave report <run.json ...> [--output dir]`.
//!
//! Thread count falls back to the APP_THREADS environment variable; every
//! experiment produces byte-identical CSVs regardless of the value.

use clap::{Args, Parser, Subcommand};
use polarwave::runner::{self, ExperimentKind, RunRecord};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "polarwave",
    version,
    about = "Spectral solver and estimate verifier for the 2D Schrödinger equation with inverse-square potential"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment configuration
    #[arg(long)]
    config: PathBuf,
    /// Override the config's output directory
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the config's top-level seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: APP_THREADS or all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ReportArgs {
    /// run.json records to aggregate
    records: Vec<PathBuf>,
    /// Where to write summary.md and summary.csv
    #[arg(long, default_value = "runs")]
    output: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve configured initial data and export the trajectory
    Propagate(RunArgs),
    /// Scale-invariance and per-mode Strichartz constants
    StrichartzScan(RunArgs),
    /// Bessel split identity and turning-zone bounds
    VerifyBessel(RunArgs),
    /// Hankel involution, Plancherel and diagonalization
    VerifyHankel(RunArgs),
    /// Cutoff partition, kernel bounds and operator decay
    VerifyKernels(RunArgs),
    /// Hardy-Littlewood maximal operator checks
    VerifyMaximal(RunArgs),
    /// Aggregate run records into a summary
    Report(ReportArgs),
}

fn thread_count(args: &RunArgs) -> Option<usize> {
    args.threads.or_else(|| {
        std::env::var("APP_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

fn execute(args: &RunArgs, kind: ExperimentKind) -> polarwave::Result<RunRecord> {
    let mut config = runner::ExperimentConfig::load(&args.config)?;
    if config.experiment != kind {
        return Err(polarwave::Error::config(
            "experiment",
            format!(
                "config names `{}` but the `{}` subcommand was invoked",
                config.experiment.name(),
                kind.name()
            ),
        ));
    }
    if let Some(out) = &args.output {
        config.output_dir = out.clone();
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let run_it = || runner::run(&config);
    match thread_count(args) {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| polarwave::Error::config("threads", e.to_string()))?
            .install(run_it),
        None => run_it(),
    }
}

fn run_report(args: &ReportArgs) -> ExitCode {
    let records: Result<Vec<RunRecord>, _> =
        args.records.iter().map(|p| RunRecord::load(p)).collect();
    let records = match records {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    match runner::report(&records) {
        Ok(summary) => {
            if let Err(e) = std::fs::create_dir_all(&args.output)
                .and_then(|_| std::fs::write(args.output.join("summary.md"), &summary.markdown))
                .and_then(|_| std::fs::write(args.output.join("summary.csv"), &summary.csv))
            {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
            print!("{}", summary.markdown);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, kind) = match &cli.command {
        Command::Report(args) => return run_report(args),
        Command::Propagate(a) => (a, ExperimentKind::Propagate),
        Command::StrichartzScan(a) => (a, ExperimentKind::StrichartzScan),
        Command::VerifyBessel(a) => (a, ExperimentKind::VerifyBessel),
        Command::VerifyHankel(a) => (a, ExperimentKind::VerifyHankel),
        Command::VerifyKernels(a) => (a, ExperimentKind::VerifyKernels),
        Command::VerifyMaximal(a) => (a, ExperimentKind::VerifyMaximal),
    };
    match execute(args, kind) {
        Ok(record) => {
            for check in &record.checks {
                println!(
                    "{}: {} (value {} {} {})",
                    check.name,
                    if check.passed { "PASS" } else { "FAIL" },
                    check.value,
                    check.direction,
                    check.threshold
                );
            }
            println!(
                "{}: {} checks, {:.2}s, outputs in {}",
                record.experiment,
                record.checks.len(),
                record.timing_seconds,
                record.config.output_dir.display()
            );
            if record.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
