use std::path::PathBuf;
use std::process::ExitCode;

use boxlasso_cli::tolerance::Tolerance;
use boxlasso_cli::validate::{render, validate_files};
use boxlasso_cli::{run_experiment, spec, CliError, Experiment, Overrides};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "boxlasso", version, about = "Box-LASSO theory and Monte-Carlo experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Flat TOML experiment description; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads for Monte-Carlo trials; output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Theory and simulation of every metric across regularizer values.
    GammaSweep(RunArgs),
    /// Optimal data-energy ratio with the regularizer re-tuned per point.
    PowerSweep(RunArgs),
    /// Goodput across training lengths.
    TrainingSweep(RunArgs),
    /// On- and off-support recovery probabilities across regularizer values.
    SupportCurves(RunArgs),
    /// Element error rate across regularizer values.
    EerCurve(RunArgs),
    /// MSE under Gaussian, Rademacher and Laplacian channel estimates.
    UniversalityCheck(RunArgs),
    /// Optimal-cost curve across regularizer values.
    ObjectiveCurve(RunArgs),
    /// Compare theory and simulation columns of experiment CSVs.
    Validate {
        /// CSV files written by an experiment subcommand.
        #[arg(required = true)]
        csv: Vec<PathBuf>,
        /// `metric=rel:<bound>[:<floor>]` or `metric=abs:<bound>[:<floor>]`;
        /// repeatable. Without any, every available metric is checked at
        /// its default tolerance.
        #[arg(long = "tolerance", value_parser = parse_tolerance)]
        tolerances: Vec<(String, Tolerance)>,
    },
}

fn parse_tolerance(s: &str) -> Result<(String, Tolerance), String> {
    let (metric, tol) = s.split_once('=').ok_or("expected metric=kind:bound")?;
    Ok((metric.to_string(), tol.parse()?))
}

fn run(experiment: Experiment, args: RunArgs) -> Result<ExitCode, CliError> {
    let overrides = Overrides {
        out: args.out,
        seed: args.seed,
        trials: args.trials,
        threads: args.threads,
    };
    let spec = spec::load(experiment, args.config.as_deref(), &overrides)?;
    let out = run_experiment(&spec)?;
    println!("wrote {}", out.csv.display());
    println!("wrote {}", out.summary.display());
    println!("tolerance checks {}", if out.checks_passed { "passed" } else { "failed" });
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::GammaSweep(a) => run(Experiment::GammaSweep, a),
        Command::PowerSweep(a) => run(Experiment::PowerSweep, a),
        Command::TrainingSweep(a) => run(Experiment::TrainingSweep, a),
        Command::SupportCurves(a) => run(Experiment::SupportCurves, a),
        Command::EerCurve(a) => run(Experiment::EerCurve, a),
        Command::UniversalityCheck(a) => run(Experiment::UniversalityCheck, a),
        Command::ObjectiveCurve(a) => run(Experiment::ObjectiveCurve, a),
        Command::Validate { csv, tolerances } => validate_files(&csv, &tolerances).map(|reports| {
            print!("{}", render(&reports));
            if reports.iter().all(|r| r.pass()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(e.exit_code() as u8)
    })
}
