//! Thin command-line front end over the library: `run` executes a config,
//! `bounds` evaluates the mistake-probability bounds for given parameters,
//! `replay` re-runs a recorded event trace.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pwm_ensemble::config::ExperimentConfig;
use pwm_ensemble::error::Error;
use pwm_ensemble::{bounds, experiment};

/// Exit code for a bound that is well-formed but not applicable at the
/// requested confidence (distinct from crashes (1) and usage errors (2)).
const EXIT_NOT_APPLICABLE: u8 = 3;

#[derive(Parser)]
#[command(name = "pwm-ensemble", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run {
        config: PathBuf,
        /// Output directory (overrides the config and PWM_ENSEMBLE_OUT).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print every bound that applies to the given parameters.
    Bounds(BoundsArgs),
    /// Re-run a recorded event trace under a config's first aggregator.
    Replay {
        trace: PathBuf,
        config: PathBuf,
    },
}

#[derive(Args)]
struct BoundsArgs {
    /// Number of aggregated learners.
    #[arg(long)]
    k: usize,
    /// Horizon (number of slots).
    #[arg(long)]
    n: u64,
    /// Error rate of the best static weight vector.
    #[arg(long)]
    p_opt: f64,
    /// Error rate of the best local classifier.
    #[arg(long, default_value_t = 0.0)]
    p_star: f64,
    /// Number of classifiers achieving p_star.
    #[arg(long, default_value_t = 1)]
    v_star: usize,
    /// Uniform per-learner maximum label delay.
    #[arg(long)]
    max_delay: Option<u64>,
    /// Label observation probability.
    #[arg(long)]
    label_prob: Option<f64>,
    /// Confidence level for the missing-label bound.
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    /// Observed prediction errors (missing-label bound input).
    #[arg(long)]
    observed_errors: Option<u64>,
    /// Synchronization index.
    #[arg(long)]
    alpha: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Run { config, out } => {
            let config = ExperimentConfig::from_toml_file(&config)?;
            let out_dir = experiment::resolve_out_dir(&config, out.as_deref());
            let report = experiment::run_experiment(&config, &out_dir)?;
            println!(
                "completed {} runs across {} summary points",
                report.records.len(),
                report.summaries.len()
            );
            if let Some(path) = &report.runs_path {
                println!("runs:    {}", path.display());
            }
            if let Some(path) = &report.summary_path {
                println!("summary: {}", path.display());
            }
            if report.failures.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("{} seed(s) failed:", report.failures.len());
                for (seed, message) in &report.failures {
                    eprintln!("  seed {seed}: {message}");
                }
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Bounds(args) => bounds_command(args),
        Command::Replay { trace, config } => {
            let config = ExperimentConfig::from_toml_file(&config)?;
            let (record, outcome) = experiment::replay(&trace, &config)?;
            println!("aggregator      {}", record.aggregator);
            println!("system_error    {:.6}", outcome.metrics.system_error);
            println!("learner1_error  {:.6}", record.learner1_error);
            println!("p_star          {:.6}", record.p_star);
            println!("v_star          {}", record.v_star);
            if let Some(p_opt) = record.p_opt {
                println!("p_opt           {p_opt:.6}");
            }
            if let Some(b) = record.bound_b {
                println!("bound_b         {b:.6}");
            }
            println!("alpha           {:.6}", record.alpha);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn bounds_command(args: BoundsArgs) -> Result<ExitCode, Error> {
    let b1 = bounds::bound_b1(args.k, args.n, args.p_opt)?;
    let b2 = bounds::bound_b2(args.k, args.n, args.p_star, args.v_star)?;
    let b = bounds::bound_b(args.k, args.n, args.p_opt, args.p_star, args.v_star)?;
    println!("B1 {b1:.6}");
    println!("B2 {b2:.6}");
    println!("B  {b:.6}");
    if let Some(d) = args.max_delay {
        let delayed = bounds::bound_delayed(b, &vec![d; args.k], args.n, args.k)?;
        println!("B_delayed {delayed:.6}");
    }
    let mut not_applicable = false;
    if let Some(mu) = args.label_prob {
        let z = args.observed_errors.ok_or_else(|| {
            Error::Config("--label-prob requires --observed-errors".into())
        })?;
        match bounds::bound_missing(b, mu, args.epsilon, z) {
            Ok(m) => println!("B_missing {m:.6}"),
            Err(Error::NotApplicable(reason)) => {
                println!("B_missing not applicable: {reason}");
                not_applicable = true;
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(alpha) = args.alpha {
        let a = bounds::bound_async(b, alpha)?;
        println!("B_async {a:.6}");
    }
    Ok(if not_applicable {
        ExitCode::from(EXIT_NOT_APPLICABLE)
    } else {
        ExitCode::SUCCESS
    })
}
