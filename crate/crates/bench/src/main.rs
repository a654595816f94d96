use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use bbpgmo_bench::config::ConfigFile;
use bbpgmo_bench::spec::{parse_algos, ExperimentSpec, ProblemSpec};
use bbpgmo_bench::{export_results, run_campaign, verify};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bench",
    about = "Campaigns for multiobjective proximal gradient solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every algorithm from shared random starts and export the results.
    Run(RunArgs),
    /// Run the acceptance and invariant checks.
    Verify,
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` file with any of the flags below; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Registry key, or `quadratic:n=..,xl=..,xu=..[,seed=..]`.
    #[arg(long)]
    problem: Option<String>,
    /// Comma-separated list, e.g. `bbpgmo,pgmo_ls,pgmo_mu,pgmo_L,abbpgmo`.
    #[arg(long)]
    algos: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long = "d-tol")]
    d_tol: Option<f64>,
    #[arg(long = "max-iters")]
    max_iters: Option<usize>,
}

fn build_spec(args: RunArgs) -> Result<(ExperimentSpec, PathBuf)> {
    let file = match &args.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let problem: ProblemSpec = match args.problem {
        Some(p) => p.parse()?,
        None => file
            .parsed("problem")?
            .ok_or_else(|| anyhow!("--problem is required"))?,
    };
    let algos = args
        .algos
        .or_else(|| file.get("algos").map(str::to_string))
        .unwrap_or_else(|| "bbpgmo,pgmo_ls,pgmo_mu,pgmo_L,abbpgmo".into());
    let mut spec = ExperimentSpec::new(problem, parse_algos(&algos)?);
    if let Some(v) = args.trials.or(file.parsed("trials")?) {
        spec.trials = v;
    }
    if let Some(v) = args.seed.or(file.parsed("seed")?) {
        spec.seed = v;
    }
    if let Some(v) = args.d_tol.or(file.parsed("d-tol")?) {
        spec.d_tol = v;
    }
    if let Some(v) = args.max_iters.or(file.parsed("max-iters")?) {
        spec.max_iters = v;
    }
    spec.jobs = args.jobs.or(file.parsed("jobs")?);
    let out = args
        .out
        .or(file.parsed("out")?)
        .ok_or_else(|| anyhow!("--out is required"))?;
    Ok((spec, out))
}

fn run(args: RunArgs) -> Result<bool> {
    let (spec, out) = build_spec(args)?;
    let summary = run_campaign(&spec)?;
    println!(
        "{} (n = {}, m = {}), {} trials, seed {}",
        summary.problem, summary.n, summary.m, spec.trials, spec.seed
    );
    println!(
        "{:<16} {:>10} {:>10} {:>12} {:>10} {:>9}",
        "algo", "iter", "feval", "time_ms", "stepsize", "failures"
    );
    for r in &summary.rows {
        println!(
            "{:<16} {:>10.2} {:>10.2} {:>12.3} {:>10.3} {:>9}",
            r.algo, r.iter_mean, r.feval_mean, r.time_ms_mean, r.stepsize_mean, r.failures
        );
    }
    let exported = export_results(&summary, &out)?;
    for n in &exported.notices {
        eprintln!("note: {n}");
    }
    for f in &exported.files {
        println!("wrote {}", f.display());
    }
    let hard = summary.hard_failures();
    if hard > 0 {
        eprintln!("{hard} solves failed");
    }
    Ok(hard == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Verify => verify::run_all().map(|checks| {
            for c in &checks {
                println!("{}", c.line());
            }
            checks.iter().all(|c| c.passed)
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
