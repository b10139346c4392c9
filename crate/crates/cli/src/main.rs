use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use sta_core::benchmarks::Benchmark;
use sta_core::discrete::TspInstance;
use sta_core::harness::{
    emit_results, parse_instance, run_experiment, run_tsp_experiment, standard_iterations,
    write_instance, write_traces, ExperimentSpec, OutputFormat, Report, TrialStats,
    TspExperimentSpec, STANDARD_TRIALS,
};
use sta_core::{RngStream, SearchParams};

#[derive(Parser)]
#[command(
    name = "sta",
    version,
    about = "State transition optimization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated seeded trials on a continuous benchmark function.
    Bench(BenchArgs),
    /// Repeated seeded trials on a TSP instance file.
    Tsp(TspArgs),
    /// Write a random instance with cities uniform in a square.
    GenInstance(GenArgs),
}

#[derive(Args)]
struct Common {
    /// Number of independent trials; trial t uses seed + t.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Search enforcement (candidates per transformation).
    #[arg(long, default_value_t = 32)]
    se: usize,
    /// Results file; `.csv` or `.json` unless --format is given.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    format: Option<String>,
    /// Directory for per-trial `iteration,best_value` traces.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Trials run concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl Common {
    fn format(&self) -> Result<OutputFormat> {
        Ok(match &self.format {
            Some(f) => f.parse()?,
            None => OutputFormat::from_path(&self.out)
                .with_context(|| format!("cannot infer format of {}", self.out.display()))?,
        })
    }
}

#[derive(Args)]
struct BenchArgs {
    /// sphere, rosenbrock, rastrigin or griewank.
    #[arg(long)]
    function: String,
    #[arg(long)]
    dim: usize,
    /// Defaults to the standard budget for the dimension (10→1000, 20→1500, 30→2000).
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = 1e-4)]
    alpha_min: f64,
    #[arg(long, default_value_t = 4.0)]
    alpha_base: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct TspArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 2000)]
    iterations: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Side of the square the cities are drawn from.
    #[arg(long, default_value_t = 100.0)]
    side: f64,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Bench(args) => bench(args),
        Command::Tsp(args) => tsp(args),
        Command::GenInstance(args) => gen_instance(args),
    }
}

fn bench(args: BenchArgs) -> Result<()> {
    let function: Benchmark = args.function.parse()?;
    let common = &args.common;
    let format = common.format()?;
    let spec = ExperimentSpec {
        function,
        dimension: args.dim,
        max_iterations: args
            .iterations
            .or_else(|| standard_iterations(args.dim))
            .unwrap_or(1000),
        trials: common.trials.unwrap_or(STANDARD_TRIALS),
        base_seed: common.seed,
        params: SearchParams {
            alpha_max: args.alpha_max,
            alpha_min: args.alpha_min,
            alpha_base: args.alpha_base,
            beta: args.beta,
            gamma: args.gamma,
            se: common.se,
            ..SearchParams::default()
        },
    };
    let report = run_experiment(&spec, common.jobs)?;
    let prefix = format!("{function}_d{}", args.dim);
    finish(&report, &report.stats, common, format, &prefix)
}

fn tsp(args: TspArgs) -> Result<()> {
    let common = &args.common;
    let format = common.format()?;
    let inst = parse_instance(&args.instance)?;
    let spec = TspExperimentSpec {
        instance: args.instance.display().to_string(),
        cities: inst.len(),
        max_iterations: args.iterations,
        trials: common.trials.unwrap_or(10),
        base_seed: common.seed,
        se: common.se,
    };
    let report = run_tsp_experiment(&inst, &spec, common.jobs)?;
    if let Some(best) = report
        .trials
        .iter()
        .min_by(|a, b| a.record.best_value.total_cmp(&b.record.best_value))
    {
        let tour: Vec<String> = best.tour.iter().map(ToString::to_string).collect();
        println!(
            "best tour (trial {}): [{}]",
            best.record.trial,
            tour.join(" ")
        );
    }
    finish(&report, &report.stats, common, format, "tsp")
}

fn finish<R: Report>(
    report: &R,
    stats: &TrialStats,
    common: &Common,
    format: OutputFormat,
    prefix: &str,
) -> Result<()> {
    emit_results(report, format, &common.out)
        .with_context(|| format!("writing {}", common.out.display()))?;
    if let Some(dir) = &common.trace {
        write_traces(dir, prefix, report.records())
            .with_context(|| format!("writing traces to {}", dir.display()))?;
    }
    println!(
        "best {:.6e}  mean {:.6e}  std {:.6e}  ({} trials) -> {}",
        stats.best,
        stats.mean,
        stats.std,
        report.records().len(),
        common.out.display()
    );
    Ok(())
}

fn gen_instance(args: GenArgs) -> Result<()> {
    anyhow::ensure!(
        args.side > 0.0 && args.side.is_finite(),
        "--side must be positive"
    );
    let inst =
        TspInstance::random_uniform(args.n, args.side, &mut RngStream::from_seed(args.seed))?;
    write_instance(&inst, &args.out).with_context(|| format!("writing {}", args.out.display()))?;
    println!("{} cities -> {}", inst.len(), args.out.display());
    Ok(())
}
