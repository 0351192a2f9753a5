use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tristep_core::dense::index_at_most_one;
use tristep_core::problems::{read_matrix_market, read_vector, write_vector};
use tristep_core::scheme::exact_solution;
use tristep_core::tables::{format_table, laplace_table, markov_table, write_csv, InitialGuess};
use tristep_core::{
    classify, run, run_suite, BenchConfig, BenchRow, Error, Result, SchemeConfig, Splitting,
    StopRule, ToleranceProfile, Vector,
};

#[derive(Parser)]
#[command(
    name = "tristep",
    version,
    about = "Alternating three-step splitting iterations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the splitting A = U - V.
    Classify(ClassifyArgs),
    /// Run a one-, two- or three-step scheme on a system from files.
    Solve(SolveArgs),
    /// Reproduce the benchmark comparison tables.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Run a seeded randomized verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(
        long,
        conflicts_with = "diag_alpha",
        required_unless_present = "diag_alpha"
    )]
    u: Option<PathBuf>,
    /// Use U = alpha * diag(A).
    #[arg(long)]
    diag_alpha: Option<f64>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    rhs: PathBuf,
    /// One to three U files, comma separated, in sweep order.
    #[arg(long, value_delimiter = ',', num_args = 1..=3, required = true)]
    split: Vec<PathBuf>,
    /// Shift for x <- delta * sweep(x) + (1 - delta) * x.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iters: usize,
    /// residual, diff or error (error compares with A^-1 b or A# b).
    #[arg(long, default_value = "residual")]
    stop: StopRule,
    /// zero, uniform or a Matrix Market vector file.
    #[arg(long, default_value = "zero")]
    x0: String,
    /// Write the final iterate here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Five-point Laplace problem; reports rho(H).
    Laplace(LaplaceArgs),
    /// Reflecting random walk; reports gamma(H).
    Markov(MarkovArgs),
}

#[derive(Args)]
struct LaplaceArgs {
    /// Grid subdivisions per side, comma separated (order (N-1)^2).
    #[arg(long, value_delimiter = ',', default_value = "21")]
    grid: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,1.5,1.75")]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value = "error")]
    stop: StopRule,
    #[arg(long, default_value = "zero")]
    x0: InitialGuess,
    #[command(flatten)]
    common: BenchCommon,
}

#[derive(Args)]
struct MarkovArgs {
    /// Number of states, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    states: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2,2.5,3")]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, default_value = "residual")]
    stop: StopRule,
    #[arg(long, default_value = "e1")]
    x0: InitialGuess,
    #[command(flatten)]
    common: BenchCommon,
}

#[derive(Args)]
struct BenchCommon {
    /// Scale for the single-step splitting instead of the first alpha.
    #[arg(long)]
    single_alpha: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    max_iters: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = tristep_core::suites::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = tristep_core::suites::DEFAULT_SEED)]
    seed: u64,
    /// Matrix order for every trial instead of a random order.
    #[arg(long)]
    size: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DimensionMismatch { .. } | Error::NotSquare { .. } | Error::MismatchedA => 3,
        Error::IndexGreaterThanOne => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify(args) => cmd_classify(&args),
        Command::Solve(args) => cmd_solve(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn cmd_classify(args: &ClassifyArgs) -> Result<u8> {
    let tol = ToleranceProfile::default();
    let a = read_matrix_market(&args.matrix)?;
    let split = match (&args.u, args.diag_alpha) {
        (Some(path), _) => Splitting::new(&a, read_matrix_market(path)?, &tol)?,
        (None, Some(alpha)) => Splitting::diag_scaled(&a, alpha, &tol)?,
        (None, None) => unreachable!("clap requires --u or --diag-alpha"),
    };
    print!("{}", classify(&split, &tol));
    Ok(0)
}

fn initial_vector(choice: &str, n: usize) -> Result<Vector> {
    match choice {
        "zero" => Ok(InitialGuess::Zero.vector(n)),
        "uniform" => Ok(InitialGuess::Uniform.vector(n)),
        path => read_vector(path),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<u8> {
    let tol = ToleranceProfile::default();
    let a = read_matrix_market(&args.matrix)?;
    let b = read_vector(&args.rhs)?;
    let us = args
        .split
        .iter()
        .map(read_matrix_market)
        .collect::<Result<Vec<_>>>()?;
    let x0 = initial_vector(&args.x0, a.nrows())?;
    let splits = us
        .into_iter()
        .map(|u| Splitting::new(&a, u, &tol))
        .collect::<Result<Vec<_>>>()?;
    for (what, v) in [("right-hand side", &b), ("initial vector", &x0)] {
        if v.len() != a.nrows() {
            return Err(Error::DimensionMismatch {
                expected: format!("{what} of length {}", a.nrows()),
                found: format!("length {}", v.len()),
            });
        }
    }
    if !index_at_most_one(&a, &tol) {
        return Err(Error::IndexGreaterThanOne);
    }
    let exact = match args.stop {
        StopRule::ErrorVsExact => Some(exact_solution(&a, &b, &tol)?),
        _ => None,
    };
    let config = SchemeConfig::new(splits)
        .stop_rule(args.stop)
        .tolerance(args.tol)
        .max_iterations(args.max_iters)
        .delta(args.delta);
    let report = run(&config, &b, &x0, exact.as_ref())?;

    println!(
        "scheme      {}-step{}",
        config.splittings.len(),
        match args.delta {
            Some(d) => format!(", shifted by delta = {d}"),
            None => String::new(),
        }
    );
    println!(
        "converged   {}",
        if report.converged { "yes" } else { "no" }
    );
    println!("iterations  {}", report.iterations);
    println!("residual    {:.6e}", report.final_residual);
    if let Some(e) = report.final_error {
        println!("error       {e:.6e}");
    }
    println!("time_s      {:.6}", report.elapsed_seconds);
    if let Some(out) = &args.out {
        write_vector(out, &report.final_x)?;
    }
    Ok(if report.converged { 0 } else { 1 })
}

fn bench_config(
    alphas: &[f64],
    tol: f64,
    stop: StopRule,
    x0: InitialGuess,
    common: &BenchCommon,
) -> Result<BenchConfig> {
    let alphas: [f64; 3] = alphas.try_into().map_err(|_| {
        Error::InvalidArgument(format!(
            "--alphas needs exactly three values, got {}",
            alphas.len()
        ))
    })?;
    Ok(BenchConfig {
        alphas,
        single_alpha: common.single_alpha,
        stop_rule: stop,
        tolerance: tol,
        max_iterations: common.max_iters,
        x0,
    })
}

fn cmd_bench(command: &BenchCommand) -> Result<u8> {
    let (rows, label, csv) = match command {
        BenchCommand::Laplace(args) => {
            let config = bench_config(&args.alphas, args.tol, args.stop, args.x0, &args.common)?;
            let rows = collect(&args.grid, |grid| laplace_table(grid, &config))?;
            (rows, "rho", &args.common.csv)
        }
        BenchCommand::Markov(args) => {
            let config = bench_config(&args.alphas, args.tol, args.stop, args.x0, &args.common)?;
            let rows = collect(&args.states, |n| markov_table(n, &config))?;
            (rows, "gamma", &args.common.csv)
        }
    };
    print!("{}", format_table(&rows, label));
    if let Some(path) = csv {
        write_csv(&rows, BufWriter::new(create(path)?))?;
    }
    Ok(0)
}

fn collect(
    sizes: &[usize],
    table: impl Fn(usize) -> Result<Vec<BenchRow>>,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &size in sizes {
        rows.extend(table(size)?);
    }
    Ok(rows)
}

fn create(path: &Path) -> Result<File> {
    Ok(File::create(path)?)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8> {
    let reports = run_suite(&args.suite, args.trials, args.seed, args.size)?;
    let mut failures = 0;
    for r in &reports {
        println!("{r}");
        failures += r.failures();
    }
    Ok(if failures == 0 { 0 } else { 1 })
}
