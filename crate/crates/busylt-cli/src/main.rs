//! `busylt` — busy-period Laplace transforms from the command line.
//!
//! Every subcommand is deterministic given identical flags (seeds
//! included), prints with a locale-independent `.` decimal separator, and
//! uses a stable exit-code contract: 0 on success, 1 on domain or runtime
//! errors, 2 on flag errors.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use busylt::analytic::{busy_lt, lt_curve, QueueParams, TransformArg};
use busylt::boundary::{find_stability_boundary, BoundarySearchSpec, FreeParam};
use busylt::branching::{extinction_probability, OffspringDist, DEFAULT_MAX_ITER, DEFAULT_TOL};
use busylt::montecarlo::{estimate_lt_mc, estimate_lt_time_domain, SimConfig, SimEstimate};

#[derive(Parser)]
#[command(
    name = "busylt",
    version,
    about = "Laplace transforms of M/M/1 busy periods, proper and defective",
    after_help = "Exit codes: 0 success, 1 domain/runtime error, 2 flag error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print L(s) for an M/M/1 busy period
    Eval(EvalArgs),
    /// Sample L(s) on an even grid and write it as CSV
    Curve(CurveArgs),
    /// Solve for the extinction probability of an offspring distribution
    Extinction(ExtinctionArgs),
    /// Estimate L(s) by Monte Carlo and compare with the closed form
    Simulate(SimulateArgs),
    /// Locate the stability boundary by bisection on the defect mass
    Boundary(BoundaryArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Arrival rate
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    /// Service rate
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,
    /// Transform argument (catastrophe rate)
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,
    /// Left end of the s grid
    #[arg(long, allow_negative_numbers = true)]
    s_min: f64,
    /// Right end of the s grid
    #[arg(long, allow_negative_numbers = true)]
    s_max: f64,
    /// Number of grid points, endpoints included
    #[arg(long)]
    points: usize,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["lambda", "probs"]))]
struct ExtinctionArgs {
    /// Arrival rate (with --mu: use the queue's two-atom offspring law)
    #[arg(long, requires = "mu", allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Service rate
    #[arg(long, requires = "lambda", allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Explicit offspring probabilities p0,p1,...,pK
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with_all = ["lambda", "mu"], allow_negative_numbers = true)]
    probs: Option<Vec<f64>>,
    /// Stop once the fixed-point increment drops to this value
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Iteration cap
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimMode {
    /// Embedded jump chain (works at s = 0)
    Embedded,
    /// Continuous clock racing an explicit catastrophe time (s > 0)
    Time,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    /// Number of independent trials
    #[arg(long)]
    trials: u64,
    /// Base seed; trial i draws from the stream keyed by (seed, i)
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum)]
    mode: SimMode,
    /// Per-trial event cap (default: 1000000, or 100000 when s = 0)
    #[arg(long)]
    max_events: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FreeRate {
    Arrival,
    Service,
}

#[derive(Args)]
struct BoundaryArgs {
    /// Which rate to sweep
    #[arg(long, value_enum)]
    free: FreeRate,
    /// Value of the rate held fixed
    #[arg(long, allow_negative_numbers = true)]
    fixed: f64,
    /// Lower bracket endpoint for the free rate
    #[arg(long, allow_negative_numbers = true)]
    lo: f64,
    /// Upper bracket endpoint for the free rate
    #[arg(long, allow_negative_numbers = true)]
    hi: f64,
    /// Absolute tolerance on the located value
    #[arg(long, allow_negative_numbers = true)]
    tol: f64,
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`busylt ... | head`) like any unix
    // filter, instead of panicking mid-write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), String> {
    match command {
        Command::Eval(args) => run_eval(args),
        Command::Curve(args) => run_curve(args),
        Command::Extinction(args) => run_extinction(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Boundary(args) => run_boundary(args),
    }
}

/// All probabilities and rates go out with 12 digits after the point.
fn fmt(v: f64) -> String {
    format!("{v:.12}")
}

fn queue(lambda: f64, mu: f64) -> Result<QueueParams, String> {
    QueueParams::new(lambda, mu).map_err(|e| e.to_string())
}

fn transform_arg(s: f64) -> Result<TransformArg, String> {
    TransformArg::new(s).map_err(|e| e.to_string())
}

fn run_eval(args: EvalArgs) -> Result<(), String> {
    let value = busy_lt(queue(args.lambda, args.mu)?, transform_arg(args.s)?);
    println!("{}", fmt(value));
    Ok(())
}

fn run_curve(args: CurveArgs) -> Result<(), String> {
    let curve = lt_curve(
        queue(args.lambda, args.mu)?,
        transform_arg(args.s_min)?,
        transform_arg(args.s_max)?,
        args.points,
    )
    .map_err(|e| e.to_string())?;

    let file = File::create(&args.out)
        .map_err(|e| format!("cannot write {}: {e}", args.out.display()))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        out.write_all(b"s,L\n")?;
        for p in curve.points() {
            writeln!(out, "{},{}", p.s, fmt(p.value))?;
        }
        out.flush()
    };
    write(&mut out).map_err(|e| format!("cannot write {}: {e}", args.out.display()))
}

fn run_extinction(args: ExtinctionArgs) -> Result<(), String> {
    let dist = match (args.lambda, args.mu, args.probs) {
        (Some(lambda), Some(mu), None) => OffspringDist::from_queue(queue(lambda, mu)?),
        (None, None, Some(probs)) => OffspringDist::new(probs).map_err(|e| e.to_string())?,
        // clap's group + requires rules make anything else unreachable
        _ => unreachable!("flag combinations are enforced by the parser"),
    };
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(format!("tolerance must be positive, got {}", args.tol));
    }
    if args.max_iter == 0 {
        return Err("max-iter must be at least 1".into());
    }
    let result = extinction_probability(&dist, args.tol, args.max_iter);
    println!("alpha={}", fmt(result.alpha));
    println!("iterations={}", result.iterations);
    println!("converged={}", result.converged);
    Ok(())
}

fn run_simulate(args: SimulateArgs) -> Result<(), String> {
    let params = queue(args.lambda, args.mu)?;
    let s = transform_arg(args.s)?;
    let max_events = args
        .max_events
        .unwrap_or_else(|| SimConfig::default_max_events(s));
    let config = SimConfig::new(args.trials, args.seed)
        .and_then(|c| c.with_max_events(max_events))
        .map_err(|e| e.to_string())?;

    let estimate = match args.mode {
        SimMode::Embedded => estimate_lt_mc(params, s, &config),
        SimMode::Time => estimate_lt_time_domain(params, s, &config).map_err(|e| {
            format!("{e}; the embedded mode handles s = 0 with its event cap")
        })?,
    };
    let closed_form = busy_lt(params, s);
    print_report(&estimate, closed_form);
    Ok(())
}

fn print_report(estimate: &SimEstimate, closed_form: f64) {
    let z_score = if estimate.std_error() > 0.0 {
        (estimate.p_hat() - closed_form) / estimate.std_error()
    } else if estimate.p_hat() == closed_form {
        0.0
    } else {
        f64::INFINITY * (estimate.p_hat() - closed_form).signum()
    };
    println!("p_hat={}", fmt(estimate.p_hat()));
    println!("std_error={}", fmt(estimate.std_error()));
    println!("ci95={}", fmt(estimate.ci95_half_width()));
    println!("n_censored={}", estimate.n_censored());
    println!("closed_form={}", fmt(closed_form));
    println!("z_score={z_score:.6}");
}

fn run_boundary(args: BoundaryArgs) -> Result<(), String> {
    let free_param = match args.free {
        FreeRate::Arrival => FreeParam::Arrival,
        FreeRate::Service => FreeParam::Service,
    };
    let spec = BoundarySearchSpec::new(free_param, args.fixed, args.lo, args.hi, args.tol)
        .map_err(|e| e.to_string())?;
    let result = find_stability_boundary(&spec).map_err(|e| e.to_string())?;
    println!("value={}", fmt(result.value));
    println!("evaluations={}", result.evaluations);
    Ok(())
}
