//! `tstwr`: optimize single instances, run sweeps, verify against oracles.
//!
//! Exit codes: 0 success, 1 verification failure, unconverged rows or
//! runtime failure, 2 invalid arguments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tstwr_core::experiments::{
    cnr_from_beta, db_to_linear, emit_csv, render_svg, run_sweep, run_verification, Chart, SweepSpec,
    VerifyOptions,
};
use tstwr_core::{non_eh_msr, optimize, relative_gain, Error, GridSpec, Method, SystemConfig};

#[derive(Parser)]
#[command(
    name = "tstwr",
    version,
    about = "Sum-rate optimization for time-switching energy-harvesting two-way relaying"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize one channel instance and compare with the non-EH benchmark.
    Optimize(OptimizeArgs),
    /// Sweep β and P_tot, write CSV and optional SVG charts.
    Sweep(SweepArgs),
    /// Compare the closed forms and optimizers with brute-force oracles.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SolverArgs {
    /// Optimizer: alt, grid or exact.
    #[arg(long, default_value = "alt")]
    method: Method,
    /// Nodes per axis for --method grid.
    #[arg(long, default_value_t = 2001)]
    grid: usize,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Linear CNR of the first source.
    #[arg(long, default_value_t = 1.0)]
    h1: f64,
    /// Gain ratio H2/H1 in dB.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta_db: f64,
    /// Total source power in dBW.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    ptot_dbw: f64,
    /// Energy conversion efficiency in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Stopping tolerance of the alternating optimizer.
    #[arg(long)]
    epsilon: Option<f64>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 1.0)]
    h1: f64,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    beta_db_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    beta_db_max: f64,
    #[arg(long, default_value_t = 21)]
    beta_steps: usize,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    ptot_dbw_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    ptot_dbw_max: f64,
    #[arg(long, default_value_t = 21)]
    ptot_steps: usize,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// CSV destination.
    #[arg(long)]
    out: PathBuf,
    /// Write `<prefix>-<chart>.svg` for every chart the sweep covers.
    #[arg(long)]
    svg: Option<String>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Nodes per axis of the joint grid search.
    #[arg(long, default_value_t = 2001)]
    grid: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Optimize(args) => run_optimize(&args),
        Command::Sweep(args) => run_sweep_command(&args),
        Command::Verify(args) => run_verify(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tstwr: {e}");
            match e {
                Error::Domain(_)
                | Error::InvalidParameter(_)
                | Error::Validation(_)
                | Error::Parse { .. } => ExitCode::from(2),
                Error::Convergence { .. } | Error::Io { .. } => ExitCode::from(1),
            }
        }
    }
}

fn run_optimize(args: &OptimizeArgs) -> Result<ExitCode, Error> {
    let ch = cnr_from_beta(args.h1, args.beta_db)?;
    let mut cfg = SystemConfig::new(db_to_linear(args.ptot_dbw), args.eta)?;
    if let Some(eps) = args.epsilon {
        cfg = cfg.with_epsilon(eps)?;
    }
    let grid = GridSpec::square(args.solver.grid)?;
    let r = optimize(&cfg, &ch, args.solver.method, &grid)?;
    let non_eh = non_eh_msr(&cfg, &ch);
    println!("method={}", r.method);
    println!("theta_star={}", r.policy.theta());
    println!("omega_star={}", r.policy.omega());
    println!("r_sum_ts={}", r.r_sum);
    println!("r_sum_non_eh={non_eh}");
    println!("gain={}", relative_gain(r.r_sum, non_eh)?);
    println!("iterations={}", r.iterations);
    println!("converged={}", r.converged);
    Ok(if r.converged { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_sweep_command(args: &SweepArgs) -> Result<ExitCode, Error> {
    let spec = SweepSpec {
        h1: args.h1,
        beta_db_min: args.beta_db_min,
        beta_db_max: args.beta_db_max,
        beta_steps: args.beta_steps,
        ptot_dbw_min: args.ptot_dbw_min,
        ptot_dbw_max: args.ptot_dbw_max,
        ptot_steps: args.ptot_steps,
        eta: args.eta,
    };
    spec.validate()?;
    let grid = GridSpec::square(args.solver.grid)?;
    let rows = run_sweep(&spec, args.solver.method, &grid)?;
    emit_csv(&rows, &args.out)?;

    if let Some(prefix) = &args.svg {
        for chart in Chart::ALL {
            let path = PathBuf::from(format!("{prefix}-{}.svg", chart.tag()));
            match render_svg(&rows, chart, &path) {
                Ok(()) => {}
                Err(Error::Validation(msg)) => eprintln!("tstwr: skipping {chart}: {msg}"),
                Err(e) => return Err(e),
            }
        }
    }

    let flagged: Vec<_> = rows.iter().filter(|r| !r.converged).collect();
    for r in &flagged {
        eprintln!("tstwr: not converged at beta_db={} ptot_dbw={}", r.beta_db, r.ptot_dbw);
    }
    Ok(if flagged.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode, Error> {
    let report =
        run_verification(&VerifyOptions { instances: args.instances, seed: args.seed, grid_n: args.grid })?;
    print!("{report}");
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
