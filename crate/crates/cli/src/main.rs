//! `rbf-lp`: kernel tables, transform and measure checks, Property-2 scans and
//! convergence-rate experiments.
//!
//! Exit codes: 0 when every checked invariant holds, 1 when one fails (or a
//! computation aborts), 2 for configuration errors.

// `!(a < b)` is how NaN fails a check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::run::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "rbf-lp", version, about = "RBF L^p error experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact Wendland polynomials.
    Kernels {
        #[command(subcommand)]
        what: KernelsCmd,
    },
    /// Closed-form Wendland transforms against quadrature.
    Spectral {
        #[command(subcommand)]
        what: SpectralCmd,
    },
    /// The one-dimensional measure and its transform factorization.
    Measure {
        #[command(subcommand)]
        what: MeasureCmd,
    },
    /// Empirical constant of the error-kernel bound.
    Property2(Property2Args),
    /// Convergence-rate experiment.
    Rates(RatesArgs),
    /// Ratio of Sobolev-spline and Wendland transforms.
    RatioDiag(RatioArgs),
}

#[derive(Subcommand, Debug)]
enum KernelsCmd {
    /// Polynomial piece of Φ_{d,k} in exact rationals.
    Table {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SpectralCmd {
    /// Calibrate B_m, validate against the Hankel oracle and check decay.
    Check {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        /// Number of log-spaced radii in [0.1, 50].
        #[arg(long, default_value_t = 20)]
        radii: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum MeasureCmd {
    /// Residual table of μ̂(ω)/(1+|ω|^{2k+2}) − Φ̂_{1,k}(ω) on [0, omega-max].
    Check {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 50.0)]
        omega_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Randomized Young's-inequality trials.
        #[arg(long, default_value_t = 0)]
        young_trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Wendland,
    Sobolev,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Wendland => "wendland",
            Family::Sobolev => "sobolev",
        }
    }
}

#[derive(Args, Debug)]
struct Property2Args {
    #[arg(long, value_enum)]
    kernel: Family,
    #[arg(long)]
    d: usize,
    /// Wendland smoothness.
    #[arg(long)]
    k: Option<usize>,
    /// Sobolev-spline order.
    #[arg(long)]
    gamma: Option<usize>,
    /// Lattice spacing of the point set.
    #[arg(long, default_value_t = 1.0 / 32.0)]
    h: f64,
    #[arg(long, default_value_t = 0.25)]
    jitter: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 4000)]
    budget: usize,
    /// Override the claimed order κ.
    #[arg(long)]
    kappa: Option<f64>,
    /// Override the decay exponent l.
    #[arg(long)]
    l: Option<f64>,
    #[arg(long)]
    c3: Option<f64>,
    #[arg(long, default_value_t = 4.0)]
    rho_max: f64,
    /// Write the sampled records here as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RatesArgs {
    /// JSON file with any `RateConfig` fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    kernel: Option<Family>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    gamma: Option<usize>,
    /// Norm exponents: numbers ≥ 1 or `inf`.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    p: Option<Vec<String>>,
    /// Number of levels in the halving schedule.
    #[arg(long)]
    levels: Option<usize>,
    /// Coarsest lattice spacing.
    #[arg(long)]
    h0: Option<f64>,
    #[arg(long)]
    jitter: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = ["ls", "qi"])]
    witness: Option<String>,
    #[arg(long)]
    c3: Option<f64>,
    #[arg(long)]
    c2_cap: Option<f64>,
    #[arg(long)]
    rho_max: Option<f64>,
    /// Directory for the JSON and CSV reports; stdout JSON when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RatioArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
    /// Defaults to d + 2k + 1.
    #[arg(long)]
    gamma: Option<usize>,
    #[arg(long, default_value_t = 100.0)]
    omega_max: f64,
    #[arg(long, default_value_t = 60)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Kernels {
            what: KernelsCmd::Table { d, k, out },
        } => run::kernels_table(d, k, out),
        Command::Spectral {
            what:
                SpectralCmd::Check {
                    d,
                    k,
                    radii,
                    tol,
                    out,
                },
        } => run::spectral_check(d, k, radii, tol, out),
        Command::Measure {
            what:
                MeasureCmd::Check {
                    k,
                    omega_max,
                    points,
                    tol,
                    young_trials,
                    seed,
                    out,
                },
        } => run::measure_check(k, omega_max, points, tol, young_trials, seed, out),
        Command::Property2(a) => {
            let spec = config::kernel_spec(a.kernel.name(), a.k, a.gamma)?;
            run::property2(run::Property2Job {
                spec,
                d: a.d,
                spacing: a.h,
                jitter: a.jitter,
                seed: a.seed,
                budget: a.budget,
                kappa: a.kappa,
                l: a.l,
                c3: a.c3,
                rho_max: a.rho_max,
                csv: a.csv,
                out: a.out,
            })
        }
        Command::Rates(a) => {
            let (cfg, hash) = config::resolve_rates(&a)?;
            run::rates(&cfg, &hash, a.out)
        }
        Command::RatioDiag(a) => run::ratio_diag(a.d, a.k, a.gamma, a.omega_max, a.points, a.out),
    }
}

/// Stage and physical parameters, for diagnostics.
fn label(c: &Command) -> String {
    match c {
        Command::Kernels {
            what: KernelsCmd::Table { d, k, .. },
        } => format!("kernels table (d={d}, k={k})"),
        Command::Spectral {
            what: SpectralCmd::Check { d, k, .. },
        } => format!("spectral check (d={d}, k={k})"),
        Command::Measure {
            what: MeasureCmd::Check { k, .. },
        } => format!("measure check (k={k})"),
        Command::Property2(a) => format!("property2 ({}, d={}, h={})", a.kernel.name(), a.d, a.h),
        Command::Rates(a) => match (a.kernel, a.d) {
            (Some(f), Some(d)) => format!("rates ({}, d={d})", f.name()),
            _ => "rates".into(),
        },
        Command::RatioDiag(a) => format!("ratio-diag (d={}, k={})", a.d, a.k),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stage = label(&cli.command);
    match dispatch(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail(msg)) => {
            eprintln!("{stage}: invariant failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{stage}: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
