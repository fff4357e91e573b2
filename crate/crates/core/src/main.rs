use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use burgers_fpt::cli;
use burgers_fpt::{Error, ExperimentConfig, Result};

#[derive(Parser)]
#[command(name = "burgers-fpt", version, about = "First-hitting-time densities for heat-solution drifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by the experiment-driven subcommands. Precedence, lowest
/// first: built-in defaults, --fixture, --config file, individual flags.
#[derive(Args, Clone)]
struct ExperimentArgs {
    /// Named preset: example1, example3 or example8
    #[arg(long)]
    fixture: Option<String>,
    /// key=value config file applied over the fixture/defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Process name: constant, bm_drift, brownian_bridge, bessel3, bessel_bridge
    #[arg(long)]
    process: Option<String>,
    /// Constant solution level
    #[arg(long)]
    c: Option<f64>,
    /// Exponential solution rate (drift of bm_drift)
    #[arg(long)]
    lambda: Option<f64>,
    /// Pinning time for bridge processes
    #[arg(long)]
    s: Option<f64>,
    /// Starting point
    #[arg(long)]
    y: Option<f64>,
    /// Barrier level at time 0
    #[arg(long)]
    barrier: Option<f64>,
    /// Barrier slope (affine boundary barrier + slope * t)
    #[arg(long)]
    slope: Option<f64>,
    /// Two-barrier setting: hit `barrier` before the absorbing floor at 0
    #[arg(long)]
    bounded: bool,
    /// Time horizon
    #[arg(long)]
    horizon: Option<f64>,
    /// Number of output grid points
    #[arg(long)]
    grid: Option<usize>,
    /// Number of Monte Carlo paths
    #[arg(long)]
    paths: Option<usize>,
    /// Euler-Maruyama step size
    #[arg(long)]
    dt: Option<f64>,
    /// Simulation seed
    #[arg(long)]
    seed: Option<u64>,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn build(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.fixture {
            Some(name) => ExperimentConfig::fixture(name)?,
            None => ExperimentConfig::default(),
        };
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)?;
            cfg.apply_text(&text)?;
        }
        if let Some(v) = &self.process {
            cfg.process = v.clone();
        }
        if let Some(v) = self.c {
            cfg.c = Some(v);
        }
        if let Some(v) = self.lambda {
            cfg.lambda = Some(v);
        }
        if let Some(v) = self.s {
            cfg.s = Some(v);
        }
        if let Some(v) = self.y {
            cfg.y = v;
        }
        if let Some(v) = self.barrier {
            cfg.barrier = v;
        }
        if let Some(v) = self.slope {
            cfg.slope = v;
        }
        if self.bounded {
            cfg.bounded = true;
        }
        if let Some(v) = self.horizon {
            cfg.horizon = v;
        }
        if let Some(v) = self.grid {
            cfg.grid = v;
        }
        if let Some(v) = self.paths {
            cfg.paths = v;
        }
        if let Some(v) = self.dt {
            cfg.dt = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(o) = &self.out {
            cfg.output = Some(o.display().to_string());
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the theoretical hitting-time density and CDF
    Density(ExperimentArgs),
    /// Run the Monte Carlo engine and dump per-path outcomes
    Simulate(ExperimentArgs),
    /// Compare the theoretical and simulated distributions (KS test)
    Compare(ExperimentArgs),
    /// Classify a drift or a Bessel order
    Classify {
        /// Odd Bessel process order to classify
        #[arg(long, conflicts_with = "drift")]
        bessel: Option<i64>,
        /// Catalog process whose drift to verify
        #[arg(long)]
        drift: Option<String>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Heat polynomials: value tables and identity checks
    Heatpoly {
        /// Highest degree
        #[arg(long, default_value_t = 10)]
        n: i64,
        /// Evaluation point x (table mode)
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        /// Evaluation time t (table mode)
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Run the identity checks at random points instead of tabulating
        #[arg(long)]
        check: bool,
        /// Number of random points in check mode
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => Ok(std::fs::write(path, text)?),
        None => {
            let mut stdout = std::io::stdout().lock();
            Ok(stdout.write_all(text.as_bytes())?)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Density(args) => {
            let cfg = args.build()?;
            emit(&cli::density_csv(&cfg)?, args.out.as_ref())
        }
        Command::Simulate(args) => {
            let cfg = args.build()?;
            emit(&cli::simulate_csv(&cfg)?, args.out.as_ref())
        }
        Command::Compare(args) => {
            let cfg = args.build()?;
            let report = cli::compare_run(&cfg)?;
            // verdict to stderr so --out files stay pure CSV
            eprint!("{}", report.text());
            emit(&report.csv, args.out.as_ref())
        }
        Command::Classify { bessel, drift, c, lambda, s, out } => {
            let text = match (bessel, drift) {
                (Some(m), None) => cli::classify_bessel_csv(m)?,
                (None, Some(name)) => cli::classify_drift_csv(&name, c, lambda, s)?,
                _ => {
                    return Err(Error::InvalidParameter(
                        "classify needs exactly one of --bessel or --drift".into(),
                    ))
                }
            };
            emit(&text, out.as_ref())
        }
        Command::Heatpoly { n, x, t, check, points, seed, out } => {
            let text = if check {
                cli::heatpoly_check_csv(n, points, seed)?
            } else {
                cli::heatpoly_csv(n, x, t)?
            };
            emit(&text, out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
