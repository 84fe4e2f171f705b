//! `chirp` — Bayesian fitting and forecasting of one-dimensional single
//! chirp signals.
//!
//! Subcommands: `simulate` (synthetic series), `fit` (MCMC posterior),
//! `forecast` (posterior predictive + fitted band), `summarize` (text report
//! of a finished fit).

mod commands;
mod config;
mod io;

use std::path::PathBuf;

use anyhow::Result;
use chirp_core::prelude::ErrorModel;
use clap::{Args, Parser, Subcommand};

use config::{FileConfig, InitMethod, Overrides};

#[derive(Parser)]
#[command(name = "chirp", version, about = "Bayesian chirp-signal fitting and forecasting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum ModeArg {
    Iid,
    Dep,
}

impl From<ModeArg> for ErrorModel {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Iid => ErrorModel::Iid,
            ModeArg::Dep => ErrorModel::Dependent,
        }
    }
}

#[derive(Args)]
struct CommonFitArgs {
    /// Series file: one observation per line (t = 1 on the first row).
    #[arg(long)]
    input: PathBuf,
    /// Error structure: independent or exponentially correlated.
    #[arg(long, value_enum, default_value = "iid")]
    mode: ModeArg,
    /// Flat JSON config file (all keys optional).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Total MCMC sweeps.
    #[arg(long)]
    iters: Option<usize>,
    /// Discarded initial sweeps.
    #[arg(long)]
    burnin: Option<usize>,
    /// Keep every n-th post-burn-in draw.
    #[arg(long)]
    thin: Option<usize>,
    /// RNG seed; reruns with the same seed reproduce outputs byte for byte.
    #[arg(long)]
    seed: Option<u64>,
    /// Desired prior mean for the error variance; sets sigma1 = mean * (sigma0 - 1).
    #[arg(long)]
    prior_sigma_mean: Option<f64>,
    /// Initializer for the angular parameters.
    #[arg(long)]
    init: Option<InitMethod>,
    /// Output directory.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic chirp series.
    Simulate {
        /// Cosine amplitude A.
        #[arg(long)]
        a: f64,
        /// Sine amplitude B.
        #[arg(long)]
        b: f64,
        /// Frequency, in (0, pi).
        #[arg(long)]
        alpha: f64,
        /// Chirp rate, in (0, pi).
        #[arg(long)]
        beta: f64,
        /// Noise standard deviation.
        #[arg(long)]
        sigma: f64,
        /// Correlation decay rate; omit for independent errors.
        #[arg(long)]
        rho: Option<f64>,
        /// Series length.
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output series file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the Metropolis-within-Gibbs sampler on a series.
    Fit {
        #[command(flatten)]
        common: CommonFitArgs,
    },
    /// Posterior predictive forecasting from a finished fit.
    Forecast {
        /// Series file the fit was produced from.
        #[arg(long)]
        input: PathBuf,
        /// Directory holding draws.csv from `chirp fit`; outputs land there too.
        #[arg(long)]
        out_dir: PathBuf,
        /// Number of future steps.
        #[arg(long, default_value_t = 1)]
        horizon: usize,
        /// Credible level for the intervals.
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        /// Histogram bins for exported densities.
        #[arg(long, default_value_t = 60)]
        bins: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a text report for a finished fit.
    Summarize {
        /// Directory holding draws.csv (and summary.json) from `chirp fit`.
        #[arg(long)]
        out_dir: PathBuf,
        /// Credible level for the reported intervals.
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate { a, b, alpha, beta, sigma, rho, len, seed, out } => {
            commands::simulate(a, b, alpha, beta, sigma, rho, len, seed, &out)
        }
        Command::Fit { common } => {
            let file = match &common.config {
                Some(path) => FileConfig::load(path)?,
                None => FileConfig::default(),
            };
            let overrides = Overrides {
                iters: common.iters,
                burnin: common.burnin,
                thin: common.thin,
                seed: common.seed,
                prior_sigma_mean: common.prior_sigma_mean,
                horizon: None,
                level: None,
                init: common.init,
            };
            let resolved = config::resolve(&file, &overrides)?;
            commands::fit(&common.input, common.mode.into(), resolved, &common.out_dir)
        }
        Command::Forecast { input, out_dir, horizon, level, bins, seed } => {
            commands::forecast(&input, &out_dir, horizon, level, bins, seed)
        }
        Command::Summarize { out_dir, level } => commands::summarize(&out_dir, level),
    }
}
