//! Subcommand implementations.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use anyhow::{bail, Context, Result};
use chirp_core::anneal::{anneal_init, AnnealTarget};
use chirp_core::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{InitMethod, Resolved};
use crate::io;

pub fn simulate(
    a: f64,
    b: f64,
    alpha: f64,
    beta: f64,
    sigma: f64,
    rho: Option<f64>,
    len: usize,
    seed: u64,
    out: &Path,
) -> Result<()> {
    if !(alpha > 0.0 && alpha < PI) || !(beta > 0.0 && beta < PI) {
        bail!("alpha and beta must lie in (0, pi)");
    }
    if !(sigma > 0.0) {
        bail!("sigma must be positive");
    }
    if len == 0 {
        bail!("series length must be >= 1");
    }
    let (r, theta) = amp_to_polar(a, b);
    let params = ChirpParams { r, theta, alpha, beta };
    let noise = match rho {
        None => NoiseModel::iid(sigma * sigma),
        Some(rho) => NoiseModel::dependent(sigma * sigma, rho),
    }
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = simulate_series(&params, &noise, len, &mut rng).map_err(|e| anyhow::anyhow!("{e}"))?;
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    io::write_series(out, &y)?;
    eprintln!("wrote {} observations to {}", y.len(), out.display());
    Ok(())
}

/// Chooses the chain start and, when not pinned by the user, the von Mises
/// mean directions.
fn initialize(
    y: &[f64],
    resolved: &mut Resolved,
    mode: ErrorModel,
) -> Result<ChainState> {
    match resolved.init {
        InitMethod::Scan => {
            if !(resolved.alpha0_explicit && resolved.beta0_explicit) {
                // prior means track the scan estimate (analogue of feeding the
                // annealing output into the prior)
                let (alpha, beta) = scan_init(y).map_err(|e| anyhow::anyhow!("{e}"))?;
                if !resolved.alpha0_explicit {
                    resolved.priors.alpha0 = alpha;
                }
                if !resolved.beta0_explicit {
                    resolved.priors.beta0 = beta;
                }
            }
            scan_init_state(y, &resolved.priors, mode).map_err(|e| anyhow::anyhow!("{e}"))
        }
        InitMethod::Anneal => {
            // one annealing run per angle, 50 iterations each; the second run
            // holds the first angle at its annealed value
            let mut rng = ChaCha8Rng::seed_from_u64(resolved.chain.seed ^ 0x5eed_a11c);
            let alpha = anneal_init(y, AnnealTarget::Alpha, PI / 2.0, 50, &mut rng)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let beta = anneal_init(y, AnnealTarget::Beta, alpha, 50, &mut rng)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            if !resolved.alpha0_explicit {
                resolved.priors.alpha0 = alpha;
            }
            if !resolved.beta0_explicit {
                resolved.priors.beta0 = beta;
            }
            default_init(y, &resolved.priors, mode, alpha, beta)
                .map_err(|e| anyhow::anyhow!("{e}"))
        }
    }
}

pub fn fit(
    input: &Path,
    mode: ErrorModel,
    mut resolved: Resolved,
    out_dir: &Path,
) -> Result<()> {
    let y = io::read_series(input)?;
    if y.len() < 2 {
        bail!("need at least 2 observations to fit, found {}", y.len());
    }
    resolved
        .chain
        .validate()
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    resolved
        .priors
        .validate()
        .map_err(|e| anyhow::anyhow!("{e}"))?;

    let init = initialize(&y, &mut resolved, mode)?;
    let chain = run_chain(&y, &resolved.priors, &resolved.chain, mode, init)
        .map_err(|e| anyhow::anyhow!("{e}"))?;

    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    io::write_draws(&out_dir.join("draws.csv"), &chain)?;

    let level = resolved.forecast.level;
    let mut parameters = BTreeMap::new();
    for (name, col) in chain.columns() {
        if name == "log_post" {
            continue;
        }
        parameters.insert(name.to_string(), io::summarize_column(col, level)?);
    }
    // report the noise scale both ways round
    let sigma_draws: Vec<f64> = chain.sigma2.iter().map(|v| v.sqrt()).collect();
    parameters.insert("sigma".to_string(), io::summarize_column(&sigma_draws, level)?);

    let summary = io::FitSummary {
        mode: match mode {
            ErrorModel::Iid => "iid".to_string(),
            ErrorModel::Dependent => "dep".to_string(),
        },
        series_len: y.len(),
        n_iter: resolved.chain.n_iter,
        burn_in: resolved.chain.burn_in,
        proposal_sd: resolved.chain.proposal_sd,
        thin: resolved.chain.thin,
        seed: resolved.chain.seed,
        kept_draws: chain.len(),
        level,
        priors: resolved.priors,
        init: io::InitEcho::from(&init),
        acceptance: chain.acceptance,
        parameters,
    };
    io::write_json(&out_dir.join("summary.json"), &summary)?;

    for (name, col) in chain.columns() {
        if name == "log_post" {
            continue;
        }
        io::write_histogram(
            &out_dir.join(format!("hist_{name}.csv")),
            col,
            resolved.forecast.bins,
        )?;
    }

    eprintln!(
        "fit complete: {} kept draws, acceptance theta {:.3} alpha {:.3} beta {:.3}{}",
        chain.len(),
        chain.acceptance.theta,
        chain.acceptance.alpha,
        chain.acceptance.beta,
        chain
            .acceptance
            .rho
            .map(|r| format!(" rho {r:.3}"))
            .unwrap_or_default()
    );
    Ok(())
}

pub fn forecast(
    input: &Path,
    out_dir: &Path,
    horizon: usize,
    level: f64,
    bins: usize,
    seed: u64,
) -> Result<()> {
    let y = io::read_series(input)?;
    let draws_path = out_dir.join("draws.csv");
    let chain = io::read_draws(&draws_path)
        .with_context(|| format!("run `chirp fit` first: no usable draws at {}", draws_path.display()))?;

    let config = ForecastConfig { horizon, level, bins };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fc = multistep_forecast(&chain, &y, &config, &mut rng).map_err(|e| anyhow::anyhow!("{e}"))?;

    for (j, h) in fc.horizons.iter().enumerate() {
        let tag = j + 1;
        let mut w = std::io::BufWriter::new(std::fs::File::create(
            out_dir.join(format!("pred_draws_h{tag}.csv")),
        )?);
        use std::io::Write as _;
        for v in &h.draws {
            writeln!(w, "{}", io::fmt(*v))?;
        }
        io::write_histogram(&out_dir.join(format!("pred_density_h{tag}.csv")), &h.draws, bins)?;
    }
    io::write_json(&out_dir.join("forecast_summary.json"), &io::forecast_summary(&fc))?;

    let band = signal_band(&chain, y.len(), level).map_err(|e| anyhow::anyhow!("{e}"))?;
    io::write_band(&out_dir.join("band.csv"), &y, &band)?;

    for (j, h) in fc.horizons.iter().enumerate() {
        eprintln!(
            "h={}: mean {:.4}, {:.0}% interval ({:.4}, {:.4})",
            j + 1,
            h.mean,
            level * 100.0,
            h.lower,
            h.upper
        );
    }
    Ok(())
}

pub fn summarize(out_dir: &Path, level: f64) -> Result<()> {
    let chain = io::read_draws(&out_dir.join("draws.csv"))?;
    let summary_path = out_dir.join("summary.json");
    let stored: Option<io::FitSummary> = std::fs::read_to_string(&summary_path)
        .ok()
        .and_then(|text| serde_json::from_str(&text).ok());

    println!("{} kept draws ({} mode)", chain.len(), match chain.mode {
        ErrorModel::Iid => "iid",
        ErrorModel::Dependent => "dependent",
    });
    println!(
        "{:<10} {:>12} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "parameter", "mean", "median", "sd", "lower", "upper", "ess"
    );
    let mut degenerate: Vec<&str> = Vec::new();
    for (name, col) in chain.columns() {
        if name == "log_post" {
            continue;
        }
        let s = io::summarize_column(col, level)?;
        let ess = match s.ess {
            Some(v) => format!("{v:.0}"),
            None => {
                degenerate.push(name);
                "-".to_string()
            }
        };
        println!(
            "{:<10} {:>12.5} {:>12.5} {:>12.5} {:>12.5} {:>12.5} {:>10}",
            name, s.mean, s.median, s.sd, s.lower, s.upper, ess
        );
    }
    for name in degenerate {
        println!("warning: column '{name}' is degenerate (constant draws); ESS unavailable");
    }
    if let Some(stored) = stored {
        print!(
            "acceptance: theta {:.4}, alpha {:.4}, beta {:.4}",
            stored.acceptance.theta, stored.acceptance.alpha, stored.acceptance.beta
        );
        if let Some(rho) = stored.acceptance.rho {
            print!(", rho {rho:.4}");
        }
        println!();
    } else {
        println!("acceptance: unavailable (no summary.json next to the draws)");
    }
    Ok(())
}
