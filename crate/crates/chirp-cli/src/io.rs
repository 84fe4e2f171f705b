//! File formats: series input, draw/summary/histogram/band outputs.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which
//! round-trips every f64 exactly, so rerunning a seeded pipeline reproduces
//! each output byte for byte.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use chirp_core::diagnostics::effective_sample_size;
use chirp_core::forecast::{density_histogram, ForecastResult};
use chirp_core::prelude::{credible_interval, AcceptanceRates, ChainOutput, ChainState, ErrorModel};
use serde::{Deserialize, Serialize};

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// One observation per line, `t` implicit from the row number (first row is
/// `t = 1`). Blank lines are allowed; anything else must parse as a finite
/// number.
pub fn read_series(path: &Path) -> Result<Vec<f64>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut out = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let v: f64 = trimmed
            .parse()
            .with_context(|| format!("{}:{}: not a number: '{trimmed}'", path.display(), lineno + 1))?;
        if !v.is_finite() {
            bail!("{}:{}: non-finite value", path.display(), lineno + 1);
        }
        out.push(v);
    }
    if out.is_empty() {
        bail!("{}: empty series", path.display());
    }
    Ok(out)
}

pub fn write_series(path: &Path, y: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for v in y {
        writeln!(w, "{}", fmt(*v))?;
    }
    Ok(())
}

pub fn write_draws(path: &Path, chain: &ChainOutput) -> Result<()> {
    let cols = chain.columns();
    let mut w = BufWriter::new(File::create(path)?);
    let header: Vec<&str> = cols.iter().map(|(name, _)| *name).collect();
    writeln!(w, "{}", header.join(","))?;
    for i in 0..chain.len() {
        let row: Vec<String> = cols.iter().map(|(_, col)| fmt(col[i])).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Reads a draw file back into a `ChainOutput`. Acceptance rates are not
/// stored in the CSV; the caller may patch them in from the summary file.
pub fn read_draws(path: &Path) -> Result<ChainOutput> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .context("draw file is empty")??;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() {
            bail!(
                "{}:{}: expected {} fields, found {}",
                path.display(),
                lineno + 2,
                names.len(),
                fields.len()
            );
        }
        for (slot, field) in columns.iter_mut().zip(&fields) {
            let v: f64 = field
                .trim()
                .parse()
                .with_context(|| format!("{}:{}: bad number '{field}'", path.display(), lineno + 2))?;
            slot.push(v);
        }
    }

    let mut by_name: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for (name, col) in names.iter().zip(columns) {
        by_name.insert(name.as_str(), col);
    }
    let mut take = |name: &str| -> Result<Vec<f64>> {
        by_name
            .remove(name)
            .with_context(|| format!("{}: missing column '{name}'", path.display()))
    };
    let r = take("r")?;
    if r.is_empty() {
        bail!("{}: no draws", path.display());
    }
    let rho = match take("rho") {
        Ok(col) => Some(col),
        Err(_) => None,
    };
    Ok(ChainOutput {
        mode: if rho.is_some() { ErrorModel::Dependent } else { ErrorModel::Iid },
        theta: take("theta")?,
        alpha: take("alpha")?,
        beta: take("beta")?,
        sigma2: take("sigma2")?,
        rho,
        amp_a: take("a")?,
        amp_b: take("b")?,
        log_post: take("log_post")?,
        acceptance: AcceptanceRates { theta: 0.0, alpha: 0.0, beta: 0.0, rho: None },
        r,
    })
}

pub fn write_histogram(path: &Path, draws: &[f64], bins: usize) -> Result<()> {
    let hist = density_histogram(draws, bins).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "lower,upper,density")?;
    for (i, d) in hist.densities.iter().enumerate() {
        writeln!(w, "{},{},{}", fmt(hist.edges[i]), fmt(hist.edges[i + 1]), fmt(*d))?;
    }
    Ok(())
}

/// Per-time-point fitted band: observed value, interval for the signal mean
/// and its posterior mean.
pub fn write_band(path: &Path, y: &[f64], band: &[(f64, f64, f64)]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,observed,lower,upper,mean_signal")?;
    for (i, ((lo, hi, mean), obs)) in band.iter().zip(y).enumerate() {
        writeln!(w, "{},{},{},{},{}", i + 1, fmt(*obs), fmt(*lo), fmt(*hi), fmt(*mean))?;
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ParamSummary {
    pub mean: f64,
    pub median: f64,
    pub sd: f64,
    pub lower: f64,
    pub upper: f64,
    pub ess: Option<f64>,
}

pub fn summarize_column(draws: &[f64], level: f64) -> Result<ParamSummary> {
    let n = draws.len();
    if n == 0 {
        bail!("no draws to summarize");
    }
    let mean = draws.iter().sum::<f64>() / n as f64;
    let sd = if n > 1 {
        (draws.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let (lower, upper) = credible_interval(draws, level).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut sorted = draws.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let median = chirp_core::diagnostics::quantile(&sorted, 0.5);
    Ok(ParamSummary {
        mean,
        median,
        sd,
        lower,
        upper,
        ess: effective_sample_size(draws),
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct InitEcho {
    pub r: f64,
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub sigma2: f64,
    pub rho: Option<f64>,
}

impl From<&ChainState> for InitEcho {
    fn from(s: &ChainState) -> Self {
        Self {
            r: s.params.r,
            theta: s.params.theta,
            alpha: s.params.alpha,
            beta: s.params.beta,
            sigma2: s.noise.sigma2,
            rho: s.noise.rho,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FitSummary {
    pub mode: String,
    pub series_len: usize,
    pub n_iter: usize,
    pub burn_in: usize,
    pub proposal_sd: f64,
    pub thin: usize,
    pub seed: u64,
    pub kept_draws: usize,
    pub level: f64,
    pub priors: chirp_core::prelude::PriorConfig,
    pub init: InitEcho,
    pub acceptance: AcceptanceRates,
    pub parameters: BTreeMap<String, ParamSummary>,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HorizonSummary {
    pub horizon: usize,
    pub mean: f64,
    pub median: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ForecastSummary {
    pub level: f64,
    pub draws_per_horizon: usize,
    pub horizons: Vec<HorizonSummary>,
}

pub fn forecast_summary(fc: &ForecastResult) -> ForecastSummary {
    ForecastSummary {
        level: fc.level,
        draws_per_horizon: fc.horizons.first().map_or(0, |h| h.draws.len()),
        horizons: fc
            .horizons
            .iter()
            .enumerate()
            .map(|(j, h)| HorizonSummary {
                horizon: j + 1,
                mean: h.mean,
                median: h.median,
                lower: h.lower,
                upper: h.upper,
            })
            .collect(),
    }
}
