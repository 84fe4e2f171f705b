//! Run configuration: defaults, optional JSON config file, CLI overrides.
//!
//! The config file is a flat JSON object; every field is optional and
//! anything absent falls back to the reference defaults (amplitude bound
//! 100, von Mises concentration 3, inverse gamma (4, 3), gamma (2, 2),
//! 500000 sweeps with 50000 burn-in, proposal variance 0.5).

use std::path::Path;

use anyhow::{Context, Result};
use chirp_core::prelude::{ChainConfig, ForecastConfig, PriorConfig};
use serde::Deserialize;

/// How the chain start (and, when unset, the von Mises mean directions) are
/// chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitMethod {
    /// Dechirped ambiguity scan over both angles jointly (default).
    Scan,
    /// Simulated annealing per angle, 50 iterations each.
    Anneal,
}

impl std::str::FromStr for InitMethod {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scan" => Ok(Self::Scan),
            "anneal" => Ok(Self::Anneal),
            other => anyhow::bail!("unknown init method '{other}' (expected scan|anneal)"),
        }
    }
}

/// Flat key-value config file contents.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub m: Option<f64>,
    pub alpha0: Option<f64>,
    pub alpha1: Option<f64>,
    pub beta0: Option<f64>,
    pub beta1: Option<f64>,
    pub sigma0: Option<f64>,
    pub sigma1: Option<f64>,
    pub rho0: Option<f64>,
    pub rho1: Option<f64>,
    pub n_iter: Option<usize>,
    pub burn_in: Option<usize>,
    pub proposal_sd: Option<f64>,
    pub thin: Option<usize>,
    pub seed: Option<u64>,
    pub horizon: Option<usize>,
    pub level: Option<f64>,
    pub bins: Option<usize>,
    pub init: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("cannot parse config file {}", path.display()))
    }
}

/// Fully resolved settings for a fit/forecast run.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub priors: PriorConfig,
    /// `None` means "derive from the initializer" (the spec's workflow).
    pub alpha0_explicit: bool,
    pub beta0_explicit: bool,
    pub chain: ChainConfig,
    pub forecast: ForecastConfig,
    pub init: InitMethod,
}

pub struct Overrides {
    pub iters: Option<usize>,
    pub burnin: Option<usize>,
    pub thin: Option<usize>,
    pub seed: Option<u64>,
    pub prior_sigma_mean: Option<f64>,
    pub horizon: Option<usize>,
    pub level: Option<f64>,
    pub init: Option<InitMethod>,
}

pub fn resolve(file: &FileConfig, over: &Overrides) -> Result<Resolved> {
    let mut priors = PriorConfig::default();
    if let Some(v) = file.m {
        priors.m = v;
    }
    if let Some(v) = file.alpha0 {
        priors.alpha0 = v;
    }
    if let Some(v) = file.alpha1 {
        priors.alpha1 = v;
    }
    if let Some(v) = file.beta0 {
        priors.beta0 = v;
    }
    if let Some(v) = file.beta1 {
        priors.beta1 = v;
    }
    if let Some(v) = file.sigma0 {
        priors.sigma0 = v;
    }
    if let Some(v) = file.sigma1 {
        priors.sigma1 = v;
    }
    if let Some(v) = file.rho0 {
        priors.rho0 = v;
    }
    if let Some(v) = file.rho1 {
        priors.rho1 = v;
    }
    if let Some(mean) = over.prior_sigma_mean {
        priors
            .set_sigma_prior_mean(mean)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
    }

    let mut chain = ChainConfig::default();
    if let Some(v) = file.n_iter {
        chain.n_iter = v;
    }
    if let Some(v) = file.burn_in {
        chain.burn_in = v;
    }
    if let Some(v) = file.proposal_sd {
        chain.proposal_sd = v;
    }
    if let Some(v) = file.thin {
        chain.thin = v;
    }
    if let Some(v) = file.seed {
        chain.seed = v;
    }
    if let Some(v) = over.iters {
        chain.n_iter = v;
    }
    if let Some(v) = over.burnin {
        chain.burn_in = v;
    }
    if let Some(v) = over.thin {
        chain.thin = v;
    }
    if let Some(v) = over.seed {
        chain.seed = v;
    }

    let mut forecast = ForecastConfig::default();
    if let Some(v) = file.horizon {
        forecast.horizon = v;
    }
    if let Some(v) = file.level {
        forecast.level = v;
    }
    if let Some(v) = file.bins {
        forecast.bins = v;
    }
    if let Some(v) = over.horizon {
        forecast.horizon = v;
    }
    if let Some(v) = over.level {
        forecast.level = v;
    }

    let init = match (&over.init, &file.init) {
        (Some(m), _) => *m,
        (None, Some(s)) => s.parse()?,
        (None, None) => InitMethod::Scan,
    };

    Ok(Resolved {
        priors,
        alpha0_explicit: file.alpha0.is_some(),
        beta0_explicit: file.beta0.is_some(),
        chain,
        forecast,
        init,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_overrides() -> Overrides {
        Overrides {
            iters: None,
            burnin: None,
            thin: None,
            seed: None,
            prior_sigma_mean: None,
            horizon: None,
            level: None,
            init: None,
        }
    }

    #[test]
    fn defaults_mirror_reference_protocol() {
        let r = resolve(&FileConfig::default(), &no_overrides()).unwrap();
        assert_eq!(r.priors.m, 100.0);
        assert_eq!(r.priors.alpha1, 3.0);
        assert_eq!(r.priors.sigma0, 4.0);
        assert_eq!(r.chain.n_iter, 500_000);
        assert_eq!(r.chain.burn_in, 50_000);
        assert!((r.chain.proposal_sd * r.chain.proposal_sd - 0.5).abs() < 1e-15);
        assert_eq!(r.init, InitMethod::Scan);
        assert!(!r.alpha0_explicit);
    }

    #[test]
    fn sigma_mean_helper() {
        let over = Overrides {
            prior_sigma_mean: Some(2.0),
            ..no_overrides()
        };
        let r = resolve(&FileConfig::default(), &over).unwrap();
        // sigma1 = mean * (sigma0 - 1) with sigma0 = 4
        assert_eq!(r.priors.sigma1, 6.0);
    }

    #[test]
    fn flag_overrides_beat_file() {
        let file = FileConfig {
            n_iter: Some(1000),
            seed: Some(5),
            ..Default::default()
        };
        let over = Overrides {
            iters: Some(2000),
            ..no_overrides()
        };
        let r = resolve(&file, &over).unwrap();
        assert_eq!(r.chain.n_iter, 2000);
        assert_eq!(r.chain.seed, 5);
    }

    #[test]
    fn unknown_key_rejected() {
        let err = serde_json::from_str::<FileConfig>("{\"sigma_prior\": 1.0}");
        assert!(err.is_err());
    }
}
