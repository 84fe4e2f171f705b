//! Posterior predictive sampling for future observations, one step or many.
//!
//! Every retained posterior draw is propagated through the forecast horizon.
//! Under independent errors each future value is `N(mu_{T+j}, sigma2)`;
//! under dependent errors each step conditions on the observed series plus
//! the values already simulated (data augmentation), which for the
//! exponential correlation is exact Gaussian conditioning in O(T).

use rand::Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::diagnostics::quantile;
use crate::error::{Error, Result};
use crate::likelihood::KmsCorrelation;
use crate::model::{chirp_mean, mean_vector};
use crate::sampler::{ChainOutput, ChainState, ErrorModel};

/// Forecast settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForecastConfig {
    /// Number of future steps to predict.
    pub horizon: usize,
    /// Credible level for the equal-tailed intervals.
    pub level: f64,
    /// Bin count for exported density histograms.
    pub bins: usize,
}

impl Default for ForecastConfig {
    fn default() -> Self {
        Self { horizon: 1, level: 0.95, bins: 60 }
    }
}

impl ForecastConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidConfig("forecast horizon must be >= 1".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "credible level must lie in (0, 1), got {}",
                self.level
            )));
        }
        if self.bins == 0 {
            return Err(Error::InvalidConfig("histogram bin count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Predictive draws and summaries for one horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizonForecast {
    pub draws: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
    pub mean: f64,
    pub median: f64,
}

/// Forecast across horizons `1..=k`; `horizons[j]` predicts `y_{T+j+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastResult {
    pub level: f64,
    pub horizons: Vec<HorizonForecast>,
}

/// One draw from `[y_{T+1} | params]` under independent errors:
/// `mu_{T+1} + N(0, sigma2)`.
pub fn predictive_draw_iid<R: Rng + ?Sized>(
    state: &ChainState,
    series_len: usize,
    rng: &mut R,
) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    chirp_mean(&state.params, series_len + 1) + state.noise.sigma2.sqrt() * z
}

/// Conditional mean and variance of `y_{T+1}` given the series and the
/// parameters, under the exponential correlation structure:
///
/// ```text
/// E   = mu_{T+1} + c' (sigma2 C)^{-1} (y - mu_T)
/// var = sigma2 - c' (sigma2 C)^{-1} c,   c = sigma2 (phi^T, ..., phi)'
/// ```
///
/// computed through the O(T) whitened forms.
pub fn predictive_moments_dep(state: &ChainState, y: &[f64]) -> Result<(f64, f64)> {
    let rho = state.noise.rho.ok_or(Error::NonPositiveRho(0.0))?;
    if y.is_empty() {
        return Err(Error::EmptySeries);
    }
    let t = y.len();
    let corr = KmsCorrelation::new(t, rho)?;
    let phi = corr.phi();

    let mu = mean_vector(&state.params, t);
    let resid: Vec<f64> = y.iter().zip(&mu).map(|(yt, mt)| yt - mt).collect();
    // covariance vector over sigma2: u_i = phi^(T + 1 - i)
    let mut u = vec![0.0; t];
    let mut pow = phi;
    for i in (0..t).rev() {
        u[i] = pow;
        pow *= phi;
    }
    let mean = chirp_mean(&state.params, t + 1) + corr.cross_quadform(&u, &resid);
    let var = state.noise.sigma2 * (1.0 - corr.quadform(&u));
    Ok((mean, var))
}

/// Multi-step posterior predictive: every retained draw is pushed through
/// horizons `1..=config.horizon`, augmenting the conditioning series with
/// each simulated value in dependent mode.
pub fn multistep_forecast<R: Rng + ?Sized>(
    chain: &ChainOutput,
    y: &[f64],
    config: &ForecastConfig,
    rng: &mut R,
) -> Result<ForecastResult> {
    config.validate()?;
    if chain.is_empty() {
        return Err(Error::EmptyDraws);
    }
    if y.is_empty() {
        return Err(Error::EmptySeries);
    }

    let k = config.horizon;
    let mut per_horizon: Vec<Vec<f64>> = vec![Vec::with_capacity(chain.len()); k];
    let mut augmented = Vec::with_capacity(y.len() + k);

    for i in 0..chain.len() {
        let state = chain.state_at(i);
        match chain.mode {
            ErrorModel::Iid => {
                for (j, column) in per_horizon.iter_mut().enumerate() {
                    let z: f64 = StandardNormal.sample(rng);
                    let mu = chirp_mean(&state.params, y.len() + j + 1);
                    column.push(mu + state.noise.sigma2.sqrt() * z);
                }
            }
            ErrorModel::Dependent => {
                augmented.clear();
                augmented.extend_from_slice(y);
                for column in per_horizon.iter_mut() {
                    let (mean, var) = predictive_moments_dep(&state, &augmented)?;
                    let z: f64 = StandardNormal.sample(rng);
                    let draw = mean + var.sqrt() * z;
                    column.push(draw);
                    augmented.push(draw);
                }
            }
        }
    }

    let horizons = per_horizon
        .into_iter()
        .map(|draws| summarize_horizon(draws, config.level))
        .collect::<Result<Vec<_>>>()?;
    Ok(ForecastResult { level: config.level, horizons })
}

fn summarize_horizon(draws: Vec<f64>, level: f64) -> Result<HorizonForecast> {
    let (lower, upper) = credible_interval(&draws, level)?;
    let mut sorted = draws.clone();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let median = quantile(&sorted, 0.5);
    let mean = draws.iter().sum::<f64>() / draws.len() as f64;
    Ok(HorizonForecast { draws, lower, upper, mean, median })
}

/// Equal-tailed credible interval at the given level.
pub fn credible_interval(draws: &[f64], level: f64) -> Result<(f64, f64)> {
    if draws.is_empty() {
        return Err(Error::EmptyDraws);
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "credible level must lie in (0, 1), got {level}"
        )));
    }
    let mut sorted = draws.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let tail = 0.5 * (1.0 - level);
    Ok((quantile(&sorted, tail), quantile(&sorted, 1.0 - tail)))
}

/// Normalized histogram: equal-width bins spanning the draws, densities
/// integrating to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` edges.
    pub edges: Vec<f64>,
    /// Density per bin.
    pub densities: Vec<f64>,
}

pub fn density_histogram(draws: &[f64], bins: usize) -> Result<Histogram> {
    if draws.is_empty() {
        return Err(Error::EmptyDraws);
    }
    if bins == 0 {
        return Err(Error::InvalidConfig("histogram bin count must be >= 1".into()));
    }
    let mut lo = draws.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = draws.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        // constant draws: give the spike a unit-width box
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in draws {
        let mut idx = ((x - lo) / width) as usize;
        if idx >= bins {
            idx = bins - 1;
        }
        counts[idx] += 1;
    }
    let n = draws.len() as f64;
    let edges = (0..=bins).map(|i| lo + i as f64 * width).collect();
    let densities = counts.into_iter().map(|c| c as f64 / (n * width)).collect();
    Ok(Histogram { edges, densities })
}

/// Per-time-point band of the posterior signal `mu_t`: equal-tailed interval
/// plus the posterior mean, for `t = 1..=len`.
pub fn signal_band(chain: &ChainOutput, len: usize, level: f64) -> Result<Vec<(f64, f64, f64)>> {
    if chain.is_empty() {
        return Err(Error::EmptyDraws);
    }
    let mut band = Vec::with_capacity(len);
    let mut column = vec![0.0; chain.len()];
    for t in 1..=len {
        for (i, slot) in column.iter_mut().enumerate() {
            let state = chain.state_at(i);
            *slot = chirp_mean(&state.params, t);
        }
        let mean = column.iter().sum::<f64>() / column.len() as f64;
        let (lo, hi) = credible_interval(&column, level)?;
        band.push((lo, hi, mean));
    }
    Ok(band)
}
