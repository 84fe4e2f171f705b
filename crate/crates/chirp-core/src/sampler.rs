//! Metropolis-within-Gibbs sampler over `(r, theta, alpha, beta, sigma2[, rho])`.
//!
//! `r` and `sigma2` have closed-form full conditionals (truncated normal and
//! inverse gamma) and are drawn exactly. `theta`, `alpha`, `beta` and, in
//! dependent mode, `rho` move by normal random-walk Metropolis steps.
//! The sweep order is fixed: r, theta, alpha, beta, sigma2, rho.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::distributions::{Gamma, InvGamma, TruncNormal, VonMises};
use crate::error::{Error, Result};
use crate::likelihood::{KmsCorrelation, NoiseModel};
use crate::model::{basis_vector, wrap_angle, ChirpParams};

const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// Hyperparameters for every prior the model uses.
///
/// `m` bounds the amplitude, `(alpha0, alpha1)` and `(beta0, beta1)` are the
/// von Mises mean direction / concentration for the frequency and chirp
/// rate, `(sigma0, sigma1)` the inverse-gamma shape / scale for the error
/// variance, and `(rho0, rho1)` the gamma shape / rate for the decay rate
/// (dependent mode only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorConfig {
    pub m: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub sigma0: f64,
    pub sigma1: f64,
    pub rho0: f64,
    pub rho1: f64,
}

impl Default for PriorConfig {
    /// Reference defaults: amplitude bound 100, von Mises concentration 3,
    /// inverse gamma (4, 3) (prior mean 1), gamma (2, 2) (prior mean 1).
    /// Mean directions default to the middle of `(0, pi)` and are normally
    /// replaced by the annealing initializer or user configuration.
    fn default() -> Self {
        Self {
            m: 100.0,
            alpha0: PI / 2.0,
            alpha1: 3.0,
            beta0: PI / 2.0,
            beta1: 3.0,
            sigma0: 4.0,
            sigma1: 3.0,
            rho0: 2.0,
            rho1: 2.0,
        }
    }
}

impl PriorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0) {
            return Err(Error::InvalidParameter {
                name: "m",
                value: self.m,
                reason: "amplitude bound must be positive",
            });
        }
        for (name, v) in [("alpha1", self.alpha1), ("beta1", self.beta1)] {
            if !(v >= 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "von Mises concentration must be >= 0",
                });
            }
        }
        for (name, v) in [
            ("sigma0", self.sigma0),
            ("sigma1", self.sigma1),
            ("rho0", self.rho0),
            ("rho1", self.rho1),
        ] {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be positive",
                });
            }
        }
        Ok(())
    }

    pub fn alpha_prior(&self) -> VonMises {
        VonMises { mu: self.alpha0, kappa: self.alpha1 }
    }

    pub fn beta_prior(&self) -> VonMises {
        VonMises { mu: self.beta0, kappa: self.beta1 }
    }

    pub fn sigma2_prior(&self) -> InvGamma {
        InvGamma { shape: self.sigma0, scale: self.sigma1 }
    }

    pub fn rho_prior(&self) -> Gamma {
        Gamma { shape: self.rho0, rate: self.rho1 }
    }

    /// Scale `sigma1` so the prior mean of the error variance equals `mean`:
    /// `sigma1 = mean * (sigma0 - 1)`.
    pub fn set_sigma_prior_mean(&mut self, mean: f64) -> Result<()> {
        if !(mean > 0.0) || self.sigma0 <= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "prior mean {mean} requires sigma0 > 1 (have {})",
                self.sigma0
            )));
        }
        self.sigma1 = mean * (self.sigma0 - 1.0);
        Ok(())
    }
}

/// MCMC run settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub n_iter: usize,
    pub burn_in: usize,
    /// Random-walk step standard deviation (variance 0.5 by default).
    pub proposal_sd: f64,
    pub thin: usize,
    pub seed: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            n_iter: 500_000,
            burn_in: 50_000,
            proposal_sd: 0.5_f64.sqrt(),
            thin: 1,
            seed: 0,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.burn_in >= self.n_iter {
            return Err(Error::InvalidConfig(format!(
                "burn_in {} must be smaller than n_iter {}",
                self.burn_in, self.n_iter
            )));
        }
        if !(self.proposal_sd > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "proposal_sd must be positive, got {}",
                self.proposal_sd
            )));
        }
        if self.thin == 0 {
            return Err(Error::InvalidConfig("thin must be >= 1".into()));
        }
        Ok(())
    }
}

/// Which error structure the chain samples under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorModel {
    Iid,
    Dependent,
}

/// Current chain position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainState {
    pub params: ChirpParams,
    pub noise: NoiseModel,
}

impl ChainState {
    pub fn validate(&self, priors: &PriorConfig, mode: ErrorModel) -> Result<()> {
        ChirpParams::new(
            self.params.r,
            self.params.theta,
            self.params.alpha,
            self.params.beta,
            priors.m,
        )?;
        if !(self.noise.sigma2 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "sigma2",
                value: self.noise.sigma2,
                reason: "must be positive",
            });
        }
        match (mode, self.noise.rho) {
            (ErrorModel::Iid, None) => Ok(()),
            (ErrorModel::Dependent, Some(rho)) if rho > 0.0 => Ok(()),
            (ErrorModel::Dependent, Some(rho)) => Err(Error::NonPositiveRho(rho)),
            (ErrorModel::Iid, Some(_)) => Err(Error::InvalidConfig(
                "iid mode but the initial state carries a decay rate".into(),
            )),
            (ErrorModel::Dependent, None) => Err(Error::InvalidConfig(
                "dependent mode needs an initial decay rate".into(),
            )),
        }
    }
}

/// Parameters updated by random-walk Metropolis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RwParam {
    Theta,
    Alpha,
    Beta,
    Rho,
}

#[derive(Debug, Clone, Copy, Default)]
struct AcceptCounter {
    accepted: u64,
    proposed: u64,
}

impl AcceptCounter {
    fn rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }
}

/// Per-parameter Metropolis acceptance rates over the whole run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceRates {
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub rho: Option<f64>,
}

/// Stored draws (post burn-in, thinned) plus run statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput {
    pub mode: ErrorModel,
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub sigma2: Vec<f64>,
    pub rho: Option<Vec<f64>>,
    /// Derived `A = r cos(theta)` per draw.
    pub amp_a: Vec<f64>,
    /// Derived `B = r sin(theta)` per draw.
    pub amp_b: Vec<f64>,
    pub log_post: Vec<f64>,
    pub acceptance: AcceptanceRates,
}

impl ChainOutput {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Column views in the canonical order used by draw files.
    pub fn columns(&self) -> Vec<(&'static str, &[f64])> {
        let mut cols: Vec<(&'static str, &[f64])> = vec![
            ("r", &self.r),
            ("theta", &self.theta),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("sigma2", &self.sigma2),
        ];
        if let Some(rho) = &self.rho {
            cols.push(("rho", rho));
        }
        cols.push(("a", &self.amp_a));
        cols.push(("b", &self.amp_b));
        cols.push(("log_post", &self.log_post));
        cols
    }

    /// State of the `i`-th stored draw.
    pub fn state_at(&self, i: usize) -> ChainState {
        ChainState {
            params: ChirpParams {
                r: self.r[i],
                theta: self.theta[i],
                alpha: self.alpha[i],
                beta: self.beta[i],
            },
            noise: NoiseModel {
                sigma2: self.sigma2[i],
                rho: self.rho.as_ref().map(|v| v[i]),
            },
        }
    }
}

/// Dot product written with the same accumulation order as the whitened
/// cross form, so the dependent path at `phi = 0` reproduces it bit for bit.
fn dot(u: &[f64], v: &[f64]) -> f64 {
    let mut total = u[0] * v[0];
    for t in 1..u.len() {
        total += u[t] * v[t];
    }
    total
}

/// Full conditional of the amplitude `r`: a normal truncated to `(0, m)`.
///
/// Independent errors give mean `sum(y_t b_t) / sum(b_t^2)` and variance
/// `sigma2 / sum(b_t^2)`; dependent errors replace the dot products with the
/// correlation-weighted forms `y' C^{-1} b` and `b' C^{-1} b`.
pub fn r_conditional(
    y: &[f64],
    params: &ChirpParams,
    noise: &NoiseModel,
    m: f64,
) -> Result<TruncNormal> {
    let basis = basis_vector(params, y.len());
    r_conditional_from_basis(y, &basis, noise, m)
}

/// Same as [`r_conditional`] with the unit-amplitude basis vector already
/// computed.
pub fn r_conditional_from_basis(
    y: &[f64],
    basis: &[f64],
    noise: &NoiseModel,
    m: f64,
) -> Result<TruncNormal> {
    if y.is_empty() {
        return Err(Error::EmptySeries);
    }
    let (yb, bb) = match noise.rho {
        None => (dot(y, basis), dot(basis, basis)),
        Some(rho) => {
            let corr = KmsCorrelation::new(y.len(), rho)?;
            (corr.cross_quadform(y, basis), corr.quadform(basis))
        }
    };
    if !(bb > 1e-300) {
        return Err(Error::DegenerateBasis);
    }
    TruncNormal::new(yb / bb, (noise.sigma2 / bb).sqrt(), 0.0, m)
}

/// Full conditional of the error variance: inverse gamma with shape
/// `sigma0 + T/2` and scale `sigma1 + quad/2`, where `quad` is the residual
/// sum of squares (correlation-weighted in dependent mode). An empty series
/// returns the prior unchanged.
pub fn sigma2_conditional(
    y: &[f64],
    params: &ChirpParams,
    rho: Option<f64>,
    priors: &PriorConfig,
) -> Result<InvGamma> {
    if y.is_empty() {
        return InvGamma::new(priors.sigma0, priors.sigma1);
    }
    let basis = basis_vector(params, y.len());
    let resid: Vec<f64> = y
        .iter()
        .zip(&basis)
        .map(|(yt, bt)| yt - params.r * bt)
        .collect();
    let quad = match rho {
        None => dot(&resid, &resid),
        Some(rho) => KmsCorrelation::new(y.len(), rho)?.quadform(&resid),
    };
    InvGamma::new(priors.sigma0 + y.len() as f64 / 2.0, priors.sigma1 + 0.5 * quad)
}

/// One random-walk Metropolis step against an arbitrary one-dimensional
/// log-target. Returns the (possibly unchanged) position and the accept flag.
pub fn rw_mh_step<R: Rng + ?Sized>(
    current: f64,
    log_target: impl Fn(f64) -> f64,
    proposal_sd: f64,
    rng: &mut R,
) -> (f64, bool) {
    let z: f64 = StandardNormal.sample(rng);
    let candidate = current + proposal_sd * z;
    let log_ratio = log_target(candidate) - log_target(current);
    if mh_accept(log_ratio, rng) {
        (candidate, true)
    } else {
        (current, false)
    }
}

#[inline]
fn mh_accept<R: Rng + ?Sized>(log_ratio: f64, rng: &mut R) -> bool {
    if log_ratio >= 0.0 {
        return true;
    }
    let u: f64 = rng.random();
    u.ln() < log_ratio
}

/// A single Metropolis-within-Gibbs chain.
///
/// The chain owns its RNG stream; run several chains with distinct seeds for
/// independent replications. Internally it caches the phase basis for the
/// current `(alpha, beta)`, the composed basis for the current `theta`, and
/// the residual quadratic form, so a full sweep costs O(T).
pub struct Chain<'a> {
    y: &'a [f64],
    priors: PriorConfig,
    mode: ErrorModel,
    proposal_sd: f64,
    params: ChirpParams,
    noise: NoiseModel,
    cos_phase: Vec<f64>,
    sin_phase: Vec<f64>,
    basis: Vec<f64>,
    cand_cos: Vec<f64>,
    cand_sin: Vec<f64>,
    cand_basis: Vec<f64>,
    /// residual quadratic form (correlation-weighted in dependent mode)
    quad: f64,
    counters: [AcceptCounter; 4],
    rng: ChaCha8Rng,
}

impl<'a> Chain<'a> {
    pub fn new(
        y: &'a [f64],
        priors: PriorConfig,
        mode: ErrorModel,
        proposal_sd: f64,
        init: ChainState,
        rng: ChaCha8Rng,
    ) -> Result<Self> {
        if y.len() < 2 {
            return Err(Error::SeriesTooShort { len: y.len(), min: 2 });
        }
        priors.validate()?;
        init.validate(&priors, mode)?;
        if !(proposal_sd >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "proposal_sd must be non-negative, got {proposal_sd}"
            )));
        }
        let len = y.len();
        let mut chain = Self {
            y,
            priors,
            mode,
            proposal_sd,
            params: init.params,
            noise: init.noise,
            cos_phase: vec![0.0; len],
            sin_phase: vec![0.0; len],
            basis: vec![0.0; len],
            cand_cos: vec![0.0; len],
            cand_sin: vec![0.0; len],
            cand_basis: vec![0.0; len],
            quad: 0.0,
            counters: [AcceptCounter::default(); 4],
            rng,
        };
        fill_phase(
            chain.params.alpha,
            chain.params.beta,
            &mut chain.cos_phase,
            &mut chain.sin_phase,
        );
        compose_basis(
            chain.params.theta,
            &chain.cos_phase,
            &chain.sin_phase,
            &mut chain.basis,
        );
        chain.quad = chain.residual_quad(&chain.basis, chain.params.r, chain.noise.rho);
        Ok(chain)
    }

    pub fn state(&self) -> ChainState {
        ChainState { params: self.params, noise: self.noise }
    }

    fn counter_index(param: RwParam) -> usize {
        match param {
            RwParam::Theta => 0,
            RwParam::Alpha => 1,
            RwParam::Beta => 2,
            RwParam::Rho => 3,
        }
    }

    fn residual_quad(&self, basis: &[f64], r: f64, rho: Option<f64>) -> f64 {
        match rho {
            None => {
                let mut total = 0.0;
                for (yt, bt) in self.y.iter().zip(basis) {
                    let e = yt - r * bt;
                    total += e * e;
                }
                total
            }
            Some(rho) => {
                let phi = (-rho).exp();
                let denom = 1.0 - phi * phi;
                let mut prev = self.y[0] - r * basis[0];
                let mut total = prev * prev;
                for t in 1..self.y.len() {
                    let e = self.y[t] - r * basis[t];
                    let w = e - phi * prev;
                    total += w * w / denom;
                    prev = e;
                }
                total
            }
        }
    }

    fn log_det(&self, rho: Option<f64>) -> f64 {
        match rho {
            None => 0.0,
            Some(rho) => {
                let phi = (-rho).exp();
                (self.y.len() as f64 - 1.0) * (1.0 - phi * phi).ln()
            }
        }
    }

    /// Exact draw from the truncated-normal conditional of `r`.
    pub fn update_r(&mut self) -> Result<()> {
        let cond = r_conditional_from_basis(self.y, &self.basis, &self.noise, self.priors.m)?;
        self.params.r = cond.sample(&mut self.rng);
        self.quad = self.residual_quad(&self.basis, self.params.r, self.noise.rho);
        Ok(())
    }

    /// Exact draw from the inverse-gamma conditional of `sigma2`.
    pub fn update_sigma2(&mut self) -> Result<()> {
        let cond = InvGamma::new(
            self.priors.sigma0 + self.y.len() as f64 / 2.0,
            self.priors.sigma1 + 0.5 * self.quad,
        )?;
        self.noise.sigma2 = cond.sample(&mut self.rng);
        Ok(())
    }

    /// One random-walk Metropolis update of the given parameter. Returns the
    /// accept flag. Proposals for `alpha`, `beta`, `rho` that leave the
    /// support are rejected outright; `theta` proposals wrap modulo 2 pi.
    pub fn rwmh_update(&mut self, param: RwParam) -> Result<bool> {
        if param == RwParam::Rho && self.mode == ErrorModel::Iid {
            return Err(Error::InvalidConfig(
                "rho updates only exist in dependent mode".into(),
            ));
        }
        let idx = Self::counter_index(param);
        self.counters[idx].proposed += 1;
        let z: f64 = StandardNormal.sample(&mut self.rng);
        let step = self.proposal_sd * z;
        let accepted = match param {
            RwParam::Theta => self.try_theta(step),
            RwParam::Alpha => self.try_alpha(step),
            RwParam::Beta => self.try_beta(step),
            RwParam::Rho => self.try_rho(step),
        };
        if accepted {
            self.counters[idx].accepted += 1;
        }
        Ok(accepted)
    }

    fn try_theta(&mut self, step: f64) -> bool {
        let cand = wrap_angle(self.params.theta + step);
        compose_basis(cand, &self.cos_phase, &self.sin_phase, &mut self.cand_basis);
        let quad_cand = self.residual_quad(&self.cand_basis, self.params.r, self.noise.rho);
        // uniform prior on the circle: only the likelihood term moves
        let log_ratio = -0.5 * (quad_cand - self.quad) / self.noise.sigma2;
        if mh_accept(log_ratio, &mut self.rng) {
            self.params.theta = cand;
            std::mem::swap(&mut self.basis, &mut self.cand_basis);
            self.quad = quad_cand;
            true
        } else {
            false
        }
    }

    fn try_alpha(&mut self, step: f64) -> bool {
        let cand = self.params.alpha + step;
        if !(cand > 0.0 && cand < PI) {
            return false;
        }
        fill_phase(cand, self.params.beta, &mut self.cand_cos, &mut self.cand_sin);
        compose_basis(self.params.theta, &self.cand_cos, &self.cand_sin, &mut self.cand_basis);
        let quad_cand = self.residual_quad(&self.cand_basis, self.params.r, self.noise.rho);
        let prior = self.priors.alpha_prior();
        let log_ratio = -0.5 * (quad_cand - self.quad) / self.noise.sigma2
            + prior.log_kernel(cand)
            - prior.log_kernel(self.params.alpha);
        if mh_accept(log_ratio, &mut self.rng) {
            self.params.alpha = cand;
            self.adopt_candidate_phase(quad_cand);
            true
        } else {
            false
        }
    }

    fn try_beta(&mut self, step: f64) -> bool {
        let cand = self.params.beta + step;
        if !(cand > 0.0 && cand < PI) {
            return false;
        }
        fill_phase(self.params.alpha, cand, &mut self.cand_cos, &mut self.cand_sin);
        compose_basis(self.params.theta, &self.cand_cos, &self.cand_sin, &mut self.cand_basis);
        let quad_cand = self.residual_quad(&self.cand_basis, self.params.r, self.noise.rho);
        let prior = self.priors.beta_prior();
        let log_ratio = -0.5 * (quad_cand - self.quad) / self.noise.sigma2
            + prior.log_kernel(cand)
            - prior.log_kernel(self.params.beta);
        if mh_accept(log_ratio, &mut self.rng) {
            self.params.beta = cand;
            self.adopt_candidate_phase(quad_cand);
            true
        } else {
            false
        }
    }

    fn adopt_candidate_phase(&mut self, quad_cand: f64) {
        std::mem::swap(&mut self.cos_phase, &mut self.cand_cos);
        std::mem::swap(&mut self.sin_phase, &mut self.cand_sin);
        std::mem::swap(&mut self.basis, &mut self.cand_basis);
        self.quad = quad_cand;
    }

    fn try_rho(&mut self, step: f64) -> bool {
        let current = self.noise.rho.expect("mode checked in rwmh_update");
        let cand = current + step;
        if !(cand > 0.0) {
            return false;
        }
        let quad_cand = self.residual_quad(&self.basis, self.params.r, Some(cand));
        let prior = self.priors.rho_prior();
        let log_ratio = -0.5 * (self.log_det(Some(cand)) - self.log_det(Some(current)))
            - 0.5 * (quad_cand - self.quad) / self.noise.sigma2
            + prior.logpdf(cand)
            - prior.logpdf(current);
        if mh_accept(log_ratio, &mut self.rng) {
            self.noise.rho = Some(cand);
            self.quad = quad_cand;
            true
        } else {
            false
        }
    }

    /// One full Gibbs sweep in the fixed order r, theta, alpha, beta,
    /// sigma2 and, in dependent mode, rho.
    pub fn sweep(&mut self) -> Result<()> {
        self.update_r()?;
        self.rwmh_update(RwParam::Theta)?;
        self.rwmh_update(RwParam::Alpha)?;
        self.rwmh_update(RwParam::Beta)?;
        self.update_sigma2()?;
        if self.mode == ErrorModel::Dependent {
            self.rwmh_update(RwParam::Rho)?;
        }
        Ok(())
    }

    /// Log posterior density (up to the in-support normalization of the
    /// angular priors) at the current state.
    pub fn log_posterior(&self) -> f64 {
        let t = self.y.len() as f64;
        let loglik = -0.5 * t * (LN_2PI + self.noise.sigma2.ln())
            - 0.5 * self.log_det(self.noise.rho)
            - 0.5 * self.quad / self.noise.sigma2;
        let mut logprior = -(self.priors.m.ln()) - LN_2PI
            + self.priors.alpha_prior().logpdf(self.params.alpha)
            + self.priors.beta_prior().logpdf(self.params.beta)
            + self.priors.sigma2_prior().logpdf(self.noise.sigma2);
        if let Some(rho) = self.noise.rho {
            logprior += self.priors.rho_prior().logpdf(rho);
        }
        loglik + logprior
    }

    fn acceptance(&self) -> AcceptanceRates {
        AcceptanceRates {
            theta: self.counters[0].rate(),
            alpha: self.counters[1].rate(),
            beta: self.counters[2].rate(),
            rho: (self.mode == ErrorModel::Dependent).then(|| self.counters[3].rate()),
        }
    }
}

fn fill_phase(alpha: f64, beta: f64, cos_out: &mut [f64], sin_out: &mut [f64]) {
    for t in 1..=cos_out.len() {
        let tf = t as f64;
        let (s, c) = (alpha * tf + beta * tf * tf).sin_cos();
        cos_out[t - 1] = c;
        sin_out[t - 1] = s;
    }
}

fn compose_basis(theta: f64, cos_phase: &[f64], sin_phase: &[f64], out: &mut [f64]) {
    let (sin_th, cos_th) = theta.sin_cos();
    for ((o, c), s) in out.iter_mut().zip(cos_phase).zip(sin_phase) {
        *o = cos_th * c + sin_th * s;
    }
}

/// Runs a full chain: `n_iter` sweeps, discarding `burn_in` and keeping every
/// `thin`-th draw after that. Deterministic given `config.seed`. Aborts with
/// an error the moment the log posterior turns non-finite.
pub fn run_chain(
    y: &[f64],
    priors: &PriorConfig,
    config: &ChainConfig,
    mode: ErrorModel,
    init: ChainState,
) -> Result<ChainOutput> {
    config.validate()?;
    let rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut chain = Chain::new(y, *priors, mode, config.proposal_sd, init, rng)?;

    let kept = (config.n_iter - config.burn_in) / config.thin;
    let mut out = ChainOutput {
        mode,
        r: Vec::with_capacity(kept),
        theta: Vec::with_capacity(kept),
        alpha: Vec::with_capacity(kept),
        beta: Vec::with_capacity(kept),
        sigma2: Vec::with_capacity(kept),
        rho: (mode == ErrorModel::Dependent).then(|| Vec::with_capacity(kept)),
        amp_a: Vec::with_capacity(kept),
        amp_b: Vec::with_capacity(kept),
        log_post: Vec::with_capacity(kept),
        acceptance: AcceptanceRates { theta: 0.0, alpha: 0.0, beta: 0.0, rho: None },
    };

    for iter in 1..=config.n_iter {
        chain.sweep()?;
        let lp = chain.log_posterior();
        if !lp.is_finite() {
            return Err(Error::NonFiniteLogPosterior { iter });
        }
        if iter > config.burn_in && (iter - config.burn_in) % config.thin == 0 {
            let s = chain.state();
            out.r.push(s.params.r);
            out.theta.push(s.params.theta);
            out.alpha.push(s.params.alpha);
            out.beta.push(s.params.beta);
            out.sigma2.push(s.noise.sigma2);
            if let (Some(col), Some(rho)) = (out.rho.as_mut(), s.noise.rho) {
                col.push(rho);
            }
            let amp = s.params.amplitudes();
            out.amp_a.push(amp.a);
            out.amp_b.push(amp.b);
            out.log_post.push(lp);
        }
    }
    out.acceptance = chain.acceptance();
    Ok(out)
}

/// Data-driven starting state: angles from the dechirped ambiguity scan
/// (choosing whichever reflection of the exact `(pi - alpha, pi - beta)`
/// symmetry the angular priors favor), amplitude and phase from the
/// least-squares fit at those angles, error variance from the fit residuals,
/// and the decay rate at its prior mean.
///
/// Starting inside the dominant likelihood ridge matters: the ridge width in
/// `beta` shrinks like `1/T^2`, and a chain started outside it spends its
/// whole run among sidelobes.
pub fn scan_init_state(y: &[f64], priors: &PriorConfig, mode: ErrorModel) -> Result<ChainState> {
    let (sa, sb) = crate::anneal::scan_init(y)?;
    let (ma, mb) = crate::anneal::mirror_mode(sa, sb);
    let kernel = |alpha: f64, beta: f64| {
        priors.alpha_prior().log_kernel(alpha) + priors.beta_prior().log_kernel(beta)
    };
    let (alpha, beta) = if kernel(sa, sb) >= kernel(ma, mb) { (sa, sb) } else { (ma, mb) };

    let (amp_a, amp_b, resid_var) = crate::anneal::profile_amplitudes(y, alpha, beta);
    let (r, theta) = crate::model::amp_to_polar(amp_a, amp_b);
    let r = r.clamp(1e-3 * priors.m, 0.999 * priors.m);
    let sigma2 = resid_var.max(1e-12);
    let rho = match mode {
        ErrorModel::Iid => None,
        ErrorModel::Dependent => Some(priors.rho_prior().mean()),
    };
    Ok(ChainState {
        params: ChirpParams { r, theta, alpha, beta },
        noise: NoiseModel { sigma2, rho },
    })
}

/// Default chain starting point: amplitude from the series root mean square
/// (times sqrt 2, clipped into `(0, m)`), `theta = pi`, angular parameters at
/// the supplied values (typically the annealing output), and the noise
/// parameters at their prior means.
pub fn default_init(
    y: &[f64],
    priors: &PriorConfig,
    mode: ErrorModel,
    alpha: f64,
    beta: f64,
) -> Result<ChainState> {
    if y.is_empty() {
        return Err(Error::EmptySeries);
    }
    let rms = (y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64).sqrt();
    let r = (rms * std::f64::consts::SQRT_2).clamp(1e-3 * priors.m, 0.999 * priors.m);
    let sigma2 = priors.sigma2_prior().mean().unwrap_or(priors.sigma1);
    let rho = match mode {
        ErrorModel::Iid => None,
        ErrorModel::Dependent => Some(priors.rho_prior().mean()),
    };
    Ok(ChainState {
        params: ChirpParams { r, theta: PI, alpha, beta },
        noise: NoiseModel { sigma2, rho },
    })
}
