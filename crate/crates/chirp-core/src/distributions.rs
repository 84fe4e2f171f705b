//! Densities and samplers for the distributions the sampler needs:
//! von Mises, inverse gamma, gamma, uniform and the univariate truncated
//! normal.
//!
//! Everything works in log space. Samplers are deterministic given the RNG
//! stream, so chains seeded identically are replayable.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::Distribution as _;
use statrs::function::erf::{erfc, erfc_inv};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// Von Mises distribution with mean direction `mu` (radians) and
/// concentration `kappa >= 0`. `kappa = 0` is the uniform circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMises {
    pub mu: f64,
    pub kappa: f64,
}

impl VonMises {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: kappa,
                reason: "concentration must be >= 0",
            });
        }
        Ok(Self { mu, kappa })
    }

    /// Normalized log-density `kappa cos(x - mu) - ln(2 pi I0(kappa))`.
    pub fn logpdf(&self, x: f64) -> f64 {
        self.kappa * (x - self.mu).cos() - LN_2PI - log_bessel_i0(self.kappa)
    }

    /// Unnormalized log-density; all the Metropolis ratios need.
    #[inline]
    pub fn log_kernel(&self, x: f64) -> f64 {
        self.kappa * (x - self.mu).cos()
    }
}

/// `ln I0(x)` for the order-zero modified Bessel function of the first kind.
///
/// Power series below 300 (where the series still fits in an f64), the
/// standard large-argument expansion above.
pub fn log_bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x < 300.0 {
        let q = x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..500 {
            term *= q / ((k * k) as f64);
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
        }
        sum.ln()
    } else {
        let inv = 1.0 / x;
        let corr = inv * (0.125 + inv * (9.0 / 128.0 + inv * (225.0 / 3072.0 + inv * 11025.0 / 98304.0)));
        x - 0.5 * (TAU * x).ln() + corr.ln_1p()
    }
}

/// Inverse gamma with shape `sigma0` and scale `sigma1`; mean is
/// `scale / (shape - 1)` for `shape > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvGamma {
    pub shape: f64,
    pub scale: f64,
}

impl InvGamma {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        for (name, v) in [("shape", shape), ("scale", scale)] {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "inverse gamma parameters must be positive",
                });
            }
        }
        Ok(Self { shape, scale })
    }

    pub fn logpdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shape * self.scale.ln() - ln_gamma(self.shape) - (self.shape + 1.0) * x.ln()
            - self.scale / x
    }

    /// Prior mean `scale / (shape - 1)`; `None` when the mean does not exist.
    pub fn mean(&self) -> Option<f64> {
        (self.shape > 1.0).then(|| self.scale / (self.shape - 1.0))
    }

    /// Draws `1 / g` with `g ~ gamma(shape, rate = scale)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let gamma = rand_distr::Gamma::new(self.shape, 1.0 / self.scale)
            .expect("parameters validated at construction");
        1.0 / gamma.sample(rng)
    }
}

/// Gamma in shape-rate form: mean `shape / rate`, variance `shape / rate^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gamma {
    pub shape: f64,
    pub rate: f64,
}

impl Gamma {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        for (name, v) in [("shape", shape), ("rate", rate)] {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "gamma parameters must be positive",
                });
            }
        }
        Ok(Self { shape, rate })
    }

    pub fn logpdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shape * self.rate.ln() - ln_gamma(self.shape) + (self.shape - 1.0) * x.ln()
            - self.rate * x
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }
}

/// Log-density of the uniform distribution on `[lo, hi]`.
pub fn uniform_logpdf(x: f64, lo: f64, hi: f64) -> f64 {
    if x >= lo && x <= hi {
        -(hi - lo).ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Standard normal CDF, accurate in both tails.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal upper-tail probability `P(Z > z)`.
fn normal_tail(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.5 {
        -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p)
    } else {
        std::f64::consts::SQRT_2 * erfc_inv(2.0 * (1.0 - p))
    }
}

fn normal_logpdf_std(z: f64) -> f64 {
    -0.5 * (LN_2PI + z * z)
}

/// Normal distribution restricted to `(lower, upper)` and renormalized.
///
/// Sampling uses the inverse CDF while the interval mass is representable
/// (>= 1e-12) and falls back to a one-sided tail rejection sampler when the
/// interval sits so far in a tail that the mass underflows. Draws are always
/// strictly inside the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncNormal {
    pub mean: f64,
    pub sd: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Interval mass below which inverse-CDF sampling switches to tail rejection.
const MIN_INTERVAL_MASS: f64 = 1e-12;

impl TruncNormal {
    pub fn new(mean: f64, sd: f64, lower: f64, upper: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mean",
                value: mean,
                reason: "location must be finite",
            });
        }
        if !(sd > 0.0 && sd.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "sd",
                value: sd,
                reason: "standard deviation must be positive and finite",
            });
        }
        if !(lower < upper) {
            return Err(Error::InvalidParameter {
                name: "lower",
                value: lower,
                reason: "truncation interval must satisfy lower < upper",
            });
        }
        Ok(Self { mean, sd, lower, upper })
    }

    #[inline]
    fn standardized(&self) -> (f64, f64) {
        (
            (self.lower - self.mean) / self.sd,
            (self.upper - self.mean) / self.sd,
        )
    }

    /// Probability mass of `(lower, upper)` under the untruncated normal,
    /// computed in the smaller tail to avoid cancellation.
    pub fn interval_mass(&self) -> f64 {
        let (a, b) = self.standardized();
        if a >= 0.0 {
            normal_tail(a) - normal_tail(b)
        } else if b <= 0.0 {
            normal_cdf(b) - normal_cdf(a)
        } else {
            // interval straddles the mean; no cancellation concern
            normal_cdf(b) - normal_cdf(a)
        }
    }

    /// CDF of the truncated distribution.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lower {
            return 0.0;
        }
        if x >= self.upper {
            return 1.0;
        }
        let (a, b) = self.standardized();
        let z = (x - self.mean) / self.sd;
        let p = if a >= 0.0 {
            (normal_tail(a) - normal_tail(z)) / (normal_tail(a) - normal_tail(b))
        } else if b <= 0.0 {
            (normal_cdf(z) - normal_cdf(a)) / (normal_cdf(b) - normal_cdf(a))
        } else {
            (normal_cdf(z) - normal_cdf(a)) / self.interval_mass()
        };
        p.clamp(0.0, 1.0)
    }

    /// Normalized log-density inside the interval, `-inf` outside.
    pub fn logpdf(&self, x: f64) -> f64 {
        if x <= self.lower || x >= self.upper {
            return f64::NEG_INFINITY;
        }
        let z = (x - self.mean) / self.sd;
        normal_logpdf_std(z) - self.sd.ln() - self.interval_mass().ln()
    }

    /// Analytic mean of the truncated distribution. Valid while the interval
    /// mass is representable.
    pub fn truncated_mean(&self) -> f64 {
        let (a, b) = self.standardized();
        let phi = |z: f64| (-0.5 * z * z).exp() / (TAU).sqrt();
        self.mean + self.sd * (phi(a) - phi(b)) / self.interval_mass()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (a, b) = self.standardized();
        let mass = self.interval_mass();
        for _ in 0..100 {
            let z = if mass >= MIN_INTERVAL_MASS {
                self.sample_inverse_cdf(a, b, mass, rng)
            } else {
                self.sample_tail_rejection(a, b, rng)
            };
            let x = self.mean + self.sd * z;
            if x > self.lower && x < self.upper {
                return x;
            }
        }
        // Rounding pinned every draw to a bound; the midpoint is the only
        // representable interior choice left.
        0.5 * (self.lower + self.upper)
    }

    fn sample_inverse_cdf<R: Rng + ?Sized>(&self, a: f64, b: f64, mass: f64, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        if a >= 0.0 {
            // work in the upper tail
            let q = normal_tail(a) - u * mass;
            normal_quantile(1.0 - q)
        } else if b <= 0.0 {
            let p = normal_cdf(b) - u * mass;
            normal_quantile(p)
        } else {
            normal_quantile(normal_cdf(a) + u * mass)
        }
    }

    /// Exponential-proposal rejection sampler for a far one-sided tail
    /// (Robert 1995), mirrored for the left tail. The opposite bound is so
    /// deep in the tail that re-proposing past it is effectively free.
    fn sample_tail_rejection<R: Rng + ?Sized>(&self, a: f64, b: f64, rng: &mut R) -> f64 {
        let flip = a < 0.0;
        let (lo, hi) = if flip { (-b, -a) } else { (a, b) };
        let lambda = 0.5 * (lo + (lo * lo + 4.0).sqrt());
        loop {
            let u: f64 = rng.random();
            let z = lo - (1.0 - u).ln() / lambda;
            let d = z - lambda;
            let accept: f64 = rng.random();
            if z <= hi && accept < (-0.5 * d * d).exp() {
                return if flip { -z } else { z };
            }
        }
    }
}
