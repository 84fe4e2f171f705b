//! Gaussian log-likelihood of the observed series under independent errors
//! and under exponentially decaying error correlation.
//!
//! The dependent-error correlation matrix has entries `phi^|i-j|` with
//! `phi = exp(-rho)` (a Kac-Murdock-Szego matrix). Its inverse is
//! tridiagonal, which is the same thing as AR(1) whitening: quadratic forms
//! and the log-determinant cost O(T) instead of O(T^3).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{mean_vector, ChirpParams};

/// Error structure: variance `sigma2`, plus an optional decay rate `rho`.
/// `rho = None` means i.i.d. errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub sigma2: f64,
    pub rho: Option<f64>,
}

impl NoiseModel {
    pub fn iid(sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "sigma2",
                value: sigma2,
                reason: "error variance must be positive",
            });
        }
        Ok(Self { sigma2, rho: None })
    }

    pub fn dependent(sigma2: f64, rho: f64) -> Result<Self> {
        let mut m = Self::iid(sigma2)?;
        if !(rho > 0.0) {
            return Err(Error::NonPositiveRho(rho));
        }
        m.rho = Some(rho);
        Ok(m)
    }
}

/// The `T x T` power correlation matrix with `a_ij = phi^|i-j|`,
/// `phi = exp(-rho)`, held implicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmsCorrelation {
    len: usize,
    phi: f64,
}

impl KmsCorrelation {
    pub fn new(len: usize, rho: f64) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptySeries);
        }
        if !(rho > 0.0) {
            return Err(Error::NonPositiveRho(rho));
        }
        Ok(Self { len, phi: (-rho).exp() })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `log det` of the correlation matrix: `(T-1) ln(1 - phi^2)`.
    pub fn log_det(&self) -> f64 {
        (self.len as f64 - 1.0) * (1.0 - self.phi * self.phi).ln()
    }

    /// `u' C^{-1} v` through the AR(1) whitening identity:
    /// `u1 v1 + sum_{t>=2} (u_t - phi u_{t-1})(v_t - phi v_{t-1}) / (1 - phi^2)`.
    pub fn cross_quadform(&self, u: &[f64], v: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.len);
        debug_assert_eq!(v.len(), self.len);
        let phi = self.phi;
        let denom = 1.0 - phi * phi;
        let mut total = u[0] * v[0];
        for t in 1..self.len {
            total += (u[t] - phi * u[t - 1]) * (v[t] - phi * v[t - 1]) / denom;
        }
        total
    }

    /// `v' C^{-1} v`.
    pub fn quadform(&self, v: &[f64]) -> f64 {
        self.cross_quadform(v, v)
    }
}

/// Quadratic form `v' C^{-1} v` and `log det C` for the power correlation
/// matrix with decay `rho`, in O(T).
pub fn kms_quadform(v: &[f64], rho: f64) -> Result<(f64, f64)> {
    if v.is_empty() {
        return Err(Error::EmptySeries);
    }
    let corr = KmsCorrelation::new(v.len(), rho)?;
    Ok((corr.quadform(v), corr.log_det()))
}

const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// Log-likelihood under independent N(0, sigma2) errors.
pub fn loglik_iid(y: &[f64], params: &ChirpParams, sigma2: f64) -> Result<f64> {
    if y.is_empty() {
        return Err(Error::EmptySeries);
    }
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sigma2",
            value: sigma2,
            reason: "error variance must be positive",
        });
    }
    let mu = mean_vector(params, y.len());
    let ssr: f64 = y.iter().zip(&mu).map(|(yt, mt)| (yt - mt) * (yt - mt)).sum();
    let t = y.len() as f64;
    Ok(-0.5 * t * (LN_2PI + sigma2.ln()) - 0.5 * ssr / sigma2)
}

/// Log-likelihood under exponentially correlated errors with covariance
/// `sigma2 * phi^|i-j|`.
pub fn loglik_dep(y: &[f64], params: &ChirpParams, noise: &NoiseModel) -> Result<f64> {
    let rho = noise.rho.ok_or(Error::NonPositiveRho(0.0))?;
    if y.is_empty() {
        return Err(Error::EmptySeries);
    }
    let corr = KmsCorrelation::new(y.len(), rho)?;
    let mu = mean_vector(params, y.len());
    let resid: Vec<f64> = y.iter().zip(&mu).map(|(yt, mt)| yt - mt).collect();
    let quad = corr.quadform(&resid);
    let t = y.len() as f64;
    Ok(-0.5 * t * (LN_2PI + noise.sigma2.ln()) - 0.5 * corr.log_det() - 0.5 * quad / noise.sigma2)
}
