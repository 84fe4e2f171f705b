//! Dense linear-algebra oracles for the verification suite.
//!
//! Everything here goes through nalgebra factorizations on explicit
//! matrices, deliberately independent of the O(T) paths in the library.

use chirp_core::prelude::*;
use nalgebra::{Cholesky, DMatrix, DVector};

/// Explicit power correlation matrix `phi^|i-j|` with `phi = exp(-rho)`.
pub fn dense_correlation(len: usize, rho: f64) -> DMatrix<f64> {
    let phi = (-rho).exp();
    DMatrix::from_fn(len, len, |i, j| phi.powi((i as i32 - j as i32).abs()))
}

/// Quadratic form `v' C^{-1} v` and `log det C` via dense Cholesky.
pub fn dense_quadform(v: &[f64], rho: f64) -> (f64, f64) {
    let n = v.len();
    let chol = Cholesky::new(dense_correlation(n, rho)).expect("correlation matrix is SPD");
    let x = chol.solve(&DVector::from_column_slice(v));
    let quad = DVector::from_column_slice(v).dot(&x);
    let logdet = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
    (quad, logdet)
}

/// Multivariate normal log-density with dense covariance.
pub fn dense_mvn_loglik(y: &[f64], mean: &[f64], cov: &DMatrix<f64>) -> f64 {
    let n = y.len();
    let chol = Cholesky::new(cov.clone()).expect("covariance is SPD");
    let resid = DVector::from_iterator(n, y.iter().zip(mean).map(|(a, b)| a - b));
    let solved = chol.solve(&resid);
    let quad = resid.dot(&solved);
    let logdet = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
    -0.5 * (n as f64 * (2.0 * std::f64::consts::PI).ln() + logdet + quad)
}

/// Conditional distribution of the last `k` coordinates of a joint Gaussian
/// given the first `n - k` observed values: returns (mean, covariance).
pub fn dense_conditional(
    mean: &[f64],
    cov: &DMatrix<f64>,
    observed: &[f64],
    k: usize,
) -> (DVector<f64>, DMatrix<f64>) {
    let n = mean.len();
    let t = n - k;
    assert_eq!(observed.len(), t);
    let cov11 = cov.view((0, 0), (t, t)).into_owned();
    let cov21 = cov.view((t, 0), (k, t)).into_owned();
    let cov22 = cov.view((t, t), (k, k)).into_owned();
    let chol = Cholesky::new(cov11).expect("observed block is SPD");
    let resid = DVector::from_iterator(t, observed.iter().zip(&mean[..t]).map(|(a, b)| a - b));
    let w = chol.solve(&resid);
    let cond_mean = DVector::from_column_slice(&mean[t..]) + &cov21 * w;
    let cond_cov = &cov22 - &cov21 * chol.solve(&cov21.transpose());
    (cond_mean, cond_cov)
}

/// Sup-distance between the analytic truncated-normal conditional of the
/// amplitude and a quadrature normalization of prior x likelihood on a grid
/// over `(0, m)`. The likelihood is evaluated by the supplied closure so the
/// caller picks an independent route. Composite Simpson handles the cut the
/// truncation bound makes through the density (trapezoid would lose four
/// digits there whenever the mode sits within a couple of sd of zero).
pub fn amplitude_conditional_sup_error(
    cond: &TruncNormal,
    loglik_at_r: impl Fn(f64) -> f64,
    m: f64,
    grid: usize,
) -> f64 {
    let grid = if grid % 2 == 1 { grid } else { grid + 1 };
    let h = m / (grid - 1) as f64;
    let log_vals: Vec<f64> = (0..grid).map(|i| loglik_at_r(i as f64 * h)).collect();
    let max = log_vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = log_vals.iter().map(|v| (v - max).exp()).collect();
    let mut z = scaled[0] + scaled[grid - 1];
    for (i, s) in scaled.iter().enumerate().take(grid - 1).skip(1) {
        z += if i % 2 == 1 { 4.0 * s } else { 2.0 * s };
    }
    z *= h / 3.0;
    // closed-form truncated normal density, valid on the closed interval
    let mass = cond.interval_mass();
    let analytic = |r: f64| {
        let zr = (r - cond.mean) / cond.sd;
        (-0.5 * zr * zr).exp() / ((2.0 * std::f64::consts::PI).sqrt() * cond.sd * mass)
    };
    let mut sup = 0.0_f64;
    for (i, s) in scaled.iter().enumerate() {
        let r = i as f64 * h;
        sup = sup.max((s / z - analytic(r)).abs());
    }
    sup
}
