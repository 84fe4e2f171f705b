//! Synthetic series generation from the chirp model.

use rand::Rng;
use rand_distr::{Distribution as _, StandardNormal};

use crate::error::Result;
use crate::likelihood::NoiseModel;
use crate::model::{chirp_mean, ChirpParams};

/// Simulates `y_1..y_len` from the chirp mean plus Gaussian noise.
///
/// Independent mode draws each error fresh; dependent mode runs the
/// stationary AR(1) recursion `e_t = phi e_{t-1} + sqrt(sigma2 (1 - phi^2)) z_t`
/// with `phi = exp(-rho)` and a stationary `e_1 ~ N(0, sigma2)`.
pub fn simulate_series<R: Rng + ?Sized>(
    params: &ChirpParams,
    noise: &NoiseModel,
    len: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let sigma = noise.sigma2.sqrt();
    let mut out = Vec::with_capacity(len);
    match noise.rho {
        None => {
            for t in 1..=len {
                let z: f64 = StandardNormal.sample(rng);
                out.push(chirp_mean(params, t) + sigma * z);
            }
        }
        Some(rho) => {
            let phi = (-rho).exp();
            let innov_sd = sigma * (1.0 - phi * phi).sqrt();
            let mut e = 0.0;
            for t in 1..=len {
                let z: f64 = StandardNormal.sample(rng);
                e = if t == 1 { sigma * z } else { phi * e + innov_sd * z };
                out.push(chirp_mean(params, t) + e);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::amp_to_polar;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn noiseless_series_is_exact_signal() {
        let p = ChirpParams { r: 2.0, theta: 0.3, alpha: 1.0, beta: 0.5 };
        // sigma2 may not be zero in NoiseModel, so build directly
        let noise = NoiseModel { sigma2: 1e-300, rho: None };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let y = simulate_series(&p, &noise, 25, &mut rng).unwrap();
        for (t, v) in y.iter().enumerate() {
            assert!((v - chirp_mean(&p, t + 1)).abs() < 1e-140);
        }
    }

    #[test]
    fn simulated_sample_has_expected_shape() {
        // A = B = 1.5, alpha = beta = 1.0, sigma = sqrt(0.5), 101 points
        let (r, theta) = amp_to_polar(1.5, 1.5);
        let p = ChirpParams { r, theta, alpha: 1.0, beta: 1.0 };
        let noise = NoiseModel::iid(0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let y = simulate_series(&p, &noise, 101, &mut rng).unwrap();
        assert_eq!(y.len(), 101);
        // amplitude bound plus a generous noise allowance
        assert!(y.iter().all(|v| v.abs() < p.r + 6.0));
        let mean_abs_resid = y
            .iter()
            .enumerate()
            .map(|(i, v)| (v - chirp_mean(&p, i + 1)).abs())
            .sum::<f64>()
            / 101.0;
        // E|N(0, 0.5)| = sqrt(2 * 0.5 / pi) ~ 0.564
        assert!((mean_abs_resid - 0.564).abs() < 0.2);
    }

    #[test]
    fn dependent_residual_autocorrelation() {
        // phi = exp(-ln 2) = 0.5: lag-1 residual autocorrelation ~ 0.5
        let p = ChirpParams { r: 2.0, theta: 1.0, alpha: 1.5, beta: 0.2 };
        let rho = 2.0_f64.ln();
        let noise = NoiseModel::dependent(1.0, rho).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 100_000;
        let y = simulate_series(&p, &noise, n, &mut rng).unwrap();
        let resid: Vec<f64> = y
            .iter()
            .enumerate()
            .map(|(i, v)| v - chirp_mean(&p, i + 1))
            .collect();
        let mean = resid.iter().sum::<f64>() / n as f64;
        let var: f64 = resid.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / n as f64;
        let cov: f64 = resid
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>()
            / (n - 1) as f64;
        let acf1 = cov / var;
        let se = ((1.0 - 0.25) / n as f64).sqrt();
        assert!(
            (acf1 - 0.5).abs() < 3.0 * se,
            "lag-1 acf {acf1}, tolerance {}",
            3.0 * se
        );
    }
}
