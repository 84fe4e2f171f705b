//! Shared fixtures for the benchmark suite.

use chirp_core::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub y: Vec<f64>,
    pub params: ChirpParams,
    pub priors: PriorConfig,
}

/// A seeded series with known parameters, shared by every benchmark.
pub fn fixture(len: usize, rho: Option<f64>) -> Fixture {
    let (r, theta) = amp_to_polar(2.0, 1.25);
    let params = ChirpParams { r, theta, alpha: 1.75, beta: 1.05 };
    let noise = match rho {
        None => NoiseModel::iid(0.5).unwrap(),
        Some(rho) => NoiseModel::dependent(0.5, rho).unwrap(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let y = simulate_series(&params, &noise, len, &mut rng).unwrap();
    let priors = PriorConfig { alpha0: 1.75, beta0: 1.05, ..Default::default() };
    Fixture { y, params, priors }
}
