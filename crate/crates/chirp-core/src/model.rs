//! Chirp signal mean function and amplitude parameterizations.
//!
//! The noiseless signal at time `t` (1-indexed) is
//!
//! ```text
//! mu_t = A cos(alpha t + beta t^2) + B sin(alpha t + beta t^2)
//!      = r cos(theta) cos(alpha t + beta t^2) + r sin(theta) sin(alpha t + beta t^2)
//! ```
//!
//! with `A = r cos(theta)`, `B = r sin(theta)`. The polar form `(r, theta)`
//! is what the sampler works in; `(A, B)` is the reporting view.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Chirp parameters in polar amplitude form.
///
/// `r` is the amplitude magnitude, `theta` the phase angle in `[0, 2pi]`,
/// `alpha` the frequency and `beta` the chirp rate, both in `(0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpParams {
    pub r: f64,
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Cartesian amplitude view of the polar pair `(r, theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudePair {
    pub a: f64,
    pub b: f64,
}

impl ChirpParams {
    /// Validates against the parameter space: `0 <= r < m`, `0 <= theta <= 2pi`,
    /// `alpha, beta` in `(0, pi)`.
    pub fn new(r: f64, theta: f64, alpha: f64, beta: f64, m: f64) -> Result<Self> {
        if !(m > 0.0) {
            return Err(Error::InvalidParameter {
                name: "m",
                value: m,
                reason: "amplitude bound must be positive",
            });
        }
        if !(0.0..m).contains(&r) {
            return Err(Error::InvalidParameter {
                name: "r",
                value: r,
                reason: "must satisfy 0 <= r < m",
            });
        }
        if !(0.0..=TAU).contains(&theta) {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "must lie in [0, 2pi]",
            });
        }
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v > 0.0 && v < PI) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must lie in (0, pi)",
                });
            }
        }
        Ok(Self { r, theta, alpha, beta })
    }

    /// Phase `alpha t + beta t^2` at time `t` (1-indexed).
    #[inline]
    pub fn phase(&self, t: usize) -> f64 {
        let tf = t as f64;
        self.alpha * tf + self.beta * tf * tf
    }

    /// The `(A, B)` view of the amplitude.
    pub fn amplitudes(&self) -> AmplitudePair {
        polar_to_amp(self.r, self.theta)
    }
}

/// Signal mean `mu_t` at time `t` (1-indexed).
#[inline]
pub fn chirp_mean(params: &ChirpParams, t: usize) -> f64 {
    let phase = params.phase(t);
    params.r * (params.theta.cos() * phase.cos() + params.theta.sin() * phase.sin())
}

/// Mean vector `(mu_1, ..., mu_T)`.
pub fn mean_vector(params: &ChirpParams, len: usize) -> Vec<f64> {
    let b = basis_vector(params, len);
    b.into_iter().map(|bt| params.r * bt).collect()
}

/// Unit-amplitude basis `b_t = cos(theta) cos(phase_t) + sin(theta) sin(phase_t)`,
/// so that `mu_t = r * b_t`.
pub fn basis_vector(params: &ChirpParams, len: usize) -> Vec<f64> {
    let (sin_th, cos_th) = params.theta.sin_cos();
    (1..=len)
        .map(|t| {
            let (s, c) = params.phase(t).sin_cos();
            cos_th * c + sin_th * s
        })
        .collect()
}

/// `(A, B) = (r cos(theta), r sin(theta))`.
pub fn polar_to_amp(r: f64, theta: f64) -> AmplitudePair {
    let (sin_th, cos_th) = theta.sin_cos();
    AmplitudePair {
        a: r * cos_th,
        b: r * sin_th,
    }
}

/// Inverse transform: `r = sqrt(A^2 + B^2)`, `theta = atan2(B, A)` reduced
/// into `[0, 2pi)`.
///
/// The degenerate origin `(0, 0)` maps to `(r = 0, theta = 0)`; the mean
/// function is identically zero there, so the convention is harmless.
pub fn amp_to_polar(a: f64, b: f64) -> (f64, f64) {
    if a == 0.0 && b == 0.0 {
        return (0.0, 0.0);
    }
    let r = a.hypot(b);
    let theta = b.atan2(a).rem_euclid(TAU);
    (r, theta)
}

/// Reduce an angle into `[0, 2pi)`.
#[inline]
pub fn wrap_angle(x: f64) -> f64 {
    x.rem_euclid(TAU)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(r: f64, theta: f64, alpha: f64, beta: f64) -> ChirpParams {
        ChirpParams { r, theta, alpha, beta }
    }

    #[test]
    fn zero_amplitude_gives_zero_mean() {
        let p = params(0.0, 1.0, 1.0, 1.0);
        assert_eq!(chirp_mean(&p, 7), 0.0);
    }

    #[test]
    fn theta_zero_reduces_to_cosine() {
        // theta = 0 makes B = 0 and mu_1 = r cos(alpha + beta).
        let p = params(2.0, 0.0, 1.0, 0.5);
        let expect = 0.141_474_403_335_405_82; // 2 cos(1.5)
        assert!((chirp_mean(&p, 1) - expect).abs() < 1e-15);
    }

    #[test]
    fn matches_cartesian_evaluation() {
        // r, theta from A = 2.0, B = 1.25; direct evaluation of the
        // Cartesian form A cos(phase) + B sin(phase) at t = 1 is the oracle.
        let (r, theta) = amp_to_polar(2.0, 1.25);
        let p = params(r, theta, 1.75, 1.05);
        let expect = -1.465_709_493_642_435_2;
        assert!((chirp_mean(&p, 1) - expect).abs() < 1e-13);
    }

    #[test]
    fn mean_vector_is_linear_in_r() {
        let p = params(2.7, 1.3, 0.8, 0.2);
        let unit = params(1.0, 1.3, 0.8, 0.2);
        let mv = mean_vector(&p, 12);
        let bv = mean_vector(&unit, 12);
        for (m, b) in mv.iter().zip(&bv) {
            assert_eq!(*m, p.r * b);
        }
    }

    #[test]
    fn mean_vector_single_point() {
        let p = params(1.5, 0.4, 1.1, 0.9);
        assert_eq!(mean_vector(&p, 1), vec![chirp_mean(&p, 1)]);
    }

    #[test]
    fn basis_relation_holds() {
        let p = params(3.0, 5.9, 2.2, 0.01);
        let mv = mean_vector(&p, 30);
        let bv = basis_vector(&p, 30);
        for (m, b) in mv.iter().zip(&bv) {
            assert_eq!(*m, p.r * b);
        }
    }

    #[test]
    fn polar_round_trip() {
        let amp = polar_to_amp(2.0, 0.0);
        assert_eq!((amp.a, amp.b), (2.0, 0.0));

        let (r, theta) = amp_to_polar(1.5, 1.5);
        assert!((r - 4.5_f64.sqrt()).abs() < 1e-15);
        assert!((theta - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn amp_to_polar_matches_arithmetic() {
        let (r, theta) = amp_to_polar(2.93, 1.91);
        assert!((r - 3.497_570_585_420_686).abs() < 1e-14);
        assert!((theta - 0.577_693_690_401_324_3).abs() < 1e-14);
    }

    #[test]
    fn degenerate_origin() {
        assert_eq!(amp_to_polar(0.0, 0.0), (0.0, 0.0));
    }

    #[test]
    fn mean_bounded_by_amplitude() {
        let p = params(1.9, 2.3, 1.2, 0.7);
        for t in 1..=200 {
            assert!(chirp_mean(&p, t).abs() <= p.r + 1e-12);
        }
    }

    #[test]
    fn theta_periodicity() {
        let p = params(1.2, 0.7, 0.9, 0.3);
        let shifted = params(1.2, 0.7 + TAU, 0.9, 0.3);
        for t in 1..=20 {
            assert!((chirp_mean(&p, t) - chirp_mean(&shifted, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn validation_rejects_out_of_space() {
        assert!(ChirpParams::new(-0.1, 0.0, 1.0, 1.0, 100.0).is_err());
        assert!(ChirpParams::new(100.0, 0.0, 1.0, 1.0, 100.0).is_err());
        assert!(ChirpParams::new(1.0, 7.0, 1.0, 1.0, 100.0).is_err());
        assert!(ChirpParams::new(1.0, 0.0, 0.0, 1.0, 100.0).is_err());
        assert!(ChirpParams::new(1.0, 0.0, 1.0, PI, 100.0).is_err());
        assert!(ChirpParams::new(1.0, 0.0, 1.0, 1.0, 100.0).is_ok());
    }
}
