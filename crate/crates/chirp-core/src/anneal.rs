//! Initializers for the angular parameters.
//!
//! Two routes produce starting values (and von Mises mean directions) for
//! `alpha` and `beta`:
//!
//! * [`anneal_init`] — simulated annealing on the profile log-likelihood of
//!   one angle with the other held fixed. Cheap, and adequate whenever the
//!   fixed angle is already close.
//! * [`scan_init`] — a dechirped ambiguity scan over `(alpha, beta)`
//!   jointly. The chirp likelihood concentrates in a ridge whose width in
//!   `beta` shrinks like `1/T^2`; single-angle searches cannot find it
//!   unless the other angle is essentially known, so the scan sweeps a
//!   `beta` grid at that resolution, takes the strongest dechirped frequency
//!   for each candidate, and polishes the winner coordinate-wise.
//!
//! In both cases the linear amplitudes are profiled out by least squares, so
//! the objectives depend on the angles alone.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution as _, StandardNormal};

use crate::error::{Error, Result};

/// Which angular parameter a run optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnealTarget {
    Alpha,
    Beta,
}

/// Outcome of one annealing run.
#[derive(Debug, Clone)]
pub struct AnnealResult {
    /// Best value found, in `(0, pi)`.
    pub value: f64,
    /// Best-so-far profile log-likelihood after each iteration
    /// (non-decreasing by construction).
    pub best_history: Vec<f64>,
}

/// Profile log-likelihood of `(alpha, beta)`: amplitudes solved by least
/// squares, variance profiled out, constants dropped.
pub fn profile_loglik(y: &[f64], alpha: f64, beta: f64) -> f64 {
    let (_, _, mean_ssr) = profile_amplitudes(y, alpha, beta);
    -0.5 * y.len() as f64 * mean_ssr.max(1e-290).ln()
}

/// Geometric cooling schedule: temperature `0.9^k` at iteration `k`.
const COOLING: f64 = 0.9;
/// Proposal standard deviation for the angular perturbation.
const STEP_SD: f64 = 0.2;

/// Runs `n_steps` annealing iterations for the chosen target, with the other
/// angle fixed at `other`. Starts at a uniform random point in `(0, pi)`;
/// `n_steps = 0` returns that point untouched.
pub fn anneal_init<R: Rng + ?Sized>(
    y: &[f64],
    target: AnnealTarget,
    other: f64,
    n_steps: usize,
    rng: &mut R,
) -> Result<f64> {
    Ok(anneal_run(y, target, other, n_steps, rng)?.value)
}

/// As [`anneal_init`] but keeps the best-so-far trace.
pub fn anneal_run<R: Rng + ?Sized>(
    y: &[f64],
    target: AnnealTarget,
    other: f64,
    n_steps: usize,
    rng: &mut R,
) -> Result<AnnealResult> {
    if y.is_empty() {
        return Err(Error::EmptySeries);
    }
    let objective = |x: f64| match target {
        AnnealTarget::Alpha => profile_loglik(y, x, other),
        AnnealTarget::Beta => profile_loglik(y, other, x),
    };

    let mut current = rng.random_range(f64::MIN_POSITIVE..PI);
    let mut f_current = objective(current);
    let mut best = current;
    let mut f_best = f_current;
    let mut best_history = Vec::with_capacity(n_steps);

    let mut temperature = 1.0;
    for _ in 0..n_steps {
        if let Some(candidate) = propose_in_range(current, rng) {
            let f_candidate = objective(candidate);
            let accept = f_candidate >= f_current || {
                let u: f64 = rng.random();
                u.ln() * temperature < f_candidate - f_current
            };
            if accept {
                current = candidate;
                f_current = f_candidate;
                if f_current > f_best {
                    best = current;
                    f_best = f_current;
                }
            }
        }
        best_history.push(f_best);
        temperature *= COOLING;
    }
    Ok(AnnealResult { value: best, best_history })
}

/// Gaussian perturbation resampled until it lands back in `(0, pi)`.
fn propose_in_range<R: Rng + ?Sized>(current: f64, rng: &mut R) -> Option<f64> {
    for _ in 0..100 {
        let z: f64 = StandardNormal.sample(rng);
        let cand = current + STEP_SD * z;
        if cand > 0.0 && cand < PI {
            return Some(cand);
        }
    }
    None
}

/// Joint `(alpha, beta)` estimate from a dechirped ambiguity scan.
///
/// For every `beta` on a grid of spacing ~`pi / (2.4 T^2)` the series is
/// dechirped by `exp(-i beta t^2)` and the strongest remaining frequency is
/// located on an `alpha` grid of spacing ~`pi / (2.5 T)`. The grids match
/// the main-lobe widths of the chirp ambiguity surface, so the global peak
/// cannot fall between grid points; a coordinate-wise profile-likelihood
/// polish then sharpens the winner well inside the dominant ridge.
///
/// Work grows like `T^3` (grid densities scale with `T^2` and `T`), which is
/// a second or two at `T = 100`. For series much longer than a few hundred
/// points, estimate on a window first.
pub fn scan_init(y: &[f64]) -> Result<(f64, f64)> {
    if y.len() < 4 {
        return Err(Error::SeriesTooShort { len: y.len(), min: 4 });
    }
    let t_len = y.len();
    let n_beta = (2.4 * (t_len * t_len) as f64).ceil() as usize;
    let n_alpha = ((2.5 * t_len as f64).ceil() as usize).max(64);

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut dechirped = vec![(0.0, 0.0); t_len];
    let alpha_step = PI / n_alpha as f64;
    for bi in 1..n_beta {
        let beta = PI * bi as f64 / n_beta as f64;
        for (i, d) in dechirped.iter_mut().enumerate() {
            let tf = (i + 1) as f64;
            let (s, c) = (beta * tf * tf).sin_cos();
            *d = (y[i] * c, -y[i] * s);
        }
        for ai in 1..n_alpha {
            let alpha = alpha_step * ai as f64;
            // direct DFT bin at this frequency, phase recurrence over t
            let (step_sin, step_cos) = alpha.sin_cos();
            let (mut w_re, mut w_im) = (step_cos, -step_sin);
            let (mut re, mut im) = (0.0, 0.0);
            for &(dre, dim) in &dechirped {
                re += dre * w_re - dim * w_im;
                im += dre * w_im + dim * w_re;
                let next_re = w_re * step_cos + w_im * step_sin;
                let next_im = w_im * step_cos - w_re * step_sin;
                w_re = next_re;
                w_im = next_im;
            }
            let energy = re * re + im * im;
            if energy > best.0 {
                best = (energy, alpha, beta);
            }
        }
    }

    let (_, coarse_alpha, coarse_beta) = best;

    // Polish on the exact profile log-likelihood. The raw (alpha, beta)
    // surface is a narrow diagonal ridge (a beta error drags the alpha
    // optimum along with it), so coordinate moves are taken in decoupled
    // coordinates: the mid-series instantaneous frequency
    // omega = alpha + 2 beta t_mid, and beta at fixed omega.
    let t_mid = 0.5 * (t_len as f64 + 1.0);
    let t2 = (t_len * t_len) as f64;
    let mut omega = coarse_alpha + 2.0 * coarse_beta * t_mid;
    let mut beta = coarse_beta;
    let alpha_of = |omega: f64, beta: f64| omega - 2.0 * beta * t_mid;
    let in_space = |alpha: f64, beta: f64| alpha > 0.0 && alpha < PI && beta > 0.0 && beta < PI;
    // two passes at full width walk the remaining ridge, then the windows
    // shrink to sharpen the optimum well below the coarse resolution
    for scale in [1.0, 1.0, 0.05, 0.0025] {
        omega = line_max(
            |w| {
                let a = alpha_of(w, beta);
                if in_space(a, beta) {
                    profile_loglik(y, a, beta)
                } else {
                    f64::NEG_INFINITY
                }
            },
            omega,
            scale * PI / (1.2 * t_len as f64),
            600,
        );
        beta = line_max(
            |b| {
                let a = alpha_of(omega, b);
                if in_space(a, b) {
                    profile_loglik(y, a, b)
                } else {
                    f64::NEG_INFINITY
                }
            },
            beta,
            scale * 4.0 * PI / t2,
            800,
        );
    }
    let alpha = alpha_of(omega, beta);
    if !in_space(alpha, beta) {
        // the polish slid against the edge of the space; the raw grid winner
        // is always inside
        return Ok((coarse_alpha, coarse_beta));
    }
    Ok((alpha, beta))
}

/// Least-squares amplitudes `(A, B)` at fixed angles, plus the residual
/// variance of that fit. Matches the internal profiling of
/// [`profile_loglik`], so the returned triple describes the profile optimum
/// at `(alpha, beta)`.
pub fn profile_amplitudes(y: &[f64], alpha: f64, beta: f64) -> (f64, f64, f64) {
    let (mut cc, mut cs, mut ss, mut yc, mut ys, mut yy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, &yt) in y.iter().enumerate() {
        let tf = (i + 1) as f64;
        let (s, c) = (alpha * tf + beta * tf * tf).sin_cos();
        cc += c * c;
        cs += c * s;
        ss += s * s;
        yc += yt * c;
        ys += yt * s;
        yy += yt * yt;
    }
    let ridge = 1e-12 * (cc + ss).max(1.0);
    let det = (cc + ridge) * (ss + ridge) - cs * cs;
    let a = (yc * (ss + ridge) - cs * ys) / det;
    let b = ((cc + ridge) * ys - cs * yc) / det;
    let ssr = (yy - a * yc - b * ys).max(0.0);
    (a, b, ssr / y.len() as f64)
}

/// The reflected mode of the exact sampling-time symmetry
/// `(A, B, alpha, beta) -> (A, -B, pi - alpha, pi - beta)`.
///
/// At integer times `pi t (t + 1)` is a multiple of `2 pi`, so both angle
/// pairs produce identical mean functions (with the sine amplitude negated).
/// Scans and likelihood maximizers land on either reflection at random;
/// callers with informative angular priors should keep whichever of
/// `(alpha, beta)` / `mirror_mode(alpha, beta)` the prior favors.
pub fn mirror_mode(alpha: f64, beta: f64) -> (f64, f64) {
    (PI - alpha, PI - beta)
}

/// Maximum of `f` on a fine grid of `2 n + 1` points spanning
/// `center ± half_width`. The objective handles its own support.
fn line_max(f: impl Fn(f64) -> f64, center: f64, half_width: f64, n: usize) -> f64 {
    let mut best = (f(center), center);
    for i in 1..=n {
        let off = half_width * i as f64 / n as f64;
        for x in [center - off, center + off] {
            let v = f(x);
            if v > best.0 {
                best = (v, x);
            }
        }
    }
    best.1
}
