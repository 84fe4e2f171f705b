//! Chain summaries: quantiles, effective sample size and
//! Kolmogorov-Smirnov statistics used by the verification suites.

/// Quantile by linear interpolation at rank `n p + 1/2` (the Hazen
/// definition). The same rule backs every credible interval in the crate, so
/// exported summaries are reproducible from the draw files.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty slice");
    let n = sorted.len();
    let h = n as f64 * p + 0.5;
    let h = h.clamp(1.0, n as f64);
    let idx = h.floor() as usize;
    let frac = h - idx as f64;
    if idx >= n {
        return sorted[n - 1];
    }
    let lo = sorted[idx - 1];
    if frac == 0.0 || idx == n {
        lo
    } else {
        lo + frac * (sorted[idx] - lo)
    }
}

/// Effective sample size from the autocorrelation function, truncated with
/// Geyer's initial-positive-sequence rule. Returns `None` for a constant
/// (degenerate) column.
pub fn effective_sample_size(draws: &[f64]) -> Option<f64> {
    let n = draws.len();
    if n < 4 {
        return None;
    }
    let nf = n as f64;
    let mean = draws.iter().sum::<f64>() / nf;
    let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / nf;
    if var <= 0.0 || !var.is_finite() {
        return None;
    }

    let max_lag = n / 2;
    let autocorr = |lag: usize| -> f64 {
        let mut acc = 0.0;
        for t in 0..n - lag {
            acc += (draws[t] - mean) * (draws[t + lag] - mean);
        }
        acc / nf / var
    };

    // sum of paired autocorrelations while the pairs stay positive
    let mut tau = 1.0;
    let mut lag = 1;
    while lag + 1 < max_lag {
        let pair = autocorr(lag) + autocorr(lag + 1);
        if pair <= 0.0 {
            break;
        }
        tau += 2.0 * pair;
        lag += 2;
    }
    Some((nf / tau).min(nf))
}

/// One-sample Kolmogorov-Smirnov statistic of sorted draws against a CDF.
pub fn ks_statistic_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

/// Two-sample Kolmogorov-Smirnov statistic; both inputs must be sorted.
pub fn ks_two_sample_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Critical value of the two-sample KS statistic at the 1% level.
pub fn ks_two_sample_critical_1pct(na: usize, nb: usize) -> f64 {
    let (na, nb) = (na as f64, nb as f64);
    1.628 * ((na + nb) / (na * nb)).sqrt()
}

/// Critical value of the one-sample KS statistic at the 1% level.
pub fn ks_one_sample_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}
