//! Tail probabilities used by the diagnostics and the calibration checks.

use crate::error::{Error, Result};

/// Upper tail `P(X >= x)` of a chi-square variable with `df` degrees of freedom.
pub fn chi_square_sf(x: f64, df: f64) -> Result<f64> {
    if !(df > 0.0) {
        return Err(Error::InvalidArgument(format!("degrees of freedom must be > 0, got {df}")));
    }
    if x <= 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(statrs::function::gamma::gamma_ur(0.5 * df, 0.5 * x).clamp(0.0, 1.0))
}

/// Limiting Kolmogorov tail `P(sup |B(t)| > lambda)` for a Brownian bridge.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.2 {
        // The alternating series converges slowly here and the tail is 1 to
        // machine precision.
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Critical value of the one-sample K-S distance at level `alpha` for sample
/// size `n`, using the limiting law with Stephens' finite-n correction.
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    assert!(n > 0 && alpha > 0.0 && alpha < 1.0);
    let (mut lo, mut hi) = (0.2_f64, 5.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let sn = (n as f64).sqrt();
    lambda / (sn + 0.12 + 0.11 / sn)
}

/// `ln k!` for `k = 0..=n`.
pub fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}
