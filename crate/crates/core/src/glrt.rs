//! Generalised likelihood-ratio statistic for a two-level multiplicative
//! change in the intensity of `B` within `tau` of the events of `A`.
//!
//! After the u-value transform the problem is a change-point search on
//! `[0, 1)`: for each rank `k` the profile likelihood ratio is
//!
//! ```text
//! l_k = ((k/n) / u_k)^(k/n) * (((n-k)/n) / (1 - u_k))^((n-k)/n)
//! ```
//!
//! maximized over ranks with `u_k <= k/n` (and `u_k <= u_max` when `tau` is
//! capped). Everything is kept on the log scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactp;
use crate::measure::{anchor_to_source, transform, Mode, NullIntensity, PointPattern, TransformedSample};

/// `ln l_k` for rank `k` of `n` at u-value `u`. Zero at `u = k/n`, `+inf` at
/// `u = 0`; the `(n-k)/n` term vanishes when `k = n`.
pub fn log_ell(k: usize, n: usize, u: f64) -> f64 {
    debug_assert!(k >= 1 && k <= n);
    let p = k as f64 / n as f64;
    if u <= 0.0 {
        return f64::INFINITY;
    }
    let head = p * (p / u).ln();
    if k == n {
        return head;
    }
    let q = 1.0 - p;
    if u >= 1.0 {
        return f64::INFINITY;
    }
    head + q * (q / (1.0 - u)).ln()
}

/// Result of maximizing `l_k` over the feasible ranks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximization {
    /// 1-based maximizing rank; `None` when no rank is feasible.
    pub k_hat: Option<usize>,
    pub log_t: f64,
    /// Rate inside the region per unit null mass; `+inf` when `u_{k_hat} = 0`.
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
}

/// Maximizes `l_k`. Ties resolve to the smallest `k`.
pub fn maximize(sample: &TransformedSample) -> Result<Maximization> {
    let n = sample.n();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let cap = sample.u_max.unwrap_or(f64::INFINITY);
    let mut best: Option<(usize, f64)> = None;
    for (i, &u) in sample.u.iter().enumerate() {
        let k = i + 1;
        if u > k as f64 / n as f64 || u > cap {
            continue;
        }
        let v = log_ell(k, n, u);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((k, v));
        }
    }
    Ok(match best {
        None => Maximization {
            k_hat: None,
            log_t: 0.0,
            lambda1: None,
            lambda2: None,
        },
        Some((k, v)) => {
            let u = sample.u[k - 1];
            let lambda1 = if u == 0.0 { f64::INFINITY } else { k as f64 / u };
            let lambda2 = if k == n { 0.0 } else { (n - k) as f64 / (1.0 - u) };
            Maximization {
                k_hat: Some(k),
                log_t: v.max(0.0),
                lambda1: Some(lambda1),
                lambda2: Some(lambda2),
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct TestOptions {
    pub mode: Mode,
    /// Upper limit on the response range `tau`, in the units of the data.
    pub tau_max: Option<f64>,
}

impl TestOptions {
    pub fn triggering() -> Self {
        Self { mode: Mode::Triggering, tau_max: None }
    }

    pub fn correlation() -> Self {
        Self { mode: Mode::Correlation, tau_max: None }
    }

    pub fn with_tau_max(mut self, tau_max: f64) -> Self {
        self.tau_max = Some(tau_max);
        self
    }
}

/// Data conditions under which the exact null result does not apply cleanly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Degeneracy {
    /// u-values equal to zero (response event coincident with its source, or
    /// a region of zero null mass).
    pub zero_u: usize,
    /// `lambda1_hat` is infinite.
    pub infinite_rate: bool,
    /// The supplied intensity did not integrate to one and was rescaled.
    pub intensity_rescaled: bool,
    /// `B` events dropped for preceding the first `A` event.
    pub clipped_events: usize,
}

impl Degeneracy {
    pub fn any(&self) -> bool {
        self.zero_u > 0 || self.infinite_rate || self.intensity_rescaled || self.clipped_events > 0
    }
}

/// Outcome of one test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlrOutcome {
    pub mode: Mode,
    pub n: usize,
    #[serde(with = "crate::json_float::option")]
    pub tau_max: Option<f64>,
    #[serde(with = "crate::json_float::option")]
    pub u_max: Option<f64>,
    /// `ln T`; `+inf` for degenerate samples.
    #[serde(with = "crate::json_float")]
    pub log_t: f64,
    pub k_hat: Option<usize>,
    #[serde(with = "crate::json_float::option")]
    pub tau_hat: Option<f64>,
    #[serde(with = "crate::json_float::option")]
    pub lambda1_hat: Option<f64>,
    #[serde(with = "crate::json_float::option")]
    pub lambda2_hat: Option<f64>,
    pub p_value: f64,
    pub degeneracy: Degeneracy,
}

impl GlrOutcome {
    /// `T` itself; may overflow to `+inf` where `log_t` does not.
    pub fn statistic(&self) -> f64 {
        self.log_t.exp()
    }
}

/// Maximizes the statistic for a transformed sample and attaches the exact
/// p-value.
pub fn evaluate(sample: &TransformedSample, tau_max: Option<f64>) -> Result<GlrOutcome> {
    let n = sample.n();
    let mut degeneracy = Degeneracy {
        zero_u: sample.zero_count,
        ..Degeneracy::default()
    };
    if n == 0 {
        return Ok(GlrOutcome {
            mode: sample.mode,
            n,
            tau_max,
            u_max: sample.u_max,
            log_t: 0.0,
            k_hat: None,
            tau_hat: None,
            lambda1_hat: None,
            lambda2_hat: None,
            p_value: 1.0,
            degeneracy,
        });
    }
    let fit = maximize(sample)?;
    degeneracy.infinite_rate = fit.lambda1.is_some_and(f64::is_infinite);
    let p_value = match fit.k_hat {
        None => 1.0,
        Some(_) => exactp::p_value(fit.log_t, n, sample.u_max)?,
    };
    Ok(GlrOutcome {
        mode: sample.mode,
        n,
        tau_max,
        u_max: sample.u_max,
        log_t: fit.log_t,
        k_hat: fit.k_hat,
        tau_hat: fit.k_hat.and_then(|k| sample.response_at_rank(k)),
        lambda1_hat: fit.lambda1,
        lambda2_hat: fit.lambda2,
        p_value,
        degeneracy,
    })
}

/// Runs the full test: transform, maximize, exact p-value.
///
/// In triggering mode the intensity window must start at the first `A`
/// event; [`run_test_anchored`] clips the inputs first.
pub fn run_test(a: &PointPattern, b: &PointPattern, intensity: &NullIntensity, options: &TestOptions) -> Result<GlrOutcome> {
    let sample = transform(a, b, intensity, options.mode, options.tau_max)?;
    let mut out = evaluate(&sample, options.tau_max)?;
    out.degeneracy.intensity_rescaled = intensity.was_rescaled();
    Ok(out)
}

/// [`run_test`] after restricting a triggering test to start at the first
/// `A` event. Dropped `B` events are counted in the degeneracy record.
pub fn run_test_anchored(
    a: &PointPattern,
    b: &PointPattern,
    intensity: &NullIntensity,
    options: &TestOptions,
) -> Result<GlrOutcome> {
    if options.mode == Mode::Correlation {
        return run_test(a, b, intensity, options);
    }
    let anchored = anchor_to_source(a, b, intensity)?;
    let mut out = run_test(a, &anchored.b, &anchored.intensity, options)?;
    out.degeneracy.clipped_events = anchored.dropped;
    Ok(out)
}
