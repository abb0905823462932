//! Exact finite-sample p-values.
//!
//! For a statistic value `t`, each rank `i` has a threshold `o_i` in
//! `(0, i/n]` with `l_i(o_i) = t`, and `P(T >= t | n)` is the probability
//! that some ordered uniform falls below its threshold:
//!
//! ```text
//! p = 1 - P[u_(1) >= o_1, ..., u_(n) >= o_n]
//! ```
//!
//! The joint probability is evaluated by a forward counting recursion over
//! the thresholds. The uniforms are embedded in a rate-`n` Poisson process
//! conditioned on `n` points in total. The state is the number of points
//! below the current threshold; between thresholds the count grows by a
//! Poisson increment, and at threshold `i` every state with `i` or more
//! points is removed and weighted by its chance of ending with exactly `n`
//! points. All terms are nonnegative and the removed mass is accumulated
//! directly as the p-value, so no step subtracts two nearly equal quantities.
//!
//! Contributions below a floor are dropped. The floor is [`COARSE_FLOOR`],
//! lowered in proportion to a cheap lower bound on the crossing probability
//! when that bound is small, so tiny p-values keep their relative accuracy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glrt::log_ell;
use crate::special::ln_factorial_table;

/// Relative bisection tolerance for thresholds.
pub const THRESHOLD_TOLERANCE: f64 = 1e-12;

/// Absolute floor on recursion terms for the first pass.
pub const COARSE_FLOOR: f64 = 1e-25;


/// Per-rank thresholds `o_1 <= ... <= o_n` for a statistic value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdVector {
    pub o: Vec<f64>,
}

impl ThresholdVector {
    pub fn n(&self) -> usize {
        self.o.len()
    }
}

/// Solves `l_i(x) = exp(log_t)` for `x` in `(0, i/n]`, `i = 1..=n`.
pub fn solve_thresholds(log_t: f64, n: usize) -> Result<ThresholdVector> {
    solve_thresholds_with_tolerance(log_t, n, THRESHOLD_TOLERANCE)
}

/// As [`solve_thresholds`] with an explicit relative tolerance on `x`.
pub fn solve_thresholds_with_tolerance(log_t: f64, n: usize, tol: f64) -> Result<ThresholdVector> {
    if !(log_t > 0.0) {
        return Err(Error::InvalidArgument(format!("log_t must be > 0, got {log_t}")));
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if log_t.is_infinite() {
        return Ok(ThresholdVector { o: vec![0.0; n] });
    }
    let mut o: Vec<f64> = (1..=n).map(|i| bisect_threshold(i, n, log_t, tol)).collect();
    // l_i is decreasing in x, and the roots are monotone in i; enforce it
    // against rounding at the last bit.
    for i in 1..n {
        if o[i] < o[i - 1] {
            o[i] = o[i - 1];
        }
    }
    Ok(ThresholdVector { o })
}

fn bisect_threshold(i: usize, n: usize, log_t: f64, tol: f64) -> f64 {
    // log_ell(i, n, .) decreases from +inf at 0 to 0 at i/n.
    let (mut lo, mut hi) = (0.0_f64, i as f64 / n as f64);
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if log_ell(i, n, mid) >= log_t {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= tol * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn check_thresholds(o: &[f64]) -> Result<()> {
    for (i, &x) in o.iter().enumerate() {
        if !(0.0..=1.0).contains(&x) || (i > 0 && x < o[i - 1]) {
            return Err(Error::InvalidThresholds { index: i });
        }
    }
    Ok(())
}

/// `P[u_(i) >= o_i for all i]` for the order statistics of `o.len()`
/// independent uniforms. `o` must be nondecreasing within `[0, 1]`.
pub fn ordered_uniform_survival(o: &[f64]) -> Result<f64> {
    check_thresholds(o)?;
    Ok(poisson_recursion(o, COARSE_FLOOR).survival)
}

/// `1 - ordered_uniform_survival(o)`, accumulated without the subtraction.
pub fn crossing_probability(o: &[f64]) -> Result<f64> {
    check_thresholds(o)?;
    let floor = (crossing_lower_bound(o) * COARSE_FLOOR).clamp(f64::MIN_POSITIVE, COARSE_FLOOR);
    Ok(poisson_recursion(o, floor).crossed)
}

/// `max_i P(N(o_i) = i)`, a lower bound on the crossing probability that is
/// within a factor `n^1.5` of it.
fn crossing_lower_bound(o: &[f64]) -> f64 {
    let n = o.len();
    let lnfact = ln_factorial_table(n);
    o.iter()
        .enumerate()
        .filter(|(_, &x)| x > 0.0)
        .map(|(idx, &x)| {
            let i = idx + 1;
            let ln_choose = lnfact[n] - lnfact[i] - lnfact[n - i];
            let tail = if i == n { 0.0 } else { (n - i) as f64 * (-x).ln_1p() };
            (ln_choose + i as f64 * x.ln() + tail).exp()
        })
        .fold(0.0, f64::max)
}

struct Crossing {
    survival: f64,
    crossed: f64,
}

/// Counting recursion on a Poisson process of rate `n`, conditioned at the
/// end on exactly `n` points. Increments between thresholds are then the
/// same Poisson row for every state, so each step is a set of scaled row
/// additions. A state killed at count `j` after threshold `x` is weighted by
/// `P(N(1) = n | N(x) = j) / P(N(1) = n)`.
fn poisson_recursion(o: &[f64], floor: f64) -> Crossing {
    let n = o.len();
    if n == 0 {
        return Crossing { survival: 1.0, crossed: 0.0 };
    }
    let nf = n as f64;
    let lnfact = ln_factorial_table(n);
    let ln_pois = |d: usize, lambda: f64| -> f64 {
        if lambda == 0.0 {
            return if d == 0 { 0.0 } else { f64::NEG_INFINITY };
        }
        d as f64 * lambda.ln() - lambda - lnfact[d]
    };
    let ln_norm = ln_pois(n, nf);
    // Killed or surviving mass is scaled by at most 1 / P(N(1) = n).
    let floor = floor * ln_norm.exp();

    let mut mass = vec![0.0; n + 1];
    let mut next = vec![0.0; n + 1];
    let mut row: Vec<f64> = Vec::with_capacity(n + 1);
    mass[0] = 1.0;
    let (mut bottom, mut top) = (0usize, 0usize);
    let mut prev = 0.0_f64;
    let mut crossed = 0.0_f64;

    for (idx, &x) in o.iter().enumerate() {
        if x <= prev {
            continue;
        }
        let lambda = nf * (x - prev);
        let peak_mass = mass[bottom..=top].iter().copied().fold(0.0, f64::max);
        let row_floor = floor / peak_mass;
        // Poisson row from the mode outward, trimmed below `row_floor`.
        let mode = (lambda.floor() as usize).min(n);
        let peak = ln_pois(mode, lambda).exp();
        let mut lo = mode;
        let mut v = peak;
        while lo > 0 {
            let w = v * lo as f64 / lambda;
            if w < row_floor {
                break;
            }
            v = w;
            lo -= 1;
        }
        row.clear();
        row.resize(mode - lo + 1, 0.0);
        row[mode - lo] = peak;
        let mut v = peak;
        for d in (lo..mode).rev() {
            v *= (d + 1) as f64 / lambda;
            row[d - lo] = v;
        }
        let mut v = peak;
        for d in mode + 1..=n {
            v *= lambda / d as f64;
            if v < row_floor {
                break;
            }
            row.push(v);
        }
        // row[i] = P(D = lo + i). Rising part ends at `rise`.
        let rise = mode - lo;

        next.fill(0.0);
        let (mut new_bottom, mut new_top) = (usize::MAX, 0usize);
        for k in bottom..=top {
            let m = mass[k];
            if m < floor {
                continue;
            }
            let cut = floor / m;
            let first = row[..rise].partition_point(|&r| r < cut);
            let last = rise + row[rise..].partition_point(|&r| r >= cut);
            let start = k + lo + first;
            let end = (k + lo + last).min(n + 1);
            if start >= end {
                continue;
            }
            for (t, &r) in next[start..end].iter_mut().zip(&row[first..]) {
                *t += m * r;
            }
            new_bottom = new_bottom.min(start);
            new_top = new_top.max(end - 1);
        }
        std::mem::swap(&mut mass, &mut next);
        if new_bottom == usize::MAX {
            return Crossing { survival: 0.0, crossed: crossed.clamp(0.0, 1.0) };
        }

        // Rank idx + 1 is crossed by every state with at least idx + 1 points.
        let rest = nf * (1.0 - x);
        let kill_from = (idx + 1).max(new_bottom);
        for j in kill_from..=new_top {
            if mass[j] > 0.0 {
                crossed += mass[j] * (ln_pois(n - j, rest) - ln_norm).exp();
                mass[j] = 0.0;
            }
        }
        bottom = new_bottom;
        top = new_top.min(idx);
        if bottom > top {
            return Crossing { survival: 0.0, crossed: crossed.clamp(0.0, 1.0) };
        }
        prev = x;
    }

    let rest = nf * (1.0 - prev);
    let survival: f64 = (bottom..=top)
        .map(|j| mass[j] * (ln_pois(n - j, rest) - ln_norm).exp())
        .sum();
    Crossing {
        survival: survival.clamp(0.0, 1.0),
        crossed: crossed.clamp(0.0, 1.0),
    }
}

/// Exact p-value `P(T >= t | n)` for `log_t = ln t`.
///
/// `n = 0` and `t = 1` give 1. With `u_max` (time-limited test) each
/// threshold is capped at `u_max`, which is conservative.
pub fn p_value(log_t: f64, n: usize, u_max: Option<f64>) -> Result<f64> {
    if log_t.is_nan() {
        return Err(Error::InvalidArgument("log_t is NaN".into()));
    }
    if n == 0 || log_t <= 0.0 {
        return Ok(1.0);
    }
    let mut th = solve_thresholds(log_t, n)?;
    if let Some(cap) = u_max {
        if !(cap > 0.0 && cap <= 1.0) {
            return Err(Error::InvalidArgument(format!("u_max {cap} outside (0, 1]")));
        }
        for x in &mut th.o {
            *x = x.min(cap);
        }
    }
    crossing_probability(&th.o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Unpruned binomial counting recursion.
    fn naive_crossing(o: &[f64]) -> f64 {
        let n = o.len();
        let choose = |m: usize, d: usize| -> f64 { (0..d).map(|i| (m - i) as f64 / (i + 1) as f64).product() };
        let mut mass = vec![0.0; n + 1];
        mass[0] = 1.0;
        let (mut prev, mut crossed) = (0.0, 0.0);
        for (idx, &x) in o.iter().enumerate() {
            let q = if prev >= 1.0 { 0.0 } else { (x - prev) / (1.0 - prev) };
            let mut next = vec![0.0; n + 1];
            for k in 0..=n {
                for d in 0..=n - k {
                    next[k + d] += mass[k] * choose(n - k, d) * q.powi(d as i32) * (1.0 - q).powi((n - k - d) as i32);
                }
            }
            for j in idx + 1..=n {
                crossed += next[j];
                next[j] = 0.0;
            }
            mass = next;
            prev = x;
        }
        crossed
    }

    #[test]
    fn matches_unpruned_recursion() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [1usize, 2, 3, 7, 30] {
            for _ in 0..20 {
                let mut o: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * rng.random::<f64>()).collect();
                o.sort_by(f64::total_cmp);
                let want = naive_crossing(&o);
                let got = crossing_probability(&o).unwrap();
                assert!((want - got).abs() <= 1e-12 * want.max(1e-3), "{n} {want} {got}");
                let s = ordered_uniform_survival(&o).unwrap();
                assert!((got + s - 1.0).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn thresholds_closed_forms() {
        let th = solve_thresholds(5f64.ln(), 1).unwrap();
        assert_abs_diff_eq!(th.o[0], 0.2, epsilon = 1e-13);
        let th = solve_thresholds((1.0f64 / 0.9).ln(), 2).unwrap();
        assert_abs_diff_eq!(th.o[1], 0.9, epsilon = 1e-12);
        let th = solve_thresholds(1e-12, 6).unwrap();
        for (i, x) in th.o.iter().enumerate() {
            assert_abs_diff_eq!(*x, (i + 1) as f64 / 6.0, epsilon = 1e-5);
        }
        assert!(solve_thresholds(0.0, 3).is_err());
        assert!(solve_thresholds(1.0, 0).is_err());
        assert_eq!(solve_thresholds(f64::INFINITY, 2).unwrap().o, vec![0.0, 0.0]);
    }

    #[test]
    fn thresholds_solve_their_equation() {
        let (log_t, n) = (0.37, 9);
        let th = solve_thresholds(log_t, n).unwrap();
        for (i, &x) in th.o.iter().enumerate() {
            assert!(x > 0.0 && x <= (i + 1) as f64 / n as f64);
            assert_abs_diff_eq!(log_ell(i + 1, n, x), log_t, epsilon = 1e-9);
        }
    }

    #[test]
    fn survival_examples() {
        assert_eq!(ordered_uniform_survival(&[0.0; 4]).unwrap(), 1.0);
        assert_abs_diff_eq!(ordered_uniform_survival(&[0.2]).unwrap(), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(ordered_uniform_survival(&[0.2, 0.5]).unwrap(), 0.55, epsilon = 1e-15);
        assert_eq!(ordered_uniform_survival(&[]).unwrap(), 1.0);
    }

    #[test]
    fn survival_validates_input() {
        assert_eq!(ordered_uniform_survival(&[0.5, 0.2]), Err(Error::InvalidThresholds { index: 1 }));
        assert_eq!(ordered_uniform_survival(&[-0.1]), Err(Error::InvalidThresholds { index: 0 }));
        assert_eq!(ordered_uniform_survival(&[0.2, 1.1]), Err(Error::InvalidThresholds { index: 1 }));
    }

    #[test]
    fn crossing_complements_survival() {
        let o = [0.05, 0.1, 0.1, 0.4, 0.41, 0.9, 1.0];
        let s = ordered_uniform_survival(&o).unwrap();
        let c = crossing_probability(&o).unwrap();
        assert_abs_diff_eq!(s + c, 1.0, epsilon = 1e-14);
        // At most one of two uniforms may lie below 1: certain crossing.
        assert_abs_diff_eq!(crossing_probability(&[0.0, 1.0]).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn p_value_examples() {
        assert_abs_diff_eq!(p_value(5f64.ln(), 1, None).unwrap(), 0.2, epsilon = 1e-12);
        assert_eq!(p_value(3.0, 0, None).unwrap(), 1.0);
        assert_eq!(p_value(0.0, 4, Some(0.3)).unwrap(), 1.0);
        assert_eq!(p_value(f64::INFINITY, 4, None).unwrap(), 0.0);
        let free = p_value(0.2, 5, None).unwrap();
        let capped = p_value(0.2, 5, Some(0.1)).unwrap();
        assert!(capped <= free);
    }

    #[test]
    fn tiny_crossing_probabilities_keep_relative_accuracy() {
        let p = p_value(50.0, 1, None).unwrap();
        assert!((p / (-50f64).exp() - 1.0).abs() < 1e-9, "{p}");
        let (o1, o2) = (1e-15, 1e-12);
        let want = 2.0 * o1 - o1 * o1 + (o2 - o1) * (o2 - o1);
        let got = crossing_probability(&[o1, o2]).unwrap();
        assert!((got / want - 1.0).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn tolerance_insensitivity() {
        for (log_t, n) in [(0.05, 3), (0.4, 20), (1.3, 50), (0.02, 200)] {
            let a = crossing_probability(&solve_thresholds(log_t, n).unwrap().o).unwrap();
            let b = crossing_probability(&solve_thresholds_with_tolerance(log_t, n, 1e-10).unwrap().o).unwrap();
            assert!((a - b).abs() < 1e-9, "log_t={log_t} n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn large_n_stays_finite() {
        let n = 5000;
        let o: Vec<f64> = (1..=n)
            .map(|i| (i as f64 / (n as f64 + 1.0) - 0.3 / (n as f64).sqrt()).max(0.0))
            .collect();
        let s = ordered_uniform_survival(&o).unwrap();
        assert!(s.is_finite() && (0.0..=1.0).contains(&s));
        let c = crossing_probability(&o).unwrap();
        assert_abs_diff_eq!(s + c, 1.0, epsilon = 1e-9);
    }
}
