//! Diagnostics built on the u-values: ECDF tables against the diagonal,
//! Fisher's combination, and the interval-restricted weighted K-S statistic
//! with its likelihood-ratio analogue.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glrt::log_ell;
use crate::special::chi_square_sf;

/// Restriction interval `[gamma1, gamma2]` for the weighted statistics. The
/// weight is fixed at `phi(x) = 1 / (x (1 - x))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsConfig {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl KsConfig {
    pub fn new(gamma1: f64, gamma2: f64) -> Result<Self> {
        if !(0.0 < gamma1 && gamma1 < gamma2 && gamma2 < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < gamma1 < gamma2 < 1, got [{gamma1}, {gamma2}]"
            )));
        }
        Ok(Self { gamma1, gamma2 })
    }

    fn covers(&self, u: f64) -> bool {
        self.gamma1 <= u && u <= self.gamma2
    }
}

impl Default for KsConfig {
    fn default() -> Self {
        Self { gamma1: 0.01, gamma2: 0.99 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcdfPoint {
    pub u: f64,
    pub ecdf: f64,
}

fn sorted(u: &[f64]) -> Vec<f64> {
    let mut v = u.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Knots of the empirical CDF; tied values collapse to one knot.
pub fn ecdf_table(u: &[f64]) -> Result<Vec<EcdfPoint>> {
    if u.is_empty() {
        return Err(Error::EmptySample);
    }
    let v = sorted(u);
    let n = v.len() as f64;
    let mut out: Vec<EcdfPoint> = Vec::with_capacity(v.len());
    for (i, &x) in v.iter().enumerate() {
        let ecdf = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.u == x => last.ecdf = ecdf,
            _ => out.push(EcdfPoint { u: x, ecdf }),
        }
    }
    Ok(out)
}

/// Writes an ECDF table as CSV with header `u,ecdf`.
pub fn write_ecdf_csv<W: std::io::Write>(table: &[EcdfPoint], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in table {
        w.serialize(p)?;
    }
    w.flush()
}

/// Fisher's combination of the u-values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherResult {
    #[serde(with = "crate::json_float")]
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// Some u-value was exactly zero; the p-value is then 0.
    pub degenerate: bool,
}

/// `-2 sum ln u_i` referred to chi-square with `2n` degrees of freedom.
pub fn fisher_combine(u: &[f64]) -> Result<FisherResult> {
    if u.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some(bad) = u.iter().find(|x| !(**x >= 0.0 && **x <= 1.0)) {
        return Err(Error::InvalidArgument(format!("u-value {bad} outside [0, 1]")));
    }
    let df = 2 * u.len();
    if u.contains(&0.0) {
        return Ok(FisherResult {
            statistic: f64::INFINITY,
            df,
            p_value: 0.0,
            degenerate: true,
        });
    }
    let statistic = -2.0 * u.iter().map(|x| x.ln()).sum::<f64>();
    Ok(FisherResult {
        statistic,
        df,
        p_value: chi_square_sf(statistic, df as f64)?,
        degenerate: false,
    })
}

/// One-sided weighted K-S statistic `G+` restricted to `[gamma1, gamma2]`,
/// with the u-values standing in for `F(y_i)` and `i/n` for the ECDF. Zero
/// when no u-value qualifies.
pub fn weighted_ks_plus(u: &[f64], config: &KsConfig) -> f64 {
    let v = sorted(u);
    let n = v.len() as f64;
    let mut best = 0.0_f64;
    for (i, &x) in v.iter().enumerate() {
        let fhat = (i + 1) as f64 / n;
        if x <= fhat && config.covers(x) {
            let g = n.sqrt() * (fhat - x) / (x * (1.0 - x)).sqrt();
            best = best.max(g);
        }
    }
    best
}

/// `ln T_[gamma1, gamma2]`: the largest `ln l_i` over ranks with
/// `u_i <= i/n` and `u_i` in `[gamma1, gamma2]`; zero when none qualifies.
pub fn restricted_log_statistic(u: &[f64], config: &KsConfig) -> f64 {
    let v = sorted(u);
    let n = v.len();
    let mut best = 0.0_f64;
    for (i, &x) in v.iter().enumerate() {
        let k = i + 1;
        if x <= k as f64 / n as f64 && config.covers(x) {
            best = best.max(log_ell(k, n, x));
        }
    }
    best
}

/// `T_[gamma1, gamma2]` on the natural scale; 1 when no u-value qualifies.
pub fn restricted_statistic(u: &[f64], config: &KsConfig) -> f64 {
    restricted_log_statistic(u, config).exp()
}

/// `sqrt(2n) * sqrt(T_[gamma] - 1)`, the likelihood-ratio counterpart of
/// [`weighted_ks_plus`].
pub fn scaled_restricted_statistic(u: &[f64], config: &KsConfig) -> f64 {
    let n = u.len() as f64;
    (2.0 * n).sqrt() * restricted_log_statistic(u, config).exp_m1().max(0.0).sqrt()
}

/// Sup distance between the ECDF of `samples` and the uniform CDF on [0, 1].
pub fn ks_uniform_distance(samples: &[f64]) -> f64 {
    let v = sorted(samples);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let x = x.clamp(0.0, 1.0);
            ((i + 1) as f64 / n - x).max(x - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Sup distance between two empirical CDFs.
pub fn two_sample_distance(a: &[f64], b: &[f64]) -> f64 {
    let (x, y) = (sorted(a), sorted(b));
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut best = 0.0_f64;
    while i < x.len() && j < y.len() {
        let t = x[i].min(y[j]);
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        best = best.max((i as f64 / nx - j as f64 / ny).abs());
    }
    best
}

/// All diagnostics for one u-sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub n: usize,
    pub u: Vec<f64>,
    pub ecdf: Vec<EcdfPoint>,
    pub fisher: FisherResult,
    pub ks: KsConfig,
    pub weighted_ks_plus: f64,
    pub restricted_statistic: f64,
    /// Sup distance of the u-values from uniform.
    pub uniform_distance: f64,
}

pub fn diagnose(u: &[f64], config: &KsConfig) -> Result<DiagnosticReport> {
    Ok(DiagnosticReport {
        n: u.len(),
        u: sorted(u),
        ecdf: ecdf_table(u)?,
        fisher: fisher_combine(u)?,
        ks: *config,
        weighted_ks_plus: weighted_ks_plus(u, config),
        restricted_statistic: restricted_statistic(u, config),
        uniform_distance: ks_uniform_distance(u),
    })
}
