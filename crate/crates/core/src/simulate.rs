//! Generators for null and alternative response patterns, and the Monte
//! Carlo experiments that check the exact null distribution, the weighted
//! K-S connection and the consistency of the range estimate.
//!
//! Every replicate draws from its own ChaCha stream keyed by `(seed,
//! replicate index)`, so results do not depend on how replicates are
//! scheduled across threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    ecdf_table, ks_uniform_distance, scaled_restricted_statistic, two_sample_distance, weighted_ks_plus, EcdfPoint,
    KsConfig,
};
use crate::error::{Error, Result};
use crate::glrt::{run_test, TestOptions};
use crate::measure::{
    correlation_set, transform, triggered_set, IntervalUnion, Mode, NullIntensity, ObservationWindow, PointPattern,
};
use crate::special::ks_critical_value;

/// Root seed of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Independent generator for replicate `stream`.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }
}

/// How many events to draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EventCount {
    /// Poisson with this mean.
    Poisson(f64),
    Fixed(usize),
}

impl EventCount {
    fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> Result<usize> {
        match self {
            EventCount::Fixed(n) => Ok(n),
            EventCount::Poisson(0.0) => Ok(0),
            EventCount::Poisson(mean) => {
                let d = Poisson::new(mean)
                    .map_err(|e| Error::InvalidArgument(format!("Poisson mean {mean}: {e}")))?;
                Ok(d.sample(rng) as usize)
            }
        }
    }
}

/// Inverse-CDF sampler for the null measure restricted to a union of
/// intervals.
struct RegionSampler<'a> {
    intensity: &'a NullIntensity,
    region: Vec<(f64, f64)>,
    /// Running null mass at the end of each interval.
    cumulative: Vec<f64>,
}

impl<'a> RegionSampler<'a> {
    fn new(intensity: &'a NullIntensity, union: &IntervalUnion) -> Self {
        let mut cumulative = Vec::with_capacity(union.intervals().len());
        let mut acc = 0.0;
        let mut region = Vec::new();
        for iv in union.intervals() {
            acc += intensity.mass(iv.start, iv.end);
            cumulative.push(acc);
            region.push((iv.start, iv.end));
        }
        Self { intensity, region, cumulative }
    }

    fn mass(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let s = rng.random::<f64>() * self.mass();
        let j = self.cumulative.partition_point(|&c| c <= s).min(self.region.len() - 1);
        let below = if j == 0 { 0.0 } else { self.cumulative[j - 1] };
        let (lo, hi) = self.region[j];
        let t = self.intensity.quantile(self.intensity.cdf(lo) + (s - below));
        t.clamp(lo, hi.next_down())
    }
}

fn distinct_sorted(mut times: Vec<f64>) -> Option<PointPattern> {
    times.sort_by(f64::total_cmp);
    PointPattern::new(times).ok()
}

const MAX_REDRAWS: usize = 100;

/// Draws event times i.i.d. from the null measure, `n` fixed or Poisson.
pub fn sample_null<R: Rng + ?Sized>(intensity: &NullIntensity, count: EventCount, rng: &mut R) -> Result<PointPattern> {
    let w = intensity.window();
    let whole = IntervalUnion::from_intervals(vec![crate::measure::Interval { start: w.start, end: w.end }]);
    let sampler = RegionSampler::new(intensity, &whole);
    let n = count.draw(rng)?;
    for _ in 0..MAX_REDRAWS {
        if let Some(p) = distinct_sorted((0..n).map(|_| sampler.draw(rng)).collect()) {
            return Ok(p);
        }
    }
    Err(Error::InvalidArgument("could not draw distinct event times".into()))
}

/// Two-level alternative: `B` has density `lambda1 * r` inside the region of
/// radius `tau` around `A` and `lambda2 * r` outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternativeSpec {
    pub a: PointPattern,
    pub intensity: NullIntensity,
    #[serde(default)]
    pub mode: Mode,
    pub tau: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// Place exactly this many events (density model) instead of a Poisson
    /// number with mean `lambda1 * w + lambda2 * (1 - w)`.
    pub fixed_n: Option<usize>,
}

impl AlternativeSpec {
    fn region(&self) -> Result<IntervalUnion> {
        let w = self.intensity.window();
        match self.mode {
            Mode::Triggering => triggered_set(&self.a, &w, self.tau),
            Mode::Correlation => correlation_set(&self.a, &w, self.tau),
        }
    }

    /// Null mass `w` of the region at the true `tau`.
    pub fn region_mass(&self) -> Result<f64> {
        crate::measure::rho(&self.intensity, &self.region()?)
    }

    /// Share of events expected inside the region.
    pub fn inside_fraction(&self) -> Result<f64> {
        let w = self.region_mass()?;
        let total = self.lambda1 * w + self.lambda2 * (1.0 - w);
        Ok(if total > 0.0 { self.lambda1 * w / total } else { 0.0 })
    }

    fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) {
            return Err(Error::InvalidArgument(format!("tau must be > 0, got {}", self.tau)));
        }
        if !(self.lambda2 >= 0.0 && self.lambda1 >= self.lambda2) || !self.lambda1.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "need lambda1 >= lambda2 >= 0, got {} and {}",
                self.lambda1, self.lambda2
            )));
        }
        if self.lambda1 == 0.0 && self.fixed_n.is_some_and(|n| n > 0) {
            return Err(Error::InvalidArgument("cannot place events with lambda1 = lambda2 = 0".into()));
        }
        self.a.check_within(&self.intensity.window())
    }
}

/// Draws `B` under the two-level alternative by picking inside/outside with
/// the mixture weights and sampling the null measure restricted to that part.
pub fn sample_alternative<R: Rng + ?Sized>(spec: &AlternativeSpec, rng: &mut R) -> Result<PointPattern> {
    spec.validate()?;
    let window = spec.intensity.window();
    let region = spec.region()?;
    let inside = RegionSampler::new(&spec.intensity, &region);
    let outside = RegionSampler::new(&spec.intensity, &region.complement(&window));
    let w = inside.mass();
    let total = spec.lambda1 * w + spec.lambda2 * (1.0 - w);
    let count = match spec.fixed_n {
        Some(n) => EventCount::Fixed(n),
        None => EventCount::Poisson(total),
    };
    let n = count.draw(rng)?;
    let p_inside = if total > 0.0 { spec.lambda1 * w / total } else { 0.0 };
    for _ in 0..MAX_REDRAWS {
        let times = (0..n)
            .map(|_| {
                let pick_inside = rng.random::<f64>() < p_inside;
                if (pick_inside && inside.mass() > 0.0) || outside.mass() <= 0.0 {
                    inside.draw(rng)
                } else {
                    outside.draw(rng)
                }
            })
            .collect();
        if let Some(p) = distinct_sorted(times) {
            return Ok(p);
        }
    }
    Err(Error::InvalidArgument("could not draw distinct event times".into()))
}

/// Source pattern of `m` events: the first at the window start, the rest
/// uniform over the window (triggering layout), or all uniform (correlation).
pub fn sample_sources<R: Rng + ?Sized>(window: &ObservationWindow, m: usize, mode: Mode, rng: &mut R) -> Result<PointPattern> {
    if m == 0 {
        return Err(Error::EmptySource);
    }
    let uniform = NullIntensity::uniform(*window);
    for _ in 0..MAX_REDRAWS {
        let mut times: Vec<f64> = sample_null(&uniform, EventCount::Fixed(m), rng)?.into();
        if mode == Mode::Triggering {
            times[0] = window.start;
        }
        if let Some(p) = distinct_sorted(times) {
            return Ok(p);
        }
    }
    Err(Error::InvalidArgument("could not draw distinct source times".into()))
}

// ---------------------------------------------------------------------------
// Calibration

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    pub replicates: usize,
    pub intensity: NullIntensity,
    /// Number of `A` events per replicate.
    pub source_events: usize,
    /// Poisson mean of the number of `B` events.
    pub mean_events: f64,
    pub mode: Mode,
    pub tau_max: Option<f64>,
}

impl Default for CalibrationConfig {
    /// 2000 replicates, 20 sources, 50 expected responses, and a four-cell
    /// non-uniform intensity on `[0, 1)`.
    fn default() -> Self {
        let window = ObservationWindow { start: 0.0, end: 1.0 };
        Self {
            replicates: 2000,
            intensity: NullIntensity::build(&[0.0, 0.25, 0.5, 0.75, 1.0], &[0.4, 1.6, 1.2, 0.8], window)
                .expect("static intensity is valid"),
            source_events: 20,
            mean_events: 50.0,
            mode: Mode::Triggering,
            tau_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSummary {
    pub replicates: usize,
    /// Sup distance of the p-values from uniform.
    pub ks_distance: f64,
    /// 1% critical value for `ks_distance`.
    pub ks_critical_1pct: f64,
    pub reject_rate_1pct: f64,
    pub reject_rate_5pct: f64,
    /// Replicates with no `B` events (p-value 1).
    pub empty_replicates: usize,
    pub mean_n: f64,
    pub p_values: Vec<f64>,
}

impl CalibrationSummary {
    pub fn uniform_at_1pct(&self) -> bool {
        self.ks_distance < self.ks_critical_1pct
    }
}

/// Replicates null datasets through the full test and summarizes the
/// p-value distribution.
pub fn calibration_experiment(config: &CalibrationConfig, seed: RngSeed) -> Result<CalibrationSummary> {
    if config.replicates == 0 {
        return Err(Error::InvalidArgument("need at least one replicate".into()));
    }
    let window = config.intensity.window();
    let options = TestOptions { mode: config.mode, tau_max: config.tau_max };
    let results: Vec<(f64, usize)> = (0..config.replicates as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = seed.rng(rep);
            let a = sample_sources(&window, config.source_events, config.mode, &mut rng)?;
            let b = sample_null(&config.intensity, EventCount::Poisson(config.mean_events), &mut rng)?;
            let out = run_test(&a, &b, &config.intensity, &options)?;
            Ok((out.p_value, out.n))
        })
        .collect::<Result<_>>()?;

    let p_values: Vec<f64> = results.iter().map(|r| r.0).collect();
    let reps = config.replicates as f64;
    let rate = |alpha: f64| p_values.iter().filter(|&&p| p <= alpha).count() as f64 / reps;
    Ok(CalibrationSummary {
        replicates: config.replicates,
        ks_distance: ks_uniform_distance(&p_values),
        ks_critical_1pct: ks_critical_value(config.replicates, 0.01),
        reject_rate_1pct: rate(0.01),
        reject_rate_5pct: rate(0.05),
        empty_replicates: results.iter().filter(|r| r.1 == 0).count(),
        mean_n: results.iter().map(|r| r.1 as f64).sum::<f64>() / reps,
        p_values,
    })
}

/// Pooled u-values from null replicates with exactly `n` responses each.
pub fn pooled_null_u_values(config: &CalibrationConfig, n: usize, seed: RngSeed) -> Result<Vec<f64>> {
    let window = config.intensity.window();
    let chunks: Vec<Vec<f64>> = (0..config.replicates as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = seed.rng(rep);
            let a = sample_sources(&window, config.source_events, config.mode, &mut rng)?;
            let b = sample_null(&config.intensity, EventCount::Fixed(n), &mut rng)?;
            Ok(transform(&a, &b, &config.intensity, config.mode, None)?.u)
        })
        .collect::<Result<_>>()?;
    Ok(chunks.concat())
}

// ---------------------------------------------------------------------------
// Weighted K-S comparison

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure1Result {
    pub n: usize,
    pub ks: KsConfig,
    pub replicates: usize,
    /// Sorted `sqrt(2n) * sqrt(T_[gamma] - 1)` over replicates.
    pub likelihood_ratio: Vec<f64>,
    /// Sorted `G+_[gamma]` over replicates.
    pub weighted_ks: Vec<f64>,
    /// Sup distance between the two empirical CDFs.
    pub sup_distance: f64,
}

impl Figure1Result {
    pub fn likelihood_ratio_ecdf(&self) -> Vec<EcdfPoint> {
        ecdf_table(&self.likelihood_ratio).unwrap_or_default()
    }

    pub fn weighted_ks_ecdf(&self) -> Vec<EcdfPoint> {
        ecdf_table(&self.weighted_ks).unwrap_or_default()
    }
}

/// Simulates null samples of `n` uniforms and compares the distributions of
/// the scaled restricted likelihood ratio and the weighted K-S statistic.
pub fn figure1_experiment(n: usize, ks: KsConfig, replicates: usize, seed: RngSeed) -> Result<Figure1Result> {
    if n == 0 || replicates == 0 {
        return Err(Error::InvalidArgument("n and replicates must be positive".into()));
    }
    let pairs: Vec<(f64, f64)> = (0..replicates as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = seed.rng(rep);
            let mut u: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            u.sort_by(f64::total_cmp);
            (scaled_restricted_statistic(&u, &ks), weighted_ks_plus(&u, &ks))
        })
        .collect();
    let mut likelihood_ratio: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut weighted_ks: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    likelihood_ratio.sort_by(f64::total_cmp);
    weighted_ks.sort_by(f64::total_cmp);
    let sup_distance = two_sample_distance(&likelihood_ratio, &weighted_ks);
    Ok(Figure1Result {
        n,
        ks,
        replicates,
        likelihood_ratio,
        weighted_ks,
        sup_distance,
    })
}

// ---------------------------------------------------------------------------
// Consistency of the range estimate

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyConfig {
    /// Rate ratio `lambda1 / lambda2`.
    pub ratio: f64,
    pub tau: f64,
    pub a: PointPattern,
    pub intensity: NullIntensity,
    pub lambda2_ladder: Vec<f64>,
    pub replicates: usize,
    /// Level for the empirical power.
    pub alpha: f64,
}

impl Default for ConsistencyConfig {
    /// `lambda1 = 3 lambda2`, `tau = 0.1`, five evenly spaced sources on a
    /// uniform `[0, 1)`, `lambda2` in {10, 100, 1000}, 200 replicates.
    fn default() -> Self {
        Self {
            ratio: 3.0,
            tau: 0.1,
            a: PointPattern::new(vec![0.0, 0.2, 0.4, 0.6, 0.8]).expect("static pattern is valid"),
            intensity: NullIntensity::uniform(ObservationWindow { start: 0.0, end: 1.0 }),
            lambda2_ladder: vec![10.0, 100.0, 1000.0],
            replicates: 200,
            alpha: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyRow {
    pub lambda1: f64,
    pub lambda2: f64,
    pub mean_n: f64,
    /// Median of `|tau_hat - tau|`; replicates without an estimate count as
    /// infinite error.
    #[serde(with = "crate::json_float")]
    pub median_abs_error: f64,
    pub power: f64,
}

/// For each `lambda2` on the ladder, simulates the alternative with
/// `lambda1 = ratio * lambda2` and reports the median range error and power.
pub fn consistency_experiment(config: &ConsistencyConfig, seed: RngSeed) -> Result<Vec<ConsistencyRow>> {
    if config.replicates == 0 {
        return Err(Error::InvalidArgument("need at least one replicate".into()));
    }
    let options = TestOptions::triggering();
    config
        .lambda2_ladder
        .iter()
        .enumerate()
        .map(|(rung, &lambda2)| {
            let spec = AlternativeSpec {
                a: config.a.clone(),
                intensity: config.intensity.clone(),
                mode: Mode::Triggering,
                tau: config.tau,
                lambda1: config.ratio * lambda2,
                lambda2,
                fixed_n: None,
            };
            let base = (rung as u64) << 32;
            let reps: Vec<(f64, f64, usize)> = (0..config.replicates as u64)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = seed.rng(base + rep);
                    let b = sample_alternative(&spec, &mut rng)?;
                    let out = run_test(&spec.a, &b, &spec.intensity, &options)?;
                    let err = out.tau_hat.map_or(f64::INFINITY, |t| (t - config.tau).abs());
                    Ok((err, out.p_value, out.n))
                })
                .collect::<Result<_>>()?;
            let mut errors: Vec<f64> = reps.iter().map(|r| r.0).collect();
            errors.sort_by(f64::total_cmp);
            let len = errors.len();
            let median = if len % 2 == 1 {
                errors[len / 2]
            } else {
                0.5 * (errors[len / 2 - 1] + errors[len / 2])
            };
            let r = config.replicates as f64;
            Ok(ConsistencyRow {
                lambda1: spec.lambda1,
                lambda2,
                mean_n: reps.iter().map(|x| x.2 as f64).sum::<f64>() / r,
                median_abs_error: median,
                power: reps.iter().filter(|x| x.1 <= config.alpha).count() as f64 / r,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Two-level density of the u-values

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelCheck {
    pub region_mass: f64,
    pub expected_fraction: f64,
    pub observed_below: usize,
    pub total: usize,
    /// `(observed - expected) / binomial standard error`.
    pub z_score: f64,
}

/// Pools u-values from fixed-n alternative draws and compares the share
/// below the true region mass `w` with `lambda1 w / (lambda1 w + lambda2 (1 - w))`.
pub fn two_level_experiment(spec: &AlternativeSpec, replicates: usize, seed: RngSeed) -> Result<TwoLevelCheck> {
    if spec.fixed_n.is_none() {
        return Err(Error::InvalidArgument("two-level check needs fixed_n".into()));
    }
    let w = spec.region_mass()?;
    let expected = spec.inside_fraction()?;
    let counts: Vec<(usize, usize)> = (0..replicates as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = seed.rng(rep);
            let b = sample_alternative(spec, &mut rng)?;
            let s = transform(&spec.a, &b, &spec.intensity, spec.mode, None)?;
            Ok((s.u.iter().filter(|&&u| u <= w).count(), s.n()))
        })
        .collect::<Result<_>>()?;
    let observed_below: usize = counts.iter().map(|c| c.0).sum();
    let total: usize = counts.iter().map(|c| c.1).sum();
    let se = (expected * (1.0 - expected) / total as f64).sqrt();
    let observed = observed_below as f64 / total as f64;
    Ok(TwoLevelCheck {
        region_mass: w,
        expected_fraction: expected,
        observed_below,
        total,
        z_score: if se > 0.0 { (observed - expected) / se } else { 0.0 },
    })
}
