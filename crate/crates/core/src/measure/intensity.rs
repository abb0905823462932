use serde::{Deserialize, Serialize};

use super::ObservationWindow;
use crate::error::{Error, Result};

/// Deviation from unit mass tolerated before densities are flagged as rescaled.
const MASS_TOLERANCE: f64 = 1e-9;

/// Piecewise-constant null intensity shape `r`, normalized to unit mass over
/// its window, together with its cumulative integral `R`.
///
/// `R` is continuous and piecewise linear, so the measure of any interval is
/// exact up to rounding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullIntensity {
    breakpoints: Vec<f64>,
    densities: Vec<f64>,
    cumulative: Vec<f64>,
    rescaled: bool,
}

impl NullIntensity {
    /// Builds the intensity on `window` from cells `[breakpoints[j],
    /// breakpoints[j + 1])` carrying `densities[j]`. Breakpoints must cover
    /// the window; cells are clipped to it. Densities whose mass over the
    /// window differs from one by more than 1e-9 are rescaled and
    /// [`was_rescaled`](Self::was_rescaled) reports it.
    pub fn build(breakpoints: &[f64], densities: &[f64], window: ObservationWindow) -> Result<Self> {
        if breakpoints.len() != densities.len() + 1 || densities.is_empty() {
            return Err(Error::InvalidIntensity(format!(
                "{} breakpoints for {} densities",
                breakpoints.len(),
                densities.len()
            )));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) || breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidIntensity("breakpoints not strictly increasing".into()));
        }
        if let Some(d) = densities.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(Error::InvalidIntensity(format!("negative or non-finite density {d}")));
        }
        if breakpoints[0] > window.start || *breakpoints.last().unwrap() < window.end {
            return Err(Error::InvalidIntensity(format!(
                "breakpoints [{}, {}] do not cover the window [{}, {})",
                breakpoints[0],
                breakpoints.last().unwrap(),
                window.start,
                window.end
            )));
        }

        let mut bps = vec![window.start];
        let mut dens = Vec::new();
        for (j, &d) in densities.iter().enumerate() {
            let (lo, hi) = (breakpoints[j].max(window.start), breakpoints[j + 1].min(window.end));
            if lo < hi {
                dens.push(d);
                bps.push(hi);
            }
        }

        let mass: f64 = dens.iter().zip(bps.windows(2)).map(|(d, w)| d * (w[1] - w[0])).sum();
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidIntensity("zero total mass over the window".into()));
        }
        let rescaled = (mass - 1.0).abs() > MASS_TOLERANCE;
        for d in &mut dens {
            *d /= mass;
        }

        let mut cumulative = Vec::with_capacity(bps.len());
        cumulative.push(0.0);
        for (d, w) in dens.iter().zip(bps.windows(2)) {
            let last = *cumulative.last().unwrap();
            cumulative.push(last + d * (w[1] - w[0]));
        }

        Ok(Self {
            breakpoints: bps,
            densities: dens,
            cumulative,
            rescaled,
        })
    }

    /// The constant density `1 / L` over the window.
    pub fn uniform(window: ObservationWindow) -> Self {
        Self::build(&[window.start, window.end], &[1.0 / window.length()], window)
            .expect("a valid window always yields a uniform intensity")
    }

    pub fn window(&self) -> ObservationWindow {
        ObservationWindow {
            start: self.breakpoints[0],
            end: *self.breakpoints.last().unwrap(),
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn was_rescaled(&self) -> bool {
        self.rescaled
    }

    fn cell(&self, t: f64) -> usize {
        let k = self.densities.len();
        self.breakpoints.partition_point(|&b| b <= t).saturating_sub(1).min(k - 1)
    }

    pub fn density_at(&self, t: f64) -> f64 {
        if self.window().contains(t) {
            self.densities[self.cell(t)]
        } else {
            0.0
        }
    }

    /// `R(t)`, the null mass of `[start, t)`, clamped outside the window.
    pub fn cdf(&self, t: f64) -> f64 {
        let w = self.window();
        if t <= w.start {
            return 0.0;
        }
        if t >= w.end {
            return *self.cumulative.last().unwrap();
        }
        let j = self.cell(t);
        let v = self.cumulative[j] + self.densities[j] * (t - self.breakpoints[j]);
        v.min(self.cumulative[j + 1])
    }

    /// Null mass of `[s, e)`.
    pub fn mass(&self, s: f64, e: f64) -> f64 {
        if e <= s {
            0.0
        } else {
            (self.cdf(e) - self.cdf(s)).max(0.0)
        }
    }

    /// `inf { t : R(t) >= p }`; plateaus of zero density resolve to their
    /// left endpoint.
    pub fn quantile(&self, p: f64) -> f64 {
        let w = self.window();
        if p <= 0.0 {
            return w.start;
        }
        let total = *self.cumulative.last().unwrap();
        if p >= total {
            return w.end;
        }
        let j = self.cumulative[1..].partition_point(|&c| c < p);
        let t = self.breakpoints[j] + (p - self.cumulative[j]) / self.densities[j];
        t.clamp(self.breakpoints[j], self.breakpoints[j + 1])
    }

    /// The same shape restricted to `[start, end)` and renormalized. The
    /// rescaling flag is inherited, not recomputed.
    pub fn restrict(&self, start: f64, end: f64) -> Result<Self> {
        let window = ObservationWindow::new(start, end)?;
        let mut out = Self::build(&self.breakpoints, &self.densities, window)?;
        out.rescaled = self.rescaled;
        Ok(out)
    }
}
