//! Observation windows, point patterns, the null intensity `r` with its
//! probability measure, triggered/correlation regions, and the transform
//! that maps each response event to the null mass of its region.

mod intensity;
mod region;
mod transform;

pub use intensity::NullIntensity;
pub use region::{
    correlation_mass, correlation_set, region_mass, rho, trigger_mass, triggered_set, Interval,
    IntervalUnion,
};
pub use transform::{anchor_to_source, transform, AnchoredInput, TransformedSample};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kind of dependence being tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `B` responds within `tau` after the most recent `A` event.
    #[default]
    Triggering,
    /// `B` is more active within `tau` of the nearest `A` event, either side.
    Correlation,
}

/// Half-open observation window `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservationWindow {
    pub start: f64,
    pub end: f64,
}

impl ObservationWindow {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(Error::InvalidWindow { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t < self.end
    }
}

/// A finite, strictly increasing set of event times.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PointPattern {
    times: Vec<f64>,
}

impl PointPattern {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        for (i, t) in times.iter().enumerate() {
            if !t.is_finite() || (i > 0 && times[i - 1] >= *t) {
                return Err(Error::NotStrictlyIncreasing { index: i });
            }
        }
        Ok(Self { times })
    }

    /// Sorts first; duplicates are still rejected.
    pub fn from_unsorted(mut times: Vec<f64>) -> Result<Self> {
        times.sort_by(f64::total_cmp);
        Self::new(times)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn first(&self) -> Option<f64> {
        self.times.first().copied()
    }

    pub fn check_within(&self, window: &ObservationWindow) -> Result<()> {
        match self.times.iter().find(|t| !window.contains(**t)) {
            Some(&time) => Err(Error::OutsideWindow {
                time,
                start: window.start,
                end: window.end,
            }),
            None => Ok(()),
        }
    }

    /// Index of the latest event at or before `t`.
    pub fn most_recent(&self, t: f64) -> Option<usize> {
        self.times.partition_point(|&a| a <= t).checked_sub(1)
    }

    /// Index of the event closest to `t`; exact midpoint ties go to the
    /// earlier event.
    pub fn nearest(&self, t: f64) -> Option<usize> {
        if self.times.is_empty() {
            return None;
        }
        let after = self.times.partition_point(|&a| a < t);
        if after == 0 {
            return Some(0);
        }
        if after == self.times.len() {
            return Some(after - 1);
        }
        let before = after - 1;
        if t - self.times[before] <= self.times[after] - t {
            Some(before)
        } else {
            Some(after)
        }
    }

    /// Events in `[from, to]`, as indices.
    pub fn indices_in(&self, from: f64, to: f64) -> std::ops::Range<usize> {
        let lo = self.times.partition_point(|&t| t < from);
        let hi = self.times.partition_point(|&t| t <= to);
        lo..hi.max(lo)
    }
}

impl TryFrom<Vec<f64>> for PointPattern {
    type Error = Error;

    fn try_from(times: Vec<f64>) -> Result<Self> {
        Self::new(times)
    }
}

impl From<PointPattern> for Vec<f64> {
    fn from(p: PointPattern) -> Self {
        p.times
    }
}
