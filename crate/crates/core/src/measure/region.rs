use serde::{Deserialize, Serialize};

use super::{Mode, NullIntensity, ObservationWindow, PointPattern};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

/// Sorted union of disjoint half-open intervals.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Normalizes arbitrary intervals: empty ones are dropped, overlapping or
    /// touching ones merged.
    pub fn from_intervals(mut raw: Vec<Interval>) -> Self {
        raw.retain(|iv| iv.start < iv.end);
        raw.sort_by(|x, y| x.start.total_cmp(&y.start));
        let mut intervals: Vec<Interval> = Vec::with_capacity(raw.len());
        for iv in raw {
            match intervals.last_mut() {
                Some(last) if iv.start <= last.end => last.end = last.end.max(iv.end),
                _ => intervals.push(iv),
            }
        }
        Self { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|iv| iv.end - iv.start).sum()
    }

    pub fn contains(&self, t: f64) -> bool {
        let i = self.intervals.partition_point(|iv| iv.end <= t);
        self.intervals.get(i).is_some_and(|iv| iv.start <= t)
    }

    /// Complement within the window.
    pub fn complement(&self, window: &ObservationWindow) -> Self {
        let mut out = Vec::new();
        let mut cursor = window.start;
        for iv in &self.intervals {
            if iv.start > cursor {
                out.push(Interval { start: cursor, end: iv.start.min(window.end) });
            }
            cursor = cursor.max(iv.end);
        }
        if cursor < window.end {
            out.push(Interval { start: cursor, end: window.end });
        }
        Self::from_intervals(out)
    }
}

/// `rho(X)`: null mass of a union of intervals.
pub fn rho(intensity: &NullIntensity, union: &IntervalUnion) -> Result<f64> {
    let w = intensity.window();
    let mut total = 0.0;
    for iv in union.intervals() {
        if iv.start < w.start || iv.end > w.end {
            return Err(Error::IntervalOutsideWindow { start: iv.start, end: iv.end });
        }
        total += intensity.mass(iv.start, iv.end);
    }
    Ok(total.min(1.0))
}

fn check_region_args(a: &PointPattern, y: f64) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptySource);
    }
    if !(y >= 0.0) {
        return Err(Error::InvalidArgument(format!("region radius must be >= 0, got {y}")));
    }
    Ok(())
}

/// `Tr(y)`: times within `y` after the most recent event of `a`, i.e. the
/// union of `[a_i, min(a_i + y, a_{i+1}, end))`.
pub fn triggered_set(a: &PointPattern, window: &ObservationWindow, y: f64) -> Result<IntervalUnion> {
    check_region_args(a, y)?;
    let t = a.times();
    let raw = (0..t.len())
        .map(|i| {
            let next = t.get(i + 1).copied().unwrap_or(window.end);
            Interval {
                start: t[i],
                end: (t[i] + y).min(next).min(window.end),
            }
        })
        .collect();
    Ok(IntervalUnion::from_intervals(raw))
}

/// Voronoi cell of event `i` along the line, clipped to the window.
fn cell_bounds(t: &[f64], i: usize, window: &ObservationWindow) -> (f64, f64) {
    let lo = if i == 0 { window.start } else { 0.5 * (t[i - 1] + t[i]) };
    let hi = t.get(i + 1).map_or(window.end, |n| 0.5 * (t[i] + n));
    (lo.max(window.start), hi.min(window.end))
}

/// `Cr(y)`: times within `y` of the nearest event of `a`, either side.
pub fn correlation_set(a: &PointPattern, window: &ObservationWindow, y: f64) -> Result<IntervalUnion> {
    check_region_args(a, y)?;
    let t = a.times();
    let raw = (0..t.len())
        .map(|i| {
            let (lo, hi) = cell_bounds(t, i, window);
            Interval {
                start: (t[i] - y).max(lo),
                end: (t[i] + y).min(hi),
            }
        })
        .collect();
    Ok(IntervalUnion::from_intervals(raw))
}

/// `rho(Tr(y))` without materializing the union.
pub fn trigger_mass(a: &PointPattern, intensity: &NullIntensity, y: f64) -> f64 {
    let t = a.times();
    let end = intensity.window().end;
    let mut total = 0.0;
    for i in 0..t.len() {
        let next = t.get(i + 1).copied().unwrap_or(end).min(end);
        total += intensity.mass(t[i], (t[i] + y).min(next));
    }
    total.min(1.0)
}

/// `rho(Cr(y))` without materializing the union.
pub fn correlation_mass(a: &PointPattern, intensity: &NullIntensity, y: f64) -> f64 {
    let t = a.times();
    let window = intensity.window();
    let mut total = 0.0;
    for i in 0..t.len() {
        let (lo, hi) = cell_bounds(t, i, &window);
        total += intensity.mass((t[i] - y).max(lo), (t[i] + y).min(hi));
    }
    total.min(1.0)
}

pub fn region_mass(mode: Mode, a: &PointPattern, intensity: &NullIntensity, y: f64) -> f64 {
    match mode {
        Mode::Triggering => trigger_mass(a, intensity, y),
        Mode::Correlation => correlation_mass(a, intensity, y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit() -> ObservationWindow {
        ObservationWindow::new(0.0, 1.0).unwrap()
    }

    fn iv(start: f64, end: f64) -> Interval {
        Interval { start, end }
    }

    fn pat(t: &[f64]) -> PointPattern {
        PointPattern::new(t.to_vec()).unwrap()
    }

    #[test]
    fn union_merges_and_sorts() {
        let u = IntervalUnion::from_intervals(vec![iv(0.5, 0.7), iv(0.0, 0.2), iv(0.2, 0.3), iv(0.6, 0.9), iv(0.95, 0.95)]);
        assert_eq!(u.intervals(), &[iv(0.0, 0.3), iv(0.5, 0.9)]);
        assert!(u.contains(0.0));
        assert!(!u.contains(0.3));
        assert!(u.contains(0.89));
    }

    #[test]
    fn complement_partitions_window() {
        let u = IntervalUnion::from_intervals(vec![iv(0.1, 0.2), iv(0.5, 1.0)]);
        let c = u.complement(&unit());
        assert_eq!(c.intervals(), &[iv(0.0, 0.1), iv(0.2, 0.5)]);
    }

    #[test]
    fn rho_examples() {
        let r = NullIntensity::uniform(unit());
        let u = IntervalUnion::from_intervals(vec![iv(0.2, 0.5)]);
        assert_abs_diff_eq!(rho(&r, &u).unwrap(), 0.3, epsilon = 1e-15);
        assert_eq!(rho(&r, &IntervalUnion::empty()).unwrap(), 0.0);

        let w2 = ObservationWindow::new(0.0, 2.0).unwrap();
        let r2 = NullIntensity::build(&[0.0, 1.0, 2.0], &[0.75, 0.25], w2).unwrap();
        let u2 = IntervalUnion::from_intervals(vec![iv(0.5, 1.5)]);
        assert_abs_diff_eq!(rho(&r2, &u2).unwrap(), 0.5, epsilon = 1e-15);

        let outside = IntervalUnion::from_intervals(vec![iv(0.5, 1.5)]);
        assert!(rho(&r, &outside).is_err());
    }

    #[test]
    fn triggered_set_examples() {
        let a = pat(&[0.0, 0.5]);
        let u = triggered_set(&a, &unit(), 0.1).unwrap();
        assert_eq!(u.intervals().len(), 2);
        assert_abs_diff_eq!(u.intervals()[0].end, 0.1);
        assert_abs_diff_eq!(u.intervals()[1].start, 0.5);
        assert_abs_diff_eq!(u.intervals()[1].end, 0.6);

        assert_eq!(triggered_set(&a, &unit(), 0.6).unwrap().intervals(), &[iv(0.0, 1.0)]);
        assert_eq!(triggered_set(&a, &unit(), 5.0).unwrap().intervals(), &[iv(0.0, 1.0)]);
        assert!(triggered_set(&PointPattern::empty(), &unit(), 0.1).is_err());
        assert!(triggered_set(&a, &unit(), -0.1).is_err());
    }

    #[test]
    fn correlation_set_examples() {
        let s = correlation_set(&pat(&[0.5]), &unit(), 0.2).unwrap();
        assert_eq!(s.intervals().len(), 1);
        assert_abs_diff_eq!(s.intervals()[0].start, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(s.intervals()[0].end, 0.7, epsilon = 1e-15);

        let a = pat(&[0.2, 0.8]);
        assert_eq!(correlation_set(&a, &unit(), 0.5).unwrap().intervals(), &[iv(0.0, 1.0)]);

        let s = correlation_set(&a, &unit(), 0.25).unwrap();
        assert_eq!(s.intervals().len(), 2);
        assert_abs_diff_eq!(s.intervals()[0].start, 0.0);
        assert_abs_diff_eq!(s.intervals()[0].end, 0.45, epsilon = 1e-15);
        assert_abs_diff_eq!(s.intervals()[1].start, 0.55, epsilon = 1e-15);
        assert_abs_diff_eq!(s.intervals()[1].end, 1.0);
    }

    #[test]
    fn fast_masses_agree_with_unions() {
        let w = ObservationWindow::new(0.0, 3.0).unwrap();
        let r = NullIntensity::build(&[0.0, 1.0, 2.0, 3.0], &[0.2, 0.5, 0.3], w).unwrap();
        let a = pat(&[0.0, 0.4, 1.3, 2.5]);
        for y in [0.0, 0.05, 0.2, 0.45, 0.9, 2.0] {
            let tr = rho(&r, &triggered_set(&a, &w, y).unwrap()).unwrap();
            let cr = rho(&r, &correlation_set(&a, &w, y).unwrap()).unwrap();
            assert_abs_diff_eq!(trigger_mass(&a, &r, y), tr, epsilon = 1e-14);
            assert_abs_diff_eq!(correlation_mass(&a, &r, y), cr, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(trigger_mass(&a, &r, 10.0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(correlation_mass(&a, &r, 10.0), 1.0, epsilon = 1e-14);
    }
}
