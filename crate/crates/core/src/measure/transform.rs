use serde::{Deserialize, Serialize};

use super::{region_mass, Mode, NullIntensity, PointPattern};
use crate::error::{Error, Result};

/// Ordered u-values (v-values in correlation mode) of a response pattern.
///
/// Each `u` is the null mass of the region swept out by the response time of
/// one `B` event. Under the null they are ordered independent uniforms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformedSample {
    /// Sorted ascending, ties kept in original `B` order.
    pub u: Vec<f64>,
    /// Response time of the event behind each `u`; empty when the sample was
    /// built directly from u-values.
    pub response: Vec<f64>,
    /// Index into the original `B` pattern for each `u`; empty likewise.
    pub source_index: Vec<usize>,
    pub mode: Mode,
    /// Null mass of the region at `tau_max`, when the test is time-limited.
    pub u_max: Option<f64>,
    /// Number of u-values equal to zero.
    pub zero_count: usize,
}

impl TransformedSample {
    /// Wraps precomputed u-values (any order).
    pub fn from_u_values(mut u: Vec<f64>, mode: Mode, u_max: Option<f64>) -> Result<Self> {
        if let Some(bad) = u.iter().find(|x| !(**x >= 0.0 && **x <= 1.0)) {
            return Err(Error::InvalidArgument(format!("u-value {bad} outside [0, 1]")));
        }
        if let Some(m) = u_max {
            if !(m > 0.0 && m <= 1.0) {
                return Err(Error::InvalidArgument(format!("u_max {m} outside (0, 1]")));
            }
        }
        u.sort_by(f64::total_cmp);
        let zero_count = u.iter().filter(|x| **x == 0.0).count();
        Ok(Self {
            u,
            response: Vec::new(),
            source_index: Vec::new(),
            mode,
            u_max,
            zero_count,
        })
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.zero_count > 0
    }

    /// Smallest response time among events whose u-value equals the
    /// `k`-th smallest (1-based).
    pub fn response_at_rank(&self, k: usize) -> Option<f64> {
        if self.response.is_empty() || k == 0 || k > self.u.len() {
            return None;
        }
        let target = self.u[k - 1];
        let lo = self.u.partition_point(|&x| x < target);
        let hi = self.u.partition_point(|&x| x <= target);
        self.response[lo..hi].iter().copied().reduce(f64::min)
    }
}

/// Maps `B` to its ordered u-values relative to `A` under the null measure.
///
/// In triggering mode the intensity window must start at the first `A` event
/// and no `B` event may precede it; see [`anchor_to_source`] for clipping.
pub fn transform(
    a: &PointPattern,
    b: &PointPattern,
    intensity: &NullIntensity,
    mode: Mode,
    tau_max: Option<f64>,
) -> Result<TransformedSample> {
    let window = intensity.window();
    let a1 = a.first().ok_or(Error::EmptySource)?;
    a.check_within(&window)?;
    b.check_within(&window)?;
    if let Some(t) = tau_max {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!("tau_max must be > 0, got {t}")));
        }
    }

    if mode == Mode::Triggering {
        if window.start != a1 {
            return Err(Error::WindowNotAnchored { start: window.start, a: a1 });
        }
        if let Some(&b1) = b.times().first() {
            if b1 < a1 {
                return Err(Error::EventBeforeSource { b: b1, a: a1 });
            }
        }
    }

    let at = a.times();
    let mut rows: Vec<(f64, f64, usize)> = b
        .times()
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let d = match mode {
                Mode::Triggering => t - at[a.most_recent(t).expect("b >= a1 checked above")],
                Mode::Correlation => (t - at[a.nearest(t).expect("a is nonempty")]).abs(),
            };
            (region_mass(mode, a, intensity, d), d, j)
        })
        .collect();
    rows.sort_by(|x, y| x.0.total_cmp(&y.0));

    let zero_count = rows.iter().filter(|r| r.0 == 0.0).count();
    Ok(TransformedSample {
        u: rows.iter().map(|r| r.0).collect(),
        response: rows.iter().map(|r| r.1).collect(),
        source_index: rows.iter().map(|r| r.2).collect(),
        mode,
        u_max: tau_max.map(|t| region_mass(mode, a, intensity, t)),
        zero_count,
    })
}

/// Triggering-mode inputs after clipping to the first `A` event.
#[derive(Debug, Clone)]
pub struct AnchoredInput {
    pub b: PointPattern,
    pub intensity: NullIntensity,
    /// `B` events dropped because they precede the first `A` event.
    pub dropped: usize,
}

/// Restricts the intensity to `[a_1, end)` and drops `B` events before
/// `a_1`, producing valid triggering-mode inputs.
pub fn anchor_to_source(a: &PointPattern, b: &PointPattern, intensity: &NullIntensity) -> Result<AnchoredInput> {
    let a1 = a.first().ok_or(Error::EmptySource)?;
    let window = intensity.window();
    if !window.contains(a1) {
        return Err(Error::OutsideWindow { time: a1, start: window.start, end: window.end });
    }
    let intensity = if a1 == window.start {
        intensity.clone()
    } else {
        intensity.restrict(a1, window.end)?
    };
    let kept: Vec<f64> = b.times().iter().copied().filter(|&t| t >= a1).collect();
    let dropped = b.len() - kept.len();
    Ok(AnchoredInput {
        b: PointPattern::new(kept)?,
        intensity,
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::ObservationWindow;
    use approx::assert_abs_diff_eq;

    fn pat(t: &[f64]) -> PointPattern {
        PointPattern::new(t.to_vec()).unwrap()
    }

    fn unit() -> NullIntensity {
        NullIntensity::uniform(ObservationWindow::new(0.0, 1.0).unwrap())
    }

    #[test]
    fn single_source_uniform_returns_raw_times() {
        let s = transform(&pat(&[0.0]), &pat(&[0.25, 0.5]), &unit(), Mode::Triggering, None).unwrap();
        assert_eq!(s.u, vec![0.25, 0.5]);
        assert_eq!(s.n(), 2);
        assert_eq!(s.u_max, None);
    }

    #[test]
    fn two_sources_hand_integration() {
        let s = transform(&pat(&[0.0, 0.5]), &pat(&[0.6]), &unit(), Mode::Triggering, None).unwrap();
        assert_abs_diff_eq!(s.u[0], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.response[0], 0.1, epsilon = 1e-15);
    }

    #[test]
    fn coincident_event_is_degenerate() {
        let s = transform(&pat(&[0.0, 0.5]), &pat(&[0.5, 0.7]), &unit(), Mode::Triggering, None).unwrap();
        assert_eq!(s.u[0], 0.0);
        assert_eq!(s.zero_count, 1);
        assert!(s.is_degenerate());
    }

    #[test]
    fn triggering_preconditions() {
        let r = unit();
        assert_eq!(
            transform(&pat(&[0.0, 0.5]), &pat(&[0.0]), &r, Mode::Triggering, None).map(|s| s.n()),
            Ok(1)
        );
        assert!(matches!(
            transform(&pat(&[0.2]), &pat(&[0.5]), &r, Mode::Triggering, None),
            Err(Error::WindowNotAnchored { .. })
        ));
        assert!(matches!(
            transform(&PointPattern::empty(), &pat(&[0.5]), &r, Mode::Triggering, None),
            Err(Error::EmptySource)
        ));
        // Correlation mode accepts events on either side of A.
        let s = transform(&pat(&[0.5]), &pat(&[0.1, 0.6]), &r, Mode::Correlation, None).unwrap();
        assert_abs_diff_eq!(s.u[0], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.u[1], 0.8, epsilon = 1e-15);
    }

    #[test]
    fn anchoring_clips_and_renormalizes() {
        let r = unit();
        let got = anchor_to_source(&pat(&[0.5]), &pat(&[0.1, 0.75]), &r).unwrap();
        assert_eq!(got.dropped, 1);
        assert_eq!(got.b.times(), &[0.75]);
        let s = transform(&pat(&[0.5]), &got.b, &got.intensity, Mode::Triggering, None).unwrap();
        assert_abs_diff_eq!(s.u[0], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn u_max_and_tied_responses() {
        let s = transform(&pat(&[0.0, 0.5]), &pat(&[0.125, 0.625]), &unit(), Mode::Triggering, Some(0.125)).unwrap();
        assert_abs_diff_eq!(s.u_max.unwrap(), 0.25, epsilon = 1e-15);
        assert_eq!(s.source_index, vec![0, 1]);
        assert_eq!(s.u[0], s.u[1]);
        assert_abs_diff_eq!(s.response_at_rank(2).unwrap(), 0.125, epsilon = 1e-15);
    }

    #[test]
    fn from_u_values_sorts_and_validates() {
        let s = TransformedSample::from_u_values(vec![0.5, 0.0, 0.2], Mode::Triggering, None).unwrap();
        assert_eq!(s.u, vec![0.0, 0.2, 0.5]);
        assert_eq!(s.zero_count, 1);
        assert_eq!(s.response_at_rank(1), None);
        assert!(TransformedSample::from_u_values(vec![1.5], Mode::Triggering, None).is_err());
        assert!(TransformedSample::from_u_values(vec![0.5], Mode::Triggering, Some(0.0)).is_err());
    }
}
