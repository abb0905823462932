//! Benjamini-Hochberg screening of many pairwise tests, and the report of
//! the events that drive a detected triggering effect.
//!
//! Plain step-up BH is used. The tests in a screen share streams and are
//! therefore dependent, so the nominal FDR guarantee is only approximate.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glrt::{run_test_anchored, GlrOutcome, TestOptions};
use crate::measure::{Mode, NullIntensity, PointPattern};

/// Unadjusted level of the weaker tier.
pub const NOMINAL_LEVEL: f64 = 0.05;

/// Indices (ascending) rejected by the BH step-up rule at level `q`.
///
/// With `p_(1) <= ... <= p_(m)`, rejects every hypothesis with
/// `p <= p_(k*)` where `k* = max{k : p_(k) <= k q / m}`. Ties at the
/// boundary are rejected together.
///
/// ```
/// use ppassoc::multiplicity::bh_reject;
/// assert_eq!(bh_reject(&[0.5, 0.01, 0.04, 0.02], 0.1).unwrap(), vec![1, 2, 3]);
/// ```
pub fn bh_reject(p_values: &[f64], q: f64) -> Result<Vec<usize>> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(format!("FDR level must lie in (0, 1), got {q}")));
    }
    if let Some(bad) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidArgument(format!("p-value {bad} outside [0, 1]")));
    }
    let m = p_values.len();
    let mut sorted = p_values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let cutoff = (1..=m)
        .rev()
        .find(|&k| sorted[k - 1] <= k as f64 * q / m as f64)
        .map(|k| sorted[k - 1]);
    Ok(match cutoff {
        None => Vec::new(),
        Some(c) => (0..m).filter(|&i| p_values[i] <= c).collect(),
    })
}

/// Significance class of a screened pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tier {
    #[serde(rename = "fdr-rejected")]
    FdrRejected,
    /// `p <= 0.05` without surviving the FDR adjustment.
    #[serde(rename = "nominal-0.05")]
    Nominal,
    #[serde(rename = "not-significant")]
    NotSignificant,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::FdrRejected => "fdr-rejected",
            Tier::Nominal => "nominal-0.05",
            Tier::NotSignificant => "not-significant",
        }
    }
}

/// One pair to screen: does `source` trigger (or correlate with) `target`?
#[derive(Debug, Clone, Copy)]
pub struct PairInput<'a> {
    pub source: &'a str,
    pub target: &'a str,
    pub a: &'a PointPattern,
    pub b: &'a PointPattern,
    /// Empty, or one payload per event of `b`.
    pub payloads: &'a [Option<String>],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenEntry {
    pub source: String,
    pub target: String,
    pub outcome: GlrOutcome,
    pub tier: Tier,
    /// Triggered events, for FDR-rejected triggering pairs.
    pub report: Option<TriggeringReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenResult {
    pub q: f64,
    pub entries: Vec<ScreenEntry>,
    /// Indices into `entries` rejected by BH.
    pub rejected: Vec<usize>,
}

impl ScreenResult {
    /// Builds the result from finished tests by applying BH and assigning
    /// tiers.
    pub fn from_outcomes(outcomes: Vec<(String, String, GlrOutcome)>, q: f64) -> Result<Self> {
        let p: Vec<f64> = outcomes.iter().map(|o| o.2.p_value).collect();
        let rejected = bh_reject(&p, q)?;
        let mut is_rejected = vec![false; p.len()];
        for &i in &rejected {
            is_rejected[i] = true;
        }
        let entries = outcomes
            .into_iter()
            .zip(is_rejected)
            .map(|((source, target, outcome), rej)| {
                let tier = if rej {
                    Tier::FdrRejected
                } else if outcome.p_value <= NOMINAL_LEVEL {
                    Tier::Nominal
                } else {
                    Tier::NotSignificant
                };
                ScreenEntry { source, target, outcome, tier, report: None }
            })
            .collect();
        Ok(Self { q, entries, rejected })
    }

    /// Tier matrix as CSV: one row per source, one column per target, in
    /// order of first appearance. Untested cells are left empty.
    pub fn to_csv_matrix(&self) -> String {
        let mut sources: Vec<&str> = Vec::new();
        let mut targets: Vec<&str> = Vec::new();
        let mut cells = BTreeMap::new();
        for e in &self.entries {
            if !sources.contains(&e.source.as_str()) {
                sources.push(&e.source);
            }
            if !targets.contains(&e.target.as_str()) {
                targets.push(&e.target);
            }
            cells.insert((e.source.as_str(), e.target.as_str()), e.tier);
        }
        let mut out = String::from("source");
        for t in &targets {
            out.push(',');
            out.push_str(&csv_field(t));
        }
        out.push('\n');
        for s in &sources {
            out.push_str(&csv_field(s));
            for t in &targets {
                out.push(',');
                if let Some(tier) = cells.get(&(*s, *t)) {
                    out.push_str(tier.as_str());
                }
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Tests every pair (in parallel) and applies BH at level `q`.
///
/// Triggering tests are clipped to start at the first event of each source,
/// and each FDR-rejected triggering pair gets a [`triggering_report`].
pub fn screen(pairs: &[PairInput<'_>], intensity: &NullIntensity, options: &TestOptions, q: f64) -> Result<ScreenResult> {
    let outcomes = pairs
        .par_iter()
        .map(|p| {
            run_test_anchored(p.a, p.b, intensity, options)
                .map(|o| (p.source.to_string(), p.target.to_string(), o))
                .map_err(|e| Error::Pair { from: p.source.into(), to: p.target.into(), inner: Box::new(e) })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut result = ScreenResult::from_outcomes(outcomes, q)?;
    if options.mode == Mode::Triggering {
        for &i in &result.rejected {
            let p = &pairs[i];
            let entry = &mut result.entries[i];
            entry.report = Some(triggering_report(p.a, p.b, p.payloads, &entry.outcome)?);
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub time: f64,
    /// Time since the anchoring response `e`.
    pub lag: f64,
    pub payload: Option<String>,
}

/// Events of `B` within the estimated range of the most strongly triggered
/// response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriggeringReport {
    /// Source event preceding the anchor.
    pub source_time: Option<f64>,
    /// Anchor `e`: the response closest after its most recent source event.
    pub anchor_time: Option<f64>,
    #[serde(with = "crate::json_float::option")]
    pub tau_hat: Option<f64>,
    pub entries: Vec<ReportEntry>,
    pub notice: Option<String>,
}

/// Finds the `B` event `e` that follows an `A` event most closely, then lists
/// every `B` event in `[e, e + tau_hat]` with its lag from `e`.
///
/// `payloads` is either empty or aligned with `b`.
pub fn triggering_report(
    a: &PointPattern,
    b: &PointPattern,
    payloads: &[Option<String>],
    outcome: &GlrOutcome,
) -> Result<TriggeringReport> {
    if !payloads.is_empty() && payloads.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "{} payloads for {} events",
            payloads.len(),
            b.len()
        )));
    }
    let closest = b
        .times()
        .iter()
        .enumerate()
        .filter_map(|(j, &t)| a.most_recent(t).map(|i| (t - a.times()[i], j, i)))
        .min_by(|x, y| x.0.total_cmp(&y.0));
    let Some((_, j, i)) = closest else {
        return Ok(TriggeringReport {
            source_time: None,
            anchor_time: None,
            tau_hat: outcome.tau_hat,
            entries: Vec::new(),
            notice: Some("no event of B follows an event of A".into()),
        });
    };
    let e = b.times()[j];
    let (tau, notice) = match outcome.tau_hat {
        Some(t) => (t, None),
        None => (0.0, Some("no range estimate; only the anchor event is listed".into())),
    };
    let entries = b
        .indices_in(e, e + tau)
        .map(|k| ReportEntry {
            time: b.times()[k],
            lag: b.times()[k] - e,
            payload: payloads.get(k).cloned().flatten(),
        })
        .collect();
    Ok(TriggeringReport {
        source_time: Some(a.times()[i]),
        anchor_time: Some(e),
        tau_hat: outcome.tau_hat,
        entries,
        notice,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::ObservationWindow;

    fn pat(t: &[f64]) -> PointPattern {
        PointPattern::new(t.to_vec()).unwrap()
    }

    #[test]
    fn step_up_examples() {
        assert_eq!(bh_reject(&[0.01, 0.02, 0.04, 0.5], 0.1).unwrap(), vec![0, 1, 2]);
        assert!(bh_reject(&[1.0, 1.0, 1.0], 0.1).unwrap().is_empty());
        assert_eq!(bh_reject(&[0.05], 0.1).unwrap(), vec![0]);
        assert!(bh_reject(&[], 0.1).unwrap().is_empty());
    }

    #[test]
    fn step_up_goes_past_failing_ranks() {
        // p_(1) fails 0.1/4 but p_(2) = 0.05 passes 2 * 0.1 / 4.
        assert_eq!(bh_reject(&[0.03, 0.05, 0.9, 0.8], 0.1).unwrap(), vec![0, 1]);
    }

    #[test]
    fn boundary_ties_all_or_none() {
        assert_eq!(bh_reject(&[0.04, 0.04, 0.04, 0.9], 0.1).unwrap(), vec![0, 1, 2]);
        assert!(bh_reject(&[0.09, 0.09, 0.5], 0.1).unwrap().is_empty());
    }

    #[test]
    fn bad_inputs() {
        assert!(bh_reject(&[0.1], 0.0).is_err());
        assert!(bh_reject(&[0.1], 1.0).is_err());
        assert!(bh_reject(&[1.5], 0.1).is_err());
        assert!(bh_reject(&[f64::NAN], 0.1).is_err());
    }

    fn outcome(p: f64, tau_hat: Option<f64>) -> GlrOutcome {
        GlrOutcome {
            mode: crate::measure::Mode::Triggering,
            n: 1,
            tau_max: None,
            u_max: None,
            log_t: 1.0,
            k_hat: Some(1),
            tau_hat,
            lambda1_hat: Some(1.0),
            lambda2_hat: Some(0.0),
            p_value: p,
            degeneracy: Default::default(),
        }
    }

    #[test]
    fn tiers_partition_entries() {
        let outs = [0.001, 0.03, 0.2]
            .iter()
            .enumerate()
            .map(|(i, &p)| ("x".to_string(), format!("t{i}"), outcome(p, None)))
            .collect();
        let r = ScreenResult::from_outcomes(outs, 0.01).unwrap();
        let tiers: Vec<Tier> = r.entries.iter().map(|e| e.tier).collect();
        assert_eq!(tiers, vec![Tier::FdrRejected, Tier::Nominal, Tier::NotSignificant]);
        assert_eq!(r.to_csv_matrix(), "source,t0,t1,t2\nx,fdr-rejected,nominal-0.05,not-significant\n");
    }

    #[test]
    fn empty_screen() {
        let r = screen(&[], &NullIntensity::uniform(ObservationWindow::new(0.0, 1.0).unwrap()), &TestOptions::triggering(), 0.1)
            .unwrap();
        assert!(r.entries.is_empty() && r.rejected.is_empty());
        assert_eq!(r.to_csv_matrix(), "source\n");
    }

    #[test]
    fn screen_errors_name_the_pair() {
        let a = PointPattern::empty();
        let b = pat(&[0.5]);
        let pairs = [PairInput { source: "s", target: "t", a: &a, b: &b, payloads: &[] }];
        let r = NullIntensity::uniform(ObservationWindow::new(0.0, 1.0).unwrap());
        let err = screen(&pairs, &r, &TestOptions::triggering(), 0.1).unwrap_err();
        assert!(matches!(err, Error::Pair { ref from, .. } if from == "s"));
    }

    #[test]
    fn report_lists_events_in_range() {
        let a = pat(&[0.0, 10.0]);
        let b = pat(&[3.0, 10.5, 11.0, 12.0, 20.0]);
        let payloads: Vec<Option<String>> = ["p0", "p1", "p2", "p3", "p4"].iter().map(|s| Some(s.to_string())).collect();
        let r = triggering_report(&a, &b, &payloads, &outcome(0.01, Some(1.5))).unwrap();
        assert_eq!(r.anchor_time, Some(10.5));
        assert_eq!(r.source_time, Some(10.0));
        let listed: Vec<(f64, f64)> = r.entries.iter().map(|e| (e.time, e.lag)).collect();
        assert_eq!(listed, vec![(10.5, 0.0), (11.0, 0.5), (12.0, 1.5)]);
        assert_eq!(r.entries[2].payload.as_deref(), Some("p3"));
    }

    #[test]
    fn report_with_zero_range_lists_anchor_only() {
        let a = pat(&[0.0, 5.0]);
        let b = pat(&[5.0, 5.25]);
        let r = triggering_report(&a, &b, &[], &outcome(0.01, Some(0.0))).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].time, 5.0);
        assert_eq!(r.entries[0].payload, None);
    }

    #[test]
    fn report_without_following_events() {
        let r = triggering_report(&pat(&[5.0]), &pat(&[1.0, 2.0]), &[], &outcome(1.0, None)).unwrap();
        assert!(r.entries.is_empty());
        assert!(r.notice.is_some());
    }
}
