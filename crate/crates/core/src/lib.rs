//! Exact likelihood-ratio tests for triggering and correlation between two
//! one-dimensional point processes.
//!
//! Given the event times of a source process `A`, a response process `B` and
//! a known null intensity shape `r` for `B`, the test asks whether `B` is
//! more active shortly after (or around) the events of `A` than `r` alone
//! explains. The main entry point is [`glrt::run_test`]:
//!
//! ```
//! use ppassoc::prelude::*;
//!
//! let window = ObservationWindow::new(0.0, 1.0).unwrap();
//! let intensity = NullIntensity::uniform(window);
//! let a = PointPattern::new(vec![0.0]).unwrap();
//! let b = PointPattern::new(vec![0.2]).unwrap();
//! let out = run_test(&a, &b, &intensity, &TestOptions::triggering()).unwrap();
//! assert!((out.p_value - 0.2).abs() < 1e-9);
//! ```
//!
//! Module map:
//!
//! - [`measure`]: windows, patterns, piecewise-constant null intensities,
//!   triggered/correlation regions and the u-value transform.
//! - [`glrt`]: the likelihood-ratio statistic and its maximizer.
//! - [`exactp`]: finite-sample p-values via an ordered-uniform crossing DP.
//! - [`diagnostics`]: ECDF tables, Fisher's method, weighted K-S statistics.
//! - [`simulate`]: null/alternative generators and Monte Carlo experiments.
//! - [`multiplicity`]: Benjamini-Hochberg screening and triggering reports.
//! - [`cli`]: ingestion and command dispatch behind the `ppassoc` binary.

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod exactp;
pub mod glrt;
mod json_float;
pub mod measure;
pub mod multiplicity;
pub mod simulate;
pub mod special;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::diagnostics::{diagnose, fisher_combine, KsConfig};
    pub use crate::error::{Error, Result};
    pub use crate::exactp::{ordered_uniform_survival, p_value, solve_thresholds};
    pub use crate::glrt::{maximize, run_test, GlrOutcome, TestOptions};
    pub use crate::measure::{
        transform, IntervalUnion, Mode, NullIntensity, ObservationWindow, PointPattern,
        TransformedSample,
    };
    pub use crate::multiplicity::{bh_reject, screen, triggering_report, PairInput, ScreenResult};
    pub use crate::simulate::{sample_alternative, sample_null, AlternativeSpec, EventCount, RngSeed};
}
