use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid observation window [{start}, {end})")]
    InvalidWindow { start: f64, end: f64 },

    #[error("event times must be finite and strictly increasing (index {index})")]
    NotStrictlyIncreasing { index: usize },

    #[error("event time {time} lies outside the window [{start}, {end})")]
    OutsideWindow { time: f64, start: f64, end: f64 },

    #[error("invalid intensity: {0}")]
    InvalidIntensity(String),

    #[error("interval [{start}, {end}) is not contained in the window")]
    IntervalOutsideWindow { start: f64, end: f64 },

    #[error("process A must contain at least one event")]
    EmptySource,

    #[error("event of B at {b} precedes the first event of A at {a}")]
    EventBeforeSource { b: f64, a: f64 },

    #[error("window start {start} must equal the first A event {a} in triggering mode")]
    WindowNotAnchored { start: f64, a: f64 },

    #[error("sample is empty")]
    EmptySample,

    #[error("thresholds must lie in [0, 1] and be nondecreasing (index {index})")]
    InvalidThresholds { index: usize },

    #[error("pair {from} -> {to}: {inner}")]
    Pair { from: String, to: String, inner: Box<Error> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
