use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant maps to one failure mode of a public operation; the CLI
/// turns them into exit codes and a machine-readable JSON object.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("no root of the induced quadratic lies in (0,1)")]
    NotInUnitInterval,
    #[error("period consists only of 2s; the expansion degenerates to a rational")]
    DegeneratePeriod,
    #[error("interval could not be refined below the precision floor 2^-{floor_bits}")]
    PrecisionExhausted { floor_bits: u32 },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("digit description is unbounded")]
    UnboundedInput,
    #[error("digit word cannot be canonicalized: {0}")]
    NotCanonicalizable(String),
    #[error("all digits vanish")]
    ZeroDigits,
    #[error("beta = q*alpha - p with q = {q}; use the homogeneous constant")]
    FiniteSupport { q: String },
    #[error("the continued fraction terminates after {0} digits (alpha is rational)")]
    Terminated(usize),
    #[error("no digit value lands the target window at index {index}")]
    TargetUnreachable { index: usize },
    #[error("dissection node is empty")]
    EmptyNode,
    #[error("gap parameter s = {s} is below N = {n}")]
    SBelowN { s: usize, n: usize },
    #[error("target lies outside the product window")]
    TargetOutsideWindow,
    #[error("input is not eventually periodic")]
    NotEventuallyPeriodic,
    #[error("schedule too tight: {0}")]
    ScheduleTooTight(String),
    #[error("digit word is not in the required set: {0}")]
    InvalidEF(String),
    #[error("exact arithmetic required: {0}")]
    Inexact(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("Hall's condition fails during descent at depth {depth}")]
    HallConditionFailed { depth: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
