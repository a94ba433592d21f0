use thiserror::Error;

/// Errors from basis evaluation and polynomial construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BernsteinError {
    #[error("scaled time {0} is outside [0, 1]")]
    OutOfUnitInterval(f64),
    #[error("time {t} is outside the horizon [{start}, {end}]")]
    OutsideHorizon { t: f64, start: f64, end: f64 },
    #[error("unsupported degree {0}, expected 2, 3 or 4")]
    UnsupportedDegree(usize),
    #[error("expected a degree-{expected} coefficient vector, got degree {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("interval length must be positive, got {0} s")]
    NonPositiveInterval(f64),
    #[error("knots must be strictly increasing and contain at least two entries")]
    BadKnots,
    #[error("{pieces} coefficient vectors do not match {intervals} knot intervals")]
    PieceCountMismatch { pieces: usize, intervals: usize },
    #[error("coefficients must be finite")]
    NonFinite,
}

/// Errors from least-squares fitting and sample ingestion.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("interval {interval} is underdetermined: {samples} samples, need at least {needed}")]
    Underdetermined {
        interval: usize,
        samples: usize,
        needed: usize,
    },
    #[error("normal equations are rank deficient near interval {interval}")]
    RankDeficient { interval: usize },
    #[error("samples must be sorted by time (violation at index {0})")]
    UnsortedSamples(usize),
    #[error("sample time {0} lies outside the knot span")]
    SampleOutsideKnots(f64),
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Basis(#[from] BernsteinError),
}
