use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("horizon mismatch: [{}, {}] vs [{}, {}]", .a.0, .a.1, .b.0, .b.1)]
    HorizonMismatch { a: (f64, f64), b: (f64, f64) },
    #[error("sampling resolution must be positive, got {0}")]
    BadResolution(f64),
    #[error("raw reference samples for area {0} are missing or not strictly increasing")]
    BadReference(String),
    #[error(transparent)]
    Basis(#[from] ctsched_bernstein::BernsteinError),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}
