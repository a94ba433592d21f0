use thiserror::Error;

use crate::validate::Diagnostic;

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("system file is invalid:\n{}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("series for {entity}: {source}")]
    Series {
        entity: String,
        #[source]
        source: ctsched_bernstein::FitError,
    },
}

fn format_diagnostics(list: &[Diagnostic]) -> String {
    list.iter()
        .map(|d| format!("  - {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}
