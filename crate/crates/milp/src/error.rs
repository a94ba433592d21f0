use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid variable or constraint name `{0}` (alphanumeric and underscore, <= 255 chars, no leading digit)")]
    BadName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("expression references unregistered variable index {0}")]
    UnknownVar(usize),
    #[error("bad bounds [{lo}, {hi}] for `{name}`")]
    BadBounds { name: String, lo: f64, hi: f64 },
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver command is empty")]
    EmptyCommand,
    #[error("model error: {0}")]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpParseError {
    #[error("lp line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("lp parse produced an inconsistent model: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolParseError {
    #[error("solution file line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("solution file is empty or unrecognized")]
    Unrecognized,
}
