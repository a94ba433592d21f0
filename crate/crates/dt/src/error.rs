use thiserror::Error;

#[derive(Debug, Error)]
pub enum DtBuildError {
    #[error("load of area {area} does not cover the model horizon")]
    LoadMismatch { area: String },
    #[error(transparent)]
    Model(#[from] ctsched_milp::ModelError),
}

#[derive(Debug, Error)]
pub enum DtError {
    #[error(transparent)]
    Build(#[from] DtBuildError),
    #[error(transparent)]
    Solve(#[from] ctsched_milp::SolveError),
    #[error("model is infeasible; suspected constraint groups: {}", format_groups(.groups))]
    Infeasible { groups: Vec<(String, f64)> },
    #[error("model is unbounded")]
    Unbounded,
    #[error("solver failed: {0}")]
    SolverFailed(String),
}

fn format_groups(groups: &[(String, f64)]) -> String {
    if groups.is_empty() {
        return "(no elastic diagnosis available)".to_string();
    }
    groups
        .iter()
        .map(|(g, v)| format!("{g} (violation {v:.3})"))
        .collect::<Vec<_>>()
        .join(", ")
}
