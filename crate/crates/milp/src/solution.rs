use crate::model::{MilpModel, VarRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// A feasible incumbent with a nonzero MIP gap (e.g. after a time limit).
    FeasibleGap,
    Infeasible,
    Unbounded,
    Error,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::FeasibleGap => "feasible_gap",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::Error => "error",
        }
    }

    pub fn has_values(self) -> bool {
        matches!(self, SolveStatus::Optimal | SolveStatus::FeasibleGap)
    }
}

/// Outcome of a solve. Variable values are present iff the status is
/// `optimal` or `feasible_gap`.
#[derive(Debug, Clone)]
pub struct Solution {
    pub status: SolveStatus,
    values: Vec<f64>,
    pub objective: Option<f64>,
    pub mip_gap: Option<f64>,
    pub wall_time_s: f64,
    pub warnings: Vec<String>,
    pub message: Option<String>,
}

impl Solution {
    pub fn failed(status: SolveStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            values: Vec::new(),
            objective: None,
            mip_gap: None,
            wall_time_s: 0.0,
            warnings: Vec::new(),
            message: Some(message.into()),
        }
    }

    pub fn with_values(status: SolveStatus, values: Vec<f64>, objective: f64) -> Self {
        debug_assert!(status.has_values());
        Self {
            status,
            values,
            objective: Some(objective),
            mip_gap: None,
            wall_time_s: 0.0,
            warnings: Vec::new(),
            message: None,
        }
    }

    pub fn value(&self, var: VarRef) -> f64 {
        self.values.get(var.index()).copied().unwrap_or(0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_by_name(&self, model: &MilpModel, name: &str) -> Option<f64> {
        model.var_by_name(name).map(|r| self.value(r))
    }

    /// Recompute the objective from the stored values; used to double-check
    /// parsed solver output.
    pub fn objective_from_values(&self, model: &MilpModel) -> f64 {
        let obj = model.objective();
        obj.iter().map(|(v, c)| c * self.value(v)).sum::<f64>() + obj.constant
    }
}
