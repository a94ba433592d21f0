//! Hourly discrete-time counterpart of the continuous-time model, for cost
//! and structural-imbalance comparison. Shares the `SystemInstance` and the
//! topology/volume/cut/segment/commitment structure, with one scalar per
//! variable per hour and endpoint-difference ramp limits between hours.

mod builder;
mod error;
mod schedule;

pub use builder::{build_dt, DtBlocks, DtPlantBlock, DtProblem, DtThermalBlock};
pub use error::{DtBuildError, DtError};
pub use schedule::{DtObjectiveBreakdown, DtSchedule, DtSolveMeta};

use ctsched_milp::{diagnose_infeasibility, solve, SolveOptions, SolveStatus, SolverSpec};
use ctsched_system::SystemInstance;

#[derive(Debug, Clone)]
pub struct DtSolveOptions {
    pub solver: SolverSpec,
    pub solve: SolveOptions,
    pub diagnose_infeasible: bool,
}

impl Default for DtSolveOptions {
    fn default() -> Self {
        Self {
            solver: SolverSpec::Builtin,
            solve: SolveOptions::default(),
            diagnose_infeasible: true,
        }
    }
}

/// Build, solve and extract the hourly schedule.
pub fn solve_dt(instance: &SystemInstance, opts: &DtSolveOptions) -> Result<DtSchedule, DtError> {
    let problem = build_dt(instance)?;
    solve_dt_problem(instance, problem, opts)
}

pub fn solve_dt_problem(
    instance: &SystemInstance,
    problem: DtProblem,
    opts: &DtSolveOptions,
) -> Result<DtSchedule, DtError> {
    let sol = solve(&problem.model, &opts.solver, &opts.solve)?;
    match sol.status {
        SolveStatus::Optimal | SolveStatus::FeasibleGap => Ok(schedule::extract_dt_schedule(
            instance,
            &problem.model,
            &problem.blocks,
            &sol,
            problem.warnings,
        )),
        SolveStatus::Infeasible => {
            let groups = if opts.diagnose_infeasible {
                diagnose_infeasibility(&problem.model, &opts.solver, &opts.solve)?
            } else {
                Vec::new()
            };
            Err(DtError::Infeasible { groups })
        }
        SolveStatus::Unbounded => Err(DtError::Unbounded),
        SolveStatus::Error => Err(DtError::SolverFailed(
            sol.message.unwrap_or_else(|| "unknown solver failure".into()),
        )),
    }
}
