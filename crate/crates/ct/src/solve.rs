use ctsched_milp::{diagnose_infeasibility, solve, SolveOptions, SolveStatus, SolverSpec};
use ctsched_system::SystemInstance;

use crate::builder::{build_ct, CtBuildOptions, CtProblem};
use crate::error::CtError;
use crate::schedule::{extract_schedule, Schedule};

#[derive(Debug, Clone)]
pub struct CtSolveOptions {
    pub solver: SolverSpec,
    pub solve: SolveOptions,
    pub build: CtBuildOptions,
    /// Re-solve an elastic relaxation on infeasibility to point at the
    /// violated constraint groups.
    pub diagnose_infeasible: bool,
}

impl Default for CtSolveOptions {
    fn default() -> Self {
        Self {
            solver: SolverSpec::Builtin,
            solve: SolveOptions::default(),
            build: CtBuildOptions::default(),
            diagnose_infeasible: true,
        }
    }
}

/// Build, solve and extract the continuous-time schedule.
pub fn solve_ct(instance: &SystemInstance, opts: &CtSolveOptions) -> Result<Schedule, CtError> {
    let problem = build_ct(instance, opts.build.clone())?;
    solve_ct_problem(instance, problem, opts)
}

/// Solve an already-built problem (lets callers tweak the model first).
pub fn solve_ct_problem(
    instance: &SystemInstance,
    problem: CtProblem,
    opts: &CtSolveOptions,
) -> Result<Schedule, CtError> {
    let sol = solve(&problem.model, &opts.solver, &opts.solve)?;
    match sol.status {
        SolveStatus::Optimal | SolveStatus::FeasibleGap => Ok(extract_schedule(
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
            Err(CtError::Infeasible { groups })
        }
        SolveStatus::Unbounded => Err(CtError::Unbounded),
        SolveStatus::Error => Err(CtError::SolverFailed(
            sol.message.unwrap_or_else(|| "unknown solver failure".into()),
        )),
    }
}
