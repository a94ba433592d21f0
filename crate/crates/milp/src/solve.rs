//! Solve entry point: either the bundled engine or an external solver
//! invoked as a subprocess on an LP file.

use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crate::engine::solve_builtin;
use crate::error::SolveError;
use crate::lp::write_lp_file;
use crate::model::{LinExpr, MilpModel, Relop, VarRef};
use crate::sol::{align_solution, parse_solution_file};
use crate::solution::{Solution, SolveStatus};

/// Environment variable that overrides the solver command.
pub const SOLVER_ENV: &str = "CT_SOLVER";
/// Gap target forwarded to external solvers.
pub const GAP_ENV: &str = "CTSCHED_GAP";
/// Time limit in seconds forwarded to external solvers.
pub const TIME_LIMIT_ENV: &str = "CTSCHED_TIME_LIMIT";

#[derive(Debug, Clone, PartialEq)]
pub enum SolverSpec {
    /// The bundled HiGHS-backed engine, in process.
    Builtin,
    /// External command, whitespace-split; invoked as
    /// `<cmd...> <model.lp> <solution-out>` with the gap target and time
    /// limit forwarded in `CTSCHED_GAP` / `CTSCHED_TIME_LIMIT`.
    Command(String),
}

impl SolverSpec {
    /// Honor the `CT_SOLVER` environment variable, falling back to the given
    /// default.
    pub fn from_env_or(default: SolverSpec) -> SolverSpec {
        match std::env::var(SOLVER_ENV) {
            Ok(cmd) if !cmd.trim().is_empty() => SolverSpec::Command(cmd),
            _ => default,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Relative MIP gap at which the solve may stop. Exact (1e-9) by default.
    pub gap_target: f64,
    pub time_limit_s: Option<f64>,
    pub verbose: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            gap_target: 1e-9,
            time_limit_s: None,
            verbose: false,
        }
    }
}

pub fn solve(
    model: &MilpModel,
    solver: &SolverSpec,
    opts: &SolveOptions,
) -> Result<Solution, SolveError> {
    match solver {
        SolverSpec::Builtin => Ok(solve_builtin(model, opts)),
        SolverSpec::Command(cmd) => solve_subprocess(model, cmd, opts),
    }
}

fn solve_subprocess(
    model: &MilpModel,
    cmd_line: &str,
    opts: &SolveOptions,
) -> Result<Solution, SolveError> {
    let parts: Vec<&str> = cmd_line.split_whitespace().collect();
    if parts.is_empty() {
        return Err(SolveError::EmptyCommand);
    }
    let dir = tempfile::tempdir()?;
    let lp_path = dir.path().join("model.lp");
    let sol_path = dir.path().join("model.sol");
    write_lp_file(model, &lp_path)?;

    let start = Instant::now();
    let mut command = Command::new(parts[0]);
    command
        .args(&parts[1..])
        .arg(&lp_path)
        .arg(&sol_path)
        .env(GAP_ENV, format!("{}", opts.gap_target))
        .stdout(Stdio::null())
        .stderr(Stdio::null());
    if let Some(limit) = opts.time_limit_s {
        command.env(TIME_LIMIT_ENV, format!("{limit}"));
    }
    let mut child = match command.spawn() {
        Ok(c) => c,
        Err(e) => {
            return Ok(Solution::failed(
                SolveStatus::Error,
                format!("failed to launch solver `{}`: {e}", parts[0]),
            ))
        }
    };

    // Poll so a hung solver cannot stall the caller past its time limit.
    // Well-behaved solvers stop themselves via TIME_LIMIT_ENV; the grace
    // period only covers writing the incumbent out.
    let hard_limit = opts
        .time_limit_s
        .map(|t| Duration::from_secs_f64(t + (0.5 * t).max(2.0)));
    let mut timed_out = false;
    let exit = loop {
        match child.try_wait()? {
            Some(status) => break Some(status),
            None => {
                if let Some(limit) = hard_limit {
                    if start.elapsed() > limit {
                        let _ = child.kill();
                        let _ = child.wait();
                        timed_out = true;
                        break None;
                    }
                }
                std::thread::sleep(Duration::from_millis(20));
            }
        }
    };
    let wall = start.elapsed().as_secs_f64();

    // Prefer whatever the solver managed to write; fall back to exit-status
    // based errors.
    let parsed = if sol_path.exists() {
        parse_solution_file(&sol_path).ok()
    } else {
        None
    };
    let mut solution = match parsed {
        Some(parsed) => {
            let mut s = align_solution(model, &parsed);
            if timed_out && s.status == SolveStatus::Optimal {
                // The incumbent predates the kill; do not trust optimality.
                s.status = SolveStatus::FeasibleGap;
                s.warnings
                    .push("solver was killed at the time limit; incumbent kept".into());
            }
            s
        }
        None if timed_out => Solution::failed(
            SolveStatus::Error,
            "solver hit the time limit without writing a solution file",
        ),
        None => match exit {
            Some(status) if !status.success() => Solution::failed(
                SolveStatus::Error,
                format!("solver exited with {status} and wrote no solution file"),
            ),
            _ => Solution::failed(
                SolveStatus::Error,
                "solver wrote no parseable solution file",
            ),
        },
    };
    solution.wall_time_s = wall;
    Ok(solution)
}

/// Elastic relaxation: every constraint gains non-negative slack penalized at
/// `weight`. Solving the relaxation of an infeasible model and summing the
/// slack per constraint group points at the constraints that cannot hold.
pub fn elastic_relaxation(model: &MilpModel, weight: f64) -> (MilpModel, Vec<(String, VarRef)>) {
    let mut relaxed = model.clone();
    let mut slacks = Vec::new();
    let mut objective = model.objective().clone();
    for (idx, c) in model.constraints().iter().enumerate() {
        let group = if c.group.is_empty() {
            c.name.clone()
        } else {
            c.group.clone()
        };
        let mut add_slack = |relaxed: &mut MilpModel,
                             objective: &mut LinExpr,
                             suffix: &str,
                             sign: f64| {
            let name = format!("elastic_{idx}_{suffix}");
            let s = relaxed
                .add_continuous(name, 0.0, f64::INFINITY)
                .expect("elastic slack names are unique");
            objective.add_term(s, weight);
            relaxed.constraint_expr_add(idx, s, sign);
            slacks.push((group.clone(), s));
        };
        match c.op {
            Relop::Le => add_slack(&mut relaxed, &mut objective, "dn", -1.0),
            Relop::Ge => add_slack(&mut relaxed, &mut objective, "up", 1.0),
            Relop::Eq => {
                add_slack(&mut relaxed, &mut objective, "up", 1.0);
                add_slack(&mut relaxed, &mut objective, "dn", -1.0);
            }
        }
    }
    relaxed
        .set_objective(objective)
        .expect("slack variables are registered");
    (relaxed, slacks)
}

/// Solve the elastic relaxation of an infeasible model and report the total
/// slack used per constraint group, largest first.
pub fn diagnose_infeasibility(
    model: &MilpModel,
    solver: &SolverSpec,
    opts: &SolveOptions,
) -> Result<Vec<(String, f64)>, SolveError> {
    let (relaxed, slacks) = elastic_relaxation(model, 1e6);
    let sol = solve(&relaxed, solver, opts)?;
    if !sol.status.has_values() {
        return Ok(Vec::new());
    }
    let mut per_group: std::collections::BTreeMap<String, f64> = Default::default();
    for (group, var) in slacks {
        *per_group.entry(group).or_insert(0.0) += sol.value(var);
    }
    let mut out: Vec<(String, f64)> = per_group
        .into_iter()
        .filter(|(_, v)| *v > 1e-9)
        .collect();
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elastic_relaxation_localizes_the_conflict() {
        let mut m = MilpModel::new("t");
        let x = m.add_continuous("x", 0.0, 10.0).unwrap();
        m.add_constraint_in_group("lo", "demand", LinExpr::term(x, 1.0), Relop::Ge, 8.0)
            .unwrap();
        m.add_constraint_in_group("hi", "capacity", LinExpr::term(x, 1.0), Relop::Le, 3.0)
            .unwrap();
        let groups =
            diagnose_infeasibility(&m, &SolverSpec::Builtin, &SolveOptions::default()).unwrap();
        assert!(!groups.is_empty());
        let total: f64 = groups.iter().map(|(_, v)| v).sum();
        assert!((total - 5.0).abs() < 1e-6, "violation should total 5");
    }
}
