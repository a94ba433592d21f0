//! Bundled MILP engine backed by HiGHS.
//!
//! This is one possible solver behind the subprocess contract (via the
//! `solve-lp` front end) and the default in-process backend when no external
//! solver command is configured.

use std::time::Instant;

use highs::{HighsModelStatus, HighsSolutionStatus, RowProblem, Sense};

use crate::model::{MilpModel, Relop, VarKind};
use crate::solution::{Solution, SolveStatus};
use crate::solve::SolveOptions;

pub fn solve_builtin(model: &MilpModel, opts: &SolveOptions) -> Solution {
    let start = Instant::now();
    let mut problem = RowProblem::default();
    let mut cols = Vec::with_capacity(model.num_vars());
    for (var, def) in model.vars() {
        let cost = model.objective().coeff(var);
        let col = match def.kind {
            VarKind::Continuous => problem.add_column(cost, def.lo..=def.hi),
            VarKind::Binary => problem.add_integer_column(cost, def.lo..=def.hi),
        };
        cols.push(col);
    }
    for c in model.constraints() {
        let row: Vec<(highs::Col, f64)> = c
            .expr
            .iter()
            .map(|(v, coeff)| (cols[v.index()], coeff))
            .collect();
        match c.op {
            Relop::Le => problem.add_row(..=c.rhs, row),
            Relop::Ge => problem.add_row(c.rhs.., row),
            Relop::Eq => problem.add_row(c.rhs..=c.rhs, row),
        }
    }

    let mut solver = problem.optimise(Sense::Minimise);
    solver.set_option("output_flag", opts.verbose);
    solver.set_option("mip_rel_gap", opts.gap_target);
    solver.set_option("threads", 1);
    if let Some(limit) = opts.time_limit_s {
        solver.set_option("time_limit", limit);
    }
    let solved = match solver.try_solve() {
        Ok(s) => s,
        Err(status) => {
            let mut sol = Solution::failed(SolveStatus::Error, format!("highs: {status:?}"));
            sol.wall_time_s = start.elapsed().as_secs_f64();
            return sol;
        }
    };

    let has_binaries = model.stats().binaries > 0;
    let wall = start.elapsed().as_secs_f64();
    let status = solved.status();
    let has_incumbent = solved.primal_solution_status() == HighsSolutionStatus::Feasible;
    let mapped = match status {
        HighsModelStatus::Optimal => SolveStatus::Optimal,
        HighsModelStatus::Infeasible => SolveStatus::Infeasible,
        HighsModelStatus::Unbounded | HighsModelStatus::UnboundedOrInfeasible => {
            SolveStatus::Unbounded
        }
        HighsModelStatus::ReachedTimeLimit
        | HighsModelStatus::ReachedIterationLimit
        | HighsModelStatus::ReachedSolutionLimit
        | HighsModelStatus::ObjectiveBound
        | HighsModelStatus::ObjectiveTarget
        | HighsModelStatus::ReachedInterrupt => {
            if has_incumbent {
                SolveStatus::FeasibleGap
            } else {
                SolveStatus::Error
            }
        }
        other => {
            let mut sol =
                Solution::failed(SolveStatus::Error, format!("highs terminated: {other:?}"));
            sol.wall_time_s = wall;
            return sol;
        }
    };

    if !mapped.has_values() {
        let mut sol = Solution::failed(mapped, format!("highs status: {status:?}"));
        sol.wall_time_s = wall;
        return sol;
    }

    let values = solved.get_solution().columns().to_vec();
    let mut sol = Solution::with_values(mapped, values, 0.0);
    sol.objective = Some(sol.objective_from_values(model));
    sol.mip_gap = Some(if has_binaries {
        let gap = solved.mip_gap();
        if gap.is_finite() && gap >= 0.0 {
            gap
        } else {
            0.0
        }
    } else {
        0.0
    });
    if mapped == SolveStatus::FeasibleGap {
        sol.message = Some(format!("stopped early: {status:?}"));
    }
    sol.wall_time_s = wall;
    sol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{LinExpr, MilpModel, Relop};

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn min_x_at_lower_constraint() {
        let mut m = MilpModel::new("t");
        let x = m.add_continuous("x", 0.0, f64::INFINITY).unwrap();
        m.set_objective(LinExpr::term(x, 1.0)).unwrap();
        m.add_constraint("c", LinExpr::term(x, 1.0), Relop::Ge, 1.0)
            .unwrap();
        let sol = solve_builtin(&m, &opts());
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.value(x) - 1.0).abs() < 1e-9);
        assert!((sol.objective.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn max_via_negated_objective() {
        let mut m = MilpModel::new("t");
        let x = m.add_continuous("x", 0.0, 5.0).unwrap();
        m.set_objective(LinExpr::term(x, -1.0)).unwrap();
        let sol = solve_builtin(&m, &opts());
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.value(x) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut m = MilpModel::new("t");
        let x = m.add_continuous("x", 0.0, 10.0).unwrap();
        m.add_constraint("lo", LinExpr::term(x, 1.0), Relop::Ge, 2.0)
            .unwrap();
        m.add_constraint("hi", LinExpr::term(x, 1.0), Relop::Le, 1.0)
            .unwrap();
        let sol = solve_builtin(&m, &opts());
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert!(sol.values().is_empty());
    }

    #[test]
    fn unbounded_detected() {
        let mut m = MilpModel::new("t");
        let x = m
            .add_continuous("x", f64::NEG_INFINITY, f64::INFINITY)
            .unwrap();
        m.set_objective(LinExpr::term(x, 1.0)).unwrap();
        let sol = solve_builtin(&m, &opts());
        assert_eq!(sol.status, SolveStatus::Unbounded);
    }

    #[test]
    fn small_mip_solves_exactly() {
        // min 3w + x  s.t.  x + 2w >= 2, x <= 1.5  => w = 1, x = 0.
        let mut m = MilpModel::new("t");
        let w = m.add_binary("w").unwrap();
        let x = m.add_continuous("x", 0.0, 1.5).unwrap();
        let mut obj = LinExpr::term(w, 3.0);
        obj.add_term(x, 1.0);
        m.set_objective(obj).unwrap();
        let mut c = LinExpr::term(x, 1.0);
        c.add_term(w, 2.0);
        m.add_constraint("need", c, Relop::Ge, 2.0).unwrap();
        let sol = solve_builtin(&m, &opts());
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.value(w) - 1.0).abs() < 1e-9);
        assert!(sol.value(x).abs() < 1e-9);
        assert_eq!(sol.mip_gap, Some(0.0));
    }
}
