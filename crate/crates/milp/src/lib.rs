//! Solver-agnostic MILP construction and solving.
//!
//! Models are built in memory, serialized to LP or MPS text, and solved
//! either by the bundled HiGHS-backed engine or by any external solver
//! invoked as a subprocess on the LP file. Solution files in XML or plain
//! `name value` form are parsed back and aligned with the model.

mod engine;
mod error;
mod lp;
mod lp_read;
mod model;
mod mps;
mod sol;
mod solution;
mod solve;

pub use engine::solve_builtin;
pub use error::{LpParseError, ModelError, SolParseError, SolveError};
pub use lp::{lp_to_string, write_lp, write_lp_file};
pub use lp_read::{parse_lp, parse_lp_file, LpFile};
pub use model::{
    Constraint, ConstraintId, LinExpr, MilpModel, ModelStats, Relop, VarDef, VarKind, VarRef,
};
pub use mps::{mps_to_string, write_mps, write_mps_file};
pub use sol::{
    align_solution, parse_solution_file, parse_solution_text, write_plain_solution,
    ParsedSolution,
};
pub use solution::{Solution, SolveStatus};
pub use solve::{
    diagnose_infeasibility, elastic_relaxation, solve, SolveOptions, SolverSpec, GAP_ENV,
    SOLVER_ENV, TIME_LIMIT_ENV,
};
