//! Continuous-time hydrothermal scheduling MILP.
//!
//! Every time-dependent decision variable is a cubic per interval in the
//! Bernstein basis; the builders in this crate emit the topology, volume,
//! future-cost, production, balance, ramping, commitment and continuity
//! constraints over those coefficients, and the schedule module reassembles a
//! solver's variable values into piecewise-polynomial trajectories.

mod blocks;
mod builder;
mod error;
mod schedule;
mod solve;

pub use blocks::{CableBlock, CtBlocks, PlantBlock, ReservoirBlock, ThermalBlock};
pub use builder::{build_ct, CtBuildOptions, CtBuilder, CtProblem, MIN_INTERVAL_S};
pub use error::{BuildError, CtError};
pub use schedule::{ObjectiveBreakdown, Schedule, SolveMeta};
pub use solve::{solve_ct, solve_ct_problem, CtSolveOptions};
