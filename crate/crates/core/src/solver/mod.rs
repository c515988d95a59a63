//! Exact strategy search for both objectives.

pub mod eval;
mod root;
mod search;

pub use eval::{eval_table, EvalTable};
pub use root::{
    best_response_winrate, fixed_point_check, group_decompose, solve_initial_min, solve_max_eval,
    solve_min_total, BestResponse, FixedPoint, GroupReport, RootOptions, RootSolution, SolveError,
};
pub use search::{Objective, Search, SearchStats, Solved, SolverConfig, TieBreak, MAX_GUESSES};
