//! Placement optimizers: the explicit MILP with exact branch-and-bound, the
//! greedy heuristic, the brute-force oracle, and LP-format export.

pub mod bnb;
pub mod brute;
pub mod greedy;
pub mod lp_text;
pub mod model;
pub mod relax;

pub use bnb::{solve_branch_and_bound, SolveResult, SolveStatus};
pub use brute::{brute_force, BruteForceResult, DEFAULT_BRUTE_BUDGET};
pub use greedy::{greedy_place, GreedyResult};
pub use lp_text::{export_lp, import_lp, GenericLp};
pub use model::{build_model, MilpModel};
