//! Built-in LP/MILP engine: bounded primal simplex and best-bound
//! branch-and-bound.

mod bnb;
mod factor;
mod simplex;

use std::time::Duration;

pub use bnb::{solve_milp, solve_milp_with, PrimalHook, SearchHooks};
pub use simplex::LpStatus;

use crate::milp::Milp;
use simplex::{LpData, Simplex};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Relative optimality gap at which the search stops.
    pub gap: f64,
    pub int_tol: f64,
    pub node_limit: usize,
    pub time_limit: Option<Duration>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { gap: 1e-6, int_tol: 1e-6, node_limit: 1_000_000, time_limit: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// A limit stopped the search with an incumbent whose gap exceeds the tolerance.
    FeasibleGapLimit,
    Infeasible,
    Unbounded,
    /// Node limit reached before any feasible point was found.
    NodeLimit,
    /// Time limit reached before any feasible point was found.
    TimeLimit,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::FeasibleGapLimit => "feasible_gap_limit",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::NodeLimit => "node_limit",
            SolveStatus::TimeLimit => "time_limit",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            SolveStatus::Optimal,
            SolveStatus::FeasibleGapLimit,
            SolveStatus::Infeasible,
            SolveStatus::Unbounded,
            SolveStatus::NodeLimit,
            SolveStatus::TimeLimit,
        ]
        .into_iter()
        .find(|st| st.as_str() == s)
    }

    pub fn has_solution(self) -> bool {
        matches!(self, SolveStatus::Optimal | SolveStatus::FeasibleGapLimit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub values: Vec<f64>,
    /// Objective in the problem's own sense.
    pub objective: f64,
    pub iterations: usize,
}

/// Solves the continuous relaxation of `milp`.
pub fn solve_lp(milp: &Milp) -> LpResult {
    let data = LpData::from_milp(milp);
    let mut simplex = Simplex::new(&data);
    let status = simplex.solve(iteration_limit(&data));
    let values = simplex.structural_values();
    let objective = milp.objective_value(&values);
    LpResult { status, values, objective, iterations: simplex.iterations }
}

fn iteration_limit(data: &LpData) -> usize {
    200_000 + 50 * (data.n + data.m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub status: SolveStatus,
    /// One value per MILP column; empty when no feasible point is known.
    pub values: Vec<f64>,
    /// Incumbent objective in the problem's sense, NaN without incumbent.
    pub objective: f64,
    /// Proven bound on the optimum in the problem's sense.
    pub best_bound: f64,
    pub gap: f64,
    pub nodes: usize,
    pub lp_iterations: usize,
    pub wall_time: Duration,
}

/// `|incumbent - bound| / |incumbent|`, zero when both agree to 1e-9.
pub fn relative_gap(incumbent: f64, bound: f64) -> f64 {
    if !incumbent.is_finite() || !bound.is_finite() {
        return f64::INFINITY;
    }
    let diff = (incumbent - bound).abs();
    if diff <= 1e-9 {
        0.0
    } else {
        diff / incumbent.abs().max(1e-9)
    }
}
