use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::rc::Rc;
use std::time::Instant;

use crate::milp::Milp;
use crate::model::ObjectiveSense;

use super::simplex::{LpData, LpStatus, Simplex, VarState};
use super::{iteration_limit, relative_gap, Solution, SolveOptions, SolveStatus};

/// Open subproblem. `bound` is the parent's LP value in minimization form.
struct Node {
    bound: f64,
    id: u64,
    depth: usize,
    changes: Vec<(usize, f64, f64)>,
    basis: Rc<Vec<VarState>>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // BinaryHeap pops the maximum: smallest bound first, then oldest node
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then_with(|| other.id.cmp(&self.id))
    }
}

struct Search<'a> {
    data: &'a LpData,
    discrete: Vec<usize>,
    options: &'a SolveOptions,
    incumbent: Option<(f64, Vec<f64>)>,
    lp_iterations: usize,
}

impl Search<'_> {
    fn incumbent_value(&self) -> f64 {
        self.incumbent.as_ref().map_or(f64::INFINITY, |(v, _)| *v)
    }

    /// Bound at or above which a node cannot improve the incumbent enough.
    fn cutoff(&self) -> f64 {
        let inc = self.incumbent_value();
        if inc.is_finite() {
            inc - (self.options.gap * inc.abs()).max(1e-9)
        } else {
            f64::INFINITY
        }
    }

    /// Makes `x` the incumbent if it is feasible and better.
    fn offer(&mut self, milp: &Milp, sign: f64, x: &[f64]) {
        if x.len() != self.data.n || !milp.violations(x, 1e-6, self.options.int_tol).is_empty() {
            return;
        }
        let mut x = x.to_vec();
        for &j in &self.discrete {
            x[j] = x[j].round();
        }
        let value = sign * milp.objective_value(&x);
        if value < self.incumbent_value() {
            self.incumbent = Some((value, x));
        }
    }

    fn most_fractional(&self, x: &[f64]) -> Option<usize> {
        let mut best = None;
        let mut best_dist = self.options.int_tol;
        for &j in &self.discrete {
            let f = x[j] - x[j].floor();
            let dist = f.min(1.0 - f);
            // strict comparison keeps the lowest index on ties
            if dist > best_dist {
                best_dist = dist;
                best = Some(j);
            }
        }
        best
    }

    /// Fixes discrete columns at their rounded values and re-solves the LP so
    /// the continuous part is consistent with exactly integral values.
    fn polish(&mut self, simplex: &mut Simplex) -> Option<(f64, Vec<f64>)> {
        let saved: Vec<(usize, f64, f64)> =
            self.discrete.iter().map(|&j| (j, simplex.lower[j], simplex.upper[j])).collect();
        for &j in &self.discrete {
            let r = simplex.x[j].round();
            simplex.lower[j] = r;
            simplex.upper[j] = r;
        }
        let status = simplex.solve(simplex.iterations + iteration_limit(self.data));
        let out = (status == LpStatus::Optimal).then(|| {
            let mut x = simplex.structural_values();
            for &j in &self.discrete {
                x[j] = x[j].round();
            }
            (simplex.objective(), x)
        });
        for (j, lo, hi) in saved {
            simplex.lower[j] = lo;
            simplex.upper[j] = hi;
        }
        out
    }
}

/// Best-bound branch-and-bound over the simplex relaxation.
///
/// Nodes are explored in order of their parent's LP bound (ties by creation
/// order); the branching column is the most fractional discrete column with
/// the lowest index winning ties. Children start from the parent's optimal
/// basis.
pub fn solve_milp(milp: &Milp, options: &SolveOptions) -> Solution {
    solve_milp_with(milp, options, &SearchHooks::default())
}

pub type PrimalHook<'a> = dyn Fn(&[f64]) -> Option<Vec<f64>> + Sync + 'a;

/// Optional extras for [`solve_milp_with`].
#[derive(Default, Clone, Copy)]
pub struct SearchHooks<'a> {
    /// A point used as the first incumbent if it is feasible.
    pub start: Option<&'a [f64]>,
    /// Turns a node's LP solution into a candidate point; tried at the root
    /// and then every `primal_every` nodes. Candidates are checked for
    /// feasibility before they are accepted.
    pub primal: Option<&'a PrimalHook<'a>>,
    pub primal_every: usize,
}

/// As [`solve_milp`], with a start point and a primal hook.
pub fn solve_milp_with(milp: &Milp, options: &SolveOptions, hooks: &SearchHooks) -> Solution {
    let start = Instant::now();
    let mut data = LpData::from_milp(milp);
    let discrete: Vec<usize> = (0..data.n).filter(|&j| milp.columns[j].kind.is_discrete()).collect();
    for &j in &discrete {
        data.lower[j] = (data.lower[j] - options.int_tol).ceil();
        data.upper[j] = (data.upper[j] + options.int_tol).floor();
    }
    let sign = match milp.objective.sense {
        ObjectiveSense::Minimize => 1.0,
        ObjectiveSense::Maximize => -1.0,
    };
    let finish = |status: SolveStatus, search: &Search, bound_min: f64, nodes: usize| {
        let (objective, values) = match &search.incumbent {
            Some((v, x)) if status.has_solution() => (sign * v, x.clone()),
            _ => (f64::NAN, Vec::new()),
        };
        let best_bound = match status {
            SolveStatus::Optimal => objective,
            SolveStatus::Infeasible => f64::NAN,
            SolveStatus::Unbounded => -sign * f64::INFINITY,
            _ => sign * bound_min,
        };
        let gap = if status == SolveStatus::Optimal {
            relative_gap(sign * search.incumbent_value(), sign * bound_min.min(search.incumbent_value()))
        } else {
            relative_gap(objective, best_bound)
        };
        Solution {
            status,
            values,
            objective,
            best_bound,
            gap,
            nodes,
            lp_iterations: search.lp_iterations,
            wall_time: start.elapsed(),
        }
    };

    let mut search = Search { data: &data, discrete, options, incumbent: None, lp_iterations: 0 };
    if let Some(x) = hooks.start {
        search.offer(milp, sign, x);
    }
    if data.lower.iter().zip(&data.upper).any(|(l, u)| l > u) {
        return finish(SolveStatus::Infeasible, &search, f64::INFINITY, 0);
    }

    let mut simplex = Simplex::new(&data);
    let root_basis = Rc::new(simplex.state.clone());
    let mut heap = BinaryHeap::new();
    heap.push(Node { bound: f64::NEG_INFINITY, id: 0, depth: 0, changes: Vec::new(), basis: root_basis });
    let mut next_id = 1u64;
    let mut nodes = 0usize;
    let mut global_bound = f64::NEG_INFINITY;
    let mut unresolved = false;
    // smallest bound among subtrees discarded by the cutoff rather than explored
    let mut pruned_bound = f64::INFINITY;

    while let Some(node) = heap.pop() {
        global_bound = global_bound.max(node.bound).min(search.incumbent_value());
        if node.bound >= search.cutoff() {
            pruned_bound = pruned_bound.min(node.bound);
            heap.clear();
            break;
        }
        if nodes >= options.node_limit || options.time_limit.is_some_and(|t| start.elapsed() >= t) {
            let status = match (&search.incumbent, nodes >= options.node_limit) {
                (Some(_), _) => SolveStatus::FeasibleGapLimit,
                (None, true) => SolveStatus::NodeLimit,
                (None, false) => SolveStatus::TimeLimit,
            };
            return finish(status, &search, global_bound, nodes);
        }
        nodes += 1;

        simplex.lower.copy_from_slice(&data.lower);
        simplex.upper.copy_from_slice(&data.upper);
        for &(j, lo, hi) in &node.changes {
            simplex.lower[j] = lo;
            simplex.upper[j] = hi;
        }
        simplex.load_state(&node.basis);
        let before = simplex.iterations;
        let status = simplex.solve(simplex.iterations + iteration_limit(&data));
        search.lp_iterations += simplex.iterations - before;
        match status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded if node.depth == 0 => {
                return finish(SolveStatus::Unbounded, &search, f64::NEG_INFINITY, nodes);
            }
            LpStatus::Unbounded | LpStatus::IterationLimit => {
                // unresolved subtree: the final answer can no longer be proven
                unresolved = true;
                continue;
            }
            LpStatus::Optimal => {}
        }
        let value = simplex.objective().max(node.bound);
        if value >= search.cutoff() {
            pruned_bound = pruned_bound.min(value);
            continue;
        }
        let x = simplex.x.clone();
        if let Some(primal) = hooks.primal {
            if (nodes - 1) % hooks.primal_every.max(1) == 0 {
                if let Some(candidate) = primal(&x[..data.n]) {
                    search.offer(milp, sign, &candidate);
                }
            }
        }
        if value >= search.cutoff() {
            continue;
        }
        match search.most_fractional(&x) {
            None => {
                let before = simplex.iterations;
                let polished = search.polish(&mut simplex);
                search.lp_iterations += simplex.iterations - before;
                let candidate = polished.unwrap_or_else(|| {
                    let mut v = x[..data.n].to_vec();
                    for &j in &search.discrete {
                        v[j] = v[j].round();
                    }
                    (value, v)
                });
                if candidate.0 < search.incumbent_value() {
                    search.incumbent = Some(candidate);
                }
            }
            Some(j) => {
                let basis = Rc::new(simplex.state.clone());
                let (lo, hi) = (simplex.lower[j], simplex.upper[j]);
                let down = x[j].floor();
                for (new_lo, new_hi) in [(lo, down), (down + 1.0, hi)] {
                    let mut changes = node.changes.clone();
                    changes.push((j, new_lo, new_hi));
                    heap.push(Node {
                        bound: value,
                        id: next_id,
                        depth: node.depth + 1,
                        changes,
                        basis: Rc::clone(&basis),
                    });
                    next_id += 1;
                }
            }
        }
        if let Some(top) = heap.peek() {
            let inc = search.incumbent_value();
            if inc.is_finite() && relative_gap(inc, top.bound.min(inc)) <= options.gap {
                pruned_bound = pruned_bound.min(top.bound);
                heap.clear();
            }
        }
    }

    match search.incumbent {
        Some(_) if unresolved => finish(SolveStatus::FeasibleGapLimit, &search, f64::NEG_INFINITY, nodes),
        Some(_) => {
            let bound = pruned_bound.min(search.incumbent_value());
            finish(SolveStatus::Optimal, &search, bound, nodes)
        }
        None => finish(SolveStatus::Infeasible, &search, f64::INFINITY, nodes),
    }
}
