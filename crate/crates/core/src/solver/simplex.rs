//! Bounded-variable revised primal simplex.
//!
//! Rows are brought to the form `A x - s = 0` with one logical `s_i` per row
//! carrying the row's bounds, so every variable is just a column with bounds
//! and the all-logical basis is always available as a start. Phase 1
//! minimizes the sum of bound violations of basic variables; phase 2 the
//! objective. Harris' two-pass ratio test keeps pivots large; after a run of
//! non-improving iterations the pricing switches to Bland's rule until
//! progress resumes.

use crate::milp::Milp;
use crate::model::{ObjectiveSense, Sense};

use super::factor::EtaFile;

pub(crate) const FEAS_TOL: f64 = 1e-7;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 80;
const STALL_LIMIT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Safety net; not reached on well-posed input.
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub(crate) enum VarState {
    Basic,
    Lower,
    Upper,
    Free,
}

/// Row-scaled constraint data in column-major form.
#[derive(Debug, Clone)]
pub(crate) struct LpData {
    pub n: usize,
    pub m: usize,
    col_start: Vec<usize>,
    row_index: Vec<usize>,
    value: Vec<f64>,
    /// Minimization costs of the structural columns.
    pub cost: Vec<f64>,
    /// Bounds of structurals followed by logicals.
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LpData {
    pub fn from_milp(milp: &Milp) -> Self {
        let n = milp.columns.len();
        let m = milp.rows.len();
        let mut counts = vec![0usize; n + 1];
        let mut scale = vec![1.0; m];
        for (i, row) in milp.rows.iter().enumerate() {
            let big = row.terms.iter().fold(0.0f64, |acc, (_, a)| acc.max(a.abs()));
            if big > 0.0 {
                scale[i] = 1.0 / big;
            }
            for (c, a) in &row.terms {
                if *a != 0.0 {
                    counts[c.0 + 1] += 1;
                }
            }
        }
        for j in 0..n {
            counts[j + 1] += counts[j];
        }
        let col_start = counts.clone();
        let mut fill = counts;
        let nnz = col_start[n];
        let mut row_index = vec![0; nnz];
        let mut value = vec![0.0; nnz];
        for (i, row) in milp.rows.iter().enumerate() {
            for (c, a) in &row.terms {
                if *a != 0.0 {
                    let k = fill[c.0];
                    row_index[k] = i;
                    value[k] = a * scale[i];
                    fill[c.0] += 1;
                }
            }
        }
        // duplicate column entries within a row are summed by the dot products
        let sign = match milp.objective.sense {
            ObjectiveSense::Minimize => 1.0,
            ObjectiveSense::Maximize => -1.0,
        };
        let mut cost = vec![0.0; n];
        for (c, a) in &milp.objective.terms {
            cost[c.0] += sign * a;
        }
        let mut lower: Vec<f64> = milp.columns.iter().map(|c| c.lower).collect();
        let mut upper: Vec<f64> = milp.columns.iter().map(|c| c.upper).collect();
        for (i, row) in milp.rows.iter().enumerate() {
            let b = row.rhs * scale[i];
            let (lo, hi) = match row.sense {
                Sense::Le => (f64::NEG_INFINITY, b),
                Sense::Ge => (b, f64::INFINITY),
                Sense::Eq => (b, b),
            };
            lower.push(lo);
            upper.push(hi);
        }
        Self { n, m, col_start, row_index, value, cost, lower, upper }
    }

    fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = if j < self.n { self.col_start[j]..self.col_start[j + 1] } else { 0..0 };
        let logical = (j >= self.n).then(|| (j - self.n, -1.0));
        range.map(move |k| (self.row_index[k], self.value[k])).chain(logical)
    }

    fn column_nnz(&self, j: usize) -> usize {
        if j < self.n {
            self.col_start[j + 1] - self.col_start[j]
        } else {
            1
        }
    }

    fn dot(&self, j: usize, v: &[f64]) -> f64 {
        if j < self.n {
            (self.col_start[j]..self.col_start[j + 1]).map(|k| self.value[k] * v[self.row_index[k]]).sum()
        } else {
            -v[j - self.n]
        }
    }

    fn scatter(&self, j: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (i, a) in self.column(j) {
            out[i] += a;
        }
    }
}

enum Step {
    Flip,
    Pivot { row: usize, leave: VarState, theta: f64 },
    Unbounded,
}

pub(crate) struct Simplex<'a> {
    lp: &'a LpData,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub state: Vec<VarState>,
    head: Vec<usize>,
    pub x: Vec<f64>,
    etas: EtaFile,
    pub iterations: usize,
    work: Vec<f64>,
    alpha: Vec<f64>,
    cb: Vec<f64>,
}

impl<'a> Simplex<'a> {
    pub fn new(lp: &'a LpData) -> Self {
        let total = lp.n + lp.m;
        let mut s = Self {
            lp,
            lower: lp.lower.clone(),
            upper: lp.upper.clone(),
            state: vec![VarState::Lower; total],
            head: (lp.n..total).collect(),
            x: vec![0.0; total],
            etas: EtaFile::default(),
            iterations: 0,
            work: vec![0.0; lp.m],
            alpha: vec![0.0; lp.m],
            cb: vec![0.0; lp.m],
        };
        for j in lp.n..total {
            s.state[j] = VarState::Basic;
        }
        s.place_nonbasic();
        s
    }

    /// Restores a basis previously read from [`Simplex::state`].
    pub fn load_state(&mut self, state: &[VarState]) {
        self.state.copy_from_slice(state);
        self.head = (0..state.len()).filter(|&j| state[j] == VarState::Basic).collect();
        debug_assert_eq!(self.head.len(), self.lp.m);
        self.place_nonbasic();
    }

    fn nonbasic_state(&self, j: usize, preferred: VarState) -> VarState {
        let (lo, hi) = (self.lower[j], self.upper[j]);
        match preferred {
            VarState::Upper if hi.is_finite() => VarState::Upper,
            _ if lo.is_finite() => VarState::Lower,
            _ if hi.is_finite() => VarState::Upper,
            _ => VarState::Free,
        }
    }

    fn place_nonbasic(&mut self) {
        for j in 0..self.state.len() {
            if self.state[j] == VarState::Basic {
                continue;
            }
            self.state[j] = self.nonbasic_state(j, self.state[j]);
            self.x[j] = match self.state[j] {
                VarState::Lower => self.lower[j],
                VarState::Upper => self.upper[j],
                _ => 0.0,
            };
        }
    }

    fn refactor(&mut self) {
        let lp = self.lp;
        let m = lp.m;
        self.etas.clear();
        let mut assigned = vec![false; m];
        let mut head = vec![usize::MAX; m];
        let mut structural: Vec<usize> = Vec::new();
        for &v in &self.head {
            if v >= lp.n {
                let r = v - lp.n;
                self.etas.push_sparse(r, -1.0, std::iter::empty());
                assigned[r] = true;
                head[r] = v;
            } else {
                structural.push(v);
            }
        }
        structural.sort_by_key(|&j| (lp.column_nnz(j), j));
        for j in structural {
            lp.scatter(j, &mut self.work);
            self.etas.ftran(&mut self.work);
            let mut best = None;
            let mut best_abs = PIVOT_TOL;
            for (i, &a) in self.work.iter().enumerate() {
                if !assigned[i] && a.abs() > best_abs {
                    best_abs = a.abs();
                    best = Some(i);
                }
            }
            match best {
                Some(p) => {
                    self.etas.push(p, &self.work);
                    assigned[p] = true;
                    head[p] = j;
                }
                None => {
                    // dependent column: drop it to a bound, a logical fills its slot
                    self.state[j] = self.nonbasic_state(j, VarState::Lower);
                    self.x[j] = match self.state[j] {
                        VarState::Lower => self.lower[j],
                        VarState::Upper => self.upper[j],
                        _ => 0.0,
                    };
                }
            }
        }
        for r in 0..m {
            if !assigned[r] {
                let v = lp.n + r;
                self.etas.push_sparse(r, -1.0, std::iter::empty());
                self.state[v] = VarState::Basic;
                head[r] = v;
            }
        }
        self.head = head;
        self.recompute_basics();
    }

    fn recompute_basics(&mut self) {
        let lp = self.lp;
        self.work.iter_mut().for_each(|v| *v = 0.0);
        for j in 0..lp.n + lp.m {
            if self.state[j] == VarState::Basic || self.x[j] == 0.0 {
                continue;
            }
            let xj = self.x[j];
            for (i, a) in lp.column(j) {
                self.work[i] -= a * xj;
            }
        }
        self.etas.ftran(&mut self.work);
        for (i, &v) in self.head.iter().enumerate() {
            self.x[v] = self.work[i];
        }
    }

    fn infeasibility(&self, j: usize) -> f64 {
        let v = self.x[j];
        if v < self.lower[j] - FEAS_TOL {
            self.lower[j] - v
        } else if v > self.upper[j] + FEAS_TOL {
            v - self.upper[j]
        } else {
            0.0
        }
    }

    fn phase_objective(&self, phase_one: bool) -> f64 {
        if phase_one {
            self.head.iter().map(|&j| self.infeasibility(j)).sum()
        } else {
            (0..self.lp.n).map(|j| self.lp.cost[j] * self.x[j]).sum()
        }
    }

    fn cost_of(&self, j: usize, phase_one: bool) -> f64 {
        if phase_one {
            let v = self.x[j];
            if v < self.lower[j] - FEAS_TOL {
                -1.0
            } else if v > self.upper[j] + FEAS_TOL {
                1.0
            } else {
                0.0
            }
        } else if j < self.lp.n {
            self.lp.cost[j]
        } else {
            0.0
        }
    }

    /// Picks the entering variable and its direction (+1 increase, -1 decrease).
    fn price(&mut self, phase_one: bool, bland: bool) -> Option<(usize, f64)> {
        let lp = self.lp;
        for (i, &v) in self.head.iter().enumerate() {
            self.cb[i] = self.cost_of(v, phase_one);
        }
        self.etas.btran(&mut self.cb);
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..lp.n + lp.m {
            let st = self.state[j];
            if st == VarState::Basic || self.lower[j] == self.upper[j] {
                continue;
            }
            let c = if phase_one || j >= lp.n { 0.0 } else { lp.cost[j] };
            let d = c - lp.dot(j, &self.cb);
            let dir = match st {
                VarState::Lower if d < -DUAL_TOL => 1.0,
                VarState::Upper if d > DUAL_TOL => -1.0,
                VarState::Free if d.abs() > DUAL_TOL => -d.signum(),
                _ => continue,
            };
            if bland {
                return Some((j, dir));
            }
            if d.abs() > best_score {
                best_score = d.abs();
                best = Some((j, dir));
            }
        }
        best
    }

    fn ratio_test(&self, q: usize, dir: f64, phase_one: bool, bland: bool) -> Step {
        let span = self.upper[q] - self.lower[q];
        // pass 1: smallest step with bounds relaxed by the feasibility tolerance
        let mut relaxed = f64::INFINITY;
        let mut candidates: Vec<(usize, f64, VarState, f64)> = Vec::new();
        for (i, &a) in self.alpha.iter().enumerate() {
            if a.abs() < PIVOT_TOL {
                continue;
            }
            let b = self.head[i];
            let rate = -dir * a;
            let v = self.x[b];
            let (lo, hi) = (self.lower[b], self.upper[b]);
            let hit = if rate < 0.0 {
                if phase_one && v > hi + FEAS_TOL {
                    Some((hi, VarState::Upper))
                } else if v < lo - FEAS_TOL {
                    None
                } else if lo.is_finite() {
                    Some((lo, VarState::Lower))
                } else {
                    None
                }
            } else if phase_one && v < lo - FEAS_TOL {
                Some((lo, VarState::Lower))
            } else if v > hi + FEAS_TOL {
                None
            } else if hi.is_finite() {
                Some((hi, VarState::Upper))
            } else {
                None
            };
            let Some((bound, leave)) = hit else { continue };
            let exact = (bound - v) / rate;
            let loose = if bland { exact } else { exact + FEAS_TOL / rate.abs() };
            relaxed = relaxed.min(loose);
            candidates.push((i, exact, leave, a.abs()));
        }
        if span.is_finite() && span <= relaxed {
            return Step::Flip;
        }
        if candidates.is_empty() {
            return Step::Unbounded;
        }
        // pass 2: among steps within the relaxed bound take the largest pivot
        let mut chosen: Option<(usize, f64, VarState, f64)> = None;
        for &(i, exact, leave, mag) in &candidates {
            if exact > relaxed + 1e-15 {
                continue;
            }
            let better = match chosen {
                None => true,
                Some((ci, cexact, _, cmag)) => {
                    if bland {
                        exact < cexact - 1e-12 || (exact <= cexact + 1e-12 && self.head[i] < self.head[ci])
                    } else {
                        mag > cmag
                    }
                }
            };
            if better {
                chosen = Some((i, exact, leave, mag));
            }
        }
        let (row, exact, leave, _) = chosen.expect("relaxed bound admits its own minimizer");
        Step::Pivot { row, leave, theta: exact.max(0.0) }
    }

    pub fn solve(&mut self, iteration_limit: usize) -> LpStatus {
        self.refactor();
        let mut since_refactor = 0;
        let mut fresh = true;
        let mut best_seen = f64::INFINITY;
        let mut stalled = 0usize;
        let mut was_phase_one = None;
        let mut rejected: Vec<usize> = Vec::new();
        loop {
            if self.iterations >= iteration_limit {
                return LpStatus::IterationLimit;
            }
            if since_refactor >= REFACTOR_EVERY {
                self.refactor();
                since_refactor = 0;
                fresh = true;
            }
            let phase_one = self.head.iter().any(|&j| self.infeasibility(j) > 0.0);
            if was_phase_one != Some(phase_one) {
                was_phase_one = Some(phase_one);
                best_seen = f64::INFINITY;
                stalled = 0;
            }
            let obj = self.phase_objective(phase_one);
            if obj < best_seen - 1e-10 * best_seen.abs().max(1.0) {
                best_seen = obj;
                stalled = 0;
            } else {
                stalled += 1;
            }
            let bland = stalled > STALL_LIMIT;

            let entering = self.price(phase_one, bland).filter(|(q, _)| !rejected.contains(q));
            let Some((q, dir)) = entering.or_else(|| {
                if rejected.is_empty() {
                    None
                } else {
                    self.price_excluding(phase_one, &rejected)
                }
            }) else {
                if !fresh {
                    self.refactor();
                    since_refactor = 0;
                    fresh = true;
                    rejected.clear();
                    continue;
                }
                return if phase_one { LpStatus::Infeasible } else { LpStatus::Optimal };
            };

            self.lp.scatter(q, &mut self.alpha);
            self.etas.ftran(&mut self.alpha);
            self.iterations += 1;
            match self.ratio_test(q, dir, phase_one, bland) {
                Step::Unbounded => {
                    if phase_one {
                        // numerically useless direction; try another candidate
                        rejected.push(q);
                        continue;
                    }
                    if !fresh {
                        self.refactor();
                        since_refactor = 0;
                        fresh = true;
                        continue;
                    }
                    return LpStatus::Unbounded;
                }
                Step::Flip => {
                    let theta = self.upper[q] - self.lower[q];
                    self.shift_basics(dir * theta);
                    if dir > 0.0 {
                        self.state[q] = VarState::Upper;
                        self.x[q] = self.upper[q];
                    } else {
                        self.state[q] = VarState::Lower;
                        self.x[q] = self.lower[q];
                    }
                }
                Step::Pivot { row, leave, theta } => {
                    self.shift_basics(dir * theta);
                    self.x[q] += dir * theta;
                    let out = self.head[row];
                    self.state[out] = leave;
                    self.x[out] = if leave == VarState::Lower { self.lower[out] } else { self.upper[out] };
                    self.state[q] = VarState::Basic;
                    self.head[row] = q;
                    self.etas.push(row, &self.alpha);
                    since_refactor += 1;
                    fresh = false;
                }
            }
            rejected.clear();
        }
    }

    fn price_excluding(&mut self, phase_one: bool, rejected: &[usize]) -> Option<(usize, f64)> {
        let saved: Vec<(usize, f64, f64)> =
            rejected.iter().map(|&j| (j, self.lower[j], self.upper[j])).collect();
        for &(j, _, _) in &saved {
            // temporarily fix so pricing skips it
            self.upper[j] = self.lower[j];
        }
        let out = self.price(phase_one, true);
        for (j, lo, hi) in saved {
            self.lower[j] = lo;
            self.upper[j] = hi;
        }
        out
    }

    fn shift_basics(&mut self, delta: f64) {
        if delta == 0.0 {
            return;
        }
        for (i, &a) in self.alpha.iter().enumerate() {
            if a != 0.0 {
                self.x[self.head[i]] -= delta * a;
            }
        }
    }

    /// Minimization objective of the current point.
    pub fn objective(&self) -> f64 {
        (0..self.lp.n).map(|j| self.lp.cost[j] * self.x[j]).sum()
    }

    pub fn structural_values(&self) -> Vec<f64> {
        self.x[..self.lp.n].to_vec()
    }
}
