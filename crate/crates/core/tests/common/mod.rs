//! Independent reference solvers used as test oracles. Nothing here calls
//! into the simplex or branch-and-bound code.
#![allow(dead_code)]

use predopt::milp::{ColumnKind, Milp};
use predopt::model::{ObjectiveSense, Sense};
use rand::Rng;

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for k in col..n {
                        a[r][k] -= f * a[col][k];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn feasible(milp: &Milp, x: &[f64], fixed: &[(usize, f64)]) -> bool {
    let full = expand(milp, x, fixed);
    for (c, &v) in milp.columns.iter().zip(&full) {
        if v < c.lower - 1e-7 || v > c.upper + 1e-7 {
            return false;
        }
    }
    milp.rows.iter().all(|r| {
        let lhs: f64 = r.terms.iter().map(|(c, a)| a * full[c.0]).sum();
        match r.sense {
            Sense::Le => lhs <= r.rhs + 1e-7,
            Sense::Ge => lhs >= r.rhs - 1e-7,
            Sense::Eq => (lhs - r.rhs).abs() <= 1e-7,
        }
    })
}

/// Inserts `fixed` column values into the free-column vector `x`.
fn expand(milp: &Milp, x: &[f64], fixed: &[(usize, f64)]) -> Vec<f64> {
    let mut full = vec![f64::NAN; milp.columns.len()];
    for &(j, v) in fixed {
        full[j] = v;
    }
    let mut it = x.iter();
    for v in full.iter_mut() {
        if v.is_nan() {
            *v = *it.next().unwrap();
        }
    }
    full
}

fn objective(milp: &Milp, full: &[f64]) -> f64 {
    milp.objective.terms.iter().map(|(c, a)| a * full[c.0]).sum()
}

fn better(milp: &Milp, a: f64, b: f64) -> bool {
    match milp.objective.sense {
        ObjectiveSense::Maximize => a > b,
        ObjectiveSense::Minimize => a < b,
    }
}

/// Optimum over the continuous columns with `fixed` columns held constant,
/// by enumerating every vertex of the (bounded) feasible polytope.
pub fn vertex_enumeration(milp: &Milp, fixed: &[(usize, f64)]) -> Option<(f64, Vec<f64>)> {
    let free: Vec<usize> = (0..milp.columns.len()).filter(|j| !fixed.iter().any(|(f, _)| f == j)).collect();
    let n = free.len();
    if n == 0 {
        let full = expand(milp, &[], fixed);
        return feasible(milp, &[], fixed).then(|| (objective(milp, &full), full));
    }
    // hyperplanes: rows then both bounds of every free column
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for r in &milp.rows {
        let mut a = vec![0.0; n];
        let mut b = r.rhs;
        for (c, v) in &r.terms {
            match free.iter().position(|&f| f == c.0) {
                Some(k) => a[k] += v,
                None => b -= v * fixed.iter().find(|(f, _)| *f == c.0).unwrap().1,
            }
        }
        planes.push((a, b));
    }
    for (k, &j) in free.iter().enumerate() {
        for bound in [milp.columns[j].lower, milp.columns[j].upper] {
            let mut a = vec![0.0; n];
            a[k] = 1.0;
            planes.push((a, bound));
        }
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let a = pick.iter().map(|&p| planes[p].0.clone()).collect();
        let b = pick.iter().map(|&p| planes[p].1).collect();
        if let Some(x) = solve_dense(a, b) {
            if feasible(milp, &x, fixed) {
                let full = expand(milp, &x, fixed);
                let obj = objective(milp, &full);
                if best.as_ref().map_or(true, |(v, _)| better(milp, obj, *v)) {
                    best = Some((obj, full));
                }
            }
        }
        // next n-combination of planes
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < planes.len() - n + i {
                pick[i] += 1;
                for k in i + 1..n {
                    pick[k] = pick[k - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exhaustive optimum of a MILP with small discrete domains: every discrete
/// assignment is tried and the continuous remainder solved by vertex
/// enumeration.
pub fn enumerate_milp(milp: &Milp) -> Option<(f64, Vec<f64>)> {
    let discrete: Vec<usize> = (0..milp.columns.len()).filter(|&j| milp.columns[j].kind != ColumnKind::Continuous).collect();
    let domains: Vec<Vec<f64>> = discrete
        .iter()
        .map(|&j| {
            let c = &milp.columns[j];
            (c.lower.ceil() as i64..=c.upper.floor() as i64).map(|v| v as f64).collect()
        })
        .collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut idx = vec![0usize; discrete.len()];
    loop {
        let fixed: Vec<(usize, f64)> = discrete.iter().zip(&idx).zip(&domains).map(|((&j, &i), d)| (j, d[i])).collect();
        if let Some((obj, x)) = vertex_enumeration(milp, &fixed) {
            if best.as_ref().map_or(true, |(v, _)| better(milp, obj, *v)) {
                best = Some((obj, x));
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return best;
            }
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Random bounded LP with `n` columns and `m` rows of mixed senses.
pub fn random_lp(rng: &mut impl Rng, n: usize, m: usize) -> Milp {
    let mut milp = Milp::new("lp");
    let cols: Vec<_> = (0..n)
        .map(|j| {
            let lo = rng.gen_range(-3.0..1.0f64).round();
            let hi = lo + rng.gen_range(1.0..6.0f64).round();
            milp.add_column(format!("x{j}"), lo, hi, ColumnKind::Continuous)
        })
        .collect();
    for _ in 0..m {
        let terms = cols.iter().map(|&c| (c, rng.gen_range(-4i32..=4) as f64)).filter(|(_, a)| *a != 0.0).collect();
        let sense = match rng.gen_range(0..5) {
            0 => Sense::Ge,
            1 => Sense::Eq,
            _ => Sense::Le,
        };
        let rhs = rng.gen_range(-4i32..=8) as f64;
        milp.add_row(terms, sense, rhs);
    }
    let sense = if rng.gen_bool(0.5) { ObjectiveSense::Maximize } else { ObjectiveSense::Minimize };
    let obj = cols.iter().map(|&c| (c, rng.gen_range(-5.0..5.0f64))).collect();
    milp.set_objective(sense, obj);
    milp
}

/// Random MILP with `discrete` integer/binary columns, `continuous` extra
/// columns and `m` rows; integer objective coefficients on discrete columns.
pub fn random_milp(rng: &mut impl Rng, discrete: usize, continuous: usize, m: usize) -> Milp {
    let mut milp = Milp::new("milp");
    let mut cols = Vec::new();
    for j in 0..discrete {
        if rng.gen_bool(0.7) {
            cols.push(milp.add_column(format!("b{j}"), 0.0, 1.0, ColumnKind::Binary));
        } else {
            let lo = rng.gen_range(-1i32..=0) as f64;
            cols.push(milp.add_column(format!("n{j}"), lo, lo + 2.0, ColumnKind::Integer));
        }
    }
    for j in 0..continuous {
        cols.push(milp.add_column(format!("x{j}"), 0.0, rng.gen_range(1.0..4.0f64), ColumnKind::Continuous));
    }
    for _ in 0..m {
        let mut terms = Vec::new();
        for &c in &cols {
            let a = rng.gen_range(-3i32..=6) as f64;
            if rng.gen_bool(0.7) && a != 0.0 {
                terms.push((c, a));
            }
        }
        let sense = if rng.gen_bool(0.8) { Sense::Le } else { Sense::Ge };
        let rhs = match sense {
            Sense::Ge => rng.gen_range(-6i32..=2) as f64,
            _ => rng.gen_range(2i32..=12) as f64,
        };
        milp.add_row(terms, sense, rhs);
    }
    let sense = if rng.gen_bool(0.5) { ObjectiveSense::Maximize } else { ObjectiveSense::Minimize };
    let obj = cols
        .iter()
        .enumerate()
        .map(|(j, &c)| (c, if j < discrete { rng.gen_range(-9i32..=9) as f64 } else { rng.gen_range(-3.0..3.0f64) }))
        .collect();
    milp.set_objective(sense, obj);
    milp
}

/// Dense ReLU network as plain nested vectors: `(weights, biases)` per layer,
/// last layer affine with one output.
pub type Net = Vec<(Vec<Vec<f64>>, Vec<f64>)>;

pub fn random_net(rng: &mut impl Rng, inputs: usize, hidden: &[usize]) -> Net {
    let mut sizes = vec![inputs];
    sizes.extend_from_slice(hidden);
    sizes.push(1);
    sizes
        .windows(2)
        .map(|w| {
            let weights = (0..w[1]).map(|_| (0..w[0]).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let biases = (0..w[1]).map(|_| rng.gen_range(-1.0..1.0)).collect();
            (weights, biases)
        })
        .collect()
}

/// Forward pass, one neuron at a time.
pub fn net_forward(net: &Net, x: &[f64]) -> f64 {
    let mut act = x.to_vec();
    for (k, (weights, biases)) in net.iter().enumerate() {
        let mut next = Vec::with_capacity(biases.len());
        for i in 0..biases.len() {
            let mut s = biases[i];
            for j in 0..act.len() {
                s += weights[i][j] * act[j];
            }
            next.push(if k + 1 < net.len() { s.max(0.0) } else { s });
        }
        act = next;
    }
    act[0]
}

/// Exact maximum over `x[free]` in `[lo, hi]` with the other inputs held at
/// `x`. Pre-activations are linear between consecutive breakpoints, so kinks
/// are found layer by layer as sign changes and the maximum sits at one of
/// them or at an endpoint.
pub fn net_max_1d(net: &Net, x: &[f64], free: usize, lo: f64, hi: f64) -> (f64, f64) {
    let at = |t: f64| {
        let mut p = x.to_vec();
        p[free] = t;
        p
    };
    let mut points = vec![lo, hi];
    for depth in 0..net.len() - 1 {
        let truncated: Net = net[..=depth].to_vec();
        let width = net[depth].1.len();
        let mut found = Vec::new();
        for i in 0..width {
            // neuron i pre-activation: drop the ReLU by reading layer output before it
            let pre = |t: f64| {
                let mut act = at(t);
                for (k, (w, b)) in truncated.iter().enumerate() {
                    let last = k + 1 == truncated.len();
                    act = (0..b.len())
                        .map(|r| {
                            let s = b[r] + (0..act.len()).map(|c| w[r][c] * act[c]).sum::<f64>();
                            if last { s } else { s.max(0.0) }
                        })
                        .collect();
                }
                act[i]
            };
            for seg in points.windows(2) {
                let (a, b) = (seg[0], seg[1]);
                let (fa, fb) = (pre(a), pre(b));
                if fa * fb < 0.0 {
                    found.push(a + fa * (b - a) / (fa - fb));
                }
            }
        }
        points.extend(found);
        points.sort_by(f64::total_cmp);
        points.dedup();
    }
    points
        .into_iter()
        .map(|t| (net_forward(net, &at(t)), t))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap()
}
