//! Text export of [`Milp`](crate::milp::Milp)s (free MPS, CPLEX LP) and
//! solution documents.

mod lp;
mod mps;
mod solution;

pub use lp::{export_lp_format, parse_lp_format};
pub use mps::{export_mps, parse_mps};
pub use solution::{read_solution, write_solution, SolutionDocument};

use std::collections::HashSet;

/// Replaces every character outside `[A-Za-z0-9_]` by `_`, prefixes names
/// that start with a digit, and appends `_1`, `_2`, ... to names already in
/// `taken`. The result is inserted into `taken`.
pub fn mangle_name(name: &str, taken: &mut HashSet<String>) -> String {
    let mut base: String = name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
    if base.is_empty() || base.starts_with(|c: char| c.is_ascii_digit()) {
        base.insert(0, '_');
    }
    let mut out = base.clone();
    let mut k = 1;
    while taken.contains(&out) {
        out = format!("{base}_{k}");
        k += 1;
    }
    taken.insert(out.clone());
    out
}

/// Shortest decimal form that parses back to the same `f64`.
pub(crate) fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".to_string()
    } else if (1e-5..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Mangled column names and row names; the row set also reserves `objective`.
pub(crate) fn mangled_names(milp: &crate::milp::Milp, objective: &str) -> (Vec<String>, Vec<String>) {
    let mut taken = HashSet::new();
    let cols = milp.columns.iter().map(|c| mangle_name(&c.name, &mut taken)).collect();
    let mut taken = HashSet::new();
    taken.insert(objective.to_string());
    let rows = milp.rows.iter().map(|r| mangle_name(&r.name, &mut taken)).collect();
    (cols, rows)
}
