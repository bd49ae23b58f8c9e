mod common;

use predopt::milp::{ColumnKind, Milp};
use predopt::model::{ObjectiveSense, Sense};
use predopt::solver::{solve_lp, solve_milp, LpStatus, SolveOptions, SolveStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn single_variable_lp() {
    let mut m = Milp::new("t");
    let x = m.add_column("x", 0.0, 10.0, ColumnKind::Continuous);
    m.add_row(vec![(x, 1.0)], Sense::Le, 3.0);
    m.set_objective(ObjectiveSense::Maximize, vec![(x, 1.0)]);
    let r = solve_lp(&m);
    assert_eq!(r.status, LpStatus::Optimal);
    assert!(close(r.objective, 3.0, 1e-9));
    assert!(close(r.values[0], 3.0, 1e-9));
}

#[test]
fn infeasible_lp() {
    let mut m = Milp::new("t");
    let x = m.add_column("x", 0.0, 10.0, ColumnKind::Continuous);
    let y = m.add_column("y", 0.0, 10.0, ColumnKind::Continuous);
    m.add_row(vec![(x, 1.0), (y, 1.0)], Sense::Ge, 5.0);
    m.add_row(vec![(x, 1.0), (y, 1.0)], Sense::Le, 4.0);
    m.set_objective(ObjectiveSense::Minimize, vec![(x, 1.0)]);
    assert_eq!(solve_lp(&m).status, LpStatus::Infeasible);
    assert_eq!(solve_milp(&m, &SolveOptions::default()).status, SolveStatus::Infeasible);
}

#[test]
fn unbounded_lp() {
    let mut m = Milp::new("t");
    let x = m.add_column("x", 0.0, f64::INFINITY, ColumnKind::Continuous);
    m.set_objective(ObjectiveSense::Maximize, vec![(x, 1.0)]);
    assert_eq!(solve_lp(&m).status, LpStatus::Unbounded);
    assert_eq!(solve_milp(&m, &SolveOptions::default()).status, SolveStatus::Unbounded);
}

#[test]
fn equality_and_free_columns() {
    // min x + 2y, x - y = 1, x + y >= 3, y free
    let mut m = Milp::new("t");
    let x = m.add_column("x", f64::NEG_INFINITY, f64::INFINITY, ColumnKind::Continuous);
    let y = m.add_column("y", f64::NEG_INFINITY, f64::INFINITY, ColumnKind::Continuous);
    m.add_row(vec![(x, 1.0), (y, -1.0)], Sense::Eq, 1.0);
    m.add_row(vec![(x, 1.0), (y, 1.0)], Sense::Ge, 3.0);
    m.set_objective(ObjectiveSense::Minimize, vec![(x, 1.0), (y, 2.0)]);
    let r = solve_lp(&m);
    assert_eq!(r.status, LpStatus::Optimal);
    assert!(close(r.values[0], 2.0, 1e-9) && close(r.values[1], 1.0, 1e-9));
    assert!(close(r.objective, 4.0, 1e-9));
}

#[test]
fn random_lps_match_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut feasible = 0;
    for trial in 0..40 {
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(1..=5);
        let lp = common::random_lp(&mut rng, n, m);
        let oracle = common::vertex_enumeration(&lp, &[]);
        let r = solve_lp(&lp);
        match oracle {
            None => assert_eq!(r.status, LpStatus::Infeasible, "trial {trial}"),
            Some((obj, _)) => {
                feasible += 1;
                assert_eq!(r.status, LpStatus::Optimal, "trial {trial}");
                assert!(close(r.objective, obj, 1e-7), "trial {trial}: {} vs {obj}", r.objective);
                assert!(lp.violations(&r.values, 1e-6, 1.0).is_empty(), "trial {trial}");
            }
        }
    }
    assert!(feasible >= 10, "only {feasible} feasible instances");
}

#[test]
fn knapsack_matches_brute_force() {
    let values = [10.0, 13.0, 7.0, 8.0, 4.0, 9.0];
    let weights = [5.0, 7.0, 4.0, 3.0, 2.0, 6.0];
    let cap = 14.0;
    let mut m = Milp::new("knap");
    let cols: Vec<_> = (0..6).map(|i| m.add_column(format!("b{i}"), 0.0, 1.0, ColumnKind::Binary)).collect();
    m.add_row(cols.iter().zip(weights).map(|(&c, w)| (c, w)).collect(), Sense::Le, cap);
    m.set_objective(ObjectiveSense::Maximize, cols.iter().zip(values).map(|(&c, v)| (c, v)).collect());

    let mut best = 0.0f64;
    for mask in 0u32..64 {
        let (w, v) = (0..6).filter(|i| mask >> i & 1 == 1).fold((0.0, 0.0), |(w, v), i| (w + weights[i], v + values[i]));
        if w <= cap {
            best = best.max(v);
        }
    }
    let s = solve_milp(&m, &SolveOptions::default());
    assert_eq!(s.status, SolveStatus::Optimal);
    assert_eq!(s.objective, best);
    assert!(s.gap <= 1e-6);
    assert!(m.violations(&s.values, 1e-9, 1e-9).is_empty());
}

#[test]
fn random_milps_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut solved = 0;
    for trial in 0..50 {
        let discrete = rng.gen_range(2..=10);
        let continuous = rng.gen_range(0..=2);
        let rows = rng.gen_range(1..=4);
        let milp = common::random_milp(&mut rng, discrete, continuous, rows);
        let oracle = common::enumerate_milp(&milp);
        let s = solve_milp(&milp, &SolveOptions::default());
        match oracle {
            None => assert_eq!(s.status, SolveStatus::Infeasible, "trial {trial}"),
            Some((obj, _)) => {
                solved += 1;
                assert_eq!(s.status, SolveStatus::Optimal, "trial {trial}");
                assert!(close(s.objective, obj, 1e-6), "trial {trial}: {} vs {obj}", s.objective);
                assert!(milp.violations(&s.values, 1e-6, 1e-6).is_empty(), "trial {trial}");
            }
        }
    }
    assert!(solved >= 25);
}

#[test]
fn pure_binary_twelve_columns() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..10 {
        let mut milp = Milp::new("b12");
        let cols: Vec<_> = (0..12).map(|i| milp.add_column(format!("b{i}"), 0.0, 1.0, ColumnKind::Binary)).collect();
        for _ in 0..3 {
            let terms = cols.iter().map(|&c| (c, rng.gen_range(1i32..=9) as f64)).collect();
            milp.add_row(terms, Sense::Le, rng.gen_range(10i32..=30) as f64);
        }
        milp.set_objective(ObjectiveSense::Maximize, cols.iter().map(|&c| (c, rng.gen_range(1i32..=20) as f64)).collect());
        let (obj, _) = common::enumerate_milp(&milp).unwrap();
        let s = solve_milp(&milp, &SolveOptions::default());
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.objective, obj, "trial {trial}");
    }
}

#[test]
fn solve_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let milp = common::random_milp(&mut rng, 10, 2, 4);
    let a = solve_milp(&milp, &SolveOptions::default());
    let b = solve_milp(&milp, &SolveOptions::default());
    assert_eq!(a.values, b.values);
    assert_eq!(a.nodes, b.nodes);
    assert_eq!(a.lp_iterations, b.lp_iterations);
}

#[test]
fn node_limit_reports_status() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut milp = Milp::new("b");
    let cols: Vec<_> = (0..20).map(|i| milp.add_column(format!("b{i}"), 0.0, 1.0, ColumnKind::Binary)).collect();
    let terms = cols.iter().map(|&c| (c, rng.gen_range(3.0..9.0f64))).collect();
    milp.add_row(terms, Sense::Le, 31.5);
    milp.set_objective(ObjectiveSense::Maximize, cols.iter().map(|&c| (c, rng.gen_range(1.0..20.0f64))).collect());
    let s = solve_milp(&milp, &SolveOptions { node_limit: 1, ..SolveOptions::default() });
    assert!(matches!(s.status, SolveStatus::NodeLimit | SolveStatus::FeasibleGapLimit | SolveStatus::Optimal));
    assert!(s.nodes <= 1);
}
