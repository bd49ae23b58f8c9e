use std::sync::Arc;

use super::data::{feature_names, StudentRecord, MAX_SCHOLARSHIP};
use crate::error::{Error, Result};
use crate::model::{Domain, FeatureBinding, ObjectiveSense, OptimizationModel, Sense, VarRef};
use crate::predictors::Predictor;

/// `0.2 * N * 10^4` dollars.
pub fn default_budget(n: usize) -> f64 {
    0.2 * n as f64 * 1e4
}

/// Scholarship allocation model: one `x_i` in `[0, 25000]` and one predicted
/// enrollment probability `y_i = g(sat_i, gpa_i, x_i)` per student, a budget
/// row, and `max sum y_i`.
pub fn build_enrollment_model(
    students: &[StudentRecord],
    predictor: &Arc<Predictor>,
    budget: f64,
) -> Result<OptimizationModel> {
    if predictor.feature_names() != feature_names().as_slice() {
        return Err(Error::FeatureMismatch { expected: feature_names(), got: predictor.feature_names().to_vec() });
    }
    let mut model = OptimizationModel::new();
    let mut budget_row = Vec::with_capacity(students.len());
    let mut objective = Vec::with_capacity(students.len());
    for (i, s) in students.iter().enumerate() {
        let x = model.add_regular_variable(&format!("x{i}"), 0.0, MAX_SCHOLARSHIP, Domain::Continuous)?;
        let bindings = vec![FeatureBinding::Fixed(s.sat), FeatureBinding::Fixed(s.gpa), FeatureBinding::Variable(x)];
        let y = model.add_predicted_variable(&format!("y{i}"), predictor, bindings)?;
        budget_row.push((VarRef::from(x), 1.0));
        objective.push((VarRef::from(y), 1.0));
    }
    model.add_constraint(budget_row, Sense::Le, budget)?;
    model.set_objective(objective, ObjectiveSense::Maximize)?;
    Ok(model)
}

/// Greedy baseline: students sorted by `g(.., 25000) - g(.., 0)`, largest
/// first (ties by index), each given the maximum award until the budget runs
/// short; the next student gets the remainder.
pub fn heuristic_allocate(students: &[StudentRecord], predictor: &Predictor, budget: f64) -> Result<Vec<f64>> {
    let mut gain = Vec::with_capacity(students.len());
    for s in students {
        let hi = predictor.predict(&[s.sat, s.gpa, MAX_SCHOLARSHIP])?;
        let lo = predictor.predict(&[s.sat, s.gpa, 0.0])?;
        gain.push(hi - lo);
    }
    let mut order: Vec<usize> = (0..students.len()).collect();
    order.sort_by(|&a, &b| gain[b].total_cmp(&gain[a]).then(a.cmp(&b)));
    let mut left = budget.max(0.0);
    let mut alloc = vec![0.0; students.len()];
    for i in order {
        let award = left.min(MAX_SCHOLARSHIP);
        if award <= 0.0 {
            break;
        }
        alloc[i] = award;
        left -= award;
    }
    Ok(alloc)
}

/// Expected number of enrolling students under `allocation`, using the
/// predictor's exact output.
pub fn evaluate_allocation(students: &[StudentRecord], allocation: &[f64], predictor: &Predictor) -> Result<f64> {
    if students.len() != allocation.len() {
        return Err(Error::Dimension(format!("{} students, {} awards", students.len(), allocation.len())));
    }
    students.iter().zip(allocation).map(|(s, &x)| predictor.predict(&[s.sat, s.gpa, x])).sum()
}

/// `(heuristic declination - optimized declination) / heuristic declination`
/// in percent, with declination `N - expected enrollment`.
pub fn pct_reduction_declination(n: usize, optimized: f64, heuristic: f64) -> f64 {
    let h = n as f64 - heuristic;
    let o = n as f64 - optimized;
    if h == 0.0 {
        0.0
    } else {
        100.0 * (h - o) / h
    }
}
