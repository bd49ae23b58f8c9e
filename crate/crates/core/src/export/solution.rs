use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::milp::ColumnTag;
use crate::model::OptimizationModel;
use crate::solver::Solution;
use crate::transcribe::Transcription;

/// Serialized solve result. Non-finite numbers are written as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub status: String,
    pub objective: Option<f64>,
    pub bound: Option<f64>,
    pub gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, f64>>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl SolutionDocument {
    /// Values of the model's regular variables, in model order.
    pub fn regular_values(&self, model: &OptimizationModel) -> Result<Vec<f64>> {
        let values = self.values.as_ref().ok_or_else(|| Error::DanglingHandle("solution has no values".into()))?;
        model
            .regular()
            .iter()
            .map(|v| values.get(&v.name).copied().ok_or_else(|| Error::DanglingHandle(v.name.clone())))
            .collect()
    }

    /// Re-checks the recorded regular values against the model's bounds,
    /// domains and constraints.
    pub fn verify(&self, model: &OptimizationModel, tol: f64) -> Result<Vec<String>> {
        Ok(model.violations(&self.regular_values(model)?, tol))
    }
}

/// Builds the solution document: user variables and predicted outputs under
/// their model names, plus every auxiliary column when `auxiliary` is set.
/// No value section is written without a feasible point.
pub fn write_solution(
    model: &OptimizationModel,
    transcription: &Transcription,
    solution: &Solution,
    auxiliary: bool,
) -> SolutionDocument {
    let values = solution.status.has_solution().then(|| {
        let x = &solution.values;
        let mut map = BTreeMap::new();
        for (var, col) in model.regular().iter().zip(&transcription.regular_columns) {
            map.insert(var.name.clone(), x[col.0]);
        }
        for (var, col) in model.predicted().iter().zip(&transcription.predicted_columns) {
            map.insert(var.name.clone(), x[col.0]);
        }
        if auxiliary {
            for (col, &v) in transcription.milp.columns.iter().zip(x) {
                if !matches!(col.tag, ColumnTag::User(_) | ColumnTag::PredictedOutput(_)) {
                    map.entry(col.name.clone()).or_insert(v);
                }
            }
        }
        map
    });
    SolutionDocument {
        status: solution.status.as_str().to_string(),
        objective: finite(solution.objective),
        bound: finite(solution.best_bound),
        gap: finite(solution.gap),
        values,
    }
}

pub fn read_solution(json: &str) -> Result<SolutionDocument> {
    Ok(serde_json::from_str(json)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::model::{Domain, FeatureBinding, ObjectiveSense, Sense};
    use crate::predictors::{Family, LinearRegressionModel, Predictor};
    use crate::solver::{solve_milp, SolveOptions, SolveStatus};
    use crate::transcribe::{transcribe_model, TranscribeOptions};

    fn model(cap: f64) -> OptimizationModel {
        let lin = Family::Linear(LinearRegressionModel::new(vec![2.0], 1.0).unwrap());
        let p = Arc::new(Predictor::new("lin", lin, vec!["x".into()]).unwrap());
        let mut m = OptimizationModel::new();
        let x = m.add_regular_variable("x", 0.0, 5.0, Domain::Integer).unwrap();
        let y = m.add_predicted_variable("y", &p, vec![FeatureBinding::Variable(x)]).unwrap();
        m.add_constraint(vec![(x.into(), 1.0)], Sense::Le, cap).unwrap();
        m.add_constraint(vec![(x.into(), 1.0)], Sense::Ge, 0.5).unwrap();
        m.set_objective(vec![(y.into(), 1.0)], ObjectiveSense::Maximize).unwrap();
        m
    }

    #[test]
    fn optimal_round_trip() {
        let m = model(3.5);
        let tr = transcribe_model(&m, &TranscribeOptions::default()).unwrap();
        let sol = solve_milp(&tr.milp, &SolveOptions::default());
        assert_eq!(sol.status, SolveStatus::Optimal);
        let doc = write_solution(&m, &tr, &sol, false);
        let json = serde_json::to_string_pretty(&doc).unwrap();
        let back = read_solution(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.status, "optimal");
        assert_eq!(back.objective, Some(7.0));
        let values = back.values.as_ref().unwrap();
        assert_eq!(values.len(), 2);
        assert_eq!(values["x"], 3.0);
        assert!(back.verify(&m, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn infeasible_has_no_values() {
        let m = model(0.2);
        let tr = transcribe_model(&m, &TranscribeOptions::default()).unwrap();
        let sol = solve_milp(&tr.milp, &SolveOptions::default());
        assert_eq!(sol.status, SolveStatus::Infeasible);
        let json = serde_json::to_string(&write_solution(&m, &tr, &sol, true)).unwrap();
        assert!(!json.contains("values"), "{json}");
        assert!(json.contains("\"objective\":null"));
        let back = read_solution(&json).unwrap();
        assert!(back.values.is_none());
        assert!(back.verify(&m, 1e-9).is_err());
    }

    #[test]
    fn tampered_values_fail_verification() {
        let m = model(3.5);
        let tr = transcribe_model(&m, &TranscribeOptions::default()).unwrap();
        let sol = solve_milp(&tr.milp, &SolveOptions::default());
        let mut doc = write_solution(&m, &tr, &sol, true);
        assert!(doc.values.as_ref().unwrap().len() > 2 || tr.milp.columns.len() == 2);
        doc.values.as_mut().unwrap().insert("x".into(), 4.0);
        assert_eq!(doc.verify(&m, 1e-9).unwrap().len(), 1);
    }
}
