//! Optimization models with regular and predicted variables.
//!
//! A model holds bounded decision variables, linear constraints over them,
//! predicted variables whose value is a pre-trained predictor evaluated on a
//! mix of constants and decision variables, and a linear objective over both
//! kinds of variable.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::predictors::Predictor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegularId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredictedId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstraintId(pub usize);

/// Either kind of model variable, as used in objectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarRef {
    Regular(RegularId),
    Predicted(PredictedId),
}

impl From<RegularId> for VarRef {
    fn from(id: RegularId) -> Self {
        VarRef::Regular(id)
    }
}

impl From<PredictedId> for VarRef {
    fn from(id: PredictedId) -> Self {
        VarRef::Predicted(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Continuous,
    Integer,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveSense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularVariable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub domain: Domain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub terms: Vec<(RegularId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Where one predictor input comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureBinding {
    Fixed(f64),
    Variable(RegularId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictedVariable {
    pub name: String,
    /// Index into [`OptimizationModel::predictors`].
    pub predictor: usize,
    pub bindings: Vec<FeatureBinding>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub terms: Vec<(VarRef, f64)>,
    pub sense: ObjectiveSense,
}

impl Default for Objective {
    fn default() -> Self {
        Self { terms: Vec::new(), sense: ObjectiveSense::Maximize }
    }
}

#[derive(Debug, Clone, Default)]
pub struct OptimizationModel {
    regular: Vec<RegularVariable>,
    predicted: Vec<PredictedVariable>,
    predictors: Vec<Arc<Predictor>>,
    constraints: Vec<LinearConstraint>,
    objective: Objective,
    names: HashMap<String, VarRef>,
}

impl OptimizationModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn regular(&self) -> &[RegularVariable] {
        &self.regular
    }

    pub fn predicted(&self) -> &[PredictedVariable] {
        &self.predicted
    }

    pub fn predictors(&self) -> &[Arc<Predictor>] {
        &self.predictors
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn predictor_of(&self, id: PredictedId) -> &Predictor {
        &self.predictors[self.predicted[id.0].predictor]
    }

    pub fn lookup(&self, name: &str) -> Option<VarRef> {
        self.names.get(name).copied()
    }

    pub fn var_name(&self, var: VarRef) -> &str {
        match var {
            VarRef::Regular(id) => &self.regular[id.0].name,
            VarRef::Predicted(id) => &self.predicted[id.0].name,
        }
    }

    fn claim_name(&mut self, name: &str, var: VarRef) -> Result<()> {
        if self.names.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        self.names.insert(name.to_string(), var);
        Ok(())
    }

    fn check_regular(&self, id: RegularId) -> Result<()> {
        if id.0 < self.regular.len() {
            Ok(())
        } else {
            Err(Error::DanglingHandle(format!("regular #{}", id.0)))
        }
    }

    pub fn add_regular_variable(
        &mut self,
        name: &str,
        lower: f64,
        upper: f64,
        domain: Domain,
    ) -> Result<RegularId> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(Error::NonFiniteBound { name: name.to_string() });
        }
        if lower > upper {
            return Err(Error::ReversedBounds { name: name.to_string(), lower, upper });
        }
        let (lower, upper) = match domain {
            Domain::Binary => (0.0, 1.0),
            _ => (lower, upper),
        };
        let id = RegularId(self.regular.len());
        self.claim_name(name, VarRef::Regular(id))?;
        self.regular.push(RegularVariable { name: name.to_string(), lower, upper, domain });
        Ok(id)
    }

    /// Registers `predictor` (shared by id) and a predicted variable bound to it.
    /// No MILP rows are produced until the model is transcribed.
    pub fn add_predicted_variable(
        &mut self,
        name: &str,
        predictor: &Arc<Predictor>,
        bindings: Vec<FeatureBinding>,
    ) -> Result<PredictedId> {
        if bindings.len() != predictor.feature_count() {
            return Err(Error::ArityMismatch {
                expected: predictor.feature_count(),
                got: bindings.len(),
            });
        }
        for binding in &bindings {
            match *binding {
                FeatureBinding::Fixed(v) if !v.is_finite() => {
                    return Err(Error::NonFinite(format!("fixed feature of `{name}`")));
                }
                FeatureBinding::Variable(id) => self.check_regular(id)?,
                _ => {}
            }
        }
        let slot = self.register_predictor(predictor)?;
        let id = PredictedId(self.predicted.len());
        self.claim_name(name, VarRef::Predicted(id))?;
        self.predicted.push(PredictedVariable { name: name.to_string(), predictor: slot, bindings });
        Ok(id)
    }

    fn register_predictor(&mut self, predictor: &Arc<Predictor>) -> Result<usize> {
        if let Some(pos) = self.predictors.iter().position(|p| p.id() == predictor.id()) {
            if Arc::ptr_eq(&self.predictors[pos], predictor) || *self.predictors[pos] == **predictor {
                return Ok(pos);
            }
            return Err(Error::PredictorConflict(predictor.id().to_string()));
        }
        self.predictors.push(Arc::clone(predictor));
        Ok(self.predictors.len() - 1)
    }

    pub fn add_constraint(
        &mut self,
        terms: Vec<(VarRef, f64)>,
        sense: Sense,
        rhs: f64,
    ) -> Result<ConstraintId> {
        let mut regular_terms = Vec::with_capacity(terms.len());
        for (var, coef) in terms {
            match var {
                VarRef::Regular(id) => {
                    self.check_regular(id)?;
                    regular_terms.push((id, coef));
                }
                VarRef::Predicted(id) => {
                    let name = self
                        .predicted
                        .get(id.0)
                        .map_or_else(|| format!("predicted #{}", id.0), |p| p.name.clone());
                    return Err(Error::PredictedInConstraint(name));
                }
            }
        }
        if !rhs.is_finite() || regular_terms.iter().any(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFinite("constraint".into()));
        }
        self.constraints.push(LinearConstraint { terms: regular_terms, sense, rhs });
        Ok(ConstraintId(self.constraints.len() - 1))
    }

    pub fn set_objective(&mut self, terms: Vec<(VarRef, f64)>, sense: ObjectiveSense) -> Result<()> {
        for (var, coef) in &terms {
            let ok = match *var {
                VarRef::Regular(id) => id.0 < self.regular.len(),
                VarRef::Predicted(id) => id.0 < self.predicted.len(),
            };
            if !ok {
                return Err(Error::DanglingHandle(format!("{var:?}")));
            }
            if !coef.is_finite() {
                return Err(Error::NonFinite("objective".into()));
            }
        }
        self.objective = Objective { terms, sense };
        Ok(())
    }

    /// Values of the predictor inputs for predicted variable `id`, given a
    /// value for every regular variable.
    pub fn features(&self, id: PredictedId, regular_values: &[f64]) -> Vec<f64> {
        self.predicted[id.0]
            .bindings
            .iter()
            .map(|b| match *b {
                FeatureBinding::Fixed(v) => v,
                FeatureBinding::Variable(r) => regular_values[r.0],
            })
            .collect()
    }

    /// Exact predictor outputs for every predicted variable.
    pub fn predict_all(&self, regular_values: &[f64]) -> Result<Vec<f64>> {
        (0..self.predicted.len())
            .map(|k| {
                let id = PredictedId(k);
                self.predictor_of(id).predict(&self.features(id, regular_values))
            })
            .collect()
    }

    /// Objective evaluated with exact predictor outputs.
    pub fn exact_objective(&self, regular_values: &[f64]) -> Result<f64> {
        let predicted = self.predict_all(regular_values)?;
        Ok(self
            .objective
            .terms
            .iter()
            .map(|(var, c)| match *var {
                VarRef::Regular(id) => c * regular_values[id.0],
                VarRef::Predicted(id) => c * predicted[id.0],
            })
            .sum())
    }

    /// Describes bound, integrality and constraint violations beyond `tol`.
    pub fn violations(&self, regular_values: &[f64], tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        if regular_values.len() != self.regular.len() {
            out.push(format!(
                "expected {} regular values, got {}",
                self.regular.len(),
                regular_values.len()
            ));
            return out;
        }
        for (var, &v) in self.regular.iter().zip(regular_values) {
            if v < var.lower - tol || v > var.upper + tol {
                out.push(format!("{} = {v} outside [{}, {}]", var.name, var.lower, var.upper));
            }
            if var.domain != Domain::Continuous && (v - v.round()).abs() > tol {
                out.push(format!("{} = {v} is not integral", var.name));
            }
        }
        for (i, row) in self.constraints.iter().enumerate() {
            let lhs: f64 = row.terms.iter().map(|(id, c)| c * regular_values[id.0]).sum();
            let scale = 1.0 + row.rhs.abs();
            let bad = match row.sense {
                Sense::Le => lhs > row.rhs + tol * scale,
                Sense::Ge => lhs < row.rhs - tol * scale,
                Sense::Eq => (lhs - row.rhs).abs() > tol * scale,
            };
            if bad {
                out.push(format!("constraint {i}: lhs {lhs} vs rhs {} ({:?})", row.rhs, row.sense));
            }
        }
        out
    }

    pub fn to_document(&self) -> ModelDocument {
        let var_name = |id: RegularId| self.regular[id.0].name.clone();
        ModelDocument {
            regular_variables: self
                .regular
                .iter()
                .map(|v| RegularDoc {
                    name: v.name.clone(),
                    lower: v.lower,
                    upper: v.upper,
                    domain: v.domain,
                })
                .collect(),
            constraints: self
                .constraints
                .iter()
                .map(|c| ConstraintDoc {
                    terms: c.terms.iter().map(|&(id, coef)| TermDoc { var: var_name(id), coef }).collect(),
                    sense: c.sense,
                    rhs: c.rhs,
                })
                .collect(),
            objective: ObjectiveDoc {
                sense: self.objective.sense,
                terms: self
                    .objective
                    .terms
                    .iter()
                    .map(|&(var, coef)| TermDoc { var: self.var_name(var).to_string(), coef })
                    .collect(),
            },
            predicted_variables: self
                .predicted
                .iter()
                .map(|p| PredictedDoc {
                    name: p.name.clone(),
                    predictor: self.predictors[p.predictor].id().to_string(),
                    bindings: p
                        .bindings
                        .iter()
                        .map(|b| match *b {
                            FeatureBinding::Fixed(v) => BindingDoc::Fixed(v),
                            FeatureBinding::Variable(id) => BindingDoc::Var(var_name(id)),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds a model, resolving predictor ids against `predictors`.
    pub fn from_document(doc: &ModelDocument, predictors: &[Arc<Predictor>]) -> Result<Self> {
        let mut model = OptimizationModel::new();
        for v in &doc.regular_variables {
            model.add_regular_variable(&v.name, v.lower, v.upper, v.domain)?;
        }
        let regular = |model: &OptimizationModel, name: &str| match model.lookup(name) {
            Some(VarRef::Regular(id)) => Ok(id),
            Some(VarRef::Predicted(_)) => Err(Error::PredictedInConstraint(name.to_string())),
            None => Err(Error::DanglingHandle(name.to_string())),
        };
        for p in &doc.predicted_variables {
            let predictor = predictors
                .iter()
                .find(|q| q.id() == p.predictor)
                .ok_or_else(|| Error::UnknownPredictor(p.predictor.clone()))?;
            let bindings = p
                .bindings
                .iter()
                .map(|b| match b {
                    BindingDoc::Fixed(v) => Ok(FeatureBinding::Fixed(*v)),
                    BindingDoc::Var(name) => regular(&model, name).map(FeatureBinding::Variable),
                })
                .collect::<Result<Vec<_>>>()?;
            model.add_predicted_variable(&p.name, predictor, bindings)?;
        }
        for c in &doc.constraints {
            let terms = c
                .terms
                .iter()
                .map(|t| match model.lookup(&t.var) {
                    Some(var) => Ok((var, t.coef)),
                    None => Err(Error::DanglingHandle(t.var.clone())),
                })
                .collect::<Result<Vec<_>>>()?;
            model.add_constraint(terms, c.sense, c.rhs)?;
        }
        let terms = doc
            .objective
            .terms
            .iter()
            .map(|t| {
                model
                    .lookup(&t.var)
                    .map(|var| (var, t.coef))
                    .ok_or_else(|| Error::DanglingHandle(t.var.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        model.set_objective(terms, doc.objective.sense)?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("model documents serialize")
    }

    pub fn from_json(json: &str, predictors: &[Arc<Predictor>]) -> Result<Self> {
        Self::from_document(&serde_json::from_str(json)?, predictors)
    }
}

/// On-disk form of an [`OptimizationModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    #[serde(default)]
    pub regular_variables: Vec<RegularDoc>,
    #[serde(default)]
    pub constraints: Vec<ConstraintDoc>,
    #[serde(default)]
    pub objective: ObjectiveDoc,
    #[serde(default)]
    pub predicted_variables: Vec<PredictedDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularDoc {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    #[serde(default = "continuous")]
    pub domain: Domain,
}

fn continuous() -> Domain {
    Domain::Continuous
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub var: String,
    pub coef: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintDoc {
    pub terms: Vec<TermDoc>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveDoc {
    pub sense: ObjectiveSense,
    #[serde(default)]
    pub terms: Vec<TermDoc>,
}

impl Default for ObjectiveDoc {
    fn default() -> Self {
        Self { sense: ObjectiveSense::Maximize, terms: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictedDoc {
    pub name: String,
    pub predictor: String,
    pub bindings: Vec<BindingDoc>,
}

/// `{"fixed": 1.5}` or `{"var": "x3"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BindingDoc {
    Fixed(f64),
    Var(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictors::{Family, LinearRegressionModel, LogisticRegressionModel};

    fn logistic(p: usize) -> Arc<Predictor> {
        let names = (0..p).map(|i| format!("f{i}")).collect();
        Arc::new(
            Predictor::new(
                "enroll",
                Family::Logistic(LogisticRegressionModel::new(vec![0.5; p], 0.1).unwrap()),
                names,
            )
            .unwrap(),
        )
    }

    #[test]
    fn regular_variables() {
        let mut m = OptimizationModel::new();
        let h = m.add_regular_variable("x1", 0.0, 25_000.0, Domain::Continuous).unwrap();
        assert_eq!(h, RegularId(0));
        assert_eq!(m.regular().len(), 1);

        let b = m.add_regular_variable("b", -3.0, 7.0, Domain::Binary).unwrap();
        assert_eq!((m.regular()[b.0].lower, m.regular()[b.0].upper), (0.0, 1.0));

        assert!(matches!(
            m.add_regular_variable("x", 5.0, 2.0, Domain::Continuous),
            Err(Error::ReversedBounds { .. })
        ));
        assert!(matches!(
            m.add_regular_variable("y", 0.0, f64::INFINITY, Domain::Continuous),
            Err(Error::NonFiniteBound { .. })
        ));
        assert_eq!(
            m.add_regular_variable("x1", 0.0, 1.0, Domain::Continuous),
            Err(Error::DuplicateName("x1".into()))
        );
    }

    #[test]
    fn predicted_variables() {
        let mut m = OptimizationModel::new();
        let x = m.add_regular_variable("x", 0.0, 25_000.0, Domain::Continuous).unwrap();
        let p = logistic(3);
        let bindings = vec![
            FeatureBinding::Fixed(1.2),
            FeatureBinding::Fixed(-0.3),
            FeatureBinding::Variable(x),
        ];
        m.add_predicted_variable("y", &p, bindings).unwrap();

        let narrow = Arc::new(
            Predictor::new(
                "two",
                Family::Linear(LinearRegressionModel::new(vec![1.0, 1.0], 0.0).unwrap()),
                vec!["a".into(), "b".into()],
            )
            .unwrap(),
        );
        assert_eq!(
            m.add_predicted_variable("z", &narrow, vec![FeatureBinding::Fixed(0.0); 3]),
            Err(Error::ArityMismatch { expected: 2, got: 3 })
        );
        assert!(matches!(
            m.add_predicted_variable(
                "z",
                &narrow,
                vec![FeatureBinding::Fixed(0.0), FeatureBinding::Variable(RegularId(9))]
            ),
            Err(Error::DanglingHandle(_))
        ));
    }

    #[test]
    fn one_predictor_many_predicted_variables() {
        let mut m = OptimizationModel::new();
        let p = logistic(3);
        for i in 0..50 {
            let x = m.add_regular_variable(&format!("x{i}"), 0.0, 1.0, Domain::Continuous).unwrap();
            let bindings =
                vec![FeatureBinding::Fixed(0.0), FeatureBinding::Fixed(1.0), FeatureBinding::Variable(x)];
            m.add_predicted_variable(&format!("y{i}"), &p, bindings).unwrap();
        }
        assert_eq!(m.predicted().len(), 50);
        assert_eq!(m.predictors().len(), 1);

        let clash = Arc::new(
            Predictor::new(
                "enroll",
                Family::Logistic(LogisticRegressionModel::new(vec![9.0; 3], 0.0).unwrap()),
                vec!["a".into(), "b".into(), "c".into()],
            )
            .unwrap(),
        );
        assert_eq!(
            m.add_predicted_variable("w", &clash, vec![FeatureBinding::Fixed(0.0); 3]),
            Err(Error::PredictorConflict("enroll".into()))
        );
    }

    #[test]
    fn all_variable_bindings_are_allowed() {
        let mut m = OptimizationModel::new();
        let a = m.add_regular_variable("a", 0.0, 1.0, Domain::Continuous).unwrap();
        let b = m.add_regular_variable("b", 0.0, 1.0, Domain::Continuous).unwrap();
        let p = logistic(2);
        m.add_predicted_variable("y", &p, vec![FeatureBinding::Variable(a), FeatureBinding::Variable(b)])
            .unwrap();
    }

    #[test]
    fn constraints_and_objective() {
        let mut m = OptimizationModel::new();
        let xs: Vec<_> = (0..500)
            .map(|i| m.add_regular_variable(&format!("x{i}"), 0.0, 25_000.0, Domain::Continuous).unwrap())
            .collect();
        let budget = 0.2 * 500.0 * 1e4;
        let id = m
            .add_constraint(xs.iter().map(|&x| (x.into(), 1.0)).collect(), Sense::Le, budget)
            .unwrap();
        assert_eq!(m.constraints()[id.0].rhs, 1_000_000.0);
        m.add_constraint(vec![], Sense::Le, 0.0).unwrap();

        let p = logistic(1);
        let y = m.add_predicted_variable("y", &p, vec![FeatureBinding::Variable(xs[0])]).unwrap();
        assert_eq!(
            m.add_constraint(vec![(y.into(), 1.0)], Sense::Le, 1.0),
            Err(Error::PredictedInConstraint("y".into()))
        );
        assert!(matches!(
            m.add_constraint(vec![(RegularId(999).into(), 1.0)], Sense::Le, 1.0),
            Err(Error::DanglingHandle(_))
        ));

        m.set_objective(vec![(y.into(), 1.0), (xs[1].into(), -0.5)], ObjectiveSense::Maximize).unwrap();
        assert_eq!(m.objective().terms.len(), 2);
        m.set_objective(vec![], ObjectiveSense::Maximize).unwrap();
        assert!(m.objective().terms.is_empty());
        assert!(m.set_objective(vec![(PredictedId(3).into(), 1.0)], ObjectiveSense::Minimize).is_err());
    }

    #[test]
    fn document_round_trip() {
        let mut m = OptimizationModel::new();
        let x = m.add_regular_variable("x", 0.0, 25_000.0, Domain::Continuous).unwrap();
        let n = m.add_regular_variable("n", 0.0, 4.0, Domain::Integer).unwrap();
        let p = logistic(3);
        let y = m
            .add_predicted_variable(
                "y",
                &p,
                vec![FeatureBinding::Fixed(0.25), FeatureBinding::Variable(n), FeatureBinding::Variable(x)],
            )
            .unwrap();
        m.add_constraint(vec![(x.into(), 1.0), (n.into(), 2.0)], Sense::Ge, 1.0).unwrap();
        m.set_objective(vec![(y.into(), 1.0), (x.into(), -1e-5)], ObjectiveSense::Maximize).unwrap();

        let json = m.to_json();
        assert!(json.contains("\"fixed\": 0.25") && json.contains("\"var\": \"x\""));
        let back = OptimizationModel::from_json(&json, &[p]).unwrap();
        assert_eq!(back.to_document(), m.to_document());
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn unknown_predictor_in_document() {
        let json = r#"{"regular_variables":[],"constraints":[],
            "objective":{"sense":"maximize","terms":[]},
            "predicted_variables":[{"name":"y","predictor":"nope","bindings":[]}]}"#;
        assert_eq!(
            OptimizationModel::from_json(json, &[]).unwrap_err(),
            Error::UnknownPredictor("nope".into())
        );
    }

    #[test]
    fn violations_report() {
        let mut m = OptimizationModel::new();
        let a = m.add_regular_variable("a", 0.0, 10.0, Domain::Integer).unwrap();
        let b = m.add_regular_variable("b", 0.0, 10.0, Domain::Continuous).unwrap();
        m.add_constraint(vec![(a.into(), 1.0), (b.into(), 1.0)], Sense::Le, 5.0).unwrap();
        assert!(m.violations(&[2.0, 3.0], 1e-9).is_empty());
        assert_eq!(m.violations(&[2.5, 3.0], 1e-9).len(), 2);
        assert_eq!(m.violations(&[11.0, 0.0], 1e-9).len(), 2);
    }
}
