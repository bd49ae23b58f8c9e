//! Pre-trained predictive models and their exact forward evaluation.
//!
//! Three families are supported: linear regression, logistic regression and
//! feed-forward ReLU networks with a single affine output. Predictors are
//! immutable once built and are read from / written to a self-describing JSON
//! document whose `type` field selects the family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Logistic function, evaluated on the branch that cannot overflow.
pub fn sigmoid(a: f64) -> f64 {
    if a >= 0.0 {
        1.0 / (1.0 + (-a).exp())
    } else {
        let e = a.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)` without overflow for large positive `x` or loss of
/// precision for large negative `x`.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn dot(coefficients: &[f64], features: &[f64]) -> f64 {
    coefficients.iter().zip(features).map(|(c, f)| c * f).sum()
}

fn check_arity(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::ArityMismatch { expected, got });
    }
    Ok(())
}

fn check_finite(what: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRegressionModel {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

impl LinearRegressionModel {
    pub fn new(coefficients: Vec<f64>, intercept: f64) -> Result<Self> {
        check_finite("linear regression coefficients", &coefficients)?;
        check_finite("linear regression intercept", &[intercept])?;
        Ok(Self { coefficients, intercept })
    }

    pub fn feature_count(&self) -> usize {
        self.coefficients.len()
    }

    pub fn predict(&self, features: &[f64]) -> Result<f64> {
        check_arity(self.coefficients.len(), features.len())?;
        Ok(self.intercept + dot(&self.coefficients, features))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticRegressionModel {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

impl LogisticRegressionModel {
    pub fn new(coefficients: Vec<f64>, intercept: f64) -> Result<Self> {
        check_finite("logistic regression coefficients", &coefficients)?;
        check_finite("logistic regression intercept", &[intercept])?;
        Ok(Self { coefficients, intercept })
    }

    pub fn feature_count(&self) -> usize {
        self.coefficients.len()
    }

    /// The affine score whose sigmoid is the predicted probability.
    pub fn log_odds(&self, features: &[f64]) -> Result<f64> {
        check_arity(self.coefficients.len(), features.len())?;
        Ok(self.intercept + dot(&self.coefficients, features))
    }

    pub fn predict(&self, features: &[f64]) -> Result<f64> {
        self.log_odds(features).map(sigmoid)
    }
}

/// One affine layer; `weights[i][j]` connects input `j` to output neuron `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
}

impl Layer {
    pub fn inputs(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn outputs(&self) -> usize {
        self.weights.len()
    }
}

/// Feed-forward network: every layer but the last applies ReLU, the last is
/// affine with exactly one output neuron.
#[derive(Debug, Clone, PartialEq)]
pub struct NeuralNetworkModel {
    layers: Vec<Layer>,
}

impl NeuralNetworkModel {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        let Some(last) = layers.last() else {
            return Err(Error::Dimension("network has no layers".into()));
        };
        if last.outputs() != 1 {
            return Err(Error::Dimension(format!(
                "output layer has {} neurons, expected 1",
                last.outputs()
            )));
        }
        for (k, layer) in layers.iter().enumerate() {
            if layer.biases.len() != layer.outputs() {
                return Err(Error::Dimension(format!(
                    "layer {k}: {} weight rows but {} biases",
                    layer.outputs(),
                    layer.biases.len()
                )));
            }
            let width = layer.inputs();
            if width == 0 || layer.weights.iter().any(|row| row.len() != width) {
                return Err(Error::Dimension(format!("layer {k}: ragged or empty weight matrix")));
            }
            if k > 0 && layers[k - 1].outputs() != width {
                return Err(Error::Dimension(format!(
                    "layer {} produces {} values but layer {k} expects {width}",
                    k - 1,
                    layers[k - 1].outputs()
                )));
            }
            check_finite("network biases", &layer.biases)?;
            for row in &layer.weights {
                check_finite("network weights", row)?;
            }
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn feature_count(&self) -> usize {
        self.layers[0].inputs()
    }

    pub fn hidden_neurons(&self) -> usize {
        self.layers[..self.layers.len() - 1].iter().map(Layer::outputs).sum()
    }

    pub fn predict(&self, features: &[f64]) -> Result<f64> {
        check_arity(self.feature_count(), features.len())?;
        let mut values = features.to_vec();
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            values = layer
                .weights
                .iter()
                .zip(&layer.biases)
                .map(|(row, b)| {
                    let pre = dot(row, &values) + b;
                    if k == last {
                        pre
                    } else {
                        pre.max(0.0)
                    }
                })
                .collect();
        }
        Ok(values[0])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Linear(LinearRegressionModel),
    Logistic(LogisticRegressionModel),
    Network(NeuralNetworkModel),
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Linear(_) => "linear_regression",
            Family::Logistic(_) => "logistic_regression",
            Family::Network(_) => "neural_network",
        }
    }

    pub fn feature_count(&self) -> usize {
        match self {
            Family::Linear(m) => m.feature_count(),
            Family::Logistic(m) => m.feature_count(),
            Family::Network(m) => m.feature_count(),
        }
    }
}

/// A named, pre-trained model with an explicit feature order.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictor {
    id: String,
    family: Family,
    feature_names: Vec<String>,
}

impl Predictor {
    pub fn new(id: impl Into<String>, family: Family, feature_names: Vec<String>) -> Result<Self> {
        if feature_names.len() != family.feature_count() {
            return Err(Error::Dimension(format!(
                "{} feature names for a model with {} features",
                feature_names.len(),
                family.feature_count()
            )));
        }
        Ok(Self { id: id.into(), family, feature_names })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn feature_count(&self) -> usize {
        self.feature_names.len()
    }

    /// Exact prediction: the value the MILP encodings approximate or reproduce.
    pub fn predict(&self, features: &[f64]) -> Result<f64> {
        match &self.family {
            Family::Linear(m) => m.predict(features),
            Family::Logistic(m) => m.predict(features),
            Family::Network(m) => m.predict(features),
        }
    }

    pub fn to_document(&self) -> PredictorDocument {
        let (coefficients, intercept, layers) = match &self.family {
            Family::Linear(m) => (Some(m.coefficients.clone()), Some(m.intercept), None),
            Family::Logistic(m) => (Some(m.coefficients.clone()), Some(m.intercept), None),
            Family::Network(m) => (None, None, Some(m.layers.clone())),
        };
        PredictorDocument {
            id: Some(self.id.clone()),
            kind: self.family.tag().to_string(),
            feature_names: self.feature_names.clone(),
            coefficients,
            intercept,
            layers,
        }
    }

    pub fn from_document(doc: PredictorDocument) -> Result<Self> {
        let missing = |field: &str| Error::Dimension(format!("`{}` requires `{field}`", doc.kind));
        let family = match doc.kind.as_str() {
            "linear_regression" | "logistic_regression" => {
                let coefficients = doc.coefficients.clone().ok_or_else(|| missing("coefficients"))?;
                let intercept = doc.intercept.ok_or_else(|| missing("intercept"))?;
                if doc.kind == "linear_regression" {
                    Family::Linear(LinearRegressionModel::new(coefficients, intercept)?)
                } else {
                    Family::Logistic(LogisticRegressionModel::new(coefficients, intercept)?)
                }
            }
            "neural_network" => {
                let layers = doc.layers.clone().ok_or_else(|| missing("layers"))?;
                Family::Network(NeuralNetworkModel::new(layers)?)
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        let id = doc.id.unwrap_or_else(|| doc.kind.clone());
        Predictor::new(id, family, doc.feature_names)
    }
}

/// Serialized form of a [`Predictor`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictorDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(rename = "type")]
    pub kind: String,
    pub feature_names: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intercept: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<Layer>>,
}

pub fn load_predictor(json: &str) -> Result<Predictor> {
    Predictor::from_document(serde_json::from_str(json)?)
}

pub fn save_predictor(predictor: &Predictor) -> String {
    serde_json::to_string_pretty(&predictor.to_document()).expect("predictor documents serialize")
}

/// Reads either a single predictor document or an array of them.
pub fn load_predictors(json: &str) -> Result<Vec<Predictor>> {
    let value: serde_json::Value = serde_json::from_str(json)?;
    match value {
        serde_json::Value::Array(items) => items
            .into_iter()
            .map(|v| Predictor::from_document(serde_json::from_value(v)?))
            .collect(),
        other => Ok(vec![Predictor::from_document(serde_json::from_value(other)?)?]),
    }
}

pub fn save_predictors(predictors: &[Predictor]) -> String {
    let docs: Vec<_> = predictors.iter().map(Predictor::to_document).collect();
    serde_json::to_string_pretty(&docs).expect("predictor documents serialize")
}
