use crate::milp::ColumnTag;
use crate::model::{OptimizationModel, PredictedId};
use crate::predictors::{sigmoid, Family};

use super::bounds::logodds_range;
use super::logistic::{partition, v_delta};
use super::{bound_features, TranscribeOptions, Transcription};

/// Exact values of one predicted variable's auxiliary columns.
struct Trace {
    /// Pre- and post-activations per layer, layer 0 being the inputs.
    pre: Vec<Vec<f64>>,
    post: Vec<Vec<f64>>,
    interval: usize,
    output: f64,
}

impl Transcription {
    /// Extends an assignment of the regular variables to a full MILP point by
    /// evaluating every predictor exactly: activations and ReLU indicators by
    /// a forward pass, the log-odds interval and its mean sigmoid value for
    /// logistic outputs. `None` when the point fails the MILP's feasibility
    /// check at tolerance 1e-6.
    pub fn complete(
        &self,
        model: &OptimizationModel,
        regular_values: &[f64],
        options: &TranscribeOptions,
    ) -> Option<Vec<f64>> {
        if regular_values.len() != model.regular().len() {
            return None;
        }
        let traces = (0..model.predicted().len())
            .map(|k| self.trace(model, PredictedId(k), regular_values, options))
            .collect::<Option<Vec<_>>>()?;
        let mut values = vec![0.0; self.milp.columns.len()];
        for (v, col) in values.iter_mut().zip(&self.milp.columns) {
            *v = match col.tag {
                ColumnTag::User(r) => regular_values[r.0],
                ColumnTag::NeuronPre { var, layer, node } => traces[var.0].pre[layer][node],
                ColumnTag::NeuronPost { var, layer, node } => traces[var.0].post[layer][node],
                ColumnTag::ReluIndicator { var, layer, node } => {
                    if traces[var.0].pre[layer][node] > 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                }
                ColumnTag::IntervalIndicator { var, interval } => {
                    if traces[var.0].interval == interval {
                        1.0
                    } else {
                        0.0
                    }
                }
                ColumnTag::PredictedOutput(var) => traces[var.0].output,
                ColumnTag::Free => return None,
            };
        }
        self.milp.violations(&values, 1e-6, 0.0).is_empty().then_some(values)
    }

    fn trace(
        &self,
        model: &OptimizationModel,
        id: PredictedId,
        regular_values: &[f64],
        options: &TranscribeOptions,
    ) -> Option<Trace> {
        let x = model.features(id, regular_values);
        let mut trace = Trace { pre: vec![x.clone()], post: vec![x.clone()], interval: 0, output: 0.0 };
        match model.predictor_of(id).family() {
            Family::Linear(m) => trace.output = m.predict(&x).ok()?,
            Family::Network(net) => {
                let depth = net.layers().len();
                for (k, layer) in net.layers().iter().enumerate() {
                    let prev = &trace.post[k];
                    let pre: Vec<f64> = layer
                        .weights
                        .iter()
                        .zip(&layer.biases)
                        .map(|(w, b)| b + w.iter().zip(prev).map(|(a, v)| a * v).sum::<f64>())
                        .collect();
                    let post = if k + 1 == depth { pre.clone() } else { pre.iter().map(|g| g.max(0.0)).collect() };
                    trace.pre.push(pre);
                    trace.post.push(post);
                }
                trace.output = trace.post[depth][0];
            }
            Family::Logistic(m) => {
                let t = m.log_odds(&x).ok()?;
                let features = bound_features(model, id, &self.regular_columns);
                if features.iter().all(|f| matches!(f, super::BoundFeature::Fixed(_))) {
                    trace.output = sigmoid(t);
                    return Some(trace);
                }
                let range = logodds_range(m, &features, options.degenerate_pad).ok()?;
                let (lowers, uppers) = partition(range.lo, range.hi, options.intervals);
                let d = uppers.iter().position(|&u| t <= u).unwrap_or(options.intervals - 1);
                trace.interval = d;
                trace.output = v_delta(lowers[d], uppers[d]).ok()?;
            }
        }
        Some(trace)
    }
}
