//! Interval arithmetic used to derive big-M constants and log-odds ranges.

use crate::error::{Error, Result};
use crate::predictors::{LogisticRegressionModel, NeuralNetworkModel};

use super::BoundFeature;

/// Closed, finite interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Largest absolute value attained on the interval.
    pub fn magnitude(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn scale(&self, k: f64) -> Self {
        if k >= 0.0 {
            Self { lo: k * self.lo, hi: k * self.hi }
        } else {
            Self { lo: k * self.hi, hi: k * self.lo }
        }
    }

    pub fn add(&self, other: &Interval) -> Self {
        Self { lo: self.lo + other.lo, hi: self.hi + other.hi }
    }

    pub fn shift(&self, c: f64) -> Self {
        Self { lo: self.lo + c, hi: self.hi + c }
    }

    pub fn relu(&self) -> Self {
        Self { lo: self.lo.max(0.0), hi: self.hi.max(0.0) }
    }
}

/// Per-neuron intervals for pre-activations (`pre`) and post-activations
/// (`post`). Index 0 is the input layer; index `k + 1` is the output of
/// network layer `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkBounds {
    pub pre: Vec<Vec<Interval>>,
    pub post: Vec<Vec<Interval>>,
}

pub fn propagate_bounds_nn(net: &NeuralNetworkModel, inputs: &[Interval]) -> Result<NetworkBounds> {
    if inputs.len() != net.feature_count() {
        return Err(Error::ArityMismatch { expected: net.feature_count(), got: inputs.len() });
    }
    let mut pre = vec![inputs.to_vec()];
    let mut post = vec![inputs.to_vec()];
    let last = net.layers().len() - 1;
    for (k, layer) in net.layers().iter().enumerate() {
        let prev = &post[k];
        let g: Vec<Interval> = layer
            .weights
            .iter()
            .zip(&layer.biases)
            .map(|(row, &b)| {
                row.iter()
                    .zip(prev)
                    .fold(Interval::point(b), |acc, (&w, iv)| acc.add(&iv.scale(w)))
            })
            .collect();
        let f = if k == last { g.clone() } else { g.iter().map(Interval::relu).collect() };
        pre.push(g);
        post.push(f);
    }
    for iv in pre.iter().flatten() {
        Interval::new(iv.lo, iv.hi)?;
    }
    Ok(NetworkBounds { pre, post })
}

/// Range of the affine score of `model` over the feature box. A zero-width
/// range is padded by `pad` on either side.
pub fn logodds_range(model: &LogisticRegressionModel, features: &[BoundFeature], pad: f64) -> Result<Interval> {
    if features.len() != model.feature_count() {
        return Err(Error::ArityMismatch { expected: model.feature_count(), got: features.len() });
    }
    let range = affine_range(&model.coefficients, model.intercept, features)?;
    if range.width() == 0.0 {
        return Interval::new(range.lo - pad, range.hi + pad);
    }
    Ok(range)
}

pub(crate) fn affine_range(coefficients: &[f64], intercept: f64, features: &[BoundFeature]) -> Result<Interval> {
    let range = coefficients
        .iter()
        .zip(features)
        .fold(Interval::point(intercept), |acc, (&b, f)| acc.add(&f.interval().scale(b)));
    Interval::new(range.lo, range.hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::ColId;
    use crate::predictors::Layer;

    #[test]
    fn single_hidden_neuron() {
        let net = NeuralNetworkModel::new(vec![
            Layer { weights: vec![vec![2.0]], biases: vec![1.0] },
            Layer { weights: vec![vec![1.0]], biases: vec![0.0] },
        ])
        .unwrap();
        let b = propagate_bounds_nn(&net, &[Interval::new(-1.0, 1.0).unwrap()]).unwrap();
        assert_eq!(b.pre[1][0], Interval { lo: -1.0, hi: 3.0 });
        assert_eq!(b.post[1][0], Interval { lo: 0.0, hi: 3.0 });
        assert_eq!(b.pre[2][0], Interval { lo: 0.0, hi: 3.0 });
    }

    #[test]
    fn zero_network_only_shifts_by_bias() {
        let net = NeuralNetworkModel::new(vec![
            Layer { weights: vec![vec![0.0; 2]; 3], biases: vec![0.0, 0.5, -0.5] },
            Layer { weights: vec![vec![0.0; 3]], biases: vec![0.0] },
        ])
        .unwrap();
        let input = Interval::new(-4.0, 9.0).unwrap();
        let b = propagate_bounds_nn(&net, &[input, input]).unwrap();
        assert_eq!(b.pre[1], vec![Interval::point(0.0), Interval::point(0.5), Interval::point(-0.5)]);
        assert_eq!(b.post[1], vec![Interval::point(0.0), Interval::point(0.5), Interval::point(0.0)]);
        assert_eq!(b.pre[2], vec![Interval::point(0.0)]);
    }

    #[test]
    fn logodds_examples() {
        let col = |lo, hi| BoundFeature::Column { col: ColId(0), lower: lo, upper: hi };
        let m = LogisticRegressionModel::new(vec![1.0], 0.0).unwrap();
        assert_eq!(logodds_range(&m, &[col(0.0, 1.0)], 1e-6).unwrap(), Interval { lo: 0.0, hi: 1.0 });
        let m = LogisticRegressionModel::new(vec![-2.0], 1.0).unwrap();
        assert_eq!(logodds_range(&m, &[col(0.0, 3.0)], 1e-6).unwrap(), Interval { lo: -5.0, hi: 1.0 });
        let m = LogisticRegressionModel::new(vec![0.0, 2.0], 1.0).unwrap();
        let r = logodds_range(&m, &[col(0.0, 3.0), BoundFeature::Fixed(0.5)], 1e-6).unwrap();
        assert_eq!(r, Interval { lo: 2.0 - 1e-6, hi: 2.0 + 1e-6 });
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
        assert_eq!(Interval::new(-1.0, 2.0).unwrap().scale(-2.0), Interval { lo: -4.0, hi: 2.0 });
        assert_eq!(Interval::new(-3.0, 2.0).unwrap().magnitude(), 3.0);
    }
}
