//! Small in-repo fitters for the benchmark predictors. Scholarships enter the
//! fits in units of $10,000 and the coefficients are rescaled back to dollars.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::data::{feature_names, StudentRecord};
use crate::predictors::{
    sigmoid, Family, Layer, LinearRegressionModel, LogisticRegressionModel, NeuralNetworkModel, Predictor,
};

const DOLLAR_SCALE: f64 = 1e4;

fn inputs(s: &StudentRecord) -> [f64; 3] {
    [s.sat, s.gpa, s.scholarship / DOLLAR_SCALE]
}

fn unscale(mut w: Vec<f64>) -> Vec<f64> {
    w[2] /= DOLLAR_SCALE;
    w
}

/// Solves the symmetric positive definite system `a x = b` in place.
fn solve_spd(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> [f64; 4] {
    for k in 0..4 {
        let p = a[k][k];
        for i in k + 1..4 {
            let f = a[i][k] / p;
            for j in k..4 {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = [0.0; 4];
    for k in (0..4).rev() {
        let s: f64 = (k + 1..4).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x
}

fn design(s: &StudentRecord) -> [f64; 4] {
    let [a, b, c] = inputs(s);
    [1.0, a, b, c]
}

/// Ordinary least squares of the 0/1 outcome on (sat, gpa, scholarship).
pub fn fit_linear(data: &[(StudentRecord, bool)]) -> Predictor {
    let mut xtx = [[0.0; 4]; 4];
    let mut xty = [0.0; 4];
    for (s, y) in data {
        let f = design(s);
        let y = if *y { 1.0 } else { 0.0 };
        for i in 0..4 {
            xty[i] += f[i] * y;
            for j in 0..4 {
                xtx[i][j] += f[i] * f[j];
            }
        }
    }
    let beta = solve_spd(xtx, xty);
    let model = LinearRegressionModel::new(unscale(beta[1..].to_vec()), beta[0]).expect("finite fit");
    Predictor::new("linreg", Family::Linear(model), feature_names()).expect("three features")
}

/// Maximum-likelihood logistic regression by Newton's method.
pub fn fit_logistic(data: &[(StudentRecord, bool)]) -> Predictor {
    let mut beta = [0.0; 4];
    for _ in 0..50 {
        let mut hess = [[0.0; 4]; 4];
        let mut grad = [0.0; 4];
        for (s, y) in data {
            let f = design(s);
            let p = sigmoid((0..4).map(|i| beta[i] * f[i]).sum());
            let r = if *y { 1.0 } else { 0.0 } - p;
            let w = p * (1.0 - p);
            for i in 0..4 {
                grad[i] += r * f[i];
                for j in 0..4 {
                    hess[i][j] += w * f[i] * f[j];
                }
            }
        }
        for (i, row) in hess.iter_mut().enumerate() {
            row[i] += 1e-9;
        }
        let step = solve_spd(hess, grad);
        for i in 0..4 {
            beta[i] += step[i];
        }
        if step.iter().all(|d| d.abs() < 1e-12) {
            break;
        }
    }
    let model = LogisticRegressionModel::new(unscale(beta[1..].to_vec()), beta[0]).expect("finite fit");
    Predictor::new("logreg", Family::Logistic(model), feature_names()).expect("three features")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkTraining {
    pub hidden_layers: usize,
    pub width: usize,
    pub epochs: usize,
    pub batch: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for NetworkTraining {
    fn default() -> Self {
        Self { hidden_layers: 1, width: 10, epochs: 20, batch: 64, learning_rate: 3e-3, seed: 0 }
    }
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        let (b1, b2) = (0.9f64, 0.999f64);
        self.t += 1;
        let c1 = 1.0 - b1.powi(self.t);
        let c2 = 1.0 - b2.powi(self.t);
        for k in 0..params.len() {
            self.m[k] = b1 * self.m[k] + (1.0 - b1) * grad[k];
            self.v[k] = b2 * self.v[k] + (1.0 - b2) * grad[k] * grad[k];
            params[k] -= lr * (self.m[k] / c1) / ((self.v[k] / c2).sqrt() + 1e-8);
        }
    }
}

/// ReLU network with an affine output trained on squared error by
/// mini-batch Adam.
pub fn fit_network(data: &[(StudentRecord, bool)], cfg: &NetworkTraining) -> Predictor {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sizes = vec![3];
    sizes.extend(std::iter::repeat(cfg.width).take(cfg.hidden_layers));
    sizes.push(1);
    let depth = sizes.len() - 1;

    // flat parameter vector: per layer, weights row-major then biases
    let mut offsets = Vec::with_capacity(depth);
    let mut total = 0;
    for l in 0..depth {
        offsets.push(total);
        total += sizes[l + 1] * sizes[l] + sizes[l + 1];
    }
    let mut params = vec![0.0; total];
    for l in 0..depth {
        let init = Normal::new(0.0, (2.0 / sizes[l] as f64).sqrt()).expect("positive sd");
        for w in &mut params[offsets[l]..offsets[l] + sizes[l + 1] * sizes[l]] {
            *w = init.sample(&mut rng);
        }
    }
    let mut adam = Adam { m: vec![0.0; total], v: vec![0.0; total], t: 0 };
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut grad = vec![0.0; total];
    let mut acts: Vec<Vec<f64>> = sizes.iter().map(|&n| vec![0.0; n]).collect();
    let mut delta: Vec<Vec<f64>> = sizes.iter().map(|&n| vec![0.0; n]).collect();

    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(cfg.batch) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            for &k in batch {
                let (s, y) = &data[k];
                acts[0].copy_from_slice(&inputs(s));
                for l in 0..depth {
                    let (w, b) = params[offsets[l]..].split_at(sizes[l + 1] * sizes[l]);
                    for o in 0..sizes[l + 1] {
                        let z = b[o] + (0..sizes[l]).map(|i| w[o * sizes[l] + i] * acts[l][i]).sum::<f64>();
                        acts[l + 1][o] = if l + 1 < depth { z.max(0.0) } else { z };
                    }
                }
                let target = if *y { 1.0 } else { 0.0 };
                delta[depth][0] = 2.0 * (acts[depth][0] - target) / batch.len() as f64;
                for l in (0..depth).rev() {
                    let (n_in, n_out) = (sizes[l], sizes[l + 1]);
                    for i in 0..n_in {
                        delta[l][i] = 0.0;
                    }
                    for o in 0..n_out {
                        let d = delta[l + 1][o];
                        if d == 0.0 {
                            continue;
                        }
                        for i in 0..n_in {
                            grad[offsets[l] + o * n_in + i] += d * acts[l][i];
                            delta[l][i] += d * params[offsets[l] + o * n_in + i];
                        }
                        grad[offsets[l] + n_out * n_in + o] += d;
                    }
                    if l > 0 {
                        for i in 0..n_in {
                            if acts[l][i] <= 0.0 {
                                delta[l][i] = 0.0;
                            }
                        }
                    }
                }
            }
            adam.step(&mut params, &grad, cfg.learning_rate);
        }
    }

    let layers = (0..depth)
        .map(|l| {
            let (n_in, n_out) = (sizes[l], sizes[l + 1]);
            let base = offsets[l];
            let weights = (0..n_out)
                .map(|o| {
                    let mut row = params[base + o * n_in..base + (o + 1) * n_in].to_vec();
                    if l == 0 {
                        row[2] /= DOLLAR_SCALE;
                    }
                    row
                })
                .collect();
            let biases = params[base + n_out * n_in..base + n_out * n_in + n_out].to_vec();
            Layer { weights, biases }
        })
        .collect();
    let model = NeuralNetworkModel::new(layers).expect("consistent layer sizes");
    let id = format!("nn{}", cfg.hidden_layers);
    Predictor::new(id, Family::Network(model), feature_names()).expect("three features")
}
