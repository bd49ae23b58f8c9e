use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::predictors::{Family, LogisticRegressionModel, Predictor};

/// Largest scholarship a single student can be offered, in dollars.
pub const MAX_SCHOLARSHIP: f64 = 25_000.0;

/// Log-odds of enrolling: `INTERCEPT + SAT * sat + GPA * gpa + SCHOLARSHIP * dollars`.
pub mod ground_truth {
    pub const INTERCEPT: f64 = 1.5;
    pub const SAT: f64 = -0.8;
    pub const GPA: f64 = -0.5;
    pub const SCHOLARSHIP: f64 = 1e-4;
}

pub const FEATURES: [&str; 3] = ["sat", "gpa", "scholarship"];

pub fn feature_names() -> Vec<String> {
    FEATURES.iter().map(|s| s.to_string()).collect()
}

/// An admitted student. `sat` and `gpa` are z-scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudentRecord {
    pub sat: f64,
    pub gpa: f64,
    pub scholarship: f64,
    pub enroll_prob: f64,
}

/// The logistic model that generates enrollment decisions.
pub fn ground_truth_predictor() -> Predictor {
    use ground_truth::*;
    let model = LogisticRegressionModel::new(vec![SAT, GPA, SCHOLARSHIP], INTERCEPT).expect("finite constants");
    Predictor::new("ground_truth", Family::Logistic(model), feature_names()).expect("three features")
}

fn draw(rng: &mut ChaCha8Rng, truth: &Predictor, scholarship: f64) -> StudentRecord {
    let sat = rng.sample(StandardNormal);
    let gpa = rng.sample(StandardNormal);
    let enroll_prob = truth.predict(&[sat, gpa, scholarship]).expect("three features");
    StudentRecord { sat, gpa, scholarship, enroll_prob }
}

/// `n` admitted students with no scholarship yet; `enroll_prob` is the
/// ground-truth probability at zero aid.
pub fn generate_students(n: usize, seed: u64) -> (Vec<StudentRecord>, Predictor) {
    let truth = ground_truth_predictor();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let students = (0..n).map(|_| draw(&mut rng, &truth, 0.0)).collect();
    (students, truth)
}

/// Historical records with scholarships uniform on `[0, 25000]` and sampled
/// enrollment outcomes.
pub fn generate_training_set(n: usize, seed: u64) -> Vec<(StudentRecord, bool)> {
    let truth = ground_truth_predictor();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    (0..n)
        .map(|_| {
            let x = rng.gen_range(0.0..=MAX_SCHOLARSHIP);
            let s = draw(&mut rng, &truth, x);
            let enrolled = rng.gen_bool(s.enroll_prob);
            (s, enrolled)
        })
        .collect()
}
