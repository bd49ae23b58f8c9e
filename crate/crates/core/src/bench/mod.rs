//! Scholarship allocation study: synthetic students, benchmark predictors,
//! a greedy baseline and the runtime / approximation-quality sweep.

mod data;
mod enroll;
mod fit;

use std::collections::HashMap;
use std::fmt::Write;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

pub use data::{
    feature_names, generate_students, generate_training_set, ground_truth, ground_truth_predictor, StudentRecord,
    FEATURES, MAX_SCHOLARSHIP,
};
pub use enroll::{
    build_enrollment_model, default_budget, evaluate_allocation, heuristic_allocate, pct_reduction_declination,
};
pub use fit::{fit_linear, fit_logistic, fit_network, NetworkTraining};

use crate::error::{Error, Result};
use crate::predictors::Predictor;
use crate::solver::{solve_milp_with, SearchHooks, SolveOptions};
use crate::transcribe::{transcribe_model, TranscribeOptions};

/// Predictor family and its encoding parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchFamily {
    LinReg,
    LogReg { intervals: usize },
    Nn { hidden: usize },
}

impl BenchFamily {
    pub fn name(&self) -> &'static str {
        match self {
            BenchFamily::LinReg => "LinReg",
            BenchFamily::LogReg { .. } => "LogReg",
            BenchFamily::Nn { .. } => "NN",
        }
    }

    pub fn params(&self) -> String {
        match self {
            BenchFamily::LinReg => "-".into(),
            BenchFamily::LogReg { intervals } => format!("delta={intervals}"),
            BenchFamily::Nn { hidden } => format!("h={hidden}"),
        }
    }

    /// Parses `linreg`, `logreg:<intervals>` or `nn:<hidden layers>`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 0, msg: format!("bad family `{s}` (linreg, logreg:K, nn:H)") };
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a.parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        match (name.to_ascii_lowercase().as_str(), arg) {
            ("linreg", None) => Ok(BenchFamily::LinReg),
            ("logreg", Some(k)) if k >= 1 => Ok(BenchFamily::LogReg { intervals: k }),
            ("logreg", None) => Ok(BenchFamily::LogReg { intervals: 10 }),
            ("nn", Some(h)) if h >= 1 => Ok(BenchFamily::Nn { hidden: h }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub families: Vec<BenchFamily>,
    pub sizes: Vec<usize>,
    pub trials: usize,
    /// Trial `t` uses students generated from `seed + t`; predictors are
    /// trained once on records derived from `seed`.
    pub seed: u64,
    pub training_size: usize,
    pub solve: SolveOptions,
    /// Encoding options; `intervals` is taken from each `LogReg` family.
    pub encoding: TranscribeOptions,
    /// Run trials on the rayon pool. Rows are reported in the same order.
    pub parallel: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            families: vec![BenchFamily::LinReg, BenchFamily::LogReg { intervals: 10 }],
            sizes: vec![50, 100],
            trials: 5,
            seed: 0,
            training_size: 20_000,
            solve: SolveOptions { time_limit: Some(std::time::Duration::from_secs(300)), ..Default::default() },
            encoding: TranscribeOptions::default(),
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkResult {
    pub family: BenchFamily,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub status: String,
    pub time_s: f64,
    /// Objective value of the MILP incumbent; NaN without one.
    pub milp_objective: f64,
    /// Expected enrollment of the optimized allocation under the exact predictor.
    pub exact_objective: f64,
    pub heuristic_objective: f64,
    pub pct_reduction_declination: f64,
    /// RMSE between the MILP's `y_i` and the exact predictor at the optimum.
    pub rmse_probability: f64,
    pub allocation: Vec<f64>,
}

/// Predictors for each distinct family, fit on one shared training set.
pub fn train_predictors(families: &[BenchFamily], training_size: usize, seed: u64) -> HashMap<BenchFamily, Arc<Predictor>> {
    let training = generate_training_set(training_size, seed);
    let mut out = HashMap::new();
    let mut logistic: Option<Arc<Predictor>> = None;
    for &f in families {
        if out.contains_key(&f) {
            continue;
        }
        let p = match f {
            BenchFamily::LinReg => Arc::new(fit_linear(&training)),
            BenchFamily::LogReg { .. } => logistic.get_or_insert_with(|| Arc::new(fit_logistic(&training))).clone(),
            BenchFamily::Nn { hidden } => {
                let cfg = NetworkTraining { hidden_layers: hidden, seed, ..Default::default() };
                Arc::new(fit_network(&training, &cfg))
            }
        };
        out.insert(f, p);
    }
    out
}

/// Solves one instance and compares against the greedy baseline. The greedy
/// allocation, completed to a MILP point, is the first incumbent; node LP
/// allocations are completed the same way during the search.
pub fn run_trial(
    family: BenchFamily,
    predictor: &Arc<Predictor>,
    n: usize,
    trial: usize,
    seed: u64,
    solve: &SolveOptions,
    encoding: &TranscribeOptions,
) -> Result<BenchmarkResult> {
    let (students, _) = generate_students(n, seed);
    let budget = default_budget(n);
    let start = Instant::now();
    let model = build_enrollment_model(&students, predictor, budget)?;
    let intervals = match family {
        BenchFamily::LogReg { intervals } => intervals,
        _ => encoding.intervals,
    };
    let options = TranscribeOptions { intervals, ..encoding.clone() };
    let tr = transcribe_model(&model, &options)?;
    let greedy = heuristic_allocate(&students, predictor, budget)?;
    let seed_point = tr.complete(&model, &greedy, &options);
    let primal = |x: &[f64]| tr.complete(&model, &tr.regular_values(x), &options);
    let hooks = SearchHooks { start: seed_point.as_deref(), primal: Some(&primal), primal_every: 20 };
    let sol = solve_milp_with(&tr.milp, solve, &hooks);
    let time_s = start.elapsed().as_secs_f64();

    let heuristic = evaluate_allocation(&students, &greedy, predictor)?;
    let (allocation, exact, rmse) = if sol.status.has_solution() {
        let alloc = tr.regular_values(&sol.values);
        let exact = evaluate_allocation(&students, &alloc, predictor)?;
        let approx = tr.predicted_values(&sol.values);
        let truth = model.predict_all(&alloc)?;
        let mse = approx.iter().zip(&truth).map(|(a, t)| (a - t) * (a - t)).sum::<f64>() / n as f64;
        (alloc, exact, mse.sqrt())
    } else {
        (Vec::new(), f64::NAN, f64::NAN)
    };
    Ok(BenchmarkResult {
        family,
        n,
        trial,
        seed,
        status: sol.status.as_str().to_string(),
        time_s,
        milp_objective: sol.objective,
        exact_objective: exact,
        heuristic_objective: heuristic,
        pct_reduction_declination: pct_reduction_declination(n, exact, heuristic),
        rmse_probability: rmse,
        allocation,
    })
}

/// Runs every (family, N, trial) combination, ordered by that key.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<Vec<BenchmarkResult>> {
    let predictors = train_predictors(&config.families, config.training_size, config.seed);
    let mut jobs = Vec::new();
    for &f in &config.families {
        for &n in &config.sizes {
            for t in 0..config.trials {
                jobs.push((f, n, t));
            }
        }
    }
    let run = |&(f, n, t): &(BenchFamily, usize, usize)| {
        run_trial(f, &predictors[&f], n, t, config.seed.wrapping_add(t as u64), &config.solve, &config.encoding)
    };
    if config.parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    }
}

pub const CSV_HEADER: &str = "family,params,N,trial,seed,status,time_s,milp_objective,exact_objective,heuristic_objective,pct_reduction_declination,rmse_probability";

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else {
        String::new()
    }
}

/// Per-trial rows followed by one `mean` row per (family, N); means skip
/// trials without a solution.
pub fn to_csv(results: &[BenchmarkResult]) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in results {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.family.name(),
            r.family.params(),
            r.n,
            r.trial,
            r.seed,
            r.status,
            num(r.time_s),
            num(r.milp_objective),
            num(r.exact_objective),
            num(r.heuristic_objective),
            num(r.pct_reduction_declination),
            num(r.rmse_probability)
        )
        .unwrap();
    }
    let mut groups: Vec<(BenchFamily, usize)> = results.iter().map(|r| (r.family, r.n)).collect();
    groups.dedup();
    for (f, n) in groups {
        let rows: Vec<&BenchmarkResult> = results.iter().filter(|r| r.family == f && r.n == n).collect();
        let mean = |get: fn(&BenchmarkResult) -> f64| {
            let vals: Vec<f64> = rows.iter().map(|r| get(r)).filter(|v| v.is_finite()).collect();
            if vals.is_empty() {
                f64::NAN
            } else {
                vals.iter().sum::<f64>() / vals.len() as f64
            }
        };
        let solved = rows.iter().filter(|r| r.status == "optimal").count();
        writeln!(
            out,
            "{},{},{},mean,,optimal={}/{},{},{},{},{},{},{}",
            f.name(),
            f.params(),
            n,
            solved,
            rows.len(),
            num(mean(|r| r.time_s)),
            num(mean(|r| r.milp_objective)),
            num(mean(|r| r.exact_objective)),
            num(mean(|r| r.heuristic_objective)),
            num(mean(|r| r.pct_reduction_declination)),
            num(mean(|r| r.rmse_probability))
        )
        .unwrap();
    }
    out
}

/// The CSV with the `time_s` column blanked, for comparing runs.
pub fn strip_times(csv: &str) -> String {
    csv.lines()
        .map(|line| {
            let mut cells: Vec<&str> = line.split(',').collect();
            if cells.len() > 6 && cells[6] != "time_s" {
                cells[6] = "";
            }
            cells.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
