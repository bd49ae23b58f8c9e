use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use predopt::bench::{
    build_enrollment_model, default_budget, generate_students, run_benchmark, to_csv, train_predictors,
    BenchmarkConfig, BenchFamily,
};
use predopt::export::{export_lp_format, export_mps, read_solution, write_solution};
use predopt::model::OptimizationModel;
use predopt::predictors::{self, Predictor};
use predopt::solver::{solve_milp, SolveOptions};
use predopt::transcribe::{transcribe_model, TranscribeOptions};

#[derive(Parser)]
#[command(name = "predopt", version, about = "Optimize over pre-trained predictive models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transcribe and solve a model; writes a solution document.
    Solve {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        predictors: PathBuf,
        /// Intervals in the piecewise-linear sigmoid.
        #[arg(long, default_value_t = 10)]
        delta: usize,
        /// Relative optimality gap.
        #[arg(long, default_value_t = 1e-6)]
        gap: f64,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Include auxiliary MILP columns in the solution.
        #[arg(long)]
        auxiliary: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the transcribed MILP as MPS or LP text.
    Export {
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        predictors: PathBuf,
        #[arg(long, default_value_t = 10)]
        delta: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scholarship allocation sweep; writes CSV.
    Benchmark {
        /// Comma-separated: linreg, logreg:K, nn:H
        #[arg(long, value_delimiter = ',', default_value = "linreg,logreg:10")]
        families: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "50,100")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20_000)]
        training_size: usize,
        /// Per-trial limit in seconds.
        #[arg(long, default_value_t = 300.0)]
        time_limit: f64,
        /// Asymmetric big-M constants for network encodings.
        #[arg(long)]
        split_big_m: bool,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a solution document against a model.
    Evaluate {
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        predictors: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Write a synthetic scholarship allocation model and its fitted predictor.
    Generate {
        #[arg(long, default_value_t = 50)]
        students: usize,
        #[arg(long, default_value = "logreg:10")]
        family: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20_000)]
        training_size: usize,
        #[arg(long)]
        model_out: PathBuf,
        #[arg(long)]
        predictors_out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Mps,
    Lp,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn load_predictors(path: &Path) -> Result<Vec<Arc<Predictor>>> {
    let all = predictors::load_predictors(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(all.into_iter().map(Arc::new).collect())
}

fn load_model(model: &Path, predictors: &Path) -> Result<OptimizationModel> {
    let predictors = load_predictors(predictors)?;
    let model = OptimizationModel::from_json(&read(model)?, &predictors)
        .with_context(|| format!("loading {}", model.display()))?;
    Ok(model)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Solve { model, predictors, delta, gap, time_limit, auxiliary, out } => {
            let model = load_model(&model, &predictors)?;
            let tr = transcribe_model(&model, &TranscribeOptions { intervals: delta, ..Default::default() })?;
            let options = SolveOptions { gap, time_limit: time_limit.map(Duration::from_secs_f64), ..Default::default() };
            let sol = solve_milp(&tr.milp, &options);
            eprintln!(
                "{}: objective {} bound {} gap {:.3e} ({} nodes, {:.2}s)",
                sol.status.as_str(),
                sol.objective,
                sol.best_bound,
                sol.gap,
                sol.nodes,
                sol.wall_time.as_secs_f64()
            );
            let doc = write_solution(&model, &tr, &sol, auxiliary);
            emit(out.as_deref(), &(serde_json::to_string_pretty(&doc)? + "\n"))
        }
        Command::Export { format, model, predictors, delta, out } => {
            let model = load_model(&model, &predictors)?;
            let tr = transcribe_model(&model, &TranscribeOptions { intervals: delta, ..Default::default() })?;
            let text = match format {
                Format::Mps => export_mps(&tr.milp),
                Format::Lp => export_lp_format(&tr.milp),
            };
            emit(out.as_deref(), &text)
        }
        Command::Benchmark {
            families,
            sizes,
            trials,
            seed,
            training_size,
            time_limit,
            split_big_m,
            parallel,
            out,
        } => {
            let families = families.iter().map(|f| BenchFamily::parse(f)).collect::<predopt::Result<Vec<_>>>()?;
            let config = BenchmarkConfig {
                families,
                sizes,
                trials,
                seed,
                training_size,
                solve: SolveOptions { time_limit: Some(Duration::from_secs_f64(time_limit)), ..Default::default() },
                encoding: TranscribeOptions { split_big_m, ..Default::default() },
                parallel,
            };
            let results = run_benchmark(&config)?;
            emit(out.as_deref(), &to_csv(&results))
        }
        Command::Evaluate { solution, model, predictors, tol } => {
            let model = load_model(&model, &predictors)?;
            let doc = read_solution(&read(&solution)?)?;
            let Some(recorded) = doc.values.as_ref() else {
                println!("status {}: no values to check", doc.status);
                return Ok(());
            };
            let x = doc.regular_values(&model)?;
            let violations = model.violations(&x, tol);
            let exact = model.exact_objective(&x)?;
            let predicted = model.predict_all(&x)?;
            let worst = model
                .predicted()
                .iter()
                .zip(&predicted)
                .filter_map(|(v, p)| recorded.get(&v.name).map(|r| (r - p).abs()))
                .fold(0.0, f64::max);
            println!("status {}", doc.status);
            if let Some(obj) = doc.objective {
                println!("recorded objective {obj}");
            }
            println!("exact objective {exact}");
            println!("max |recorded - exact prediction| {worst:.3e}");
            for v in &violations {
                println!("violation: {v}");
            }
            if !violations.is_empty() {
                bail!("{} violated constraint(s)", violations.len());
            }
            println!("feasible");
            Ok(())
        }
        Command::Generate { students, family, seed, training_size, model_out, predictors_out } => {
            let family = BenchFamily::parse(&family)?;
            let predictor = train_predictors(&[family], training_size, seed).remove(&family).expect("trained");
            let (records, _) = generate_students(students, seed);
            let model = build_enrollment_model(&records, &predictor, default_budget(students))?;
            fs::write(&model_out, model.to_json() + "\n")?;
            fs::write(&predictors_out, predictors::save_predictors(&[(*predictor).clone()]) + "\n")?;
            Ok(())
        }
    }
}
