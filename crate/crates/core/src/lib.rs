//! Optimization models whose objective terms are predicted by pre-trained
//! linear regression, logistic regression or ReLU network models.
//!
//! Models are compiled into mixed-integer linear programs and solved by the
//! built-in simplex / branch-and-bound engine, or exported as MPS / LP text.

pub mod bench;
pub mod error;
pub mod export;
pub mod milp;
pub mod model;
pub mod predictors;
pub mod solver;
pub mod transcribe;

pub use error::{Error, Result};
