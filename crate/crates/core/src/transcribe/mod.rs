//! Compilation of an [`OptimizationModel`] into a flat [`Milp`].
//!
//! User variables and constraints are copied verbatim. Every predicted
//! variable gets its own block of auxiliary columns and rows, built by the
//! transcriber of its predictor family. Blocks only touch each other through
//! user columns, so they are built in parallel and merged in predicted
//! variable order.

mod bounds;
mod complete;
mod linear;
mod logistic;
mod network;

use rayon::prelude::*;

pub use bounds::{logodds_range, propagate_bounds_nn, Interval, NetworkBounds};
pub use linear::transcribe_linreg;
pub use logistic::{logistic_error_bound, transcribe_logreg, v_delta};
pub use network::transcribe_nn;

use crate::error::Result;
use crate::milp::{ColId, Column, ColumnKind, ColumnTag, Milp, Row, RowFamily, RowTag};
use crate::model::{Domain, FeatureBinding, OptimizationModel, PredictedId, Sense, VarRef};
use crate::predictors::Family;

#[derive(Debug, Clone, PartialEq)]
pub struct TranscribeOptions {
    /// Number of uniform log-odds intervals for logistic predictors.
    pub intervals: usize,
    /// Absolute slack added to every propagated big-M constant.
    pub big_m_margin: f64,
    /// Half-width used to pad a zero-width log-odds range.
    pub degenerate_pad: f64,
    /// Add the aggregated interval rows (`log-odds` between `sum L z` and
    /// `sum U z`, `y = sum V z`). They admit exactly the same integer points
    /// as the per-interval rows and give a much tighter LP relaxation.
    pub logistic_hull_rows: bool,
    /// Use `max(hi, 0)` on the active side and `max(-lo, 0)` on the inactive
    /// side of each ReLU instead of one `max |G|` constant.
    pub split_big_m: bool,
}

impl Default for TranscribeOptions {
    fn default() -> Self {
        Self { intervals: 10, big_m_margin: 1e-4, degenerate_pad: 1e-6, logistic_hull_rows: true, split_big_m: false }
    }
}

/// A predictor input after binding: a constant or a bounded MILP column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundFeature {
    Fixed(f64),
    Column { col: ColId, lower: f64, upper: f64 },
}

impl BoundFeature {
    pub fn interval(&self) -> Interval {
        match *self {
            BoundFeature::Fixed(v) => Interval::point(v),
            BoundFeature::Column { lower, upper, .. } => Interval { lo: lower, hi: upper },
        }
    }
}

/// Column reference inside a block: a user column of the host MILP or a
/// column owned by the block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColRef {
    Host(ColId),
    Local(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockRow {
    pub terms: Vec<(ColRef, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    pub family: RowFamily,
}

/// Auxiliary columns and rows encoding one predicted variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub var: PredictedId,
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<BlockRow>,
}

impl Block {
    pub fn new(var: PredictedId, name: impl Into<String>) -> Self {
        Self { var, name: name.into(), columns: Vec::new(), rows: Vec::new() }
    }

    pub(crate) fn column(&mut self, suffix: &str, lower: f64, upper: f64, kind: ColumnKind, tag: ColumnTag) -> ColRef {
        let name = if suffix.is_empty() { self.name.clone() } else { format!("{}_{suffix}", self.name) };
        self.columns.push(Column { name, lower, upper, kind, tag });
        ColRef::Local(self.columns.len() - 1)
    }

    pub(crate) fn row(&mut self, terms: Vec<(ColRef, f64)>, sense: Sense, rhs: f64, family: RowFamily) {
        let terms = terms.into_iter().filter(|(_, a)| *a != 0.0).collect();
        self.rows.push(BlockRow { terms, sense, rhs, family });
    }

    pub fn rows_of(&self, family: RowFamily) -> usize {
        self.rows.iter().filter(|r| r.family == family).count()
    }

    pub fn count_columns(&self, pred: impl Fn(&ColumnTag) -> bool) -> usize {
        self.columns.iter().filter(|c| pred(&c.tag)).count()
    }
}

impl Milp {
    /// Appends `block`, returning the host id of each local column.
    pub fn append_block(&mut self, block: Block) -> Vec<ColId> {
        let base = self.columns.len();
        let ids: Vec<ColId> = (0..block.columns.len()).map(|i| ColId(base + i)).collect();
        self.columns.extend(block.columns);
        for (k, row) in block.rows.into_iter().enumerate() {
            let terms = row
                .terms
                .into_iter()
                .map(|(c, a)| match c {
                    ColRef::Host(id) => (id, a),
                    ColRef::Local(i) => (ids[i], a),
                })
                .collect();
            self.rows.push(Row {
                name: format!("{}_r{k}", block.name),
                terms,
                sense: row.sense,
                rhs: row.rhs,
                tag: RowTag::Block { var: block.var, family: row.family },
            });
        }
        ids
    }
}

/// A transcribed model plus the column of every model variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcription {
    pub milp: Milp,
    pub regular_columns: Vec<ColId>,
    pub predicted_columns: Vec<ColId>,
}

impl Transcription {
    pub fn column_of(&self, var: VarRef) -> ColId {
        match var {
            VarRef::Regular(id) => self.regular_columns[id.0],
            VarRef::Predicted(id) => self.predicted_columns[id.0],
        }
    }

    pub fn regular_values(&self, values: &[f64]) -> Vec<f64> {
        self.regular_columns.iter().map(|c| values[c.0]).collect()
    }

    pub fn predicted_values(&self, values: &[f64]) -> Vec<f64> {
        self.predicted_columns.iter().map(|c| values[c.0]).collect()
    }
}

/// The inputs of predicted variable `id` as constants or bounded user columns.
pub fn bound_features(model: &OptimizationModel, id: PredictedId, user_columns: &[ColId]) -> Vec<BoundFeature> {
    model.predicted()[id.0]
        .bindings
        .iter()
        .map(|b| match *b {
            FeatureBinding::Fixed(v) => BoundFeature::Fixed(v),
            FeatureBinding::Variable(r) => {
                let reg = &model.regular()[r.0];
                BoundFeature::Column { col: user_columns[r.0], lower: reg.lower, upper: reg.upper }
            }
        })
        .collect()
}

/// Builds the block for predicted variable `id`; `y` is the block's output column.
pub fn transcribe_predicted(
    model: &OptimizationModel,
    id: PredictedId,
    user_columns: &[ColId],
    options: &TranscribeOptions,
) -> Result<(Block, ColRef)> {
    let var = &model.predicted()[id.0];
    let features = bound_features(model, id, user_columns);
    let mut block = Block::new(id, var.name.clone());
    let y = match model.predictor_of(id).family() {
        Family::Linear(m) => transcribe_linreg(&mut block, m, &features)?,
        Family::Logistic(m) => transcribe_logreg(&mut block, m, &features, options)?,
        Family::Network(m) => transcribe_nn(&mut block, m, &features, options)?,
    };
    Ok((block, y))
}

pub fn transcribe_model(model: &OptimizationModel, options: &TranscribeOptions) -> Result<Transcription> {
    let mut milp = Milp::new("model");
    let regular_columns: Vec<ColId> = model
        .regular()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let kind = match v.domain {
                Domain::Continuous => ColumnKind::Continuous,
                Domain::Integer => ColumnKind::Integer,
                Domain::Binary => ColumnKind::Binary,
            };
            milp.push_column(Column {
                name: v.name.clone(),
                lower: v.lower,
                upper: v.upper,
                kind,
                tag: ColumnTag::User(crate::model::RegularId(i)),
            })
        })
        .collect();
    for (i, c) in model.constraints().iter().enumerate() {
        milp.rows.push(Row {
            name: format!("c{i}"),
            terms: c.terms.iter().map(|&(r, a)| (regular_columns[r.0], a)).collect(),
            sense: c.sense,
            rhs: c.rhs,
            tag: RowTag::User(i),
        });
    }

    let blocks = (0..model.predicted().len())
        .into_par_iter()
        .map(|k| transcribe_predicted(model, PredictedId(k), &regular_columns, options))
        .collect::<Result<Vec<_>>>()?;
    let mut predicted_columns = Vec::with_capacity(blocks.len());
    for (block, y) in blocks {
        let ids = milp.append_block(block);
        predicted_columns.push(match y {
            ColRef::Host(c) => c,
            ColRef::Local(i) => ids[i],
        });
    }

    let terms = model
        .objective()
        .terms
        .iter()
        .map(|&(var, a)| {
            let col = match var {
                VarRef::Regular(r) => regular_columns[r.0],
                VarRef::Predicted(p) => predicted_columns[p.0],
            };
            (col, a)
        })
        .collect();
    milp.set_objective(model.objective().sense, terms);
    Ok(Transcription { milp, regular_columns, predicted_columns })
}
