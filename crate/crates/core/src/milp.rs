//! Flat mixed-integer linear programs.

use crate::model::{ObjectiveSense, PredictedId, RegularId, Sense};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Continuous,
    Binary,
    Integer,
}

impl ColumnKind {
    pub fn is_discrete(self) -> bool {
        self != ColumnKind::Continuous
    }
}

/// What a column stands for in the source model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnTag {
    User(RegularId),
    NeuronPre { var: PredictedId, layer: usize, node: usize },
    NeuronPost { var: PredictedId, layer: usize, node: usize },
    ReluIndicator { var: PredictedId, layer: usize, node: usize },
    IntervalIndicator { var: PredictedId, interval: usize },
    PredictedOutput(PredictedId),
    /// Columns built directly through the [`Milp`] API.
    Free,
}

/// Which constraint family a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowFamily {
    User,
    /// `G_v` equals the bound feature, input layer.
    InputLink,
    /// `F_v = G_v` on input and output layers.
    PassThrough,
    /// `G_v` equals the affine image of the previous layer.
    Affine,
    /// `-M(1 - z) <= G <= M z`
    ReluPreActivation,
    /// `G - M(1 - z) <= F <= G + M(1 - z)`
    ReluPostActivation,
    /// `F <= M z`
    ReluCap,
    /// `y = F_t`
    OutputLink,
    /// `sum z = 1`
    IntervalChoice,
    /// `(L_d - L_1) z_d + L_1 <= log-odds`
    IntervalLower,
    /// `(U_d - U_D) z_d + U_D >= log-odds`
    IntervalUpper,
    /// `sigmoid(L_1) + (V_d - sigmoid(L_1)) z_d <= y`
    ValueLower,
    /// `sigmoid(U_D) + (V_d - sigmoid(U_D)) z_d >= y`
    ValueUpper,
    /// `log-odds >= sum L_d z_d`
    HullLower,
    /// `log-odds <= sum U_d z_d`
    HullUpper,
    /// `y = sum V_d z_d`
    HullValue,
    /// `y` equals the linear regression prediction.
    Regression,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowTag {
    User(usize),
    Block { var: PredictedId, family: RowFamily },
    Free,
}

impl RowTag {
    pub fn family(&self) -> RowFamily {
        match self {
            RowTag::Block { family, .. } => *family,
            _ => RowFamily::User,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub kind: ColumnKind,
    pub tag: ColumnTag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(ColId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    pub tag: RowTag,
}

impl Row {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|(c, a)| a * values[c.0]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpObjective {
    pub sense: ObjectiveSense,
    pub terms: Vec<(ColId, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Milp {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
    pub objective: MilpObjective,
}

impl Default for Milp {
    fn default() -> Self {
        Self::new("model")
    }
}

impl Milp {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            columns: Vec::new(),
            rows: Vec::new(),
            objective: MilpObjective { sense: ObjectiveSense::Maximize, terms: Vec::new() },
        }
    }

    pub fn add_column(&mut self, name: impl Into<String>, lower: f64, upper: f64, kind: ColumnKind) -> ColId {
        self.push_column(Column { name: name.into(), lower, upper, kind, tag: ColumnTag::Free })
    }

    pub fn push_column(&mut self, column: Column) -> ColId {
        self.columns.push(column);
        ColId(self.columns.len() - 1)
    }

    pub fn add_row(&mut self, terms: Vec<(ColId, f64)>, sense: Sense, rhs: f64) -> usize {
        let name = format!("r{}", self.rows.len());
        self.rows.push(Row { name, terms, sense, rhs, tag: RowTag::Free });
        self.rows.len() - 1
    }

    pub fn set_objective(&mut self, sense: ObjectiveSense, terms: Vec<(ColId, f64)>) {
        self.objective = MilpObjective { sense, terms };
    }

    pub fn num_discrete(&self) -> usize {
        self.columns.iter().filter(|c| c.kind.is_discrete()).count()
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.terms.iter().map(|(c, a)| a * values[c.0]).sum()
    }

    /// A copy with every discrete column made continuous.
    pub fn relaxed(&self) -> Milp {
        let mut lp = self.clone();
        for c in &mut lp.columns {
            c.kind = ColumnKind::Continuous;
        }
        lp
    }

    pub fn column_index(&self, name: &str) -> Option<ColId> {
        self.columns.iter().position(|c| c.name == name).map(ColId)
    }

    /// Lists violated bounds, rows and integrality requirements; rows use
    /// `feas_tol` scaled by the row's largest coefficient.
    pub fn violations(&self, values: &[f64], feas_tol: f64, int_tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        if values.len() != self.columns.len() {
            out.push(format!("expected {} values, got {}", self.columns.len(), values.len()));
            return out;
        }
        for (c, &v) in self.columns.iter().zip(values) {
            if !v.is_finite() || v < c.lower - feas_tol || v > c.upper + feas_tol {
                out.push(format!("{} = {v} outside [{}, {}]", c.name, c.lower, c.upper));
            }
            if c.kind.is_discrete() && (v - v.round()).abs() > int_tol {
                out.push(format!("{} = {v} is fractional", c.name));
            }
        }
        for row in &self.rows {
            let lhs = row.activity(values);
            let scale = row.terms.iter().fold(1.0f64, |m, (_, a)| m.max(a.abs()));
            let tol = feas_tol * scale;
            let bad = match row.sense {
                Sense::Le => lhs > row.rhs + tol,
                Sense::Ge => lhs < row.rhs - tol,
                Sense::Eq => (lhs - row.rhs).abs() > tol,
            };
            if bad {
                out.push(format!("row {}: {lhs} {:?} {}", row.name, row.sense, row.rhs));
            }
        }
        out
    }
}
