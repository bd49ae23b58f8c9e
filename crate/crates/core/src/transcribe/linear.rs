use crate::error::{Error, Result};
use crate::milp::{ColumnKind, ColumnTag, RowFamily};
use crate::model::Sense;
use crate::predictors::LinearRegressionModel;

use super::bounds::affine_range;
use super::{Block, BoundFeature, ColRef};

/// Linear regression output: one equality row `y - sum b x = intercept + sum b c`.
pub fn transcribe_linreg(block: &mut Block, model: &LinearRegressionModel, features: &[BoundFeature]) -> Result<ColRef> {
    if features.len() != model.feature_count() {
        return Err(Error::ArityMismatch { expected: model.feature_count(), got: features.len() });
    }
    let range = affine_range(&model.coefficients, model.intercept, features)?;
    let y = block.column("", range.lo, range.hi, ColumnKind::Continuous, ColumnTag::PredictedOutput(block.var));
    let mut rhs = model.intercept;
    let mut terms = vec![(y, 1.0)];
    for (&b, f) in model.coefficients.iter().zip(features) {
        match *f {
            BoundFeature::Fixed(v) => rhs += b * v,
            BoundFeature::Column { col, .. } => terms.push((ColRef::Host(col), -b)),
        }
    }
    block.row(terms, Sense::Eq, rhs, RowFamily::Regression);
    Ok(y)
}
