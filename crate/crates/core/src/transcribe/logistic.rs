use crate::error::{Error, Result};
use crate::milp::{ColumnKind, ColumnTag, RowFamily};
use crate::model::Sense;
use crate::predictors::{sigmoid, softplus, LogisticRegressionModel};

use super::bounds::logodds_range;
use super::{Block, BoundFeature, ColRef, TranscribeOptions};

/// Mean value of the sigmoid over `[lower, upper]`.
pub fn v_delta(lower: f64, upper: f64) -> Result<f64> {
    if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
        return Err(Error::InvalidInterval { lo: lower, hi: upper });
    }
    let width = upper - lower;
    let mean = if width < 1e-3 {
        // closed form cancels badly on tiny intervals; 3-point Gauss-Legendre
        let mid = 0.5 * (lower + upper);
        let h = 0.5 * width * (0.6f64).sqrt();
        (5.0 * sigmoid(mid - h) + 8.0 * sigmoid(mid) + 5.0 * sigmoid(mid + h)) / 18.0
    } else {
        (softplus(upper) - softplus(lower)) / width
    };
    Ok(mean.clamp(sigmoid(lower), sigmoid(upper)))
}

/// Lower and upper ends of `count` equal pieces of `[first, last]`; the last
/// upper end is `last` exactly.
pub(crate) fn partition(first: f64, last: f64, count: usize) -> (Vec<f64>, Vec<f64>) {
    let width = (last - first) / count as f64;
    let lowers = (0..count).map(|d| first + d as f64 * width).collect();
    let uppers = (0..count).map(|d| if d + 1 == count { last } else { first + (d + 1) as f64 * width }).collect();
    (lowers, uppers)
}

/// Largest `sigmoid(U_d) - sigmoid(L_d)` over a uniform split of
/// `[lower, upper]` into `intervals` pieces: how far `y` can sit from the exact
/// sigmoid at any feasible point of the encoding.
pub fn logistic_error_bound(lower: f64, upper: f64, intervals: usize) -> f64 {
    let (lowers, uppers) = partition(lower, upper, intervals);
    lowers.iter().zip(&uppers).map(|(&l, &u)| sigmoid(u) - sigmoid(l)).fold(0.0, f64::max)
}

/// Interval-indicator encoding of a logistic regression output.
///
/// The log-odds range is split into `options.intervals` equal pieces; one
/// binary per piece selects the piece holding the log-odds and pins `y` to
/// the sigmoid's mean over that piece. When every feature is fixed the
/// output is a constant and no rows are emitted.
pub fn transcribe_logreg(
    block: &mut Block,
    model: &LogisticRegressionModel,
    features: &[BoundFeature],
    options: &TranscribeOptions,
) -> Result<ColRef> {
    let var = block.var;
    let count = options.intervals;
    if count < 1 {
        return Err(Error::ZeroIntervals);
    }
    let range = logodds_range(model, features, options.degenerate_pad)?;

    // constant part of the log-odds and its terms over user columns
    let mut constant = model.intercept;
    let mut score = Vec::new();
    for (&b, f) in model.coefficients.iter().zip(features) {
        match *f {
            BoundFeature::Fixed(v) => constant += b * v,
            BoundFeature::Column { col, .. } => score.push((ColRef::Host(col), b)),
        }
    }
    if score.is_empty() {
        let p = sigmoid(constant);
        return Ok(block.column("", p, p, ColumnKind::Continuous, ColumnTag::PredictedOutput(var)));
    }

    let (first, last) = (range.lo, range.hi);
    let (lowers, uppers) = partition(first, last, count);
    let means = lowers.iter().zip(&uppers).map(|(&l, &u)| v_delta(l, u)).collect::<Result<Vec<_>>>()?;
    let (s_first, s_last) = (sigmoid(first), sigmoid(last));

    let y = block.column("", s_first, s_last, ColumnKind::Continuous, ColumnTag::PredictedOutput(var));
    let z: Vec<ColRef> = (0..count)
        .map(|d| {
            let tag = ColumnTag::IntervalIndicator { var, interval: d };
            block.column(&format!("zi{d}"), 0.0, 1.0, ColumnKind::Binary, tag)
        })
        .collect();

    block.row(z.iter().map(|&c| (c, 1.0)).collect(), Sense::Eq, 1.0, RowFamily::IntervalChoice);
    let with = |extra: (ColRef, f64)| {
        let mut terms = score.clone();
        terms.push(extra);
        terms
    };
    for d in 0..count {
        // (L_d - L_1) z_d + L_1 <= score
        block.row(with((z[d], -(lowers[d] - first))), Sense::Ge, first - constant, RowFamily::IntervalLower);
    }
    for d in 0..count {
        // (U_d - U_D) z_d + U_D >= score
        block.row(with((z[d], -(uppers[d] - last))), Sense::Le, last - constant, RowFamily::IntervalUpper);
    }
    for d in 0..count {
        // sigmoid(L_1) + (V_d - sigmoid(L_1)) z_d <= y
        block.row(vec![(y, 1.0), (z[d], -(means[d] - s_first))], Sense::Ge, s_first, RowFamily::ValueLower);
    }
    for d in 0..count {
        // sigmoid(U_D) + (V_d - sigmoid(U_D)) z_d >= y
        block.row(vec![(y, 1.0), (z[d], -(means[d] - s_last))], Sense::Le, s_last, RowFamily::ValueUpper);
    }

    if options.logistic_hull_rows {
        let mut lower = score.clone();
        lower.extend(z.iter().zip(&lowers).map(|(&c, &l)| (c, -l)));
        block.row(lower, Sense::Ge, -constant, RowFamily::HullLower);
        let mut upper = score.clone();
        upper.extend(z.iter().zip(&uppers).map(|(&c, &u)| (c, -u)));
        block.row(upper, Sense::Le, -constant, RowFamily::HullUpper);
        let mut value = vec![(y, 1.0)];
        value.extend(z.iter().zip(&means).map(|(&c, &v)| (c, -v)));
        block.row(value, Sense::Eq, 0.0, RowFamily::HullValue);
    }
    Ok(y)
}
