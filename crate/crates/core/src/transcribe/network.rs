use crate::error::Result;
use crate::milp::{ColumnKind, ColumnTag, RowFamily};
use crate::model::Sense;
use crate::predictors::NeuralNetworkModel;

use super::bounds::propagate_bounds_nn;
use super::{Block, BoundFeature, ColRef, TranscribeOptions};

/// Big-M encoding of a ReLU network.
///
/// Every node `v` gets a pre-activation column `G_v` and a post-activation
/// column `F_v`, both bounded by interval propagation. Input and output nodes
/// pass `G` through unchanged; each hidden node gets a binary `z_v` and the
/// three big-M families with its own `M_v = max|G_v| + margin`.
pub fn transcribe_nn(
    block: &mut Block,
    net: &NeuralNetworkModel,
    features: &[BoundFeature],
    options: &TranscribeOptions,
) -> Result<ColRef> {
    let inputs: Vec<_> = features.iter().map(BoundFeature::interval).collect();
    let bounds = propagate_bounds_nn(net, &inputs)?;
    let var = block.var;
    let depth = net.layers().len();

    let mut prev_post = Vec::with_capacity(features.len());
    for (node, feature) in features.iter().enumerate() {
        let iv = bounds.pre[0][node];
        let tag = ColumnTag::NeuronPre { var, layer: 0, node };
        let g = block.column(&format!("G0_{node}"), iv.lo, iv.hi, ColumnKind::Continuous, tag);
        let tag = ColumnTag::NeuronPost { var, layer: 0, node };
        let f = block.column(&format!("F0_{node}"), iv.lo, iv.hi, ColumnKind::Continuous, tag);
        match *feature {
            BoundFeature::Fixed(v) => block.row(vec![(g, 1.0)], Sense::Eq, v, RowFamily::InputLink),
            BoundFeature::Column { col, .. } => {
                block.row(vec![(g, 1.0), (ColRef::Host(col), -1.0)], Sense::Eq, 0.0, RowFamily::InputLink)
            }
        }
        block.row(vec![(f, 1.0), (g, -1.0)], Sense::Eq, 0.0, RowFamily::PassThrough);
        prev_post.push(f);
    }

    for (k, layer) in net.layers().iter().enumerate() {
        let layer_no = k + 1;
        let is_output = k + 1 == depth;
        let mut post = Vec::with_capacity(layer.outputs());
        for (node, (weights, &bias)) in layer.weights.iter().zip(&layer.biases).enumerate() {
            let g_iv = bounds.pre[layer_no][node];
            let f_iv = bounds.post[layer_no][node];
            let tag = ColumnTag::NeuronPre { var, layer: layer_no, node };
            let g = block.column(&format!("G{layer_no}_{node}"), g_iv.lo, g_iv.hi, ColumnKind::Continuous, tag);
            let tag = ColumnTag::NeuronPost { var, layer: layer_no, node };
            let f = block.column(&format!("F{layer_no}_{node}"), f_iv.lo, f_iv.hi, ColumnKind::Continuous, tag);

            let mut affine = vec![(g, 1.0)];
            affine.extend(prev_post.iter().zip(weights).map(|(&u, &w)| (u, -w)));
            block.row(affine, Sense::Eq, bias, RowFamily::Affine);

            if is_output {
                block.row(vec![(f, 1.0), (g, -1.0)], Sense::Eq, 0.0, RowFamily::PassThrough);
            } else {
                let m = g_iv.magnitude() + options.big_m_margin;
                // active-side and inactive-side constants
                let (m_pos, m_neg) = if options.split_big_m {
                    (g_iv.hi.max(0.0) + options.big_m_margin, (-g_iv.lo).max(0.0) + options.big_m_margin)
                } else {
                    (m, m)
                };
                let tag = ColumnTag::ReluIndicator { var, layer: layer_no, node };
                // sign-stable neurons get a fixed indicator
                let z_lo = if g_iv.lo > 0.0 { 1.0 } else { 0.0 };
                let z_hi = if g_iv.hi < 0.0 { 0.0 } else { 1.0 };
                let z = block.column(&format!("z{layer_no}_{node}"), z_lo, z_hi, ColumnKind::Binary, tag);
                // -M(1 - z) <= G <= M z
                block.row(vec![(g, 1.0), (z, -m_pos)], Sense::Le, 0.0, RowFamily::ReluPreActivation);
                block.row(vec![(g, 1.0), (z, -m_neg)], Sense::Ge, -m_neg, RowFamily::ReluPreActivation);
                // G - M(1 - z) <= F <= G + M(1 - z)
                block.row(vec![(f, 1.0), (g, -1.0), (z, -m_pos)], Sense::Ge, -m_pos, RowFamily::ReluPostActivation);
                block.row(vec![(f, 1.0), (g, -1.0), (z, m_neg)], Sense::Le, m_neg, RowFamily::ReluPostActivation);
                // 0 <= F <= M z; the lower half is the column bound
                block.row(vec![(f, 1.0), (z, -m_pos)], Sense::Le, 0.0, RowFamily::ReluCap);
            }
            post.push(f);
        }
        prev_post = post;
    }

    let out = bounds.post[depth][0];
    let y = block.column("", out.lo, out.hi, ColumnKind::Continuous, ColumnTag::PredictedOutput(var));
    block.row(vec![(y, 1.0), (prev_post[0], -1.0)], Sense::Eq, 0.0, RowFamily::OutputLink);
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PredictedId;
    use crate::predictors::Layer;

    #[test]
    fn hidden_layer_counts() {
        let net = NeuralNetworkModel::new(vec![
            Layer { weights: vec![vec![0.3, -0.2, 0.1]; 10], biases: vec![0.05; 10] },
            Layer { weights: vec![vec![0.5; 10]], biases: vec![0.0] },
        ])
        .unwrap();
        let mut block = Block::new(PredictedId(0), "y");
        let features = [BoundFeature::Fixed(1.0), BoundFeature::Fixed(-1.0), BoundFeature::Fixed(0.5)];
        transcribe_nn(&mut block, &net, &features, &TranscribeOptions::default()).unwrap();

        let binaries = block.count_columns(|t| matches!(t, ColumnTag::ReluIndicator { .. }));
        assert_eq!(binaries, 10);
        // 10 hidden neurons, each with the three big-M families
        let families = [RowFamily::ReluPreActivation, RowFamily::ReluPostActivation, RowFamily::ReluCap];
        let instances: usize = families
            .iter()
            .map(|&fam| {
                let mut nodes: Vec<_> = block
                    .rows
                    .iter()
                    .filter(|r| r.family == fam)
                    .filter_map(|r| r.terms.iter().find_map(|(c, _)| match c {
                        ColRef::Local(i) => match block.columns[*i].tag {
                            ColumnTag::ReluIndicator { node, .. } => Some(node),
                            _ => None,
                        },
                        _ => None,
                    }))
                    .collect();
                nodes.dedup();
                nodes.len()
            })
            .sum();
        assert_eq!(instances, 30);
        assert_eq!(block.rows_of(RowFamily::ReluPreActivation), 20);
        assert_eq!(block.rows_of(RowFamily::ReluPostActivation), 20);
        assert_eq!(block.rows_of(RowFamily::ReluCap), 10);

        // |V| = 3 + 10 + 1 nodes, each with G and F, plus binaries and y
        assert_eq!(block.columns.len(), 2 * 14 + 10 + 1);
    }

    #[test]
    fn big_m_is_per_neuron() {
        let net = NeuralNetworkModel::new(vec![
            Layer { weights: vec![vec![1.0], vec![10.0]], biases: vec![0.0, 0.0] },
            Layer { weights: vec![vec![1.0, 1.0]], biases: vec![0.0] },
        ])
        .unwrap();
        let mut block = Block::new(PredictedId(0), "y");
        let features = [BoundFeature::Column { col: crate::milp::ColId(0), lower: -1.0, upper: 2.0 }];
        transcribe_nn(&mut block, &net, &features, &TranscribeOptions::default()).unwrap();
        let ms: Vec<f64> = block
            .rows
            .iter()
            .filter(|r| r.family == RowFamily::ReluCap)
            .map(|r| -r.terms[1].1)
            .collect();
        assert_eq!(ms.len(), 2);
        assert!((ms[0] - 2.0001).abs() < 1e-12);
        assert!((ms[1] - 20.0001).abs() < 1e-12);
    }
}
