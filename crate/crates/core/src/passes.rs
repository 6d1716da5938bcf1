//! Compiler passes: computation-order optimization and layer fusion
//! (activation merge + batch-norm fold).

use crate::error::Result;
use crate::ir::{pair_complexity, ModelIr, PairOrder};
use crate::model::LayerKind;

/// Audit trail of what the passes did.
#[derive(Debug, Clone, Default)]
pub struct PassReport {
    /// (aggregate_id, linear_id) pairs whose order was exchanged.
    pub swaps_performed: Vec<(u32, u32)>,
    /// (activation_id, host_id) merges.
    pub fused_activations: Vec<(u32, u32)>,
    /// (batchnorm_id, linear_id) folds.
    pub folded_batchnorms: Vec<(u32, u32)>,
    pub warnings: Vec<String>,
    pub cc_before: u64,
    pub cc_after: u64,
}

impl PassReport {
    fn merge(&mut self, other: PassReport) {
        self.swaps_performed.extend(other.swaps_performed);
        self.fused_activations.extend(other.fused_activations);
        self.folded_batchnorms.extend(other.folded_batchnorms);
        self.warnings.extend(other.warnings);
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PassOptions {
    pub order_opt: bool,
    pub fusion: bool,
    /// Treat Mean as a linear operator (degree-normalized Sum with static
    /// degrees commutes with the weight multiply).
    pub mean_is_linear: bool,
}

impl Default for PassOptions {
    fn default() -> Self {
        PassOptions { order_opt: true, fusion: true, mean_is_linear: true }
    }
}

/// Run the enabled passes in pipeline order. Fusion is iterated with the
/// batch-norm fold so an activation stranded behind a BatchNorm still merges
/// once the BatchNorm disappears.
pub fn run_passes(ir: &mut ModelIr, opts: PassOptions) -> Result<PassReport> {
    let mut report = PassReport { cc_before: ir.total_complexity(), ..Default::default() };
    if opts.order_opt {
        report.merge(order_optimize(ir, opts.mean_is_linear)?);
    }
    if opts.fusion {
        loop {
            let a = fuse_activations(ir)?;
            let b = fold_batchnorm(ir)?;
            let changed = !a.fused_activations.is_empty() || !b.folded_batchnorms.is_empty();
            report.merge(a);
            report.merge(b);
            if !changed {
                break;
            }
        }
    }
    report.cc_after = ir.total_complexity();
    debug_assert!(report.cc_after <= report.cc_before);
    ir.check_consistent()?;
    Ok(report)
}

/// Exchange adjacent {Aggregate, Linear} pairs when the aggregation operator
/// is linear and the exchange strictly reduces the pair's operation count.
/// Sweeps layers in ascending id order and repeats until fixpoint.
pub fn order_optimize(ir: &mut ModelIr, mean_is_linear: bool) -> Result<PassReport> {
    let mut report = PassReport { cc_before: ir.total_complexity(), ..Default::default() };
    loop {
        let mut swapped_this_sweep = false;
        let ids: Vec<u32> = ir.layers.keys().copied().collect();
        for l_id in ids {
            let Some(l) = ir.layers.get(&l_id) else { continue };
            // Single-child / single-parent chain linkage.
            if l.child_ids.len() != 1 {
                continue;
            }
            let m_id = l.child_ids[0];
            let m = ir.layer(m_id);
            if m.parent_ids.len() != 1 {
                continue;
            }
            let (agg_id, lin_id, agg_first) = match (l.layer_type, m.layer_type) {
                (LayerKind::Aggregate, LayerKind::Linear) => (l_id, m_id, true),
                (LayerKind::Linear, LayerKind::Aggregate) => (m_id, l_id, false),
                _ => continue,
            };
            let agg = ir.layer(agg_id);
            if !agg.agg_op.map(|op| op.is_linear(mean_is_linear)).unwrap_or(false) {
                continue;
            }
            let lin = ir.layer(lin_id);
            let (f1, f2) = (lin.f_in as u64, lin.f_out as u64);
            let (nv, ne) = (agg.nv as u64, agg.ne);
            let (cur, exchanged) = if agg_first {
                (
                    pair_complexity(PairOrder::AggregateFirst, f1, f2, nv, ne),
                    pair_complexity(PairOrder::LinearFirst, f1, f2, nv, ne),
                )
            } else {
                (
                    pair_complexity(PairOrder::LinearFirst, f1, f2, nv, ne),
                    pair_complexity(PairOrder::AggregateFirst, f1, f2, nv, ne),
                )
            };
            if exchanged >= cur {
                continue;
            }
            swap_pair(ir, l_id, m_id);
            report.swaps_performed.push((agg_id, lin_id));
            swapped_this_sweep = true;
        }
        if !swapped_this_sweep {
            break;
        }
    }
    report.cc_after = ir.total_complexity();
    Ok(report)
}

/// Rewire `first -> second` into `second -> first`, keeping ids and any
/// edge-weight parent of an Aggregate attached to the Aggregate. Only the
/// feature path moves; the Aggregate's width becomes whichever side of the
/// Linear it now sits on.
fn swap_pair(ir: &mut ModelIr, first_id: u32, second_id: u32) {
    let feature_parent = {
        let first = ir.layer(first_id);
        if first.layer_type == LayerKind::Aggregate {
            ir.feature_parent(first_id)
        } else {
            first.parent_ids.first().copied()
        }
    };
    let grandchildren = ir.layer(second_id).child_ids.clone();

    if let Some(p) = feature_parent {
        let pl = ir.layers.get_mut(&p).unwrap();
        for c in pl.child_ids.iter_mut() {
            if *c == first_id {
                *c = second_id;
            }
        }
    }
    for g in &grandchildren {
        let gl = ir.layers.get_mut(g).unwrap();
        for p in gl.parent_ids.iter_mut() {
            if *p == second_id {
                *p = first_id;
            }
        }
    }

    {
        let second = ir.layers.get_mut(&second_id).unwrap();
        second.parent_ids = feature_parent.into_iter().collect();
        second.child_ids = vec![first_id];
    }
    {
        let first = ir.layers.get_mut(&first_id).unwrap();
        for p in first.parent_ids.iter_mut() {
            if Some(*p) == feature_parent || *p == second_id {
                *p = second_id;
            }
        }
        if feature_parent.is_none() {
            // first was a root; its feature input now comes from second.
            first.parent_ids.push(second_id);
        }
        first.child_ids = grandchildren;
    }

    // Width update for the Aggregate side.
    let (agg_id, new_f) = {
        let first = ir.layer(first_id);
        let second = ir.layer(second_id);
        if first.layer_type == LayerKind::Aggregate {
            (first_id, second.f_out)
        } else {
            (second_id, first.f_in)
        }
    };
    let agg = ir.layers.get_mut(&agg_id).unwrap();
    agg.f_in = new_f;
    agg.f_out = new_f;
}

/// Merge each Activation layer into its single parent when that parent is an
/// Aggregate/Linear/VectorInner/VectorAdd with no fused activation yet and no
/// other consumers. The merged layer is deleted and the edges spliced.
pub fn fuse_activations(ir: &mut ModelIr) -> Result<PassReport> {
    let mut report = PassReport { cc_before: ir.total_complexity(), ..Default::default() };
    let act_ids: Vec<u32> = ir
        .layers
        .values()
        .filter(|l| l.layer_type == LayerKind::Activation)
        .map(|l| l.layer_id)
        .collect();
    for act_id in act_ids {
        let act = ir.layer(act_id);
        if act.parent_ids.len() != 1 {
            report
                .warnings
                .push(format!("activation {act_id}: not fused ({} parents)", act.parent_ids.len()));
            continue;
        }
        let host_id = act.parent_ids[0];
        let host = ir.layer(host_id);
        if !host.is_fusible_host() {
            continue;
        }
        if host.fused_act.is_some() {
            report.warnings.push(format!(
                "activation {act_id}: host {host_id} already carries a fused activation"
            ));
            continue;
        }
        if host.child_ids != vec![act_id] {
            report
                .warnings
                .push(format!("activation {act_id}: host {host_id} has other consumers"));
            continue;
        }
        let act = ir.layers.remove(&act_id).unwrap();
        let children = act.child_ids.clone();
        for c in &children {
            let cl = ir.layers.get_mut(c).unwrap();
            for p in cl.parent_ids.iter_mut() {
                if *p == act_id {
                    *p = host_id;
                }
            }
        }
        let host = ir.layers.get_mut(&host_id).unwrap();
        host.fused_act = act.act;
        host.act_enabled = true;
        host.child_ids = children;
        report.fused_activations.push((act_id, host_id));
    }
    report.cc_after = ir.total_complexity();
    Ok(report)
}

/// Fold each BatchNorm layer into an adjacent Linear layer: column scaling
/// when the BatchNorm follows the Linear, row scaling when it precedes it.
/// A BatchNorm with no adjacent Linear stays and runs elementwise.
pub fn fold_batchnorm(ir: &mut ModelIr) -> Result<PassReport> {
    let mut report = PassReport { cc_before: ir.total_complexity(), ..Default::default() };
    let bn_ids: Vec<u32> = ir
        .layers
        .values()
        .filter(|l| l.layer_type == LayerKind::BatchNorm)
        .map(|l| l.layer_id)
        .collect();
    for bn_id in bn_ids {
        let bn_layer = ir.layer(bn_id);
        let parent = bn_layer.parent_ids.first().copied();
        let child = bn_layer.child_ids.first().copied();

        // BatchNorm after Linear: y = BN(x W + b).
        let after_linear = parent.is_some_and(|p| {
            let pl = ir.layer(p);
            pl.layer_type == LayerKind::Linear
                && pl.child_ids == vec![bn_id]
                && pl.fused_act.is_none()
        }) && bn_layer.parent_ids.len() == 1;
        if after_linear {
            let lin_id = parent.unwrap();
            let bn = ir.layers.remove(&bn_id).unwrap();
            let (scale, shift) = bn.bn.as_ref().unwrap().scale_shift();
            let children = bn.child_ids.clone();
            for c in &children {
                let cl = ir.layers.get_mut(c).unwrap();
                for p in cl.parent_ids.iter_mut() {
                    if *p == bn_id {
                        *p = lin_id;
                    }
                }
            }
            let lin = ir.layers.get_mut(&lin_id).unwrap();
            let lw = lin.weights.as_mut().unwrap();
            for r in 0..lw.w.rows {
                for c in 0..lw.w.cols {
                    *lw.w.at_mut(r, c) *= scale[c];
                }
            }
            let bias = lw.bias.get_or_insert_with(|| vec![0.0; lw.w.cols]);
            for c in 0..bias.len() {
                bias[c] = bias[c] * scale[c] + shift[c];
            }
            lin.folded_bn = true;
            lin.child_ids = children;
            report.folded_batchnorms.push((bn_id, lin_id));
            continue;
        }

        // BatchNorm before Linear: y = BN(x) W + b.
        let before_linear = child.is_some_and(|c| {
            let cl = ir.layer(c);
            cl.layer_type == LayerKind::Linear && cl.parent_ids == vec![bn_id]
        }) && bn_layer.child_ids.len() == 1;
        if before_linear {
            let lin_id = child.unwrap();
            let bn = ir.layers.remove(&bn_id).unwrap();
            let (scale, shift) = bn.bn.as_ref().unwrap().scale_shift();
            let parents = bn.parent_ids.clone();
            for p in &parents {
                let pl = ir.layers.get_mut(p).unwrap();
                for c in pl.child_ids.iter_mut() {
                    if *c == bn_id {
                        *c = lin_id;
                    }
                }
            }
            let lin = ir.layers.get_mut(&lin_id).unwrap();
            let lw = lin.weights.as_mut().unwrap();
            // b' = b + shift . W computed against the unscaled W.
            let mut extra = vec![0f64; lw.w.cols];
            for r in 0..lw.w.rows {
                for c in 0..lw.w.cols {
                    extra[c] += shift[r] as f64 * lw.w.at(r, c) as f64;
                }
            }
            for r in 0..lw.w.rows {
                for c in 0..lw.w.cols {
                    *lw.w.at_mut(r, c) *= scale[r];
                }
            }
            let bias = lw.bias.get_or_insert_with(|| vec![0.0; lw.w.cols]);
            for c in 0..bias.len() {
                bias[c] += extra[c] as f32;
            }
            lin.folded_bn = true;
            lin.parent_ids = parents;
            report.folded_batchnorms.push((bn_id, lin_id));
            continue;
        }

        report.warnings.push(format!(
            "batchnorm {bn_id}: no adjacent Linear, kept as an elementwise layer"
        ));
    }
    report.cc_after = ir.total_complexity();
    Ok(report)
}

/// Count fusion leftovers: standalone Activation layers whose parent could
/// host them, and BatchNorm layers adjacent to a Linear. Both must be zero
/// after the fusion pipeline.
pub fn count_unfused(ir: &ModelIr) -> (usize, usize) {
    let mut acts = 0;
    let mut bns = 0;
    for l in ir.layers.values() {
        match l.layer_type {
            LayerKind::Activation => {
                if l.parent_ids.len() == 1 {
                    let p = ir.layer(l.parent_ids[0]);
                    if p.is_fusible_host() && p.fused_act.is_none() && p.child_ids == vec![l.layer_id]
                    {
                        acts += 1;
                    }
                }
            }
            LayerKind::BatchNorm => {
                let after = l.parent_ids.len() == 1 && {
                    let p = ir.layer(l.parent_ids[0]);
                    p.layer_type == LayerKind::Linear
                        && p.child_ids == vec![l.layer_id]
                        && p.fused_act.is_none()
                };
                let before = l.child_ids.len() == 1 && {
                    let c = ir.layer(l.child_ids[0]);
                    c.layer_type == LayerKind::Linear && c.parent_ids == vec![l.layer_id]
                };
                if after || before {
                    bns += 1;
                }
            }
            _ => {}
        }
    }
    (acts, bns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_graph, DegreeModel, Graph};
    use crate::ir::{build_ir, topo_layers, ModelIr, PairOrder};
    use crate::matrix::Matrix;
    use crate::model::{ActKind, AggOp, BatchNormParams, ModelSpec};
    use crate::models::ModelBuilder;
    use crate::oracle::exec_model;

    fn gcn_b1(f0: u32, hidden: u32, out: u32) -> ModelSpec {
        let mut b = ModelBuilder::new("gcn");
        let a1 = b.aggregate(AggOp::Sum, f0, &[]);
        let l1 = b.linear_seeded(f0, hidden, 1, &[a1]);
        let r1 = b.activation(ActKind::ReLU, hidden, l1);
        let a2 = b.aggregate(AggOp::Sum, hidden, &[r1]);
        b.linear_seeded(hidden, out, 2, &[a2]);
        b.build().unwrap()
    }

    fn ir_ok(ir: &ModelIr) {
        ir.check_consistent().unwrap();
    }

    #[test]
    fn b1_cora_shapes_swap_and_cc_drop() {
        let g = gen_graph(2708, 5429, 1433, 0, DegreeModel::Uniform, false).unwrap();
        let mut ir = build_ir(&gcn_b1(1433, 16, 7), &g).unwrap();
        let report = order_optimize(&mut ir, true).unwrap();
        assert_eq!(report.swaps_performed, vec![(1, 2), (4, 5)]);
        // The first pair's cost goes 139,737,562 -> 124,351,776.
        assert_eq!(
            pair_complexity(PairOrder::AggregateFirst, 1433, 16, 2708, 5429)
                - pair_complexity(PairOrder::LinearFirst, 1433, 16, 2708, 5429),
            15_385_786
        );
        assert!(report.cc_after < report.cc_before);
        // Linear now first, Aggregate operates at width 16.
        assert_eq!(topo_layers(&ir).unwrap()[0], 2);
        assert_eq!(ir.layer(1).f_in, 16);
        ir_ok(&ir);
    }

    #[test]
    fn max_never_swaps() {
        let g = gen_graph(64, 256, 32, 0, DegreeModel::Uniform, false).unwrap();
        let mut m = gcn_b1(32, 4, 4);
        m.layers[0].agg_op = Some(AggOp::Max);
        m.layers[3].agg_op = Some(AggOp::Max);
        let mut ir = build_ir(&m, &g).unwrap();
        let report = order_optimize(&mut ir, true).unwrap();
        assert!(report.swaps_performed.is_empty());
    }

    #[test]
    fn equal_widths_never_swap() {
        let g = gen_graph(64, 256, 8, 0, DegreeModel::Uniform, false).unwrap();
        let mut ir = build_ir(&gcn_b1(8, 8, 8), &g).unwrap();
        let report = order_optimize(&mut ir, true).unwrap();
        assert!(report.swaps_performed.is_empty());
    }

    #[test]
    fn mean_swaps_only_when_treated_linear() {
        let g = gen_graph(64, 256, 32, 0, DegreeModel::Uniform, false).unwrap();
        let mut m = gcn_b1(32, 4, 4);
        m.layers[0].agg_op = Some(AggOp::Mean);
        let mut ir = build_ir(&m, &g).unwrap();
        let strict = order_optimize(&mut ir.clone(), false).unwrap();
        assert!(!strict.swaps_performed.contains(&(1, 2)));
        let relaxed = order_optimize(&mut ir, true).unwrap();
        assert!(relaxed.swaps_performed.contains(&(1, 2)));
    }

    #[test]
    fn order_optimize_reaches_fixpoint() {
        let g = gen_graph(128, 512, 64, 0, DegreeModel::Uniform, false).unwrap();
        let mut ir = build_ir(&gcn_b1(64, 8, 4), &g).unwrap();
        let first = order_optimize(&mut ir, true).unwrap();
        assert!(!first.swaps_performed.is_empty());
        let second = order_optimize(&mut ir, true).unwrap();
        assert!(second.swaps_performed.is_empty());
    }

    #[test]
    fn sgc_chain_hoists_linear_through_both_aggregates() {
        // Aggregate -> Aggregate -> Linear(64 -> 4) ends Linear-first.
        let g = gen_graph(64, 256, 64, 0, DegreeModel::Uniform, false).unwrap();
        let mut b = ModelBuilder::new("sgc");
        let a1 = b.aggregate(AggOp::Sum, 64, &[]);
        let a2 = b.aggregate(AggOp::Sum, 64, &[a1]);
        let l = b.linear_seeded(64, 4, 0, &[a2]);
        let mut ir = build_ir(&b.build().unwrap(), &g).unwrap();
        let report = order_optimize(&mut ir, true).unwrap();
        assert_eq!(report.swaps_performed.len(), 2);
        assert_eq!(topo_layers(&ir).unwrap()[0], l);
        ir_ok(&ir);
    }

    #[test]
    fn fuse_gcn_activation() {
        let g = gen_graph(32, 128, 16, 0, DegreeModel::Uniform, false).unwrap();
        let mut ir = build_ir(&gcn_b1(16, 8, 4), &g).unwrap();
        let report = fuse_activations(&mut ir).unwrap();
        assert_eq!(report.fused_activations, vec![(3, 2)]);
        assert_eq!(ir.numl(), 4);
        assert_eq!(ir.layer(2).fused_act, Some(ActKind::ReLU));
        assert!(ir.layer(2).act_enabled);
        ir_ok(&ir);
    }

    #[test]
    fn fuse_without_activations_is_noop() {
        let g = gen_graph(32, 128, 16, 0, DegreeModel::Uniform, false).unwrap();
        let mut b = ModelBuilder::new("plain");
        let a = b.aggregate(AggOp::Sum, 16, &[]);
        b.linear_seeded(16, 4, 0, &[a]);
        let mut ir = build_ir(&b.build().unwrap(), &g).unwrap();
        let report = fuse_activations(&mut ir).unwrap();
        assert!(report.fused_activations.is_empty());
        assert_eq!(ir.numl(), 2);
    }

    #[test]
    fn gat_exp_fuses_into_vector_inner() {
        let g = gen_graph(32, 128, 16, 0, DegreeModel::Uniform, false).unwrap();
        let mut b = ModelBuilder::new("gat1");
        let t = b.linear_seeded(16, 8, 0, &[]);
        let vi = b.vector_inner(8, t);
        let e = b.activation(ActKind::Exp, 8, vi);
        let agg = b.aggregate(AggOp::Sum, 8, &[t, e]);
        let mut ir = build_ir(&b.build().unwrap(), &g).unwrap();
        let report = fuse_activations(&mut ir).unwrap();
        assert_eq!(report.fused_activations, vec![(e, vi)]);
        assert_eq!(ir.layer(vi).fused_act, Some(ActKind::Exp));
        assert_eq!(ir.weight_parent(agg), Some(vi));
        ir_ok(&ir);
    }

    #[test]
    fn hand_fold_two_by_two() {
        // Linear(2x2, W = I) then BN(mu=1, sigma=1, eps=0, gamma=2, beta=0)
        // folds to W = 2I, bias = [-2, -2].
        let g = gen_graph(8, 16, 2, 0, DegreeModel::Uniform, false).unwrap();
        let bn = BatchNormParams {
            mu: vec![1.0, 1.0],
            sigma: vec![1.0, 1.0],
            eps: 0.0,
            gamma: vec![2.0, 2.0],
            beta: vec![0.0, 0.0],
        };
        let mut b = ModelBuilder::new("m");
        let l = b.linear(Matrix::identity(2), None, &[]);
        b.batch_norm(bn, &[l]);
        let mut ir = build_ir(&b.build().unwrap(), &g).unwrap();
        fold_batchnorm(&mut ir).unwrap();
        let lw = ir.layer(l).weights.clone().unwrap();
        assert_eq!(lw.w.data, vec![2.0, 0.0, 0.0, 2.0]);
        assert_eq!(lw.bias, Some(vec![-2.0, -2.0]));
        assert!(ir.layer(l).folded_bn);
    }

    #[test]
    fn identity_batchnorm_fold_keeps_weights() {
        let g = gen_graph(8, 16, 2, 0, DegreeModel::Uniform, false).unwrap();
        let mut b = ModelBuilder::new("m");
        let l = b.linear(Matrix::identity(2), None, &[]);
        b.batch_norm(BatchNormParams::identity(2), &[l]);
        let mut ir = build_ir(&b.build().unwrap(), &g).unwrap();
        let before = ir.layer(l).weights.clone().unwrap();
        let report = fold_batchnorm(&mut ir).unwrap();
        assert_eq!(report.folded_batchnorms, vec![(2, 1)]);
        let after = ir.layer(l).weights.clone().unwrap();
        assert_eq!(before.w, after.w);
        assert_eq!(after.bias, Some(vec![0.0, 0.0]));
    }

    #[test]
    fn random_fold_matches_unfolded_pipeline() {
        let g = gen_graph(24, 96, 6, 3, DegreeModel::Uniform, false).unwrap();
        let w = crate::model::seeded_weights(6, 5, 9);
        let bn = BatchNormParams {
            mu: vec![0.1, -0.4, 0.7, 0.0, 1.2],
            sigma: vec![1.1, 0.8, 1.5, 0.9, 1.0],
            eps: 1e-5,
            gamma: vec![0.5, 2.0, 1.0, -1.0, 0.3],
            beta: vec![0.2, 0.0, -0.5, 1.0, 0.4],
        };
        let build = |fold: bool| {
            let mut b = ModelBuilder::new("m");
            let l = b.linear(w.clone(), None, &[]);
            b.batch_norm(bn.clone(), &[l]);
            let mut ir = build_ir(&b.build().unwrap(), &g).unwrap();
            if fold {
                let r = fold_batchnorm(&mut ir).unwrap();
                assert_eq!(r.folded_batchnorms.len(), 1);
            }
            exec_model(&ir, &g).unwrap()
        };
        let want = build(false);
        let got = build(true);
        for i in 0..want.data.len() {
            let d = (want.data[i] - got.data[i]).abs();
            assert!(d <= 1e-5 * want.data[i].abs().max(1.0), "at {i}: {d}");
        }
    }

    #[test]
    fn bn_before_linear_row_fold_matches() {
        let g = gen_graph(24, 96, 5, 4, DegreeModel::Uniform, false).unwrap();
        let w = crate::model::seeded_weights(5, 3, 13);
        let bn = BatchNormParams {
            mu: vec![0.3, -0.2, 0.0, 0.9, -1.0],
            sigma: vec![1.2, 0.7, 1.0, 1.4, 0.9],
            eps: 1e-4,
            gamma: vec![1.5, 0.5, -0.8, 1.0, 2.0],
            beta: vec![0.0, 0.3, -0.1, 0.6, -0.2],
        };
        let build = |fold: bool| {
            let mut b = ModelBuilder::new("m");
            let bnl = b.batch_norm(bn.clone(), &[]);
            b.linear(w.clone(), Some(vec![0.5, -0.5, 0.25]), &[bnl]);
            let mut ir = build_ir(&b.build().unwrap(), &g).unwrap();
            if fold {
                let r = fold_batchnorm(&mut ir).unwrap();
                assert_eq!(r.folded_batchnorms.len(), 1);
            }
            exec_model(&ir, &g).unwrap()
        };
        let want = build(false);
        let got = build(true);
        for i in 0..want.data.len() {
            let d = (want.data[i] - got.data[i]).abs();
            assert!(d <= 1e-5 * want.data[i].abs().max(1.0), "at {i}: {d}");
        }
    }

    #[test]
    fn full_pipeline_preserves_semantics_and_eliminates_layers() {
        let g = gen_graph(48, 200, 12, 8, DegreeModel::Uniform, false).unwrap();
        let build = || {
            let mut b = ModelBuilder::new("mix");
            let a1 = b.aggregate(AggOp::Sum, 12, &[]);
            let l1 = b.linear_seeded(12, 6, 4, &[a1]);
            let bn = b.batch_norm(crate::models::seeded_bn(6, 21), &[l1]);
            let r = b.activation(ActKind::ReLU, 6, bn);
            let a2 = b.aggregate(AggOp::Sum, 6, &[r]);
            b.linear_seeded(6, 3, 5, &[a2]);
            build_ir(&b.build().unwrap(), &g).unwrap()
        };
        let want = exec_model(&build(), &g).unwrap();
        let mut ir = build();
        let report = run_passes(&mut ir, PassOptions::default()).unwrap();
        assert!(report.cc_after <= report.cc_before);
        let (acts, bns) = count_unfused(&ir);
        assert_eq!((acts, bns), (0, 0));
        let got = exec_model(&ir, &g).unwrap();
        for i in 0..want.data.len() {
            let d = (want.data[i] - got.data[i]).abs();
            assert!(d <= 1e-4 * want.data[i].abs().max(1.0), "at {i}: {d}");
        }
        ir_ok(&ir);
    }
}
