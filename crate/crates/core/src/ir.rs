//! Layer-level intermediate representation and complexity accounting.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{
    ActKind, ActParams, AggOp, BatchNormParams, LayerKind, LinearWeights, ModelSpec,
};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

/// IR record of one computation layer.
#[derive(Debug, Clone)]
pub struct LayerIr {
    pub layer_type: LayerKind,
    pub layer_id: u32,
    pub parent_ids: Vec<u32>,
    pub child_ids: Vec<u32>,
    pub f_in: u32,
    pub f_out: u32,
    pub nv: u32,
    pub ne: u64,
    pub agg_op: Option<AggOp>,
    pub weight_norm: bool,
    /// Standalone Activation layer's function.
    pub act: Option<ActKind>,
    /// Set by activation fusion on Aggregate/Linear/VectorInner/VectorAdd.
    pub fused_act: Option<ActKind>,
    pub act_enabled: bool,
    pub batch_enabled: bool,
    pub bn: Option<BatchNormParams>,
    pub folded_bn: bool,
    pub weights: Option<LinearWeights>,
}

impl LayerIr {
    pub fn is_fusible_host(&self) -> bool {
        matches!(
            self.layer_type,
            LayerKind::Aggregate | LayerKind::Linear | LayerKind::VectorInner | LayerKind::VectorAdd
        )
    }
}

/// The computation graph: ordered map layer_id -> LayerIr.
#[derive(Debug, Clone)]
pub struct ModelIr {
    pub layers: BTreeMap<u32, LayerIr>,
    pub name: String,
    pub act_params: ActParams,
    pub nv: u32,
    pub ne: u64,
}

impl ModelIr {
    pub fn numl(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, id: u32) -> &LayerIr {
        &self.layers[&id]
    }

    /// Sum of per-layer complexity, for pass reports.
    pub fn total_complexity(&self) -> u64 {
        self.layers.values().map(complexity).sum()
    }

    /// Whether a layer's output is per-edge weights rather than features.
    pub fn produces_edge_weights(&self, id: u32) -> bool {
        let l = self.layer(id);
        match l.layer_type {
            LayerKind::VectorInner => true,
            LayerKind::Activation | LayerKind::BatchNorm => l
                .parent_ids
                .first()
                .map(|p| self.produces_edge_weights(*p))
                .unwrap_or(false),
            _ => false,
        }
    }

    /// The parent supplying vertex features (None = the graph input).
    pub fn feature_parent(&self, id: u32) -> Option<u32> {
        self.layer(id)
            .parent_ids
            .iter()
            .copied()
            .find(|p| !self.produces_edge_weights(*p))
    }

    /// The parent supplying per-edge weights (VectorInner chains).
    pub fn weight_parent(&self, id: u32) -> Option<u32> {
        self.layer(id)
            .parent_ids
            .iter()
            .copied()
            .find(|p| self.produces_edge_weights(*p))
    }

    /// Check parent/child symmetry and acyclicity; used by tests and after
    /// pass rewrites.
    pub fn check_consistent(&self) -> Result<()> {
        for (id, l) in &self.layers {
            debug_assert_eq!(*id, l.layer_id);
            for p in &l.parent_ids {
                let pl = self
                    .layers
                    .get(p)
                    .ok_or_else(|| Error::CompilerBug(format!("layer {id}: dangling parent {p}")))?;
                if !pl.child_ids.contains(id) {
                    return Err(Error::CompilerBug(format!(
                        "asymmetric link {p} -> {id} after rewrite"
                    )));
                }
            }
            for c in &l.child_ids {
                let cl = self
                    .layers
                    .get(c)
                    .ok_or_else(|| Error::CompilerBug(format!("layer {id}: dangling child {c}")))?;
                if !cl.parent_ids.contains(id) {
                    return Err(Error::CompilerBug(format!(
                        "asymmetric link {id} -> {c} after rewrite"
                    )));
                }
            }
        }
        topo_layers(self).map(|_| ())
    }
}

/// MAC-equivalent operation count of a layer.
///
/// Aggregate: 2 * f_in * |E|; Linear: 2 * f_in * f_out * |V|;
/// VectorInner: 2 * f_in * |E|; VectorAdd: f_in * |V|;
/// Activation: f_in * |V|; BatchNorm: 4 * f_in * |V|.
pub fn complexity(layer: &LayerIr) -> u64 {
    let f_in = layer.f_in as u64;
    let f_out = layer.f_out as u64;
    let nv = layer.nv as u64;
    let ne = layer.ne;
    match layer.layer_type {
        LayerKind::Aggregate => 2 * f_in * ne,
        LayerKind::Linear => 2 * f_in * f_out * nv,
        LayerKind::VectorInner => 2 * f_in * ne,
        LayerKind::VectorAdd => f_in * nv,
        LayerKind::Activation => f_in * nv,
        LayerKind::BatchNorm => 4 * f_in * nv,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOrder {
    AggregateFirst,
    LinearFirst,
}

/// Operation count of an adjacent Aggregate/Linear pair with input width
/// `f1` and output width `f2`.
pub fn pair_complexity(order: PairOrder, f1: u64, f2: u64, nv: u64, ne: u64) -> u64 {
    match order {
        PairOrder::AggregateFirst => 2 * f1 * ne + 2 * f1 * f2 * nv,
        PairOrder::LinearFirst => 2 * f1 * f2 * nv + 2 * f2 * ne,
    }
}

/// Topological order of layer ids; parents precede children. Ties broken by
/// ascending id so the order is deterministic.
pub fn topo_layers(ir: &ModelIr) -> Result<Vec<u32>> {
    let mut indeg: BTreeMap<u32, usize> = ir.layers.keys().map(|id| (*id, 0)).collect();
    for l in ir.layers.values() {
        for c in &l.child_ids {
            *indeg.get_mut(c).unwrap() += 1;
        }
    }
    let mut ready: BTreeSet<u32> = indeg
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(id, _)| *id)
        .collect();
    let mut order = Vec::with_capacity(ir.layers.len());
    while let Some(id) = ready.iter().next().copied() {
        ready.remove(&id);
        order.push(id);
        for c in &ir.layers[&id].child_ids {
            let d = indeg.get_mut(c).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.insert(*c);
            }
        }
    }
    if order.len() != ir.layers.len() {
        return Err(Error::InvalidModel("layer graph has a cycle".into()));
    }
    Ok(order)
}

/// Stamp each validated LayerSpec with the graph's |V|, |E| to form the IR.
pub fn build_ir(model: &ModelSpec, graph: &Graph) -> Result<ModelIr> {
    model.validate()?;
    let nv = graph.num_vertices;
    let ne = graph.num_edges();
    let mut layers = BTreeMap::new();
    for l in &model.layers {
        layers.insert(
            l.id,
            LayerIr {
                layer_type: l.kind,
                layer_id: l.id,
                parent_ids: l.parents.clone(),
                child_ids: l.children.clone(),
                f_in: l.f_in,
                f_out: l.f_out,
                nv,
                ne,
                agg_op: l.agg_op,
                weight_norm: l.weight_norm,
                act: l.act,
                fused_act: None,
                act_enabled: false,
                batch_enabled: l.kind == LayerKind::BatchNorm,
                bn: l.bn.clone(),
                folded_bn: false,
                weights: l.weights.clone(),
            },
        );
    }
    let ir = ModelIr {
        layers,
        name: model.name.clone(),
        act_params: model.act_params,
        nv,
        ne,
    };
    // Root layers consume the graph features directly.
    for l in ir.layers.values() {
        let has_feature_parent = ir.feature_parent(l.layer_id).is_some();
        if !has_feature_parent && l.f_in != graph.feature_dim() {
            return Err(Error::InvalidModel(format!(
                "layer {} reads graph features but f_in {} != feature dim {}",
                l.layer_id,
                l.f_in,
                graph.feature_dim()
            )));
        }
    }
    Ok(ir)
}

/// Text form of the IR, one line per layer, matching the model-spec schema.
pub fn dump_ir(ir: &ModelIr) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model name={} numl={} nv={} ne={}", ir.name, ir.numl(), ir.nv, ir.ne);
    for id in topo_layers(ir).unwrap_or_else(|_| ir.layers.keys().copied().collect()) {
        let l = ir.layer(id);
        let _ = write!(
            out,
            "layer id={} kind={} fin={} fout={}",
            l.layer_id,
            l.layer_type.name(),
            l.f_in,
            l.f_out
        );
        if let Some(op) = l.agg_op {
            let _ = write!(out, " agg={}", op.name());
        }
        if l.weight_norm {
            let _ = write!(out, " norm=softmax");
        }
        if let Some(a) = l.act {
            let _ = write!(out, " act={}", a.name());
        }
        if let Some(a) = l.fused_act {
            let _ = write!(out, " fused_act={}", a.name());
        }
        if l.folded_bn {
            let _ = write!(out, " folded_bn=1");
        }
        let fmt_ids = |ids: &[u32]| {
            if ids.is_empty() {
                "none".to_string()
            } else {
                ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            }
        };
        let _ = writeln!(
            out,
            " parents={} children={}",
            fmt_ids(&l.parent_ids),
            fmt_ids(&l.child_ids)
        );
    }
    out
}
