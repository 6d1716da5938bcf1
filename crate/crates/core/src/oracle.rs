//! Dense reference executor for the IR semantics. Straight loops, f64
//! accumulation, rounded to f32 at layer boundaries. This is the golden
//! model every pass and the simulator are checked against; it knows nothing
//! about partitioning or hardware.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ir::{topo_layers, LayerIr, ModelIr};
use crate::matrix::Matrix;
use crate::model::{ActKind, ActParams, AggOp, LayerKind};
use std::collections::BTreeMap;

/// Output of one layer: per-vertex features or per-edge weights.
#[derive(Debug, Clone)]
pub enum LayerValue {
    Features(Matrix),
    EdgeWeights(Vec<f32>),
}

impl LayerValue {
    pub fn as_features(&self) -> Result<&Matrix> {
        match self {
            LayerValue::Features(m) => Ok(m),
            LayerValue::EdgeWeights(_) => {
                Err(Error::OracleBug("expected features, found edge weights".into()))
            }
        }
    }

    pub fn as_edge_weights(&self) -> Result<&[f32]> {
        match self {
            LayerValue::EdgeWeights(w) => Ok(w),
            LayerValue::Features(_) => {
                Err(Error::OracleBug("expected edge weights, found features".into()))
            }
        }
    }
}

/// All per-layer outputs of a model execution.
#[derive(Debug, Clone, Default)]
pub struct DenseState {
    pub outputs: BTreeMap<u32, LayerValue>,
}

pub fn apply_act(act: ActKind, params: &ActParams, x: f64) -> f64 {
    match act {
        ActKind::ReLU => x.max(0.0),
        ActKind::PReLU => {
            if x >= 0.0 {
                x
            } else {
                params.prelu_slope as f64 * x
            }
        }
        ActKind::Swish => {
            let b = params.swish_beta as f64;
            x / (1.0 + (-b * x).exp())
        }
        ActKind::Exp => x.exp(),
    }
}

fn input_features<'a>(
    ir: &ModelIr,
    layer: &LayerIr,
    state: &'a DenseState,
    graph: &'a Graph,
) -> Result<&'a Matrix> {
    match ir.feature_parent(layer.layer_id) {
        Some(p) => state
            .outputs
            .get(&p)
            .ok_or_else(|| Error::OracleBug(format!("parent {p} not yet executed")))?
            .as_features(),
        None => Ok(&graph.features),
    }
}

/// Edge weights seen by an Aggregate layer: either a weight-producing parent
/// (VectorInner chain) or the graph's own edge weights.
fn input_edge_weights(
    ir: &ModelIr,
    layer: &LayerIr,
    state: &DenseState,
    graph: &Graph,
) -> Result<Vec<f32>> {
    match ir.weight_parent(layer.layer_id) {
        Some(p) => Ok(state
            .outputs
            .get(&p)
            .ok_or_else(|| Error::OracleBug(format!("parent {p} not yet executed")))?
            .as_edge_weights()?
            .to_vec()),
        None => Ok(graph.edges.iter().map(|e| e.weight).collect()),
    }
}

/// Execute one layer, appending its output to the state.
pub fn exec_layer(ir: &ModelIr, layer: &LayerIr, state: &mut DenseState, graph: &Graph) -> Result<()> {
    let params = &ir.act_params;
    let value = match layer.layer_type {
        LayerKind::Aggregate => {
            let h = input_features(ir, layer, state, graph)?;
            if h.cols != layer.f_in as usize {
                return Err(Error::OracleBug(format!(
                    "layer {}: input has {} cols, f_in = {}",
                    layer.layer_id, h.cols, layer.f_in
                )));
            }
            let weights = input_edge_weights(ir, layer, state, graph)?;
            LayerValue::Features(aggregate(layer, graph, h, &weights, params))
        }
        LayerKind::Linear => {
            let h = input_features(ir, layer, state, graph)?;
            let lw = layer
                .weights
                .as_ref()
                .ok_or_else(|| Error::OracleBug("Linear without weights".into()))?;
            if h.cols != lw.w.rows {
                return Err(Error::OracleBug(format!(
                    "layer {}: shape mismatch {}x{} . {}x{}",
                    layer.layer_id, h.rows, h.cols, lw.w.rows, lw.w.cols
                )));
            }
            let mut out = Matrix::zeros(h.rows, lw.w.cols);
            for r in 0..h.rows {
                for c in 0..lw.w.cols {
                    let mut acc = 0f64;
                    for k in 0..h.cols {
                        acc += h.at(r, k) as f64 * lw.w.at(k, c) as f64;
                    }
                    if let Some(b) = &lw.bias {
                        acc += b[c] as f64;
                    }
                    if let Some(a) = layer.fused_act {
                        acc = apply_act(a, params, acc);
                    }
                    *out.at_mut(r, c) = acc as f32;
                }
            }
            LayerValue::Features(out)
        }
        LayerKind::VectorInner => {
            let h = input_features(ir, layer, state, graph)?;
            let mut out = Vec::with_capacity(graph.edges.len());
            for e in &graph.edges {
                let mut acc = 0f64;
                for k in 0..h.cols {
                    acc += h.at(e.src as usize, k) as f64 * h.at(e.dst as usize, k) as f64;
                }
                if let Some(a) = layer.fused_act {
                    acc = apply_act(a, params, acc);
                }
                out.push(acc as f32);
            }
            LayerValue::EdgeWeights(out)
        }
        LayerKind::VectorAdd => {
            let parents = &layer.parent_ids;
            if parents.len() != 2 {
                return Err(Error::OracleBug("VectorAdd needs two parents".into()));
            }
            let a = state.outputs[&parents[0]].as_features()?;
            let b = state.outputs[&parents[1]].as_features()?;
            if a.rows != b.rows || a.cols != b.cols {
                return Err(Error::OracleBug("VectorAdd shape mismatch".into()));
            }
            let mut out = Matrix::zeros(a.rows, a.cols);
            for i in 0..a.data.len() {
                let mut v = a.data[i] as f64 + b.data[i] as f64;
                if let Some(act) = layer.fused_act {
                    v = apply_act(act, params, v);
                }
                out.data[i] = v as f32;
            }
            LayerValue::Features(out)
        }
        LayerKind::Activation => {
            let act = layer
                .act
                .ok_or_else(|| Error::OracleBug("Activation without function".into()))?;
            let p = layer.parent_ids.first().copied();
            let on_weights = p.map(|p| ir.produces_edge_weights(p)).unwrap_or(false);
            if on_weights {
                let w = state.outputs[&p.unwrap()].as_edge_weights()?;
                LayerValue::EdgeWeights(
                    w.iter().map(|v| apply_act(act, params, *v as f64) as f32).collect(),
                )
            } else {
                let h = input_features(ir, layer, state, graph)?;
                let mut out = h.clone();
                for v in out.data.iter_mut() {
                    *v = apply_act(act, params, *v as f64) as f32;
                }
                LayerValue::Features(out)
            }
        }
        LayerKind::BatchNorm => {
            let bn = layer
                .bn
                .as_ref()
                .ok_or_else(|| Error::OracleBug("BatchNorm without params".into()))?;
            let h = input_features(ir, layer, state, graph)?;
            if h.cols != bn.mu.len() {
                return Err(Error::OracleBug("BatchNorm width mismatch".into()));
            }
            let (scale, shift) = bn.scale_shift();
            let mut out = h.clone();
            for r in 0..out.rows {
                for c in 0..out.cols {
                    let v = out.at(r, c) as f64 * scale[c] as f64 + shift[c] as f64;
                    *out.at_mut(r, c) = v as f32;
                }
            }
            LayerValue::Features(out)
        }
    };
    state.outputs.insert(layer.layer_id, value);
    Ok(())
}

/// Per-vertex reduction of weighted neighbor features. Rows with no incoming
/// updates become 0 regardless of the AggOp identity; Mean divides by the
/// in-degree and softmax normalization divides by the incoming weight sum.
fn aggregate(
    layer: &LayerIr,
    graph: &Graph,
    h: &Matrix,
    weights: &[f32],
    params: &ActParams,
) -> Matrix {
    let op = layer.agg_op.unwrap_or(AggOp::Sum);
    let nv = graph.num_vertices as usize;
    let f = h.cols;
    let init = match op {
        AggOp::Sum | AggOp::Mean => 0.0f64,
        AggOp::Max => f64::NEG_INFINITY,
        AggOp::Min => f64::INFINITY,
    };
    let mut acc = vec![init; nv * f];
    let mut touched = vec![false; nv];
    let mut wsum = vec![0f64; nv];
    for (e, w) in graph.edges.iter().zip(weights) {
        let w = *w as f64;
        touched[e.dst as usize] = true;
        wsum[e.dst as usize] += w;
        let src_row = h.row(e.src as usize);
        let dst = &mut acc[e.dst as usize * f..(e.dst as usize + 1) * f];
        match op {
            AggOp::Sum | AggOp::Mean => {
                for (d, s) in dst.iter_mut().zip(src_row) {
                    *d += w * *s as f64;
                }
            }
            AggOp::Max => {
                for (d, s) in dst.iter_mut().zip(src_row) {
                    *d = d.max(w * *s as f64);
                }
            }
            AggOp::Min => {
                for (d, s) in dst.iter_mut().zip(src_row) {
                    *d = d.min(w * *s as f64);
                }
            }
        }
    }
    let mut out = Matrix::zeros(nv, f);
    for v in 0..nv {
        for c in 0..f {
            let mut x = if touched[v] { acc[v * f + c] } else { 0.0 };
            if op == AggOp::Mean {
                let d = graph.degrees[v];
                x = if d == 0 { 0.0 } else { x / d as f64 };
            }
            if layer.weight_norm {
                x = if wsum[v] == 0.0 { 0.0 } else { x / wsum[v] };
            }
            if let Some(a) = layer.fused_act {
                x = apply_act(a, params, x);
            }
            *out.at_mut(v, c) = x as f32;
        }
    }
    out
}

/// Execute the whole model in topological order; returns the sink's output.
pub fn exec_model(ir: &ModelIr, graph: &Graph) -> Result<Matrix> {
    let state = exec_model_state(ir, graph)?;
    let sink = sink_layer(ir)?;
    state.outputs[&sink].as_features().cloned()
}

/// Execute and keep every layer's output (for per-layer divergence reports).
pub fn exec_model_state(ir: &ModelIr, graph: &Graph) -> Result<DenseState> {
    let mut state = DenseState::default();
    for id in topo_layers(ir)? {
        let layer = ir.layer(id).clone();
        exec_layer(ir, &layer, &mut state, graph)?;
    }
    Ok(state)
}

pub fn sink_layer(ir: &ModelIr) -> Result<u32> {
    ir.layers
        .values()
        .find(|l| l.child_ids.is_empty())
        .map(|l| l.layer_id)
        .ok_or_else(|| Error::InvalidModel("model has no sink".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_graph, DegreeModel, EdgeTriple};
    use crate::ir::build_ir;
    use crate::model::{parse_model, LinearWeights, ModelSpec};
    use std::path::Path;

    fn ring4(f: usize) -> Graph {
        let edges = vec![
            EdgeTriple { src: 0, dst: 1, weight: 1.0 },
            EdgeTriple { src: 1, dst: 2, weight: 1.0 },
            EdgeTriple { src: 2, dst: 3, weight: 1.0 },
            EdgeTriple { src: 3, dst: 0, weight: 1.0 },
        ];
        let mut feat = Matrix::zeros(4, f);
        for r in 0..4 {
            for c in 0..f {
                *feat.at_mut(r, c) = (r * f + c) as f32;
            }
        }
        Graph::new(4, edges, feat).unwrap()
    }

    fn spec(text: &str) -> ModelSpec {
        parse_model(text.as_bytes(), Path::new(".")).unwrap()
    }

    #[test]
    fn aggregate_on_ring_shifts_rows() {
        let g = ring4(3);
        let ir = build_ir(&spec("layer id=1 kind=Aggregate agg=Sum fin=3\n"), &g).unwrap();
        let out = exec_model(&ir, &g).unwrap();
        for v in 0..4usize {
            let pred = (v + 3) % 4;
            for c in 0..3 {
                assert_eq!(out.at(v, c), g.features.at(pred, c));
            }
        }
    }

    #[test]
    fn identity_linear_is_identity() {
        let g = ring4(3);
        let mut m = spec("layer id=1 kind=Linear fin=3 fout=3 winit=0\n");
        m.layers[0].weights = Some(LinearWeights { w: Matrix::identity(3), bias: None });
        let ir = build_ir(&m, &g).unwrap();
        let out = exec_model(&ir, &g).unwrap();
        assert_eq!(out, g.features);
    }

    #[test]
    fn vector_inner_dot_product() {
        let edges = vec![EdgeTriple { src: 0, dst: 1, weight: 1.0 }];
        let feat = Matrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let g = Graph::new(2, edges, feat).unwrap();
        let ir = build_ir(&spec("layer id=1 kind=VectorInner fin=2\n"), &g).unwrap();
        let mut state = DenseState::default();
        exec_layer(&ir, ir.layer(1), &mut state, &g).unwrap();
        assert_eq!(state.outputs[&1].as_edge_weights().unwrap(), &[11.0]);
    }

    #[test]
    fn zeros_propagate_through_gcn() {
        let mut g = gen_graph(16, 48, 8, 1, DegreeModel::Uniform, false).unwrap();
        g.features = Matrix::zeros(16, 8);
        let ir = build_ir(
            &spec(
                "layer id=1 kind=Aggregate agg=Sum fin=8 children=2\n\
                 layer id=2 kind=Linear fin=8 fout=4 winit=1 children=3\n\
                 layer id=3 kind=Activation act=ReLU fin=4\n",
            ),
            &g,
        )
        .unwrap();
        let out = exec_model(&ir, &g).unwrap();
        assert!(out.data.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn residual_is_elementwise_sum() {
        let g = gen_graph(12, 30, 6, 2, DegreeModel::Uniform, false).unwrap();
        let ir = build_ir(
            &spec(
                "layer id=1 kind=Linear fin=6 fout=6 winit=3 children=2,3\n\
                 layer id=2 kind=Activation act=ReLU fin=6 parents=1 children=3\n\
                 layer id=3 kind=VectorAdd fin=6 parents=1,2\n",
            ),
            &g,
        )
        .unwrap();
        let state = exec_model_state(&ir, &g).unwrap();
        let a = state.outputs[&1].as_features().unwrap();
        let b = state.outputs[&2].as_features().unwrap();
        let c = state.outputs[&3].as_features().unwrap();
        for i in 0..c.data.len() {
            assert!((c.data[i] - (a.data[i] + b.data[i])).abs() <= 1e-6);
        }
    }

    #[test]
    fn b1_shape_matches_hand_matrix_expression() {
        // Independent cross-check: straight matrix algebra with its own loops.
        let g = gen_graph(16, 40, 8, 5, DegreeModel::Uniform, false).unwrap();
        let w1 = crate::model::seeded_weights(8, 4, 11);
        let w2 = crate::model::seeded_weights(4, 3, 12);
        let mut m = spec(
            "layer id=1 kind=Aggregate agg=Sum fin=8 children=2\n\
             layer id=2 kind=Linear fin=8 fout=4 winit=0 children=3\n\
             layer id=3 kind=Activation act=ReLU fin=4 children=4\n\
             layer id=4 kind=Aggregate agg=Sum fin=4 children=5\n\
             layer id=5 kind=Linear fin=4 fout=3 winit=0\n",
        );
        m.layers[1].weights = Some(LinearWeights { w: w1.clone(), bias: None });
        m.layers[4].weights = Some(LinearWeights { w: w2.clone(), bias: None });
        let ir = build_ir(&m, &g).unwrap();
        let out = exec_model(&ir, &g).unwrap();

        // A^T X: m_i = sum over edges (u -> i) of w * x_u
        let spmm = |x: &Matrix| {
            let mut y = Matrix::zeros(16, x.cols);
            for e in &g.edges {
                for c in 0..x.cols {
                    *y.at_mut(e.dst as usize, c) += e.weight * x.at(e.src as usize, c);
                }
            }
            y
        };
        let matmul = |a: &Matrix, b: &Matrix| {
            let mut y = Matrix::zeros(a.rows, b.cols);
            for r in 0..a.rows {
                for c in 0..b.cols {
                    let mut acc = 0.0f32;
                    for k in 0..a.cols {
                        acc += a.at(r, k) * b.at(k, c);
                    }
                    *y.at_mut(r, c) = acc;
                }
            }
            y
        };
        let mut h = matmul(&spmm(&g.features), &w1);
        for v in h.data.iter_mut() {
            *v = v.max(0.0);
        }
        let expect = matmul(&spmm(&h), &w2);
        for i in 0..out.data.len() {
            let d = (out.data[i] - expect.data[i]).abs();
            assert!(d <= 1e-4 * expect.data[i].abs().max(1.0), "mismatch at {i}: {d}");
        }
    }

    #[test]
    fn mean_degree_zero_yields_zero() {
        let edges = vec![EdgeTriple { src: 0, dst: 1, weight: 2.0 }];
        let feat = Matrix::from_rows(vec![vec![3.0], vec![5.0]]);
        let g = Graph::new(2, edges, feat).unwrap();
        let ir = build_ir(&spec("layer id=1 kind=Aggregate agg=Mean fin=1\n"), &g).unwrap();
        let out = exec_model(&ir, &g).unwrap();
        assert_eq!(out.at(0, 0), 0.0); // no in-edges
        assert_eq!(out.at(1, 0), 6.0); // 2.0 * 3.0 / degree 1
    }

    #[test]
    fn max_with_no_edges_is_zero_not_neg_inf() {
        let g = Graph::new(2, vec![], Matrix::from_rows(vec![vec![1.0], vec![1.0]])).unwrap();
        let ir = build_ir(&spec("layer id=1 kind=Aggregate agg=Max fin=1\n"), &g).unwrap();
        let out = exec_model(&ir, &g).unwrap();
        assert_eq!(out.data, vec![0.0, 0.0]);
    }
}
