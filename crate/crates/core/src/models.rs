//! Programmatic model construction and the eight benchmark topologies
//! (b1-b8) used by the CLI presets and the verification suites.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{
    seeded_weights, ActKind, ActParams, AggOp, BatchNormParams, LayerKind, LayerSpec,
    LinearWeights, ModelSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Builds a ModelSpec layer by layer; children links are derived from the
/// parent links at build time.
pub struct ModelBuilder {
    name: String,
    layers: Vec<LayerSpec>,
    act_params: ActParams,
}

impl ModelBuilder {
    pub fn new(name: &str) -> Self {
        ModelBuilder {
            name: name.to_string(),
            layers: Vec::new(),
            act_params: ActParams::default(),
        }
    }

    fn push(&mut self, mut layer: LayerSpec) -> u32 {
        let id = self.layers.len() as u32 + 1;
        layer.id = id;
        self.layers.push(layer);
        id
    }

    fn blank(kind: LayerKind, f_in: u32, f_out: u32, parents: Vec<u32>) -> LayerSpec {
        LayerSpec {
            id: 0,
            kind,
            f_in,
            f_out,
            agg_op: None,
            weight_norm: false,
            act: None,
            bn: None,
            weights: None,
            parents,
            children: Vec::new(),
        }
    }

    pub fn aggregate(&mut self, op: AggOp, f: u32, parents: &[u32]) -> u32 {
        let mut l = Self::blank(LayerKind::Aggregate, f, f, parents.to_vec());
        l.agg_op = Some(op);
        self.push(l)
    }

    /// Aggregate whose rows are divided by the incoming weight sum
    /// (attention softmax denominator).
    pub fn aggregate_normalized(&mut self, op: AggOp, f: u32, parents: &[u32]) -> u32 {
        let mut l = Self::blank(LayerKind::Aggregate, f, f, parents.to_vec());
        l.agg_op = Some(op);
        l.weight_norm = true;
        self.push(l)
    }

    pub fn linear(&mut self, w: Matrix, bias: Option<Vec<f32>>, parents: &[u32]) -> u32 {
        let mut l = Self::blank(LayerKind::Linear, w.rows as u32, w.cols as u32, parents.to_vec());
        l.weights = Some(LinearWeights { w, bias });
        self.push(l)
    }

    pub fn linear_seeded(&mut self, f_in: u32, f_out: u32, seed: u64, parents: &[u32]) -> u32 {
        self.linear(seeded_weights(f_in as usize, f_out as usize, seed), None, parents)
    }

    pub fn activation(&mut self, act: ActKind, f: u32, parent: u32) -> u32 {
        let mut l = Self::blank(LayerKind::Activation, f, f, vec![parent]);
        l.act = Some(act);
        self.push(l)
    }

    pub fn vector_inner(&mut self, f: u32, parent: u32) -> u32 {
        self.push(Self::blank(LayerKind::VectorInner, f, f, vec![parent]))
    }

    pub fn vector_add(&mut self, f: u32, a: u32, b: u32) -> u32 {
        self.push(Self::blank(LayerKind::VectorAdd, f, f, vec![a, b]))
    }

    pub fn batch_norm(&mut self, bn: BatchNormParams, parents: &[u32]) -> u32 {
        let f = bn.mu.len() as u32;
        let mut l = Self::blank(LayerKind::BatchNorm, f, f, parents.to_vec());
        l.bn = Some(bn);
        self.push(l)
    }

    pub fn build(mut self) -> Result<ModelSpec> {
        for i in 0..self.layers.len() {
            let id = self.layers[i].id;
            let parents = self.layers[i].parents.clone();
            for p in parents {
                let idx = p as usize - 1;
                if idx >= self.layers.len() {
                    return Err(Error::InvalidModel(format!("layer {id}: unknown parent {p}")));
                }
                self.layers[idx].children.push(id);
            }
        }
        let spec = ModelSpec {
            name: self.name,
            layers: self.layers,
            act_params: self.act_params,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Seeded batch-norm parameters with well-conditioned sigma.
pub fn seeded_bn(f: u32, seed: u64) -> BatchNormParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = f as usize;
    BatchNormParams {
        mu: (0..f).map(|_| rng.gen_range(-0.5f32..0.5)).collect(),
        sigma: (0..f).map(|_| rng.gen_range(0.5f32..1.5)).collect(),
        eps: 1e-5,
        gamma: (0..f).map(|_| rng.gen_range(0.5f32..1.5)).collect(),
        beta: (0..f).map(|_| rng.gen_range(-0.5f32..0.5)).collect(),
    }
}

pub const PRESET_NAMES: [&str; 8] = ["b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8"];

/// Construct one of the benchmark model topologies with seeded weights.
///
/// b1/b2: 2-layer GCN (hidden 16 / 128). b3/b4: 2-layer GraphSAGE
/// (hidden 128 / 256). b5: 5-layer GIN (hidden 128). b6: 2-layer GAT
/// (hidden 64). b7: SGC with k=2. b8: GraphGym-style pre-MLP +
/// 3 residual GNN layers + post-MLP (hidden 256).
pub fn preset(name: &str, f0: u32, n_classes: u32, seed: u64) -> Result<ModelSpec> {
    match name {
        "b1" => gcn(f0, 16, n_classes, seed),
        "b2" => gcn(f0, 128, n_classes, seed),
        "b3" => sage(f0, 128, n_classes, seed),
        "b4" => sage(f0, 256, n_classes, seed),
        "b5" => gin(f0, 128, n_classes, 5, seed),
        "b6" => gat(f0, 64, n_classes, seed),
        "b7" => sgc(f0, n_classes, seed),
        "b8" => graphgym(f0, 256, n_classes, seed),
        other => Err(Error::InvalidModel(format!("unknown preset `{other}`"))),
    }
}

fn gcn(f0: u32, hidden: u32, out: u32, seed: u64) -> Result<ModelSpec> {
    let mut b = ModelBuilder::new("gcn");
    let a1 = b.aggregate(AggOp::Sum, f0, &[]);
    let l1 = b.linear_seeded(f0, hidden, seed, &[a1]);
    let r1 = b.activation(ActKind::ReLU, hidden, l1);
    let a2 = b.aggregate(AggOp::Sum, hidden, &[r1]);
    let _l2 = b.linear_seeded(hidden, out, seed + 1, &[a2]);
    b.build()
}

fn sage(f0: u32, hidden: u32, out: u32, seed: u64) -> Result<ModelSpec> {
    // Per layer: W1 h_self + W2 mean(neighbors), then ReLU on the hidden layer.
    let mut b = ModelBuilder::new("graphsage");
    let a1 = b.aggregate(AggOp::Mean, f0, &[]);
    let ln1 = b.linear_seeded(f0, hidden, seed, &[a1]);
    let ls1 = b.linear_seeded(f0, hidden, seed + 1, &[]);
    let add1 = b.vector_add(hidden, ln1, ls1);
    let r1 = b.activation(ActKind::ReLU, hidden, add1);
    let a2 = b.aggregate(AggOp::Mean, hidden, &[r1]);
    let ln2 = b.linear_seeded(hidden, out, seed + 2, &[a2]);
    let ls2 = b.linear_seeded(hidden, out, seed + 3, &[r1]);
    let _add2 = b.vector_add(out, ln2, ls2);
    b.build()
}

fn gin(f0: u32, hidden: u32, out: u32, layers: u32, seed: u64) -> Result<ModelSpec> {
    // Per layer: MLP((1 + eps) h + sum(neighbors)); the self scale is a
    // diagonal Linear so the residual add has two layer inputs.
    let eps = 0.1f32;
    let mut b = ModelBuilder::new("gin");
    let mut prev: Option<u32> = None;
    let mut f = f0;
    for i in 0..layers {
        let parents: Vec<u32> = prev.into_iter().collect();
        let a = b.aggregate(AggOp::Sum, f, &parents);
        let mut diag = Matrix::zeros(f as usize, f as usize);
        for d in 0..f as usize {
            *diag.at_mut(d, d) = 1.0 + eps;
        }
        let s = b.linear(diag, None, &parents);
        let add = b.vector_add(f, a, s);
        let next_f = if i + 1 == layers { out } else { hidden };
        let l = b.linear_seeded(f, next_f, seed + i as u64, &[add]);
        let act = b.activation(ActKind::ReLU, next_f, l);
        prev = Some(act);
        f = next_f;
    }
    b.build()
}

fn gat(f0: u32, hidden: u32, out: u32, seed: u64) -> Result<ModelSpec> {
    let mut b = ModelBuilder::new("gat");
    let mut gat_layer = |b: &mut ModelBuilder, f_in: u32, f_out: u32, parent: &[u32], s: u64| {
        let t = b.linear_seeded(f_in, f_out, s, parent);
        let vi = b.vector_inner(f_out, t);
        let e = b.activation(ActKind::Exp, f_out, vi);
        b.aggregate_normalized(AggOp::Sum, f_out, &[t, e])
    };
    let a1 = gat_layer(&mut b, f0, hidden, &[], seed);
    let p1 = b.activation(ActKind::PReLU, hidden, a1);
    let _a2 = gat_layer(&mut b, hidden, out, &[p1], seed + 1);
    b.build()
}

fn sgc(f0: u32, out: u32, seed: u64) -> Result<ModelSpec> {
    let mut b = ModelBuilder::new("sgc");
    let a1 = b.aggregate(AggOp::Sum, f0, &[]);
    let a2 = b.aggregate(AggOp::Sum, f0, &[a1]);
    let _l = b.linear_seeded(f0, out, seed, &[a2]);
    b.build()
}

fn graphgym(f0: u32, hidden: u32, out: u32, seed: u64) -> Result<ModelSpec> {
    let mut b = ModelBuilder::new("graphgym");
    let pre = b.linear_seeded(f0, hidden, seed, &[]);
    let mut prev = b.activation(ActKind::ReLU, hidden, pre);
    for i in 0..3u64 {
        let a = b.aggregate(AggOp::Sum, hidden, &[prev]);
        let l = b.linear_seeded(hidden, hidden, seed + 10 + i, &[a]);
        let bn = b.batch_norm(seeded_bn(hidden, seed + 20 + i), &[l]);
        let act = b.activation(ActKind::ReLU, hidden, bn);
        prev = b.vector_add(hidden, act, prev);
    }
    let _post = b.linear_seeded(hidden, out, seed + 30, &[prev]);
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_graph, DegreeModel};
    use crate::ir::build_ir;
    use crate::oracle::exec_model;

    #[test]
    fn all_presets_build_and_execute() {
        let g = gen_graph(24, 96, 12, 1, DegreeModel::Uniform, false).unwrap();
        for name in PRESET_NAMES {
            let m = preset(name, 12, 5, 7).unwrap();
            let ir = build_ir(&m, &g).unwrap();
            let out = exec_model(&ir, &g).unwrap();
            assert_eq!(out.rows, 24, "{name}");
            assert_eq!(out.cols, 5, "{name}");
            assert!(out.data.iter().all(|v| v.is_finite()), "{name}");
        }
    }

    #[test]
    fn b5_has_five_gin_blocks() {
        let m = preset("b5", 8, 4, 0).unwrap();
        let aggs = m.layers.iter().filter(|l| l.kind == LayerKind::Aggregate).count();
        assert_eq!(aggs, 5);
    }

    #[test]
    fn b6_contains_vector_inner_chain() {
        let m = preset("b6", 8, 4, 0).unwrap();
        assert!(m.layers.iter().any(|l| l.kind == LayerKind::VectorInner));
        assert!(m.layers.iter().any(|l| l.weight_norm));
    }
}
