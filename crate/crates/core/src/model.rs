//! Declarative GNN model specification: parsing, validation, construction.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerKind {
    Aggregate,
    Linear,
    VectorInner,
    VectorAdd,
    Activation,
    BatchNorm,
}

impl LayerKind {
    /// Numeric encoding used by the IR table and the binary layer table.
    pub fn code(self) -> u8 {
        match self {
            LayerKind::Aggregate => 0,
            LayerKind::Linear => 1,
            LayerKind::VectorInner => 2,
            LayerKind::VectorAdd => 3,
            LayerKind::Activation => 4,
            LayerKind::BatchNorm => 5,
        }
    }

    pub fn from_code(c: u8) -> Option<LayerKind> {
        Some(match c {
            0 => LayerKind::Aggregate,
            1 => LayerKind::Linear,
            2 => LayerKind::VectorInner,
            3 => LayerKind::VectorAdd,
            4 => LayerKind::Activation,
            5 => LayerKind::BatchNorm,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            LayerKind::Aggregate => "Aggregate",
            LayerKind::Linear => "Linear",
            LayerKind::VectorInner => "VectorInner",
            LayerKind::VectorAdd => "VectorAdd",
            LayerKind::Activation => "Activation",
            LayerKind::BatchNorm => "BatchNorm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggOp {
    Max,
    Sum,
    Min,
    Mean,
}

impl AggOp {
    pub fn code(self) -> u8 {
        match self {
            AggOp::Max => 0,
            AggOp::Sum => 1,
            AggOp::Min => 2,
            AggOp::Mean => 3,
        }
    }

    pub fn from_code(c: u8) -> Option<AggOp> {
        Some(match c {
            0 => AggOp::Max,
            1 => AggOp::Sum,
            2 => AggOp::Min,
            3 => AggOp::Mean,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            AggOp::Max => "Max",
            AggOp::Sum => "Sum",
            AggOp::Min => "Min",
            AggOp::Mean => "Mean",
        }
    }

    /// Linearity in the sense of the order-exchange rule: Sum distributes
    /// over the weight multiply. Mean is degree-normalized Sum with static
    /// degrees, so the scaling commutes with W; callers may opt out.
    pub fn is_linear(self, mean_is_linear: bool) -> bool {
        match self {
            AggOp::Sum => true,
            AggOp::Mean => mean_is_linear,
            AggOp::Max | AggOp::Min => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActKind {
    ReLU,
    PReLU,
    Swish,
    Exp,
}

impl ActKind {
    pub fn code(self) -> u8 {
        match self {
            ActKind::ReLU => 0,
            ActKind::PReLU => 1,
            ActKind::Swish => 2,
            ActKind::Exp => 3,
        }
    }

    pub fn from_code(c: u8) -> Option<ActKind> {
        Some(match c {
            0 => ActKind::ReLU,
            1 => ActKind::PReLU,
            2 => ActKind::Swish,
            3 => ActKind::Exp,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ActKind::ReLU => "ReLU",
            ActKind::PReLU => "PReLU",
            ActKind::Swish => "Swish",
            ActKind::Exp => "Exp",
        }
    }
}

/// Model-level activation constants (PReLU slope, Swish beta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActParams {
    pub prelu_slope: f32,
    pub swish_beta: f32,
}

impl Default for ActParams {
    fn default() -> Self {
        ActParams { prelu_slope: 0.01, swish_beta: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchNormParams {
    pub mu: Vec<f32>,
    pub sigma: Vec<f32>,
    pub eps: f32,
    pub gamma: Vec<f32>,
    pub beta: Vec<f32>,
}

impl BatchNormParams {
    pub fn identity(f: usize) -> Self {
        BatchNormParams {
            mu: vec![0.0; f],
            sigma: vec![1.0; f],
            eps: 0.0,
            gamma: vec![1.0; f],
            beta: vec![0.0; f],
        }
    }

    /// Per-feature affine form: `y = x * scale + shift`.
    pub fn scale_shift(&self) -> (Vec<f32>, Vec<f32>) {
        let mut scale = Vec::with_capacity(self.mu.len());
        let mut shift = Vec::with_capacity(self.mu.len());
        for i in 0..self.mu.len() {
            let s = self.gamma[i] as f64 / ((self.sigma[i] as f64).powi(2) + self.eps as f64).sqrt();
            scale.push(s as f32);
            shift.push((self.beta[i] as f64 - self.mu[i] as f64 * s) as f32);
        }
        (scale, shift)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearWeights {
    /// f_in x f_out.
    pub w: Matrix,
    pub bias: Option<Vec<f32>>,
}

#[derive(Debug, Clone)]
pub struct LayerSpec {
    pub id: u32,
    pub kind: LayerKind,
    pub f_in: u32,
    pub f_out: u32,
    pub agg_op: Option<AggOp>,
    /// Divide each aggregated row by the sum of incoming edge weights
    /// (softmax-style attention denominator).
    pub weight_norm: bool,
    pub act: Option<ActKind>,
    pub bn: Option<BatchNormParams>,
    pub weights: Option<LinearWeights>,
    pub parents: Vec<u32>,
    pub children: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub name: String,
    pub layers: Vec<LayerSpec>,
    pub act_params: ActParams,
}

impl ModelSpec {
    pub fn layer(&self, id: u32) -> Option<&LayerSpec> {
        self.layers.iter().find(|l| l.id == id)
    }

    /// Validate ids, linkage symmetry, acyclicity, single sink, dimension
    /// chain and kind-specific constraints.
    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::InvalidModel("model has no layers".into()));
        }
        let n = self.layers.len() as u32;
        let mut by_id: BTreeMap<u32, &LayerSpec> = BTreeMap::new();
        for l in &self.layers {
            if l.id == 0 || l.id > n {
                return Err(Error::InvalidModel(format!(
                    "layer ids must be dense 1..={n}, found {}",
                    l.id
                )));
            }
            if by_id.insert(l.id, l).is_some() {
                return Err(Error::InvalidModel(format!("duplicate layer id {}", l.id)));
            }
        }
        for l in &self.layers {
            for p in &l.parents {
                let pl = by_id
                    .get(p)
                    .ok_or_else(|| Error::InvalidModel(format!("layer {}: unknown parent {p}", l.id)))?;
                if !pl.children.contains(&l.id) {
                    return Err(Error::InvalidModel(format!(
                        "asymmetric link: {} lists parent {p} but {p} does not list child {}",
                        l.id, l.id
                    )));
                }
            }
            for c in &l.children {
                let cl = by_id
                    .get(c)
                    .ok_or_else(|| Error::InvalidModel(format!("layer {}: unknown child {c}", l.id)))?;
                if !cl.parents.contains(&l.id) {
                    return Err(Error::InvalidModel(format!(
                        "asymmetric link: {} lists child {c} but {c} does not list parent {}",
                        l.id, l.id
                    )));
                }
            }
        }

        // Acyclic with a single sink.
        let order = toposort(&by_id)?;
        let sinks: Vec<u32> = self
            .layers
            .iter()
            .filter(|l| l.children.is_empty())
            .map(|l| l.id)
            .collect();
        if sinks.len() != 1 {
            return Err(Error::InvalidModel(format!(
                "model must have exactly one sink layer, found {sinks:?}"
            )));
        }
        debug_assert_eq!(order.len(), self.layers.len());

        for l in &self.layers {
            self.validate_layer(l, &by_id)?;
        }
        Ok(())
    }

    fn validate_layer(&self, l: &LayerSpec, by_id: &BTreeMap<u32, &LayerSpec>) -> Result<()> {
        let feature_parents: Vec<&LayerSpec> = l
            .parents
            .iter()
            .map(|p| *by_id.get(p).unwrap())
            .filter(|p| !produces_edge_weights(p, by_id))
            .collect();
        let weight_parents: Vec<&LayerSpec> = l
            .parents
            .iter()
            .map(|p| *by_id.get(p).unwrap())
            .filter(|p| produces_edge_weights(p, by_id))
            .collect();
        let err = |msg: String| Err(Error::InvalidModel(format!("layer {}: {msg}", l.id)));

        match l.kind {
            LayerKind::Aggregate => {
                if l.f_in != l.f_out {
                    return err(format!("Aggregate requires f_in = f_out, got {} != {}", l.f_in, l.f_out));
                }
                if l.agg_op.is_none() {
                    return err("Aggregate requires agg=".into());
                }
                if feature_parents.len() > 1 || weight_parents.len() > 1 {
                    return err("Aggregate takes at most one feature parent and one edge-weight parent".into());
                }
            }
            LayerKind::Linear => {
                let w = l
                    .weights
                    .as_ref()
                    .ok_or_else(|| Error::InvalidModel(format!("layer {}: Linear requires weights", l.id)))?;
                if w.w.rows != l.f_in as usize || w.w.cols != l.f_out as usize {
                    return err(format!(
                        "weight shape {}x{} does not match f_in x f_out = {}x{}",
                        w.w.rows, w.w.cols, l.f_in, l.f_out
                    ));
                }
                if let Some(b) = &w.bias {
                    if b.len() != l.f_out as usize {
                        return err(format!("bias length {} != f_out {}", b.len(), l.f_out));
                    }
                }
                if feature_parents.len() > 1 || !weight_parents.is_empty() {
                    return err("Linear takes exactly one feature input".into());
                }
            }
            LayerKind::VectorInner => {
                if feature_parents.len() > 1 || !weight_parents.is_empty() {
                    return err("VectorInner takes exactly one feature input".into());
                }
            }
            LayerKind::VectorAdd => {
                if l.parents.len() != 2 || feature_parents.len() != 2 {
                    return err("VectorAdd requires exactly two feature parents".into());
                }
                if feature_parents[0].f_out != feature_parents[1].f_out {
                    return err("VectorAdd parents disagree on dimension".into());
                }
            }
            LayerKind::Activation => {
                if l.act.is_none() {
                    return err("Activation requires act=".into());
                }
                if l.parents.len() > 1 {
                    return err("Activation takes one input".into());
                }
            }
            LayerKind::BatchNorm => {
                let bn = l
                    .bn
                    .as_ref()
                    .ok_or_else(|| Error::InvalidModel(format!("layer {}: BatchNorm requires bn params", l.id)))?;
                let f = l.f_in as usize;
                if bn.mu.len() != f || bn.sigma.len() != f || bn.gamma.len() != f || bn.beta.len() != f {
                    return err("bn vector lengths must equal f_in".into());
                }
                if feature_parents.len() > 1 || !weight_parents.is_empty() {
                    return err("BatchNorm takes one feature input".into());
                }
            }
        }

        // Dimension chain: every feature parent must feed f_in.
        for p in &feature_parents {
            if p.f_out != l.f_in {
                return err(format!(
                    "f_in {} does not match parent {} f_out {}",
                    l.f_in, p.id, p.f_out
                ));
            }
        }
        if l.kind != LayerKind::Linear && l.kind != LayerKind::VectorInner && l.f_in != l.f_out {
            return err(format!("{} requires f_in = f_out", l.kind.name()));
        }
        Ok(())
    }
}

/// Whether a layer's output is per-edge weights rather than per-vertex
/// features (VectorInner, and anything elementwise applied to it).
pub fn produces_edge_weights(l: &LayerSpec, by_id: &BTreeMap<u32, &LayerSpec>) -> bool {
    match l.kind {
        LayerKind::VectorInner => true,
        LayerKind::Activation | LayerKind::BatchNorm => l
            .parents
            .first()
            .and_then(|p| by_id.get(p))
            .map(|p| produces_edge_weights(p, by_id))
            .unwrap_or(false),
        _ => false,
    }
}

fn toposort(by_id: &BTreeMap<u32, &LayerSpec>) -> Result<Vec<u32>> {
    let mut indeg: BTreeMap<u32, usize> = by_id.keys().map(|id| (*id, 0)).collect();
    for l in by_id.values() {
        for c in &l.children {
            *indeg.get_mut(c).unwrap() += 1;
        }
    }
    let mut ready: BTreeSet<u32> = indeg
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(id, _)| *id)
        .collect();
    let mut order = Vec::new();
    while let Some(id) = ready.iter().next().copied() {
        ready.remove(&id);
        order.push(id);
        for c in &by_id[&id].children {
            let d = indeg.get_mut(c).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.insert(*c);
            }
        }
    }
    if order.len() != by_id.len() {
        return Err(Error::InvalidModel("layer graph has a cycle".into()));
    }
    Ok(order)
}

/// Parse the line-oriented model spec format. One record per line:
///
/// ```text
/// model name=gcn
/// layer id=1 kind=Aggregate agg=Sum fin=1433 fout=1433 children=2
/// layer id=2 kind=Linear fin=1433 fout=16 weights=w1.mat children=3
/// ```
///
/// Lists are comma separated. Linear layers take `weights=PATH` (+ optional
/// `bias=PATH`) or `winit=SEED` for seeded random weights. BatchNorm layers
/// take `bn=PATH` (a 4 x f matrix: mu, sigma, gamma, beta rows) and `eps=`.
/// If only `children=` is given, parent links are derived, and vice versa.
pub fn load_model(path: &Path) -> Result<ModelSpec> {
    let f = std::fs::File::open(path)?;
    let dir = path.parent().map(|p| p.to_path_buf()).unwrap_or_default();
    parse_model(std::io::BufReader::new(f), &dir)
}

pub fn parse_model<R: BufRead>(reader: R, dir: &Path) -> Result<ModelSpec> {
    let mut name = "model".to_string();
    let mut act_params = ActParams::default();
    let mut layers: Vec<LayerSpec> = Vec::new();

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let record = toks.next().unwrap();
        let kv: BTreeMap<&str, &str> = toks
            .map(|t| {
                t.split_once('=').ok_or_else(|| {
                    Error::InvalidModel(format!("line {}: expected key=value, got `{t}`", lineno + 1))
                })
            })
            .collect::<Result<_>>()?;
        match record {
            "model" => {
                if let Some(v) = kv.get("name") {
                    name = v.to_string();
                }
                if let Some(v) = kv.get("prelu_slope") {
                    act_params.prelu_slope = parse_num(v, lineno)?;
                }
                if let Some(v) = kv.get("swish_beta") {
                    act_params.swish_beta = parse_num(v, lineno)?;
                }
            }
            "layer" => layers.push(parse_layer(&kv, dir, lineno)?),
            other => {
                return Err(Error::InvalidModel(format!(
                    "line {}: unknown record `{other}`",
                    lineno + 1
                )))
            }
        }
    }

    link_layers(&mut layers)?;
    let spec = ModelSpec { name, layers, act_params };
    spec.validate()?;
    Ok(spec)
}

fn parse_num<T: std::str::FromStr>(v: &str, lineno: usize) -> Result<T> {
    v.parse()
        .map_err(|_| Error::InvalidModel(format!("line {}: bad number `{v}`", lineno + 1)))
}

fn parse_id_list(v: &str, lineno: usize) -> Result<Vec<u32>> {
    if v.is_empty() || v == "none" {
        return Ok(Vec::new());
    }
    v.split(',').map(|t| parse_num(t, lineno)).collect()
}

fn parse_layer(kv: &BTreeMap<&str, &str>, dir: &Path, lineno: usize) -> Result<LayerSpec> {
    let get = |k: &str| -> Result<&str> {
        kv.get(k)
            .copied()
            .ok_or_else(|| Error::InvalidModel(format!("line {}: layer missing {k}=", lineno + 1)))
    };
    let id: u32 = parse_num(get("id")?, lineno)?;
    let kind = match get("kind")? {
        "Aggregate" => LayerKind::Aggregate,
        "Linear" => LayerKind::Linear,
        "VectorInner" => LayerKind::VectorInner,
        "VectorAdd" => LayerKind::VectorAdd,
        "Activation" => LayerKind::Activation,
        "BatchNorm" => LayerKind::BatchNorm,
        k => {
            return Err(Error::InvalidModel(format!(
                "line {}: unknown layer kind `{k}`",
                lineno + 1
            )))
        }
    };
    let f_in: u32 = parse_num(get("fin")?, lineno)?;
    let f_out: u32 = match kv.get("fout") {
        Some(v) => parse_num(v, lineno)?,
        None => f_in,
    };
    let agg_op = match kv.get("agg") {
        Some(&"Max") => Some(AggOp::Max),
        Some(&"Sum") => Some(AggOp::Sum),
        Some(&"Min") => Some(AggOp::Min),
        Some(&"Mean") => Some(AggOp::Mean),
        Some(v) => {
            return Err(Error::InvalidModel(format!(
                "line {}: unknown agg `{v}`",
                lineno + 1
            )))
        }
        None => None,
    };
    let act = match kv.get("act") {
        Some(&"ReLU") => Some(ActKind::ReLU),
        Some(&"PReLU") => Some(ActKind::PReLU),
        Some(&"Swish") => Some(ActKind::Swish),
        Some(&"Exp") => Some(ActKind::Exp),
        Some(v) => {
            return Err(Error::InvalidModel(format!(
                "line {}: unknown act `{v}`",
                lineno + 1
            )))
        }
        None => None,
    };
    let weight_norm = matches!(kv.get("norm"), Some(&"softmax"));

    let mut weights = None;
    if kind == LayerKind::Linear {
        let w = if let Some(p) = kv.get("weights") {
            Matrix::read_file(&dir.join(p))?
        } else if let Some(seed) = kv.get("winit") {
            let seed: u64 = parse_num(seed, lineno)?;
            seeded_weights(f_in as usize, f_out as usize, seed)
        } else {
            return Err(Error::InvalidModel(format!(
                "line {}: Linear layer needs weights= or winit=",
                lineno + 1
            )));
        };
        let bias = match kv.get("bias") {
            Some(p) => {
                let m = Matrix::read_file(&dir.join(p))?;
                if m.rows != 1 {
                    return Err(Error::InvalidModel(format!(
                        "line {}: bias file must be a 1-row matrix",
                        lineno + 1
                    )));
                }
                Some(m.data)
            }
            None => None,
        };
        weights = Some(LinearWeights { w, bias });
    }

    let mut bn = None;
    if kind == LayerKind::BatchNorm {
        let eps: f32 = match kv.get("eps") {
            Some(v) => parse_num(v, lineno)?,
            None => 1e-5,
        };
        let m = match kv.get("bn") {
            Some(p) => Matrix::read_file(&dir.join(p))?,
            None => {
                return Err(Error::InvalidModel(format!(
                    "line {}: BatchNorm layer needs bn=PATH",
                    lineno + 1
                )))
            }
        };
        if m.rows != 4 || m.cols != f_in as usize {
            return Err(Error::InvalidModel(format!(
                "line {}: bn file must be 4 x f_in (mu, sigma, gamma, beta rows)",
                lineno + 1
            )));
        }
        bn = Some(BatchNormParams {
            mu: m.row(0).to_vec(),
            sigma: m.row(1).to_vec(),
            eps,
            gamma: m.row(2).to_vec(),
            beta: m.row(3).to_vec(),
        });
    }

    let parents = match kv.get("parents") {
        Some(v) => parse_id_list(v, lineno)?,
        None => Vec::new(),
    };
    let children = match kv.get("children") {
        Some(v) => parse_id_list(v, lineno)?,
        None => Vec::new(),
    };

    Ok(LayerSpec {
        id,
        kind,
        f_in,
        f_out,
        agg_op,
        weight_norm,
        act,
        bn,
        weights,
        parents,
        children,
    })
}

/// Xavier-uniform style seeded init, reproducible across runs.
pub fn seeded_weights(f_in: usize, f_out: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = (6.0 / (f_in + f_out) as f64).sqrt() as f32;
    let mut m = Matrix::zeros(f_in, f_out);
    for v in m.data.iter_mut() {
        *v = rng.gen_range(-bound..bound);
    }
    m
}

/// Fill in whichever of parents/children was omitted and check agreement.
fn link_layers(layers: &mut [LayerSpec]) -> Result<()> {
    let mut derived_parents: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut derived_children: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for l in layers.iter() {
        for c in &l.children {
            derived_parents.entry(*c).or_default().push(l.id);
        }
        for p in &l.parents {
            derived_children.entry(*p).or_default().push(l.id);
        }
    }
    for l in layers.iter_mut() {
        if l.parents.is_empty() {
            if let Some(p) = derived_parents.get(&l.id) {
                l.parents = p.clone();
            }
        }
        if l.children.is_empty() {
            if let Some(c) = derived_children.get(&l.id) {
                let mut c = c.clone();
                for existing in &l.children {
                    if !c.contains(existing) {
                        c.push(*existing);
                    }
                }
                l.children = c;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<ModelSpec> {
        parse_model(s.as_bytes(), Path::new("."))
    }

    #[test]
    fn two_layer_gcn_parses() {
        let spec = parse(
            "model name=gcn-b1\n\
             layer id=1 kind=Aggregate agg=Sum fin=1433 children=2\n\
             layer id=2 kind=Linear fin=1433 fout=16 winit=1 children=3\n\
             layer id=3 kind=Activation act=ReLU fin=16 children=4\n\
             layer id=4 kind=Aggregate agg=Sum fin=16 children=5\n\
             layer id=5 kind=Linear fin=16 fout=7 winit=2\n",
        )
        .unwrap();
        assert_eq!(spec.layers.len(), 5);
        assert_eq!(spec.layer(3).unwrap().parents, vec![2]);
        assert_eq!(spec.layer(1).unwrap().kind, LayerKind::Aggregate);
    }

    #[test]
    fn single_linear_layer() {
        let spec = parse("layer id=1 kind=Linear fin=8 fout=8 winit=0\n").unwrap();
        assert_eq!(spec.layers.len(), 1);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let r = parse(
            "layer id=1 kind=Linear fin=8 fout=16 winit=0 children=2\n\
             layer id=2 kind=Linear fin=32 fout=8 winit=1\n",
        );
        assert!(matches!(r, Err(Error::InvalidModel(_))), "{r:?}");
    }

    #[test]
    fn unknown_kind_rejected() {
        assert!(matches!(
            parse("layer id=1 kind=Conv fin=8\n"),
            Err(Error::InvalidModel(_))
        ));
    }

    #[test]
    fn cycle_rejected() {
        let r = parse(
            "layer id=1 kind=Aggregate agg=Sum fin=8 parents=2 children=2\n\
             layer id=2 kind=Aggregate agg=Sum fin=8 parents=1 children=1\n",
        );
        assert!(matches!(r, Err(Error::InvalidModel(_))));
    }

    #[test]
    fn aggregate_dim_invariant() {
        let r = parse("layer id=1 kind=Aggregate agg=Sum fin=8 fout=4\n");
        assert!(matches!(r, Err(Error::InvalidModel(_))));
    }

    #[test]
    fn two_sinks_rejected() {
        let r = parse(
            "layer id=1 kind=Aggregate agg=Sum fin=8 children=2,3\n\
             layer id=2 kind=Aggregate agg=Sum fin=8 parents=1\n\
             layer id=3 kind=Aggregate agg=Sum fin=8 parents=1\n",
        );
        assert!(matches!(r, Err(Error::InvalidModel(_))));
    }
}
