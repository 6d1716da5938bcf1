//! Input graph: COO edge list plus a dense feature matrix.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// One edge as stored in memory and in DDR: `(src, dst, weight)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeTriple {
    pub src: u32,
    pub dst: u32,
    pub weight: f32,
}

#[derive(Debug, Clone)]
pub struct Graph {
    pub num_vertices: u32,
    pub edges: Vec<EdgeTriple>,
    /// Dense |V| x f0 feature matrix.
    pub features: Matrix,
    /// In-degree: `degrees[i]` counts edges with `dst == i`.
    pub degrees: Vec<u32>,
}

impl Graph {
    pub fn new(num_vertices: u32, edges: Vec<EdgeTriple>, features: Matrix) -> Result<Graph> {
        if features.rows != num_vertices as usize {
            return Err(Error::MalformedGraph(format!(
                "feature matrix has {} rows, graph has {} vertices",
                features.rows, num_vertices
            )));
        }
        let mut degrees = vec![0u32; num_vertices as usize];
        for (idx, e) in edges.iter().enumerate() {
            if e.src >= num_vertices || e.dst >= num_vertices {
                return Err(Error::MalformedGraph(format!(
                    "edge #{idx} ({}, {}) out of range for |V| = {num_vertices}",
                    e.src, e.dst
                )));
            }
            degrees[e.dst as usize] += 1;
        }
        Ok(Graph {
            num_vertices,
            edges,
            features,
            degrees,
        })
    }

    pub fn num_edges(&self) -> u64 {
        self.edges.len() as u64
    }

    pub fn feature_dim(&self) -> u32 {
        self.features.cols as u32
    }

    /// Fold the GCN normalization `1/sqrt(D(src) * D(dst))` into the edge
    /// weights. Degrees of 0 are clamped to 1 so weights stay finite.
    pub fn apply_gcn_norm(&mut self) {
        let deg = &self.degrees;
        for e in &mut self.edges {
            let ds = deg[e.src as usize].max(1) as f64;
            let dd = deg[e.dst as usize].max(1) as f64;
            e.weight = (e.weight as f64 / (ds * dd).sqrt()) as f32;
        }
    }
}

/// Load a graph from an edge file and a feature file.
///
/// Edge file: one `src dst [weight]` per line, ASCII decimal, `#` comments.
/// Missing weights default to 1.0. Vertex count comes from the feature file.
pub fn load_graph(edge_path: &Path, feature_path: &Path) -> Result<Graph> {
    let features = Matrix::read_file(feature_path)?;
    let num_vertices = features.rows as u32;

    let f = std::fs::File::open(edge_path)?;
    let reader = BufReader::new(f);
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let src: u32 = parse_field(it.next(), edge_path, lineno, "src")?;
        let dst: u32 = parse_field(it.next(), edge_path, lineno, "dst")?;
        let weight: f32 = match it.next() {
            Some(tok) => tok.parse().map_err(|_| {
                Error::MalformedGraph(format!(
                    "{}:{}: bad weight `{tok}`",
                    edge_path.display(),
                    lineno + 1
                ))
            })?,
            None => 1.0,
        };
        if it.next().is_some() {
            return Err(Error::MalformedGraph(format!(
                "{}:{}: trailing tokens",
                edge_path.display(),
                lineno + 1
            )));
        }
        edges.push(EdgeTriple { src, dst, weight });
    }
    Graph::new(num_vertices, edges, features)
}

fn parse_field<T: std::str::FromStr>(
    tok: Option<&str>,
    path: &Path,
    lineno: usize,
    what: &str,
) -> Result<T> {
    let tok = tok.ok_or_else(|| {
        Error::MalformedGraph(format!("{}:{}: missing {what}", path.display(), lineno + 1))
    })?;
    tok.parse().map_err(|_| {
        Error::MalformedGraph(format!(
            "{}:{}: bad {what} `{tok}`",
            path.display(),
            lineno + 1
        ))
    })
}

pub fn write_edge_file(path: &Path, edges: &[EdgeTriple]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for e in edges {
        writeln!(f, "{} {} {}", e.src, e.dst, e.weight)?;
    }
    Ok(())
}

/// Degree-distribution model for synthetic graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeModel {
    Uniform,
    PowerLaw,
}

/// Generate a reproducible synthetic graph: `m` directed edges over `n`
/// vertices with standard-normal features scaled to +/-1.
pub fn gen_graph(
    n: u32,
    m: u64,
    feature_dim: u32,
    seed: u64,
    model: DegreeModel,
    self_loops: bool,
) -> Result<Graph> {
    if n == 0 {
        return Err(Error::MalformedGraph("cannot generate a 0-vertex graph".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m as usize);
    match model {
        DegreeModel::Uniform => {
            for _ in 0..m {
                let src = rng.gen_range(0..n);
                let dst = rng.gen_range(0..n);
                edges.push(EdgeTriple { src, dst, weight: 1.0 });
            }
        }
        DegreeModel::PowerLaw => {
            // Destination picked by inverse-CDF of a zipf-like law so a few
            // vertices collect most in-edges; sources stay uniform.
            let alpha = 1.2f64;
            let weights: Vec<f64> = (0..n).map(|i| 1.0 / ((i + 1) as f64).powf(alpha)).collect();
            let total: f64 = weights.iter().sum();
            for _ in 0..m {
                let src = rng.gen_range(0..n);
                let mut pick = rng.gen_range(0.0..total);
                let mut dst = n - 1;
                for (i, w) in weights.iter().enumerate() {
                    if pick < *w {
                        dst = i as u32;
                        break;
                    }
                    pick -= *w;
                }
                edges.push(EdgeTriple { src, dst, weight: 1.0 });
            }
        }
    }
    if self_loops {
        for v in 0..n {
            edges.push(EdgeTriple { src: v, dst: v, weight: 1.0 });
        }
    }
    let mut features = Matrix::zeros(n as usize, feature_dim as usize);
    for v in features.data.iter_mut() {
        *v = rng.gen_range(-1.0f32..1.0f32);
    }
    Graph::new(n, edges, features)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring4() -> Graph {
        let edges = vec![
            EdgeTriple { src: 0, dst: 1, weight: 1.0 },
            EdgeTriple { src: 1, dst: 2, weight: 1.0 },
            EdgeTriple { src: 2, dst: 3, weight: 1.0 },
            EdgeTriple { src: 3, dst: 0, weight: 1.0 },
        ];
        Graph::new(4, edges, Matrix::identity(4)).unwrap()
    }

    #[test]
    fn ring_degrees() {
        assert_eq!(ring4().degrees, vec![1, 1, 1, 1]);
    }

    #[test]
    fn load_graph_from_files() {
        let dir = tempfile::tempdir().unwrap();
        let ep = dir.path().join("g.edges");
        let fp = dir.path().join("g.feat");
        std::fs::write(&ep, "# ring\n0 1\n1 2 0.5\n2 3\n3 0\n").unwrap();
        std::fs::write(&fp, "4 2\n1 0\n0 1\n1 1\n0 0\n").unwrap();
        let g = load_graph(&ep, &fp).unwrap();
        assert_eq!(g.num_vertices, 4);
        assert_eq!(g.num_edges(), 4);
        assert_eq!(g.edges[1].weight, 0.5);
        assert_eq!(g.degrees, vec![1, 1, 1, 1]);
    }

    #[test]
    fn empty_edge_file_single_vertex() {
        let dir = tempfile::tempdir().unwrap();
        let ep = dir.path().join("g.edges");
        let fp = dir.path().join("g.feat");
        std::fs::write(&ep, "").unwrap();
        std::fs::write(&fp, "1 1\n0.25\n").unwrap();
        let g = load_graph(&ep, &fp).unwrap();
        assert_eq!(g.num_edges(), 0);
        assert_eq!(g.degrees, vec![0]);
    }

    #[test]
    fn out_of_range_edge_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let ep = dir.path().join("g.edges");
        let fp = dir.path().join("g.feat");
        std::fs::write(&ep, "0 7\n").unwrap();
        std::fs::write(&fp, "2 1\n0\n0\n").unwrap();
        assert!(matches!(load_graph(&ep, &fp), Err(Error::MalformedGraph(_))));
    }

    #[test]
    fn cora_shaped_generation() {
        let g = gen_graph(2708, 5429, 1433, 7, DegreeModel::Uniform, false).unwrap();
        assert_eq!(g.num_vertices, 2708);
        assert_eq!(g.num_edges(), 5429);
        assert_eq!(g.feature_dim(), 1433);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_graph(64, 512, 8, 7, DegreeModel::Uniform, false).unwrap();
        let b = gen_graph(64, 512, 8, 7, DegreeModel::Uniform, false).unwrap();
        assert_eq!(a.edges, b.edges);
        assert_eq!(a.features, b.features);
    }

    #[test]
    fn power_law_skews_in_degree() {
        let g = gen_graph(256, 4096, 4, 3, DegreeModel::PowerLaw, false).unwrap();
        let max = *g.degrees.iter().max().unwrap() as f64;
        let mean = g.num_edges() as f64 / g.num_vertices as f64;
        assert!(max > 4.0 * mean, "max {max} mean {mean}");
    }

    #[test]
    fn gcn_norm_scales_weights() {
        let mut g = ring4();
        g.apply_gcn_norm();
        for e in &g.edges {
            assert!((e.weight - 1.0).abs() < 1e-6); // all degrees are 1
        }
    }
}
