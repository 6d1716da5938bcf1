//! Fiber-Shard data partitioning, the DDR address map, and the
//! partition-centric loop nests consumed by code generation.
//!
//! The adjacency matrix is split into shards of `n1` rows (by destination),
//! each shard into subshards of `n1` columns (by source); subshard (i, j)
//! holds exactly the edges with dst in block i and src in block j, stored
//! contiguously. Feature matrices are split into fibers of `n2` columns and
//! subfibers of `n1` rows. One (n1, n2) configuration applies to every
//! layer, so the output tiling of a layer is the input tiling of the next.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hw::HardwareParams;
use crate::ir::{topo_layers, LayerIr, ModelIr};
use crate::model::LayerKind;
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const EDGE_BYTES: u64 = 12;
pub const DDR_ALIGN: u64 = 64;

pub fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

pub fn align_up(x: u64, a: u64) -> u64 {
    ceil_div(x, a) * a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionConfig {
    /// Rows per shard and rows per subfiber.
    pub n1: u32,
    /// Columns per fiber.
    pub n2: u32,
}

impl PartitionConfig {
    pub fn row_blocks(&self, nv: u32) -> u32 {
        ceil_div(nv as u64, self.n1 as u64) as u32
    }

    pub fn fibers(&self, f: u32) -> u32 {
        ceil_div(f as u64, self.n2 as u64) as u32
    }

    /// Bytes of one zero-padded feature tile (n1 x n2 f32), 64-byte aligned.
    pub fn tile_bytes(&self) -> u64 {
        align_up(self.n1 as u64 * self.n2 as u64 * 4, DDR_ALIGN)
    }
}

/// Pick (n1, n2): n2 is the feature-buffer width; n1 is the largest multiple
/// of p_sys that fits the feature-buffer depth, capped at |V| rounded up to
/// a multiple of p_sys.
pub fn choose_config(nv: u32, hw: &HardwareParams) -> Result<PartitionConfig> {
    hw.validate()?;
    if nv == 0 {
        return Err(Error::EmptyGraph);
    }
    let p = hw.p_sys as u64;
    let buffer_cap = hw.n_f1 as u64 / p * p;
    if buffer_cap == 0 {
        return Err(Error::InvalidModel(format!(
            "feature buffer depth {} is smaller than p_sys {}",
            hw.n_f1, hw.p_sys
        )));
    }
    let graph_cap = align_up(nv as u64, p);
    let n1 = buffer_cap.min(graph_cap) as u32;
    Ok(PartitionConfig { n1, n2: hw.n_f2 })
}

/// What a DDR region holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RegionKind {
    /// Base-graph adjacency: subshards of (src, dst, weight) triples.
    AdjBase,
    /// Adjacency rewritten by an edge-weight-producing layer; same subshard
    /// geometry as AdjBase.
    AdjOut(u32),
    /// Tiled input feature matrix of the whole model.
    InputFeatures,
    /// Tiled output feature matrix of a layer.
    OutFeatures(u32),
    /// Column-panel-major weight matrix of a Linear layer.
    Weights(u32),
    /// Per-output-feature bias of a Linear layer, padded per fiber.
    Bias(u32),
    /// Scale/shift rows of a standalone BatchNorm layer.
    BnScaleShift(u32),
    /// Per-vertex in-degree as f32, padded per row block.
    Degrees,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub kind: RegionKind,
    pub addr: u64,
    pub bytes: u64,
}

/// A feature matrix reference: the model input or a layer's output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerRef {
    Input,
    Layer(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubShard {
    /// Byte offset inside an adjacency region.
    pub offset: u64,
    pub edge_count: u32,
}

/// Partition plan: subshard geometry, permuted edge order, and the DDR map.
#[derive(Debug, Clone)]
pub struct PartitionPlan {
    pub config: PartitionConfig,
    pub nv: u32,
    pub row_blocks: u32,
    /// subshards[i][j]: dst block i, src block j.
    pub subshards: Vec<Vec<SubShard>>,
    /// Indices into `graph.edges`, sorted by (dst block, src block, dst, src).
    pub edge_order: Vec<u32>,
    pub regions: Vec<Region>,
    pub total_bytes: u64,
    region_index: BTreeMap<RegionKind, usize>,
}

impl PartitionPlan {
    pub fn region(&self, kind: RegionKind) -> Option<&Region> {
        self.region_index.get(&kind).map(|i| &self.regions[*i])
    }

    pub fn region_expect(&self, kind: RegionKind) -> Result<&Region> {
        self.region(kind)
            .ok_or_else(|| Error::CompilerBug(format!("missing region {kind:?}")))
    }

    /// Region holding a layer's feature output (the next layer's input).
    pub fn features_region(&self, r: LayerRef) -> Result<&Region> {
        match r {
            LayerRef::Input => self.region_expect(RegionKind::InputFeatures),
            LayerRef::Layer(id) => self.region_expect(RegionKind::OutFeatures(id)),
        }
    }

    /// Byte address of feature tile (fiber, row block) inside a region.
    pub fn tile_addr(&self, region: &Region, fiber: u32, row_block: u32) -> u64 {
        region.addr + (fiber as u64 * self.row_blocks as u64 + row_block as u64) * self.config.tile_bytes()
    }

    /// Byte address and count of subshard (i, j) of an adjacency region.
    pub fn subshard_addr(&self, region: &Region, i: u32, j: u32) -> (u64, u32) {
        let s = &self.subshards[i as usize][j as usize];
        (region.addr + s.offset, s.edge_count)
    }

    pub fn edges_total(&self) -> u64 {
        self.subshards
            .iter()
            .flat_map(|row| row.iter())
            .map(|s| s.edge_count as u64)
            .sum()
    }

    /// Which adjacency region a layer reads. Aggregates follow their
    /// edge-weight parent; everything else samples the base graph.
    pub fn adj_region_for(&self, ir: &ModelIr, layer_id: u32) -> Result<&Region> {
        let l = ir.layer(layer_id);
        let kind = match l.layer_type {
            LayerKind::Aggregate => match ir.weight_parent(layer_id) {
                Some(p) => RegionKind::AdjOut(p),
                None => RegionKind::AdjBase,
            },
            LayerKind::VectorInner => RegionKind::AdjBase,
            LayerKind::Activation | LayerKind::BatchNorm => match ir.weight_parent(layer_id) {
                Some(p) => RegionKind::AdjOut(p),
                None => {
                    return Err(Error::CompilerBug(format!(
                        "layer {layer_id} does not read an adjacency region"
                    )))
                }
            },
            _ => {
                return Err(Error::CompilerBug(format!(
                    "layer {layer_id} does not read an adjacency region"
                )))
            }
        };
        self.region_expect(kind)
    }

    /// The feature input of a layer (model input when it has no feature parent).
    pub fn input_ref(&self, ir: &ModelIr, layer_id: u32) -> LayerRef {
        match ir.feature_parent(layer_id) {
            Some(p) => LayerRef::Layer(p),
            None => LayerRef::Input,
        }
    }
}

/// Bucket every edge into its (dst block, src block) subshard and lay out
/// the DDR address space for adjacency, weights, parameters and per-layer
/// feature tiles.
pub fn build_plan(graph: &Graph, ir: &ModelIr, config: PartitionConfig) -> Result<PartitionPlan> {
    if graph.num_vertices == 0 {
        return Err(Error::EmptyGraph);
    }
    let n1 = config.n1 as u64;
    let row_blocks = config.row_blocks(graph.num_vertices);

    // Sort edge indices by (dst block, src block, dst, src): subshards of a
    // shard land contiguously and SpDMM bank access is reproducible.
    let mut edge_order: Vec<u32> = (0..graph.edges.len() as u32).collect();
    edge_order.sort_by_key(|&e| {
        let ed = &graph.edges[e as usize];
        (
            ed.dst as u64 / n1,
            ed.src as u64 / n1,
            ed.dst,
            ed.src,
            e,
        )
    });

    let mut subshards =
        vec![vec![SubShard { offset: 0, edge_count: 0 }; row_blocks as usize]; row_blocks as usize];
    for &e in &edge_order {
        let ed = &graph.edges[e as usize];
        let i = (ed.dst as u64 / n1) as usize;
        let j = (ed.src as u64 / n1) as usize;
        subshards[i][j].edge_count += 1;
    }
    let mut adj_bytes = 0u64;
    for row in subshards.iter_mut() {
        for s in row.iter_mut() {
            s.offset = adj_bytes;
            adj_bytes += align_up(s.edge_count as u64 * EDGE_BYTES, DDR_ALIGN);
        }
    }
    adj_bytes = adj_bytes.max(DDR_ALIGN);

    // DDR map. Region order is fixed: base adjacency, per-layer parameter
    // and adjacency-output regions (ascending id), degrees, input features,
    // per-layer output features.
    let mut regions: Vec<Region> = Vec::new();
    let mut cursor = DDR_ALIGN; // address 0 stays unmapped
    let mut push = |regions: &mut Vec<Region>, cursor: &mut u64, kind: RegionKind, bytes: u64| {
        let bytes = align_up(bytes.max(1), DDR_ALIGN);
        regions.push(Region { kind, addr: *cursor, bytes });
        *cursor += bytes;
    };

    push(&mut regions, &mut cursor, RegionKind::AdjBase, adj_bytes);

    let tile_bytes = config.tile_bytes();
    let feat_bytes = |f: u32| config.fibers(f) as u64 * row_blocks as u64 * tile_bytes;
    let ids = topo_layers(ir)?;

    for &id in &ids {
        let l = ir.layer(id);
        if let Some(w) = &l.weights {
            let panels = config.fibers(l.f_out) as u64;
            let panel_rows = config.fibers(w.w.rows as u32) as u64 * config.n2 as u64;
            let panel_bytes = align_up(panel_rows * config.n2 as u64 * 4, DDR_ALIGN);
            push(&mut regions, &mut cursor, RegionKind::Weights(id), panels * panel_bytes);
            if w.bias.is_some() || l.folded_bn {
                push(
                    &mut regions,
                    &mut cursor,
                    RegionKind::Bias(id),
                    panels * align_up(config.n2 as u64 * 4, DDR_ALIGN),
                );
            }
        }
        if l.layer_type == LayerKind::BatchNorm {
            push(
                &mut regions,
                &mut cursor,
                RegionKind::BnScaleShift(id),
                2 * config.fibers(l.f_in) as u64 * align_up(config.n2 as u64 * 4, DDR_ALIGN),
            );
        }
    }

    let needs_degrees = ir
        .layers
        .values()
        .any(|l| l.layer_type == LayerKind::Aggregate && l.agg_op == Some(crate::model::AggOp::Mean));
    if needs_degrees {
        push(
            &mut regions,
            &mut cursor,
            RegionKind::Degrees,
            row_blocks as u64 * align_up(n1 * 4, DDR_ALIGN),
        );
    }

    push(&mut regions, &mut cursor, RegionKind::InputFeatures, feat_bytes(graph.feature_dim()));
    for &id in &ids {
        let l = ir.layer(id);
        if ir.produces_edge_weights(id) {
            push(&mut regions, &mut cursor, RegionKind::AdjOut(id), adj_bytes);
        } else {
            push(&mut regions, &mut cursor, RegionKind::OutFeatures(id), feat_bytes(l.f_out));
        }
    }

    let region_index = regions
        .iter()
        .enumerate()
        .map(|(i, r)| (r.kind, i))
        .collect();

    Ok(PartitionPlan {
        config,
        nv: graph.num_vertices,
        row_blocks,
        subshards,
        edge_order,
        regions,
        total_bytes: cursor,
        region_index,
    })
}

/// Degree-slice address for a row block, when a Degrees region exists.
pub fn degree_slice_addr(plan: &PartitionPlan, row_block: u32) -> Result<u64> {
    let r = plan.region_expect(RegionKind::Degrees)?;
    Ok(r.addr + row_block as u64 * align_up(plan.config.n1 as u64 * 4, DDR_ALIGN))
}

/// Serialize graph data, parameters and zeroed output regions into the flat
/// DDR byte image consumed by the simulator.
pub fn build_ddr_image(graph: &Graph, ir: &ModelIr, plan: &PartitionPlan) -> Result<Vec<u8>> {
    let mut image = vec![0u8; plan.total_bytes as usize];
    let cfg = plan.config;

    let write_f32 = |image: &mut [u8], addr: u64, v: f32| {
        image[addr as usize..addr as usize + 4].copy_from_slice(&v.to_le_bytes());
    };

    // Adjacency triples in plan order; AdjOut regions get the same topology
    // with zeroed weights until their producer runs.
    let adj_regions: Vec<Region> = plan
        .regions
        .iter()
        .filter(|r| matches!(r.kind, RegionKind::AdjBase | RegionKind::AdjOut(_)))
        .copied()
        .collect();
    for region in &adj_regions {
        let base = region.kind == RegionKind::AdjBase;
        let mut cursor_per_shard: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        for &e in &plan.edge_order {
            let ed = &graph.edges[e as usize];
            let i = ed.dst / cfg.n1;
            let j = ed.src / cfg.n1;
            let (saddr, _) = plan.subshard_addr(region, i, j);
            let off = cursor_per_shard.entry((i, j)).or_insert(0);
            let addr = saddr + *off;
            image[addr as usize..addr as usize + 4].copy_from_slice(&ed.src.to_le_bytes());
            image[addr as usize + 4..addr as usize + 8].copy_from_slice(&ed.dst.to_le_bytes());
            let w = if base { ed.weight } else { 0.0 };
            write_f32(&mut image, addr + 8, w);
            *off += EDGE_BYTES;
        }
    }

    // Weight panels, column-panel-major, rows padded to full fibers.
    for (&id, l) in &ir.layers {
        if let Some(w) = &l.weights {
            let region = plan.region_expect(RegionKind::Weights(id))?;
            let panels = cfg.fibers(l.f_out);
            let panel_rows = cfg.fibers(w.w.rows as u32) as u64 * cfg.n2 as u64;
            let panel_bytes = align_up(panel_rows * cfg.n2 as u64 * 4, DDR_ALIGN);
            for p in 0..panels as u64 {
                for r in 0..panel_rows {
                    for c in 0..cfg.n2 as u64 {
                        let col = p * cfg.n2 as u64 + c;
                        let v = if r < w.w.rows as u64 && col < w.w.cols as u64 {
                            w.w.at(r as usize, col as usize)
                        } else {
                            0.0
                        };
                        let addr = region.addr + p * panel_bytes + (r * cfg.n2 as u64 + c) * 4;
                        write_f32(&mut image, addr, v);
                    }
                }
            }
            if let Some(region) = plan.region(RegionKind::Bias(id)) {
                let fiber_bytes = align_up(cfg.n2 as u64 * 4, DDR_ALIGN);
                let bias = w.bias.clone().unwrap_or_else(|| vec![0.0; l.f_out as usize]);
                for p in 0..panels as u64 {
                    for c in 0..cfg.n2 as u64 {
                        let col = (p * cfg.n2 as u64 + c) as usize;
                        let v = bias.get(col).copied().unwrap_or(0.0);
                        write_f32(&mut image, region.addr + p * fiber_bytes + c * 4, v);
                    }
                }
            }
        }
        if l.layer_type == LayerKind::BatchNorm {
            let region = plan.region_expect(RegionKind::BnScaleShift(id))?;
            let bn = l
                .bn
                .as_ref()
                .ok_or_else(|| Error::CompilerBug(format!("BatchNorm {id} without params")))?;
            let (scale, shift) = bn.scale_shift();
            let fiber_bytes = align_up(cfg.n2 as u64 * 4, DDR_ALIGN);
            let fibers = cfg.fibers(l.f_in) as u64;
            for (row, vals) in [(0u64, &scale), (1u64, &shift)] {
                for p in 0..fibers {
                    for c in 0..cfg.n2 as u64 {
                        let col = (p * cfg.n2 as u64 + c) as usize;
                        let v = vals.get(col).copied().unwrap_or(0.0);
                        let addr = region.addr + (row * fibers + p) * fiber_bytes + c * 4;
                        write_f32(&mut image, addr, v);
                    }
                }
            }
        }
    }

    if let Some(region) = plan.region(RegionKind::Degrees) {
        let block_bytes = align_up(cfg.n1 as u64 * 4, DDR_ALIGN);
        for v in 0..plan.nv as u64 {
            let block = v / cfg.n1 as u64;
            let row = v % cfg.n1 as u64;
            write_f32(
                &mut image,
                region.addr + block * block_bytes + row * 4,
                graph.degrees[v as usize] as f32,
            );
        }
    }

    // Input features, tiled and zero padded.
    let region = *plan.region_expect(RegionKind::InputFeatures)?;
    write_feature_tiles(&mut image, plan, &region, &graph.features);

    Ok(image)
}

fn write_feature_tiles(
    image: &mut [u8],
    plan: &PartitionPlan,
    region: &Region,
    m: &crate::matrix::Matrix,
) {
    let cfg = plan.config;
    for fiber in 0..cfg.fibers(m.cols as u32) {
        for rb in 0..plan.row_blocks {
            let base = plan.tile_addr(region, fiber, rb);
            for r in 0..cfg.n1 as u64 {
                let row = rb as u64 * cfg.n1 as u64 + r;
                for c in 0..cfg.n2 as u64 {
                    let col = fiber as u64 * cfg.n2 as u64 + c;
                    let v = if row < m.rows as u64 && col < m.cols as u64 {
                        m.at(row as usize, col as usize)
                    } else {
                        0.0
                    };
                    let addr = base + (r * cfg.n2 as u64 + c) * 4;
                    image[addr as usize..addr as usize + 4].copy_from_slice(&v.to_le_bytes());
                }
            }
        }
    }
}

trait F32Bytes {
    fn to_le_bits_bytes(self) -> [u8; 4];
}

impl F32Bytes for f32 {
    fn to_le_bits_bytes(self) -> [u8; 4] {
        self.to_le_bytes()
    }
}

/// One inner step of a tile task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TileStep {
    /// Aggregate: consume subshard (tile.j, k) against input fiber tile
    /// (tile.i, k).
    Spdmm { k: u32, edge_count: u32 },
    /// Linear: multiply input tile (k, tile.j) by weight block (k, tile.i).
    Gemm { k: u32 },
    /// VectorInner: dot products over fiber k for subshard (tile.i, tile.j).
    Sddmm { k: u32 },
    /// VectorAdd: one load/load/add/store round.
    VecAdd,
    /// Standalone Activation/BatchNorm tile.
    Eltwise,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TileTask {
    pub i: u32,
    pub j: u32,
    pub steps: Vec<TileStep>,
    /// Edge count of the task's own subshard (VectorInner / edge eltwise).
    pub edge_count: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NestKind {
    Aggregate,
    Linear,
    VectorInner,
    VectorAdd,
    FeatureEltwise,
    EdgeEltwise,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopNest {
    pub layer_id: u32,
    pub kind: NestKind,
    pub grid_i: u32,
    pub grid_j: u32,
    pub tiles: Vec<TileTask>,
}

/// Lower one layer to its partition-centric loop nest. Activation/BatchNorm
/// layers that survived fusion lower to elementwise nests.
pub fn lower_layer(ir: &ModelIr, layer: &LayerIr, plan: &PartitionPlan) -> Result<LoopNest> {
    let cfg = plan.config;
    let rb = plan.row_blocks;
    let id = layer.layer_id;
    let nest = match layer.layer_type {
        LayerKind::Aggregate => {
            let grid_i = cfg.fibers(layer.f_in);
            let mut tiles = Vec::with_capacity((grid_i * rb) as usize);
            for i in 0..grid_i {
                for j in 0..rb {
                    let steps = (0..rb)
                        .map(|k| TileStep::Spdmm {
                            k,
                            edge_count: plan.subshards[j as usize][k as usize].edge_count,
                        })
                        .collect();
                    tiles.push(TileTask { i, j, steps, edge_count: 0 });
                }
            }
            LoopNest { layer_id: id, kind: NestKind::Aggregate, grid_i, grid_j: rb, tiles }
        }
        LayerKind::Linear => {
            let grid_i = cfg.fibers(layer.f_out);
            let k_steps = cfg.fibers(layer.f_in);
            let mut tiles = Vec::with_capacity((grid_i * rb) as usize);
            for i in 0..grid_i {
                for j in 0..rb {
                    let steps = (0..k_steps).map(|k| TileStep::Gemm { k }).collect();
                    tiles.push(TileTask { i, j, steps, edge_count: 0 });
                }
            }
            LoopNest { layer_id: id, kind: NestKind::Linear, grid_i, grid_j: rb, tiles }
        }
        LayerKind::VectorInner => {
            let k_steps = cfg.fibers(layer.f_in);
            let mut tiles = Vec::with_capacity((rb * rb) as usize);
            for i in 0..rb {
                for j in 0..rb {
                    let edge_count = plan.subshards[i as usize][j as usize].edge_count;
                    let steps = if edge_count > 0 {
                        (0..k_steps).map(|k| TileStep::Sddmm { k }).collect()
                    } else {
                        Vec::new()
                    };
                    tiles.push(TileTask { i, j, steps, edge_count });
                }
            }
            LoopNest { layer_id: id, kind: NestKind::VectorInner, grid_i: rb, grid_j: rb, tiles }
        }
        LayerKind::VectorAdd => {
            let grid_i = cfg.fibers(layer.f_in);
            let mut tiles = Vec::with_capacity((grid_i * rb) as usize);
            for i in 0..grid_i {
                for j in 0..rb {
                    tiles.push(TileTask { i, j, steps: vec![TileStep::VecAdd], edge_count: 0 });
                }
            }
            LoopNest { layer_id: id, kind: NestKind::VectorAdd, grid_i, grid_j: rb, tiles }
        }
        LayerKind::Activation | LayerKind::BatchNorm => {
            let on_edges = ir.weight_parent(id).is_some();
            if on_edges {
                let mut tiles = Vec::with_capacity((rb * rb) as usize);
                for i in 0..rb {
                    for j in 0..rb {
                        let edge_count = plan.subshards[i as usize][j as usize].edge_count;
                        let steps = if edge_count > 0 { vec![TileStep::Eltwise] } else { Vec::new() };
                        tiles.push(TileTask { i, j, steps, edge_count });
                    }
                }
                LoopNest { layer_id: id, kind: NestKind::EdgeEltwise, grid_i: rb, grid_j: rb, tiles }
            } else {
                let grid_i = cfg.fibers(layer.f_in);
                let mut tiles = Vec::with_capacity((grid_i * rb) as usize);
                for i in 0..grid_i {
                    for j in 0..rb {
                        tiles.push(TileTask { i, j, steps: vec![TileStep::Eltwise], edge_count: 0 });
                    }
                }
                LoopNest { layer_id: id, kind: NestKind::FeatureEltwise, grid_i, grid_j: rb, tiles }
            }
        }
    };
    Ok(nest)
}

/// Lower every layer in topological order.
pub fn lower_model(ir: &ModelIr, plan: &PartitionPlan) -> Result<Vec<LoopNest>> {
    topo_layers(ir)?
        .into_iter()
        .map(|id| lower_layer(ir, ir.layer(id), plan))
        .collect()
}

/// Human-readable plan summary: tile grids, subshard counts, DDR extents.
pub fn dump_plan(ir: &ModelIr, plan: &PartitionPlan) -> String {
    let mut out = String::new();
    let cfg = plan.config;
    let _ = writeln!(
        out,
        "partition n1={} n2={} row_blocks={} nv={}",
        cfg.n1, cfg.n2, plan.row_blocks, plan.nv
    );
    let _ = writeln!(out, "subshard edge counts (dst block x src block):");
    for row in &plan.subshards {
        let counts: Vec<String> = row.iter().map(|s| s.edge_count.to_string()).collect();
        let _ = writeln!(out, "  [{}]", counts.join(", "));
    }
    if let Ok(ids) = topo_layers(ir) {
        for id in ids {
            let l = ir.layer(id);
            let (gi, gj) = match l.layer_type {
                LayerKind::Linear => (cfg.fibers(l.f_out), plan.row_blocks),
                LayerKind::VectorInner => (plan.row_blocks, plan.row_blocks),
                _ => (cfg.fibers(l.f_in), plan.row_blocks),
            };
            let _ = writeln!(
                out,
                "layer {id} {}: tile grid {gi} x {gj}",
                l.layer_type.name()
            );
        }
    }
    let _ = writeln!(out, "ddr regions:");
    for r in &plan.regions {
        let _ = writeln!(out, "  {:>10} +{:<10} {:?}", r.addr, r.bytes, r.kind);
    }
    let _ = writeln!(out, "total {} bytes", plan.total_bytes);
    out
}
