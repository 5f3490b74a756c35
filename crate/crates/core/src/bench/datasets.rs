use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{io_err, BenchResult};
use crate::csr::{GraphView, Projection};
use crate::store::GraphStore;
use crate::store::{load_graphalytics, ExternalIdMap, LoadOptions};

/// A generated graph in external-id space, ready to be written as a
/// vertex file and an edge file.
#[derive(Debug, Clone, PartialEq)]
pub struct DeskDataset {
    pub name: String,
    pub directed: bool,
    pub weighted: bool,
    /// External ids in file order.
    pub vertices: Vec<u64>,
    /// `(src, dst, weight)`; the weight is written only for weighted sets.
    pub edges: Vec<(u64, u64, f64)>,
}

fn external(i: usize) -> u64 {
    3 * i as u64 + 7
}

/// `m` distinct non-loop pairs over `n` vertices. Undirected sets draw
/// pairs with `a < b`.
fn random_pairs(n: usize, m: usize, directed: bool, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut seen = HashSet::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a == b {
            continue;
        }
        let key = if directed {
            (a, b)
        } else {
            (a.min(b), a.max(b))
        };
        if seen.insert(key) {
            out.push(key);
        }
    }
    out
}

fn finish(
    name: &str,
    n: usize,
    pairs: Vec<(usize, usize)>,
    directed: bool,
    weighted: bool,
    rng: &mut ChaCha8Rng,
) -> DeskDataset {
    let mut vertices: Vec<u64> = (0..n).map(external).collect();
    vertices.shuffle(rng);
    let edges = pairs
        .into_iter()
        .map(|(a, b)| {
            let w = if weighted {
                (rng.random_range(1..=1000) as f64) / 100.0
            } else {
                1.0
            };
            (external(a), external(b), w)
        })
        .collect();
    DeskDataset {
        name: name.to_owned(),
        directed,
        weighted,
        vertices,
        edges,
    }
}

pub fn erdos_renyi(name: &str, n: usize, m: usize, weighted: bool, seed: u64) -> DeskDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = random_pairs(n, m, true, &mut rng);
    finish(name, n, pairs, true, weighted, &mut rng)
}

/// Undirected two-block planted partition.
pub fn planted_partition(
    name: &str,
    per_block: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> DeskDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 * per_block;
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let p = if (a < per_block) == (b < per_block) {
                p_in
            } else {
                p_out
            };
            if rng.random_bool(p) {
                pairs.push((a, b));
            }
        }
    }
    finish(name, n, pairs, false, false, &mut rng)
}

/// The four desk-scale validation graphs.
pub fn desk_datasets(seed: u64) -> Vec<DeskDataset> {
    vec![
        erdos_renyi("er-1k", 1_000, 8_000, false, seed),
        erdos_renyi("er-10k", 10_000, 80_000, false, seed + 1),
        erdos_renyi("er-1k-weighted", 1_000, 8_000, true, seed + 2),
        planted_partition("planted-2x500", 500, 0.02, 0.001, seed + 3),
    ]
}

impl DeskDataset {
    pub fn vertex_path(&self, dir: &Path) -> PathBuf {
        dir.join(format!("{}.v", self.name))
    }

    pub fn edge_path(&self, dir: &Path) -> PathBuf {
        dir.join(format!("{}.e", self.name))
    }

    /// Writes `<name>.v` and `<name>.e` under `dir`.
    pub fn write(&self, dir: &Path) -> BenchResult<(PathBuf, PathBuf)> {
        let (vp, ep) = (self.vertex_path(dir), self.edge_path(dir));
        let mut v = BufWriter::new(File::create(&vp).map_err(|e| io_err(&vp, e))?);
        for id in &self.vertices {
            writeln!(v, "{id}").map_err(|e| io_err(&vp, e))?;
        }
        v.flush().map_err(|e| io_err(&vp, e))?;
        let mut w = BufWriter::new(File::create(&ep).map_err(|e| io_err(&ep, e))?);
        for (a, b, wt) in &self.edges {
            if self.weighted {
                writeln!(w, "{a} {b} {wt}")
            } else {
                writeln!(w, "{a} {b}")
            }
            .map_err(|e| io_err(&ep, e))?;
        }
        w.flush().map_err(|e| io_err(&ep, e))?;
        Ok((vp, ep))
    }
}

/// A loaded dataset: the store, its full CSR projection (with reverse
/// adjacency) and the file-id map.
#[derive(Debug)]
pub struct LoadedDataset {
    pub store: GraphStore,
    pub view: GraphView,
    pub ids: ExternalIdMap,
}

pub const WEIGHT_KEY: &str = "weight";

pub fn load_dataset(
    vertices: &Path,
    edges: &Path,
    directed: bool,
    weighted: bool,
) -> BenchResult<LoadedDataset> {
    let v = BufReader::new(File::open(vertices).map_err(|e| io_err(vertices, e))?);
    let e = BufReader::new(File::open(edges).map_err(|e| io_err(edges, e))?);
    let opts = LoadOptions {
        directed,
        weighted,
        weight_key: WEIGHT_KEY.to_owned(),
        ..LoadOptions::default()
    };
    let (store, ids) = load_graphalytics(v, e, &opts)?;
    let projection = Projection {
        weight_key: weighted.then(|| WEIGHT_KEY.to_owned()),
        build_reverse: true,
        ..Projection::default()
    };
    let view = GraphView::project(&store, &projection)?;
    Ok(LoadedDataset { store, view, ids })
}
