//! Exact and sampled census of connected induced k-subgraphs.
//!
//! Enumeration is ESU: every connected induced k-node set is visited exactly
//! once by extending a root vertex only through exclusive neighbors with
//! higher ids. The sampled variant (RAND-ESU) explores each branch at depth d
//! with probability `probs[d]`, so every subgraph survives with probability
//! `Π probs`, and raw counts scale by the reciprocal into unbiased estimates.
//!
//! Enumeration is parallel over root vertices; counts are merged by integer
//! addition, and the sampled mode derives one RNG stream per root from
//! `(seed, root)`, so results are independent of the worker count.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::catalog::MotifCatalog;
use crate::graph::{DirectedGraph, NodeId, UndirectedView};

#[derive(Debug, Error, PartialEq)]
pub enum CensusError {
    #[error("sampling probability at depth {depth} is {value}; must lie in (0, 1]")]
    InvalidProbability { depth: usize, value: f64 },
    #[error("expected {expected} sampling probabilities (one per depth), got {found}")]
    WrongProbabilityCount { expected: usize, found: usize },
}

/// Per-class counts of connected induced k-subgraphs.
#[derive(Debug, Clone)]
pub struct CensusResult {
    pub k: usize,
    /// Raw visit counts indexed by `class_id - 1`.
    counts: Vec<u64>,
    /// Number of subgraphs visited (all of them in exact mode).
    pub total_subgraphs: u64,
    pub elapsed: Duration,
    pub sampled: bool,
    pub sampling_probabilities: Option<Vec<f64>>,
    inclusion_probability: f64,
}

impl CensusResult {
    /// Raw visit count for a class.
    pub fn count(&self, class_id: u32) -> u64 {
        self.counts[class_id as usize - 1]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Unbiased estimate of the true count: raw count divided by the
    /// inclusion probability. Equals the raw count in exact mode.
    pub fn estimate(&self, class_id: u32) -> f64 {
        self.count(class_id) as f64 / self.inclusion_probability
    }

    /// Fraction of visited subgraphs falling in this class.
    pub fn frequency(&self, class_id: u32) -> f64 {
        if self.total_subgraphs == 0 {
            0.0
        } else {
            self.count(class_id) as f64 / self.total_subgraphs as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationStats {
    pub connected_subgraphs: u64,
}

/// Visits every connected induced k-node subgraph exactly once (sequential).
/// Connectivity is judged on the undirected projection; the visitor receives
/// the node tuple with the root vertex first.
pub fn enumerate_connected_subgraphs<F: FnMut(&[NodeId])>(
    g: &DirectedGraph,
    k: usize,
    mut visitor: F,
) -> EnumerationStats {
    assert!((3..=4).contains(&k), "subgraph order must be 3 or 4");
    let view = g.undirected_projection();
    let n = g.node_count();
    let mut scratch = EsuScratch::new(n, k);
    let mut total = 0u64;
    for root in 0..n as NodeId {
        esu_root(&view, root, k, &mut scratch, &mut ExactSampler, &mut |sub| {
            total += 1;
            visitor(sub);
        });
    }
    EnumerationStats {
        connected_subgraphs: total,
    }
}

/// Exact census over a freshly built catalog of order `k`.
pub fn census(g: &DirectedGraph, k: usize) -> CensusResult {
    census_with_catalog(g, &MotifCatalog::build(k))
}

/// Exact census: every connected induced k-subgraph classified and counted.
pub fn census_with_catalog(g: &DirectedGraph, catalog: &MotifCatalog) -> CensusResult {
    run_census(g, catalog, None, 0)
}

/// RAND-ESU census with one branch probability per depth.
pub fn sampled_census(
    g: &DirectedGraph,
    catalog: &MotifCatalog,
    probs: &[f64],
    seed: u64,
) -> Result<CensusResult, CensusError> {
    if probs.len() != catalog.k() {
        return Err(CensusError::WrongProbabilityCount {
            expected: catalog.k(),
            found: probs.len(),
        });
    }
    if let Some((depth, &value)) = probs
        .iter()
        .enumerate()
        .find(|&(_, &p)| !(p > 0.0 && p <= 1.0))
    {
        return Err(CensusError::InvalidProbability { depth, value });
    }
    Ok(run_census(g, catalog, Some(probs), seed))
}

fn run_census(
    g: &DirectedGraph,
    catalog: &MotifCatalog,
    sampling: Option<&[f64]>,
    seed: u64,
) -> CensusResult {
    let start = Instant::now();
    let k = catalog.k();
    let n = g.node_count();
    let n_classes = catalog.len();
    let view = g.undirected_projection();

    let (counts, total) = (0..n as NodeId)
        .into_par_iter()
        .with_min_len(512)
        .fold(
            || (EsuScratch::new(n, k), vec![0u64; n_classes], 0u64),
            |(mut scratch, mut counts, mut total), root| {
                let mut visit = |sub: &[NodeId]| {
                    let bits = induced_bits(g, sub, k);
                    let mask = crate::graph::AdjacencyBitmask::from_bits(k, bits);
                    // ESU only yields connected sets, so the lookup never misses.
                    if let Some(id) = catalog.class_id_of(mask) {
                        counts[id as usize - 1] += 1;
                        total += 1;
                    } else {
                        debug_assert!(false, "enumerated subgraph was disconnected");
                    }
                };
                match sampling {
                    None => esu_root(&view, root, k, &mut scratch, &mut ExactSampler, &mut visit),
                    Some(probs) => {
                        let rng = ChaCha8Rng::seed_from_u64(mix(seed, root as u64));
                        let mut sampler = RandSampler { probs, rng };
                        esu_root(&view, root, k, &mut scratch, &mut sampler, &mut visit);
                    }
                }
                (scratch, counts, total)
            },
        )
        .map(|(_, counts, total)| (counts, total))
        .reduce(
            || (vec![0u64; n_classes], 0u64),
            |(mut a, ta), (b, tb)| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                (a, ta + tb)
            },
        );

    let inclusion_probability = sampling.map_or(1.0, |p| p.iter().product());
    CensusResult {
        k,
        counts,
        total_subgraphs: total,
        elapsed: start.elapsed(),
        sampled: sampling.is_some(),
        sampling_probabilities: sampling.map(|p| p.to_vec()),
        inclusion_probability,
    }
}

fn induced_bits(g: &DirectedGraph, nodes: &[NodeId], k: usize) -> u16 {
    let mut bits = 0u16;
    for i in 0..k {
        for j in 0..k {
            if i != j && g.has_edge(nodes[i], nodes[j]) {
                bits |= 1 << crate::graph::AdjacencyBitmask::bit_index(k, i, j);
            }
        }
    }
    bits
}

fn mix(seed: u64, root: u64) -> u64 {
    let mut z = seed ^ root.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

trait Sampler {
    fn admit(&mut self, depth: usize) -> bool;
}

struct ExactSampler;

impl Sampler for ExactSampler {
    #[inline(always)]
    fn admit(&mut self, _depth: usize) -> bool {
        true
    }
}

struct RandSampler<'a> {
    probs: &'a [f64],
    rng: ChaCha8Rng,
}

impl Sampler for RandSampler<'_> {
    #[inline]
    fn admit(&mut self, depth: usize) -> bool {
        let p = self.probs[depth];
        p >= 1.0 || self.rng.random::<f64>() < p
    }
}

/// Reusable per-worker buffers. Marks are stamped with `root + 1`, so a
/// scratch stays valid across roots of one census without clearing.
struct EsuScratch {
    marks: Vec<u32>,
    newly_marked: Vec<NodeId>,
    sub: Vec<NodeId>,
    ext_bufs: Vec<Vec<NodeId>>,
}

impl EsuScratch {
    fn new(n: usize, k: usize) -> Self {
        EsuScratch {
            marks: vec![0; n],
            newly_marked: Vec::new(),
            sub: Vec::with_capacity(k),
            ext_bufs: vec![Vec::new(); k],
        }
    }
}

fn esu_root<S: Sampler, F: FnMut(&[NodeId])>(
    view: &UndirectedView,
    root: NodeId,
    k: usize,
    scratch: &mut EsuScratch,
    sampler: &mut S,
    visit: &mut F,
) {
    if !sampler.admit(0) {
        return;
    }
    let stamp = root + 1;
    scratch.marks[root as usize] = stamp;
    let mut ext = std::mem::take(&mut scratch.ext_bufs[0]);
    ext.clear();
    for &u in view.neighbors(root) {
        scratch.marks[u as usize] = stamp;
        if u > root {
            ext.push(u);
        }
    }
    scratch.sub.clear();
    scratch.sub.push(root);
    esu_extend(view, root, k, scratch, &ext, sampler, visit);
    scratch.ext_bufs[0] = ext;
}

fn esu_extend<S: Sampler, F: FnMut(&[NodeId])>(
    view: &UndirectedView,
    root: NodeId,
    k: usize,
    scratch: &mut EsuScratch,
    ext: &[NodeId],
    sampler: &mut S,
    visit: &mut F,
) {
    let stamp = root + 1;
    let depth = scratch.sub.len();
    if depth + 1 == k {
        for &w in ext {
            if !sampler.admit(depth) {
                continue;
            }
            scratch.sub.push(w);
            visit(&scratch.sub);
            scratch.sub.pop();
        }
        return;
    }

    for idx in 0..ext.len() {
        let w = ext[idx];
        if !sampler.admit(depth) {
            continue;
        }
        let mut child_ext = std::mem::take(&mut scratch.ext_bufs[depth]);
        child_ext.clear();
        child_ext.extend_from_slice(&ext[idx + 1..]);
        let unmark_from = scratch.newly_marked.len();
        // Exclusive neighborhood: unmarked nodes are neither in the current
        // subgraph nor adjacent to it.
        for &u in view.neighbors(w) {
            if scratch.marks[u as usize] != stamp {
                scratch.marks[u as usize] = stamp;
                scratch.newly_marked.push(u);
                if u > root {
                    child_ext.push(u);
                }
            }
        }
        scratch.sub.push(w);
        esu_extend(view, root, k, scratch, &child_ext, sampler, visit);
        scratch.sub.pop();
        for i in unmark_from..scratch.newly_marked.len() {
            scratch.marks[scratch.newly_marked[i] as usize] = 0;
        }
        scratch.newly_marked.truncate(unmark_from);
        scratch.ext_bufs[depth] = child_ext;
    }
}
