//! Degree-preserving null model and motif significance.
//!
//! The null model is the standard double-edge-switch chain: pick two edges
//! (a,b), (c,d) and replace them with (a,d), (c,b) unless that would create
//! a self-loop or a duplicate. Every node keeps its exact in- and out-degree.
//! Significance compares the real census against an ensemble of rewired
//! graphs via per-class z-scores and the unit-norm significance profile.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashSet;

use crate::catalog::MotifCatalog;
use crate::census::{self, CensusError, CensusResult};
use crate::graph::{DirectedGraph, NodeId};

#[derive(Debug)]
pub struct RewireOutcome {
    pub graph: DirectedGraph,
    pub attempted_swaps: u64,
    pub successful_swaps: u64,
}

/// Attempts `swaps_per_edge × |E|` double-edge switches. Failed attempts are
/// skipped and counted, never retried with fresh randomness.
pub fn rewire(g: &DirectedGraph, swaps_per_edge: usize, seed: u64) -> RewireOutcome {
    let mut edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let m = edges.len();
    let mut present: HashSet<u64> = edges.iter().map(|&(u, v)| edge_key(u, v)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let attempts = (swaps_per_edge as u64) * (m as u64);
    let mut successes = 0u64;
    if m >= 2 {
        for _ in 0..attempts {
            let i = rng.random_range(0..m);
            let j = rng.random_range(0..m);
            if i == j {
                continue;
            }
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            // Proposed replacement: (a,d) and (c,b).
            if a == d || c == b {
                continue;
            }
            if present.contains(&edge_key(a, d)) || present.contains(&edge_key(c, b)) {
                continue;
            }
            present.remove(&edge_key(a, b));
            present.remove(&edge_key(c, d));
            present.insert(edge_key(a, d));
            present.insert(edge_key(c, b));
            edges[i] = (a, d);
            edges[j] = (c, b);
            successes += 1;
        }
    }

    RewireOutcome {
        graph: g.with_replaced_edges(&edges),
        attempted_swaps: attempts,
        successful_swaps: successes,
    }
}

fn edge_key(u: NodeId, v: NodeId) -> u64 {
    ((u as u64) << 32) | v as u64
}

#[derive(Debug, Clone)]
pub struct ClassSignificance {
    pub class_id: u32,
    /// Estimate from the real graph (equals the raw count in exact mode).
    pub real_count: f64,
    pub ensemble_mean: f64,
    pub ensemble_stddev: f64,
    /// Absent when the ensemble is degenerate (zero spread, real ≠ mean).
    pub z_score: Option<f64>,
    /// z divided by the Euclidean norm of the z-vector.
    pub profile_component: Option<f64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub struct SignificanceReport {
    pub k: usize,
    pub ensembles: usize,
    pub swaps_per_edge: usize,
    pub seed: u64,
    pub classes: Vec<ClassSignificance>,
}

/// Census on the real graph and on `ensembles` independently rewired copies.
/// When `sampling` is given, the same per-depth probabilities are used for
/// the real and every ensemble census so estimates stay comparable.
pub fn significance(
    g: &DirectedGraph,
    catalog: &MotifCatalog,
    ensembles: usize,
    swaps_per_edge: usize,
    seed: u64,
    sampling: Option<&[f64]>,
) -> Result<SignificanceReport, CensusError> {
    assert!(ensembles >= 2, "need at least two ensemble members");

    let real = run_census(g, catalog, sampling, mix(seed, u64::MAX))?;
    let ensemble_counts: Vec<CensusResult> = (0..ensembles as u64)
        .into_par_iter()
        .map(|i| {
            let rewired = rewire(g, swaps_per_edge, mix(seed, 2 * i));
            run_census(&rewired.graph, catalog, sampling, mix(seed, 2 * i + 1))
        })
        .collect::<Result<_, _>>()?;

    let n_classes = catalog.len();
    let mut classes = Vec::with_capacity(n_classes);
    for class in catalog.classes() {
        let id = class.class_id;
        let real_count = real.estimate(id);
        // Accumulate in ensemble-index order so the result is independent of
        // the worker count.
        let values: Vec<f64> = ensemble_counts.iter().map(|c| c.estimate(id)).collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let variance =
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
        let stddev = variance.sqrt();
        let (z_score, degenerate) = if stddev > 0.0 {
            (Some((real_count - mean) / stddev), false)
        } else if real_count == mean {
            (Some(0.0), false)
        } else {
            (None, true)
        };
        classes.push(ClassSignificance {
            class_id: id,
            real_count,
            ensemble_mean: mean,
            ensemble_stddev: stddev,
            z_score,
            profile_component: None,
            degenerate,
        });
    }

    let norm = classes
        .iter()
        .filter_map(|c| c.z_score)
        .map(|z| z * z)
        .sum::<f64>()
        .sqrt();
    if norm > 0.0 {
        for c in &mut classes {
            c.profile_component = c.z_score.map(|z| z / norm);
        }
    }

    Ok(SignificanceReport {
        k: catalog.k(),
        ensembles,
        swaps_per_edge,
        seed,
        classes,
    })
}

fn run_census(
    g: &DirectedGraph,
    catalog: &MotifCatalog,
    sampling: Option<&[f64]>,
    seed: u64,
) -> Result<CensusResult, CensusError> {
    match sampling {
        None => Ok(census::census_with_catalog(g, catalog)),
        Some(probs) => census::sampled_census(g, catalog, probs, seed),
    }
}

fn mix(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
