//! Recursive community → motif pipeline: split oversized communities,
//! census each final community's induced digraph, and label communities
//! from product metadata.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{cnm_greedy, girvan_newman, modularity, GnStop, Partition};
use crate::catalog::MotifCatalog;
use crate::census::{census_with_catalog, CensusResult};
use crate::graph::{DirectedGraph, NodeId};
use crate::ingest::ProductRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommunityAlgo {
    GirvanNewman,
    Cnm,
}

impl CommunityAlgo {
    pub fn name(&self) -> &'static str {
        match self {
            CommunityAlgo::GirvanNewman => "girvan-newman",
            CommunityAlgo::Cnm => "cnm",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub algo: CommunityAlgo,
    /// Communities larger than this keep getting split (unless indivisible).
    pub max_community_size: usize,
    /// Motif order for the per-community census.
    pub k: usize,
    /// Girvan–Newman is only attempted below this node count; larger
    /// communities fall back to the greedy algorithm for the split.
    pub gn_node_budget: usize,
}

impl PipelineOptions {
    pub fn new(algo: CommunityAlgo, max_community_size: usize, k: usize) -> Self {
        PipelineOptions {
            algo,
            max_community_size,
            k,
            gn_node_budget: 2000,
        }
    }
}

#[derive(Debug)]
pub struct CommunityEntry {
    pub id: u32,
    /// Original external ids, ascending.
    pub nodes: Vec<u64>,
    pub size: usize,
    /// Dominant metadata group, or "unlabeled".
    pub label: String,
    /// Fraction of members carrying the dominant label.
    pub label_share: f64,
    /// True when no positive-gain split existed despite exceeding the size
    /// target.
    pub indivisible: bool,
    pub census: CensusResult,
}

#[derive(Debug)]
pub struct CommunityReport {
    pub communities: Vec<CommunityEntry>,
    /// Modularity of the final partition on the whole graph.
    pub modularity: f64,
    pub algo: CommunityAlgo,
    pub k: usize,
    pub max_community_size: usize,
    pub gn_node_budget: usize,
}

pub fn pipeline(
    g: &DirectedGraph,
    catalog: &MotifCatalog,
    meta: Option<&[ProductRecord]>,
    options: &PipelineOptions,
) -> CommunityReport {
    assert_eq!(catalog.k(), options.k, "catalog order must match options.k");
    assert!(
        options.max_community_size >= options.k,
        "communities must be able to hold a k-subgraph"
    );

    let all_nodes: Vec<NodeId> = (0..g.node_count() as NodeId).collect();
    let mut finals = split(g, all_nodes, options);
    finals.sort_by_key(|(nodes, _)| nodes[0]);

    // Modularity of the final partition, on the whole projection.
    let mut assignment = vec![0u32; g.node_count()];
    for (idx, (nodes, _)) in finals.iter().enumerate() {
        for &v in nodes {
            assignment[v as usize] = idx as u32;
        }
    }
    let whole_view = g.undirected_projection();
    let final_modularity = modularity(&whole_view, &assignment);

    let group_of: HashMap<u64, &str> = meta
        .map(|records| {
            records
                .iter()
                .filter_map(|r| r.group.as_deref().map(|g| (r.id, g)))
                .collect()
        })
        .unwrap_or_default();

    let communities: Vec<CommunityEntry> = finals
        .par_iter()
        .enumerate()
        .map(|(idx, (nodes, indivisible))| {
            let sub = g.induced_subgraph(nodes);
            let census = census_with_catalog(&sub, catalog);
            let mut original: Vec<u64> = nodes.iter().map(|&v| g.original_id(v)).collect();
            original.sort_unstable();
            let (label, label_share) = dominant_label(&original, &group_of);
            CommunityEntry {
                id: idx as u32,
                size: original.len(),
                nodes: original,
                label,
                label_share,
                indivisible: *indivisible,
                census,
            }
        })
        .collect();

    CommunityReport {
        communities,
        modularity: final_modularity,
        algo: options.algo,
        k: options.k,
        max_community_size: options.max_community_size,
        gn_node_budget: options.gn_node_budget,
    }
}

/// Recursively splits `nodes` until every part fits the size target or no
/// split with positive modularity gain exists. Returns (members, indivisible)
/// pairs; members stay sorted ascending.
fn split(
    g: &DirectedGraph,
    nodes: Vec<NodeId>,
    options: &PipelineOptions,
) -> Vec<(Vec<NodeId>, bool)> {
    if nodes.len() <= options.max_community_size {
        return vec![(nodes, false)];
    }
    let sub = g.induced_subgraph(&nodes);
    let view = sub.undirected_projection();
    let partition: Partition = match options.algo {
        CommunityAlgo::Cnm => cnm_greedy(&view).0,
        CommunityAlgo::GirvanNewman if nodes.len() <= options.gn_node_budget => {
            girvan_newman(&view, GnStop::CommunityCount(2)).1
        }
        // Beyond the budget the O(n·m) removals are impractical.
        CommunityAlgo::GirvanNewman => cnm_greedy(&view).0,
    };
    if partition.community_count <= 1 {
        return vec![(nodes, true)];
    }
    let parts: Vec<Vec<NodeId>> = partition
        .communities()
        .into_iter()
        .map(|members| members.into_iter().map(|local| nodes[local as usize]).collect())
        .collect();
    parts
        .into_par_iter()
        .flat_map(|part| split(g, part, options))
        .collect()
}

fn dominant_label(original_ids: &[u64], group_of: &HashMap<u64, &str>) -> (String, f64) {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for id in original_ids {
        let group = group_of.get(id).copied().unwrap_or("unlabeled");
        *counts.entry(group).or_insert(0) += 1;
    }
    let (label, count) = counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(a.0)))
        .unwrap_or(("unlabeled", original_ids.len()));
    (label.to_string(), count as f64 / original_ids.len() as f64)
}
