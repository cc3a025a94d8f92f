//! Girvan–Newman: detect communities by repeatedly removing the edge with
//! the highest betweenness and tracking modularity over the emerging
//! components.

use std::collections::VecDeque;

use super::betweenness::{edge_betweenness_indexed, edge_list};
use super::{modularity, Partition};
use crate::graph::{NodeId, UndirectedView};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GnStop {
    /// Remove every edge and return the partition with maximal modularity.
    BestModularity,
    /// Stop as soon as at least this many components exist.
    CommunityCount(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GnStep {
    pub removed_edge: (NodeId, NodeId),
    /// Components after the removal.
    pub components: usize,
    /// Modularity of the component partition, measured on the input graph.
    pub modularity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub steps: Vec<GnStep>,
    /// Index into `steps` of the best-modularity cut; `None` when the start
    /// state (no removals) was never beaten.
    pub best_step: Option<usize>,
}

/// Runs the removal sequence until the stop condition. Ties on betweenness
/// break toward the lexicographically smallest edge, so runs are fully
/// deterministic.
pub fn girvan_newman(u: &UndirectedView, stop: GnStop) -> (Dendrogram, Partition) {
    let n = u.node_count();
    let mut adj: Vec<Vec<NodeId>> = (0..n as NodeId).map(|v| u.neighbors(v).to_vec()).collect();

    let initial_labels = components(&adj);
    let mut best_labels = initial_labels.clone();
    let mut best_q = modularity(u, &initial_labels);
    let mut best_step = None;
    let mut steps = Vec::new();

    if let GnStop::CommunityCount(target) = stop {
        if component_count(&initial_labels) >= target {
            let partition = Partition::from_labels(u, &initial_labels);
            return (Dendrogram { steps, best_step }, partition);
        }
    }

    loop {
        let edges = edge_list(&adj);
        if edges.is_empty() {
            break;
        }
        let scores = edge_betweenness_indexed(&adj, &edges);
        let mut pick = 0usize;
        for i in 1..edges.len() {
            let better = scores[i] > scores[pick]
                || (scores[i] == scores[pick] && edges[i] < edges[pick]);
            if better {
                pick = i;
            }
        }
        let (a, b) = edges[pick];
        adj[a as usize].retain(|&x| x != b);
        adj[b as usize].retain(|&x| x != a);

        let labels = components(&adj);
        let count = component_count(&labels);
        let q = modularity(u, &labels);
        steps.push(GnStep {
            removed_edge: (a, b),
            components: count,
            modularity: q,
        });
        if q > best_q {
            best_q = q;
            best_labels = labels.clone();
            best_step = Some(steps.len() - 1);
        }
        if let GnStop::CommunityCount(target) = stop {
            if count >= target {
                let partition = Partition::from_labels(u, &labels);
                return (Dendrogram { steps, best_step }, partition);
            }
        }
    }

    let partition = Partition::from_labels(u, &best_labels);
    (Dendrogram { steps, best_step }, partition)
}

fn components(adj: &[Vec<NodeId>]) -> Vec<u32> {
    let n = adj.len();
    const UNSEEN: u32 = u32::MAX;
    let mut labels = vec![UNSEEN; n];
    let mut count = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != UNSEEN {
            continue;
        }
        labels[start] = count;
        queue.push_back(start as NodeId);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v as usize] {
                if labels[w as usize] == UNSEEN {
                    labels[w as usize] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    labels
}

fn component_count(labels: &[u32]) -> usize {
    labels.iter().map(|&l| l as usize).max().map_or(0, |m| m + 1)
}
