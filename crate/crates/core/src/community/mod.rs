//! Community detection on the undirected projection, plus the recursive
//! community → motif pipeline.

mod betweenness;
mod cnm;
mod girvan_newman;
mod pipeline;

pub use betweenness::edge_betweenness;
pub use cnm::{cnm_greedy, MergeStep};
pub use girvan_newman::{girvan_newman, Dendrogram, GnStep, GnStop};
pub use pipeline::{pipeline, CommunityAlgo, CommunityEntry, CommunityReport, PipelineOptions};

use crate::graph::{NodeId, UndirectedView};

/// A hard assignment of every node to one community.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Node → community id; ids are contiguous, numbered by first occurrence.
    pub assignment: Vec<u32>,
    pub community_count: usize,
    pub modularity: f64,
}

impl Partition {
    /// Builds a partition from any labeling, renumbering community ids by
    /// first occurrence and evaluating modularity on `u`.
    pub fn from_labels(u: &UndirectedView, labels: &[u32]) -> Partition {
        let (assignment, community_count) = renumber(labels);
        let modularity = modularity(u, &assignment);
        Partition {
            assignment,
            community_count,
            modularity,
        }
    }

    /// Members of each community, ascending node ids within and across.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut groups: Vec<Vec<NodeId>> = vec![Vec::new(); self.community_count];
        for (v, &c) in self.assignment.iter().enumerate() {
            groups[c as usize].push(v as NodeId);
        }
        groups
    }
}

pub(crate) fn renumber(labels: &[u32]) -> (Vec<u32>, usize) {
    let mut map: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
    let mut next = 0u32;
    let assignment = labels
        .iter()
        .map(|&l| {
            *map.entry(l).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            })
        })
        .collect();
    (assignment, next as usize)
}

/// Newman modularity: Q = Σ_c (e_c/m − (d_c/2m)²), with m the number of
/// undirected edges, e_c the intra-community edges and d_c the total degree
/// of community c. Zero when the graph has no edges.
pub fn modularity(u: &UndirectedView, assignment: &[u32]) -> f64 {
    let m = u.edge_count();
    if m == 0 {
        return 0.0;
    }
    let communities = assignment.iter().map(|&c| c as usize).max().unwrap_or(0) + 1;
    let mut intra = vec![0u64; communities];
    let mut degree = vec![0u64; communities];
    for v in 0..u.node_count() as NodeId {
        degree[assignment[v as usize] as usize] += u.degree(v) as u64;
        for &w in u.neighbors(v) {
            if v < w && assignment[v as usize] == assignment[w as usize] {
                intra[assignment[v as usize] as usize] += 1;
            }
        }
    }
    let m = m as f64;
    (0..communities)
        .map(|c| {
            let e = intra[c] as f64 / m;
            let a = degree[c] as f64 / (2.0 * m);
            e - a * a
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn graph(edges: &[(u64, u64)]) -> DirectedGraph {
        DirectedGraph::build_from_edges(edges).unwrap()
    }

    #[test]
    fn one_community_has_zero_modularity() {
        let g = graph(&[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let u = g.undirected_projection();
        let q = modularity(&u, &vec![0; g.node_count()]);
        assert_eq!(q, 0.0);
    }

    #[test]
    fn split_disconnected_cliques_give_half() {
        // Two disjoint triangles, each its own community: e_c/m = 1/2 and
        // d_c/2m = 1/2 per community, so Q = 2·(1/2 − 1/4) = 0.5.
        let g = graph(&[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let u = g.undirected_projection();
        let q = modularity(&u, &[0, 0, 0, 1, 1, 1]);
        assert!((q - 0.5).abs() < 1e-12);
    }

    #[test]
    fn matches_direct_formula_on_random_assignments() {
        let mut rng = StdRng::seed_from_u64(17);
        for round in 0..10 {
            let n = 14u64;
            let mut edges = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if a != b && rng.random::<f64>() < 0.18 {
                        edges.push((a, b));
                    }
                }
            }
            edges.push((0, 1));
            let g = graph(&edges);
            let u = g.undirected_projection();
            let assignment: Vec<u32> =
                (0..g.node_count()).map(|_| rng.random_range(0..4)).collect();

            // Independent summation straight from the definition.
            let m = u.edge_count() as f64;
            let mut want = 0.0;
            for c in 0..4u32 {
                let mut e_c = 0.0;
                let mut d_c = 0.0;
                for (a, b) in u.edges() {
                    if assignment[a as usize] == c && assignment[b as usize] == c {
                        e_c += 1.0;
                    }
                }
                for (v, &label) in assignment.iter().enumerate() {
                    if label == c {
                        d_c += u.degree(v as crate::graph::NodeId) as f64;
                    }
                }
                want += e_c / m - (d_c / (2.0 * m)).powi(2);
            }
            let got = modularity(&u, &assignment);
            assert!((got - want).abs() < 1e-12, "round {round}");
        }
    }

    #[test]
    fn renumber_is_first_occurrence_order() {
        let (labels, count) = renumber(&[7, 7, 3, 7, 9, 3]);
        assert_eq!(labels, vec![0, 0, 1, 0, 2, 1]);
        assert_eq!(count, 3);
    }
}
