//! Edge betweenness via Brandes accumulation over BFS shortest paths.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;

use crate::graph::{NodeId, UndirectedView};

/// Betweenness of every undirected edge: the number of unordered node pairs
/// whose shortest paths cross it, with path multiplicity split fractionally.
/// Each component is handled independently; sums over ordered pairs are
/// halved at the end.
pub fn edge_betweenness(u: &UndirectedView) -> BTreeMap<(NodeId, NodeId), f64> {
    let adj: Vec<Vec<NodeId>> = (0..u.node_count() as NodeId)
        .map(|v| u.neighbors(v).to_vec())
        .collect();
    let edges = edge_list(&adj);
    let scores = edge_betweenness_indexed(&adj, &edges);
    edges.into_iter().zip(scores).collect()
}

pub(crate) fn edge_list(adj: &[Vec<NodeId>]) -> Vec<(NodeId, NodeId)> {
    let mut edges = Vec::new();
    for (v, nbrs) in adj.iter().enumerate() {
        for &w in nbrs {
            if (v as NodeId) < w {
                edges.push((v as NodeId, w));
            }
        }
    }
    edges
}

/// Scores aligned with `edges` (which must be the lexicographically sorted
/// edge list of `adj`). Sources are processed in fixed-size chunks and the
/// chunk results summed in order, so the floating-point totals do not depend
/// on the worker count.
pub(crate) fn edge_betweenness_indexed(
    adj: &[Vec<NodeId>],
    edges: &[(NodeId, NodeId)],
) -> Vec<f64> {
    let n = adj.len();
    let sources: Vec<NodeId> = (0..n as NodeId).collect();
    let chunk_results: Vec<Vec<f64>> = sources
        .par_chunks(64)
        .map(|chunk| {
            let mut scores = vec![0.0f64; edges.len()];
            let mut state = BrandesState::new(n);
            for &s in chunk {
                state.accumulate(adj, edges, s, &mut scores);
            }
            scores
        })
        .collect();

    let mut total = vec![0.0f64; edges.len()];
    for chunk in chunk_results {
        for (t, c) in total.iter_mut().zip(chunk) {
            *t += c;
        }
    }
    for t in &mut total {
        *t /= 2.0;
    }
    total
}

struct BrandesState {
    dist: Vec<i64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<NodeId>,
    queue: VecDeque<NodeId>,
}

impl BrandesState {
    fn new(n: usize) -> Self {
        BrandesState {
            dist: vec![-1; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
        }
    }

    fn accumulate(
        &mut self,
        adj: &[Vec<NodeId>],
        edges: &[(NodeId, NodeId)],
        source: NodeId,
        scores: &mut [f64],
    ) {
        self.dist.fill(-1);
        self.sigma.fill(0.0);
        self.delta.fill(0.0);
        self.order.clear();
        self.queue.clear();

        self.dist[source as usize] = 0;
        self.sigma[source as usize] = 1.0;
        self.queue.push_back(source);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            for &w in &adj[v as usize] {
                if self.dist[w as usize] < 0 {
                    self.dist[w as usize] = self.dist[v as usize] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w as usize] == self.dist[v as usize] + 1 {
                    self.sigma[w as usize] += self.sigma[v as usize];
                }
            }
        }

        // Dependency accumulation in reverse BFS order; each predecessor
        // edge picks up the pair-dependency flowing through it.
        for &w in self.order.iter().rev() {
            for &v in &adj[w as usize] {
                if self.dist[v as usize] + 1 == self.dist[w as usize] {
                    let c = self.sigma[v as usize] / self.sigma[w as usize]
                        * (1.0 + self.delta[w as usize]);
                    let key = if v < w { (v, w) } else { (w, v) };
                    let idx = edges.binary_search(&key).expect("edge in index");
                    scores[idx] += c;
                    self.delta[v as usize] += c;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;

    fn view_of(edges: &[(u64, u64)]) -> DirectedGraph {
        DirectedGraph::build_from_edges(edges).unwrap()
    }

    #[test]
    fn path_of_three_nodes() {
        // Pairs {A,B},{A,C} cross A–B; {A,C},{B,C} cross B–C: both edges 2.
        let g = view_of(&[(0, 1), (1, 2)]);
        let u = g.undirected_projection();
        let scores = edge_betweenness(&u);
        assert!((scores[&(0, 1)] - 2.0).abs() < 1e-12);
        assert!((scores[&(1, 2)] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_edges_are_equal() {
        let g = view_of(&[(0, 1), (1, 2), (2, 0)]);
        let u = g.undirected_projection();
        let scores = edge_betweenness(&u);
        let values: Vec<f64> = scores.values().copied().collect();
        assert_eq!(values.len(), 3);
        for v in &values {
            assert!((v - values[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn bridge_between_cliques_is_maximal() {
        let mut edges = Vec::new();
        for base in [0u64, 4] {
            for a in 0..4 {
                for b in a + 1..4 {
                    edges.push((base + a, base + b));
                }
            }
        }
        edges.push((0, 4));
        let g = view_of(&edges);
        let u = g.undirected_projection();
        let scores = edge_betweenness(&u);
        let bridge = scores[&(0, 4)];
        for (&edge, &score) in &scores {
            if edge != (0, 4) {
                assert!(score < bridge, "edge {edge:?} >= bridge");
            }
        }
    }

    #[test]
    fn disconnected_components_are_independent() {
        let g = view_of(&[(0, 1), (1, 2), (3, 4)]);
        let u = g.undirected_projection();
        let scores = edge_betweenness(&u);
        assert!((scores[&(3, 4)] - 1.0).abs() < 1e-12);
        assert!((scores[&(0, 1)] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let mut edges = Vec::new();
        for a in 0..30u64 {
            edges.push((a, (a + 1) % 30));
            edges.push((a, (a + 7) % 30));
        }
        let g = view_of(&edges);
        let u = g.undirected_projection();
        let base = edge_betweenness(&u);
        for threads in [1usize, 3] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let other = pool.install(|| edge_betweenness(&u));
            for (k, v) in &base {
                assert_eq!(v.to_bits(), other[k].to_bits(), "threads {threads}");
            }
        }
    }
}
