//! Immutable directed graph with compacted node ids and sorted CSR adjacency.
//!
//! Nodes are renumbered to `0..node_count` in first-appearance order; the
//! original external ids are kept for joining against product metadata.
//! Self-loops and duplicate edges are dropped at build time (with counts
//! reported) so every downstream consumer can assume a simple digraph.

use std::collections::HashMap;

use thiserror::Error;

/// Compacted node identifier.
pub type NodeId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("empty edge list")]
    EmptyEdgeList,
    #[error("duplicate node {0} in tuple")]
    DuplicateNode(NodeId),
    #[error("node {0} out of range (graph has {1} nodes)")]
    NodeOutOfRange(NodeId, usize),
    #[error("unsupported subgraph order {0} (expected 3 or 4)")]
    UnsupportedOrder(usize),
}

/// Simple digraph in CSR form. Both out- and in-adjacency are stored sorted,
/// so edge queries are binary searches.
#[derive(Debug, Clone)]
pub struct DirectedGraph {
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    in_offsets: Vec<usize>,
    in_targets: Vec<NodeId>,
    original_ids: Vec<u64>,
    id_index: HashMap<u64, NodeId>,
    self_loops_dropped: usize,
    duplicates_dropped: usize,
}

impl DirectedGraph {
    /// Builds a compacted graph from `(from, to)` pairs over external ids.
    ///
    /// Self-loops and duplicate directed edges are dropped; the counts are
    /// available via [`Self::self_loops_dropped`] and
    /// [`Self::duplicates_dropped`]. Node ids are assigned in order of first
    /// appearance in the input.
    pub fn build_from_edges(pairs: &[(u64, u64)]) -> Result<Self, GraphError> {
        if pairs.is_empty() {
            return Err(GraphError::EmptyEdgeList);
        }

        let mut id_index: HashMap<u64, NodeId> = HashMap::new();
        let mut original_ids: Vec<u64> = Vec::new();
        let intern = |id: u64, index: &mut HashMap<u64, NodeId>, ids: &mut Vec<u64>| -> NodeId {
            *index.entry(id).or_insert_with(|| {
                let compact = ids.len() as NodeId;
                ids.push(id);
                compact
            })
        };

        let mut self_loops = 0usize;
        let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            let u = intern(a, &mut id_index, &mut original_ids);
            let v = intern(b, &mut id_index, &mut original_ids);
            if u == v {
                self_loops += 1;
            } else {
                edges.push((u, v));
            }
        }

        let n = original_ids.len();
        let mut out_adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (u, v) in edges.iter().copied() {
            out_adj[u as usize].push(v);
        }
        let before_dedup: usize = edges.len();
        let mut edge_total = 0usize;
        for list in &mut out_adj {
            list.sort_unstable();
            list.dedup();
            edge_total += list.len();
        }
        let duplicates = before_dedup - edge_total;

        let mut out_offsets = Vec::with_capacity(n + 1);
        let mut out_targets = Vec::with_capacity(edge_total);
        out_offsets.push(0);
        for list in &out_adj {
            out_targets.extend_from_slice(list);
            out_offsets.push(out_targets.len());
        }

        // Filling in-lists by ascending source keeps them sorted.
        let mut in_degrees = vec![0usize; n];
        for &v in &out_targets {
            in_degrees[v as usize] += 1;
        }
        let mut in_offsets = Vec::with_capacity(n + 1);
        in_offsets.push(0);
        for d in &in_degrees {
            in_offsets.push(in_offsets.last().unwrap() + d);
        }
        let mut in_targets = vec![0 as NodeId; edge_total];
        let mut cursor = in_offsets.clone();
        for (u, list) in out_adj.iter().enumerate() {
            for &v in list {
                in_targets[cursor[v as usize]] = u as NodeId;
                cursor[v as usize] += 1;
            }
        }

        Ok(DirectedGraph {
            out_offsets,
            out_targets,
            in_offsets,
            in_targets,
            original_ids,
            id_index,
            self_loops_dropped: self_loops,
            duplicates_dropped: duplicates,
        })
    }

    pub fn node_count(&self) -> usize {
        self.original_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.out_targets[self.out_offsets[v as usize]..self.out_offsets[v as usize + 1]]
    }

    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.in_targets[self.in_offsets[v as usize]..self.in_offsets[v as usize + 1]]
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_neighbors(v).len()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_neighbors(v).len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.out_neighbors(u).binary_search(&v).is_ok()
    }

    /// All directed edges in (source-ascending, target-ascending) order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count() as NodeId)
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    /// External id the compacted node was built from.
    pub fn original_id(&self, v: NodeId) -> u64 {
        self.original_ids[v as usize]
    }

    pub fn node_for_original(&self, id: u64) -> Option<NodeId> {
        self.id_index.get(&id).copied()
    }

    /// Rebuilds a graph over the same node universe (same compact↔original
    /// id maps) from a replacement edge set. Edges must be loop-free and
    /// duplicate-free already.
    pub(crate) fn with_replaced_edges(&self, edges: &[(NodeId, NodeId)]) -> DirectedGraph {
        let n = self.node_count();
        let mut out_adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            debug_assert_ne!(u, v);
            out_adj[u as usize].push(v);
        }
        let mut out_offsets = Vec::with_capacity(n + 1);
        let mut out_targets = Vec::with_capacity(edges.len());
        out_offsets.push(0);
        for list in &mut out_adj {
            list.sort_unstable();
            debug_assert!(list.windows(2).all(|w| w[0] != w[1]));
            out_targets.extend_from_slice(list);
            out_offsets.push(out_targets.len());
        }
        let mut in_adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (u, list) in out_adj.iter().enumerate() {
            for &v in list {
                in_adj[v as usize].push(u as NodeId);
            }
        }
        let mut in_offsets = Vec::with_capacity(n + 1);
        let mut in_targets = Vec::with_capacity(edges.len());
        in_offsets.push(0);
        for list in &in_adj {
            in_targets.extend_from_slice(list);
            in_offsets.push(in_targets.len());
        }
        DirectedGraph {
            out_offsets,
            out_targets,
            in_offsets,
            in_targets,
            original_ids: self.original_ids.clone(),
            id_index: self.id_index.clone(),
            self_loops_dropped: 0,
            duplicates_dropped: 0,
        }
    }

    /// Undirected projection: `u ~ v` iff `u→v` or `v→u`.
    pub fn undirected_projection(&self) -> UndirectedView<'_> {
        let n = self.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for v in 0..n as NodeId {
            merge_sorted_dedup(self.out_neighbors(v), self.in_neighbors(v), &mut targets);
            offsets.push(targets.len());
        }
        UndirectedView {
            graph: self,
            offsets,
            targets,
        }
    }

    /// Adjacency bitmask of the induced subgraph on an ordered node tuple.
    /// Bit `(i, j)` is set iff `nodes[i] → nodes[j]` exists.
    pub fn induced_bitmask(&self, nodes: &[NodeId]) -> Result<AdjacencyBitmask, GraphError> {
        let k = nodes.len();
        if !(3..=4).contains(&k) {
            return Err(GraphError::UnsupportedOrder(k));
        }
        for (i, &v) in nodes.iter().enumerate() {
            if v as usize >= self.node_count() {
                return Err(GraphError::NodeOutOfRange(v, self.node_count()));
            }
            if nodes[..i].contains(&v) {
                return Err(GraphError::DuplicateNode(v));
            }
        }
        let mut mask = AdjacencyBitmask::empty(k);
        for i in 0..k {
            for j in 0..k {
                if i != j && self.has_edge(nodes[i], nodes[j]) {
                    mask.set(i, j);
                }
            }
        }
        Ok(mask)
    }

    /// Induced directed subgraph on `nodes`, renumbered `0..nodes.len()` in
    /// the given order. Original external ids carry over, so metadata joins
    /// keep working on subgraphs of subgraphs.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> DirectedGraph {
        let local: HashMap<NodeId, NodeId> = nodes
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as NodeId))
            .collect();
        let n = nodes.len();
        let mut out_adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (i, &v) in nodes.iter().enumerate() {
            for &w in self.out_neighbors(v) {
                if let Some(&j) = local.get(&w) {
                    out_adj[i].push(j);
                }
            }
            out_adj[i].sort_unstable();
        }

        let mut out_offsets = Vec::with_capacity(n + 1);
        let mut out_targets = Vec::new();
        out_offsets.push(0);
        for list in &out_adj {
            out_targets.extend_from_slice(list);
            out_offsets.push(out_targets.len());
        }
        let mut in_adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (u, list) in out_adj.iter().enumerate() {
            for &v in list {
                in_adj[v as usize].push(u as NodeId);
            }
        }
        let mut in_offsets = Vec::with_capacity(n + 1);
        let mut in_targets = Vec::new();
        in_offsets.push(0);
        for list in &in_adj {
            in_targets.extend_from_slice(list);
            in_offsets.push(in_targets.len());
        }

        let original_ids: Vec<u64> = nodes.iter().map(|&v| self.original_id(v)).collect();
        let id_index = original_ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i as NodeId))
            .collect();
        DirectedGraph {
            out_offsets,
            out_targets,
            in_offsets,
            in_targets,
            original_ids,
            id_index,
            self_loops_dropped: 0,
            duplicates_dropped: 0,
        }
    }
}

fn merge_sorted_dedup(a: &[NodeId], b: &[NodeId], out: &mut Vec<NodeId>) {
    let (mut i, mut j) = (0, 0);
    let mut last: Option<NodeId> = None;
    while i < a.len() || j < b.len() {
        let next = if j >= b.len() || (i < a.len() && a[i] <= b[j]) {
            let x = a[i];
            i += 1;
            x
        } else {
            let x = b[j];
            j += 1;
            x
        };
        if last != Some(next) {
            out.push(next);
            last = Some(next);
        }
    }
}

/// Symmetric neighbor lists over a [`DirectedGraph`]: the union of in- and
/// out-neighbors, deduplicated. Component, clustering, distance and community
/// computations all run on this view.
#[derive(Debug)]
pub struct UndirectedView<'g> {
    graph: &'g DirectedGraph,
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl<'g> UndirectedView<'g> {
    pub fn graph(&self) -> &'g DirectedGraph {
        self.graph
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges (each unordered pair counted once).
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Undirected edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut edges = Vec::with_capacity(self.edge_count());
        for u in 0..self.node_count() as NodeId {
            for &v in self.neighbors(u) {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        edges
    }
}

/// Adjacency of a k-node digraph (k = 3 or 4) packed into `k·(k−1)` bits.
///
/// Ordered pair `(i, j)`, `i ≠ j`, lives at bit `i·(k−1) + (j if j < i else
/// j−1)`: row-major with the diagonal skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdjacencyBitmask {
    k: u8,
    bits: u16,
}

impl AdjacencyBitmask {
    pub fn empty(k: usize) -> Self {
        assert!((3..=4).contains(&k), "subgraph order must be 3 or 4");
        AdjacencyBitmask { k: k as u8, bits: 0 }
    }

    pub fn from_bits(k: usize, bits: u16) -> Self {
        assert!((3..=4).contains(&k));
        debug_assert_eq!(bits >> (k * (k - 1)), 0, "high bits must be clear");
        AdjacencyBitmask { k: k as u8, bits }
    }

    pub fn from_edges(k: usize, edges: &[(usize, usize)]) -> Self {
        let mut mask = Self::empty(k);
        for &(i, j) in edges {
            mask.set(i, j);
        }
        mask
    }

    #[inline]
    pub fn bit_index(k: usize, i: usize, j: usize) -> u32 {
        debug_assert!(i != j && i < k && j < k);
        (i * (k - 1) + if j < i { j } else { j - 1 }) as u32
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.bits |= 1 << Self::bit_index(self.k as usize, i, j);
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits >> Self::bit_index(self.k as usize, i, j) & 1 == 1
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    pub fn edge_count(&self) -> u32 {
        self.bits.count_ones()
    }

    /// The same subgraph with node `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let k = self.k as usize;
        debug_assert_eq!(perm.len(), k);
        let mut out = Self::empty(k);
        for i in 0..k {
            for j in 0..k {
                if i != j && self.get(i, j) {
                    out.set(perm[i], perm[j]);
                }
            }
        }
        out
    }

    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        let k = self.k as usize;
        let mut pairs = Vec::with_capacity(self.edge_count() as usize);
        for i in 0..k {
            for j in 0..k {
                if i != j && self.get(i, j) {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }

    pub fn in_degrees(&self) -> Vec<u32> {
        let k = self.k as usize;
        let mut degs = vec![0; k];
        for (_, j) in self.edge_pairs() {
            degs[j] += 1;
        }
        degs
    }

    pub fn out_degrees(&self) -> Vec<u32> {
        let k = self.k as usize;
        let mut degs = vec![0; k];
        for (i, _) in self.edge_pairs() {
            degs[i] += 1;
        }
        degs
    }

    /// Weak connectivity: the underlying undirected graph is connected.
    pub fn is_weakly_connected(&self) -> bool {
        let k = self.k as usize;
        let mut reached = 1u8; // node 0
        loop {
            let before = reached;
            for (i, j) in self.edge_pairs() {
                if reached >> i & 1 == 1 || reached >> j & 1 == 1 {
                    reached |= (1 << i) | (1 << j);
                }
            }
            if reached == before {
                break;
            }
        }
        reached == (1u8 << k) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn builds_mutual_dyad() {
        let g = DirectedGraph::build_from_edges(&[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        assert_eq!(g.self_loops_dropped(), 0);
        assert_eq!(g.duplicates_dropped(), 0);
    }

    #[test]
    fn drops_self_loops_and_duplicates() {
        let g = DirectedGraph::build_from_edges(&[(5, 5), (5, 6), (5, 6)]).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.self_loops_dropped(), 1);
        assert_eq!(g.duplicates_dropped(), 1);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert_eq!(
            DirectedGraph::build_from_edges(&[]).unwrap_err(),
            GraphError::EmptyEdgeList
        );
    }

    #[test]
    fn ids_compact_in_first_appearance_order() {
        let g = DirectedGraph::build_from_edges(&[(30, 10), (10, 20)]).unwrap();
        assert_eq!(g.original_id(0), 30);
        assert_eq!(g.original_id(1), 10);
        assert_eq!(g.original_id(2), 20);
        assert_eq!(g.node_for_original(20), Some(2));
        assert_eq!(g.node_for_original(99), None);
    }

    #[test]
    fn degree_sums_match_edge_count() {
        let g = DirectedGraph::build_from_edges(&[(0, 1), (1, 2), (2, 0), (0, 2), (1, 0)]).unwrap();
        let out_sum: usize = (0..g.node_count() as NodeId).map(|v| g.out_degree(v)).sum();
        let in_sum: usize = (0..g.node_count() as NodeId).map(|v| g.in_degree(v)).sum();
        assert_eq!(out_sum, g.edge_count());
        assert_eq!(in_sum, g.edge_count());
    }

    #[test]
    fn in_adjacency_is_consistent_with_out() {
        let g = DirectedGraph::build_from_edges(&[(0, 1), (1, 2), (2, 0), (3, 1), (1, 3)]).unwrap();
        for u in 0..g.node_count() as NodeId {
            for &v in g.out_neighbors(u) {
                assert!(g.in_neighbors(v).contains(&u));
            }
            for &v in g.in_neighbors(u) {
                assert!(g.out_neighbors(v).contains(&u));
            }
        }
    }

    #[test]
    fn projection_collapses_reciprocal_edges() {
        let g = DirectedGraph::build_from_edges(&[(0, 1), (1, 0)]).unwrap();
        let u = g.undirected_projection();
        assert_eq!(u.edge_count(), 1);
        assert_eq!(u.neighbors(0), &[1]);
        assert_eq!(u.neighbors(1), &[0]);
    }

    #[test]
    fn projection_of_path() {
        let g = DirectedGraph::build_from_edges(&[(0, 1), (1, 2)]).unwrap();
        let u = g.undirected_projection();
        assert_eq!(u.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn projection_of_directed_cycle_is_triangle() {
        let g = DirectedGraph::build_from_edges(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        let u = g.undirected_projection();
        assert_eq!(u.edge_count(), 3);
        assert!(u.has_edge(0, 2) && u.has_edge(2, 1) && u.has_edge(1, 0));
    }

    #[test]
    fn bitmask_of_two_out_edges() {
        let g = DirectedGraph::build_from_edges(&[(0, 1), (0, 2)]).unwrap();
        let m = g.induced_bitmask(&[0, 1, 2]).unwrap();
        assert_eq!(m.edge_count(), 2);
        assert_eq!(m.out_degrees()[0], 2);
    }

    #[test]
    fn bitmask_of_disconnected_triple_is_zero() {
        let g = DirectedGraph::build_from_edges(&[(0, 1), (2, 3), (4, 5)]).unwrap();
        let m = g.induced_bitmask(&[0, 2, 4]).unwrap();
        assert_eq!(m.bits(), 0);
    }

    #[test]
    fn bitmask_of_directed_three_cycle() {
        // (0,1) -> bit 0, (1,2) -> bit 3, (2,0) -> bit 4: hand-enumerated layout.
        let g = DirectedGraph::build_from_edges(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        let m = g.induced_bitmask(&[0, 1, 2]).unwrap();
        assert_eq!(m.bits(), 0b011001);
        assert_eq!(m.in_degrees(), vec![1, 1, 1]);
        assert_eq!(m.out_degrees(), vec![1, 1, 1]);
    }

    #[test]
    fn bitmask_rejects_duplicate_nodes() {
        let g = DirectedGraph::build_from_edges(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            g.induced_bitmask(&[0, 1, 1]).unwrap_err(),
            GraphError::DuplicateNode(1)
        );
    }

    #[test]
    fn induced_subgraph_keeps_original_ids() {
        let g = DirectedGraph::build_from_edges(&[(7, 8), (8, 9), (9, 7), (7, 3)]).unwrap();
        let sub = g.induced_subgraph(&[0, 1, 2]); // nodes 7, 8, 9
        assert_eq!(sub.node_count(), 3);
        assert_eq!(sub.edge_count(), 3);
        assert_eq!(sub.original_id(0), 7);
        assert_eq!(sub.original_id(2), 9);
        assert!(sub.has_edge(2, 0)); // 9 -> 7
    }

    proptest! {
        #[test]
        fn relabel_commutes_with_induced_bitmask(perm_seed in 0usize..24, edges_bits in 0u16..4096) {
            // Random 4-node digraph, random permutation of the tuple.
            let mask = AdjacencyBitmask::from_bits(4, edges_bits);
            // Self-loops intern ids 0..4 in order without adding edges.
            let mut edge_pairs: Vec<(u64, u64)> = vec![(0, 0), (1, 1), (2, 2), (3, 3)];
            edge_pairs.extend(mask.edge_pairs().iter().map(|&(i, j)| (i as u64, j as u64)));
            let g = DirectedGraph::build_from_edges(&edge_pairs).unwrap();

            let perms = crate::catalog::permutations(4);
            let perm = &perms[perm_seed];
            let tuple: Vec<NodeId> = perm.iter().map(|&p| p as NodeId).collect();
            // Spec property: masking a permuted tuple equals relabeling the mask.
            // tuple[i] = perm[i], so bit (i, j) of the permuted mask reads the
            // edge (perm[i], perm[j]); that equals relabel by the inverse.
            let direct = g.induced_bitmask(&tuple).unwrap();
            let mut inverse = vec![0usize; 4];
            for (i, &p) in perm.iter().enumerate() {
                inverse[p] = i;
            }
            let relabeled = mask.relabel(&inverse);
            prop_assert_eq!(direct, relabeled);
        }

        #[test]
        fn projection_is_symmetric(edges in proptest::collection::vec((0u64..12, 0u64..12), 1..40)) {
            let g = DirectedGraph::build_from_edges(&edges).unwrap();
            let u = g.undirected_projection();
            for v in 0..u.node_count() as NodeId {
                for &w in u.neighbors(v) {
                    prop_assert_ne!(v, w);
                    prop_assert!(u.neighbors(w).contains(&v));
                }
            }
            prop_assert!(u.edge_count() <= g.edge_count());
        }
    }

}
