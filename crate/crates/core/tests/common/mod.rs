//! Independent oracles for the acceptance suite. Everything here is written
//! against plain edge lists and adjacency matrices, not against the library's
//! bitmask/canonicalization machinery, so the two sides can check each other.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use motifscope_core::graph::{DirectedGraph, NodeId};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn random_digraph(n: u64, p: f64, seed: u64) -> DirectedGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random::<f64>() < p {
                pairs.push((u, v));
            }
        }
    }
    pairs.push((0, 1 % n.max(2)));
    DirectedGraph::build_from_edges(&pairs).unwrap()
}

/// Edge set of a k-node digraph as lexicographically sorted ordered pairs;
/// the oracle's working representation.
pub type EdgeSet = Vec<(usize, usize)>;

/// Isomorphism test by brute permutation search on edge sets.
pub fn isomorphic(a: &EdgeSet, b: &EdgeSet, k: usize) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        let mut mapped: EdgeSet = a.iter().map(|&(i, j)| (perm[i], perm[j])).collect();
        mapped.sort_unstable();
        if &mapped == b {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Weak connectivity by union-find over the undirected support.
pub fn weakly_connected(edges: &EdgeSet, k: usize) -> bool {
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(i, j) in edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    (1..k).all(|v| find(&mut parent, v) == root)
}

/// All ordered node pairs of a k-digraph in the oracle's own order.
pub fn oracle_pairs(k: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Brute-force catalog: every subset of ordered pairs, filtered to weakly
/// connected ones, grouped by the permutation-search isomorphism test.
/// Returns one representative edge set per class.
pub fn oracle_catalog(k: usize) -> Vec<EdgeSet> {
    let pairs = oracle_pairs(k);
    let mut representatives: Vec<EdgeSet> = Vec::new();
    for subset in 0u32..(1 << pairs.len()) {
        let edges: EdgeSet = pairs
            .iter()
            .enumerate()
            .filter(|&(bit, _)| subset >> bit & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        if !weakly_connected(&edges, k) {
            continue;
        }
        if !representatives.iter().any(|rep| isomorphic(rep, &edges, k)) {
            representatives.push(edges);
        }
    }
    representatives
}

/// Subset index → oracle class, precomputed so classifying millions of
/// subgraphs stays cheap. Indexing uses the oracle's own pair order.
pub struct OracleClassifier {
    k: usize,
    pairs: Vec<(usize, usize)>,
    pub representatives: Vec<EdgeSet>,
    class_of_subset: Vec<Option<usize>>,
}

impl OracleClassifier {
    pub fn build(k: usize) -> Self {
        let pairs = oracle_pairs(k);
        let representatives = oracle_catalog(k);
        let mut class_of_subset = vec![None; 1 << pairs.len()];
        for subset in 0u32..(1 << pairs.len()) {
            let edges: EdgeSet = pairs
                .iter()
                .enumerate()
                .filter(|&(bit, _)| subset >> bit & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            if !weakly_connected(&edges, k) {
                continue;
            }
            let class = representatives
                .iter()
                .position(|rep| isomorphic(rep, &edges, k))
                .expect("every connected digraph matches a representative");
            class_of_subset[subset as usize] = Some(class);
        }
        OracleClassifier {
            k,
            pairs,
            representatives,
            class_of_subset,
        }
    }

    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    fn classify(&self, matrix: &[Vec<bool>], nodes: &[usize]) -> Option<usize> {
        let mut subset = 0usize;
        for (bit, &(i, j)) in self.pairs.iter().enumerate() {
            if matrix[nodes[i]][nodes[j]] {
                subset |= 1 << bit;
            }
        }
        self.class_of_subset[subset]
    }

    /// Census by enumerating every C(n, k) node subset against a plain
    /// adjacency matrix. Returns per-oracle-class counts.
    pub fn census(&self, g: &DirectedGraph) -> Vec<u64> {
        let n = g.node_count();
        let mut matrix = vec![vec![false; n]; n];
        for (u, v) in g.edges() {
            matrix[u as usize][v as usize] = true;
        }
        let mut counts = vec![0u64; self.representatives.len()];
        if n < self.k {
            return counts;
        }
        let mut subset: Vec<usize> = (0..self.k).collect();
        loop {
            if let Some(class) = self.classify(&matrix, &subset) {
                counts[class] += 1;
            }
            if !next_combination(&mut subset, n) {
                return counts;
            }
        }
    }
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] != i + n - k {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Brute-force edge betweenness: for every unordered pair, distribute one
/// unit over its shortest paths via σ products.
pub fn brute_force_edge_betweenness(adj: &[Vec<NodeId>]) -> HashMap<(NodeId, NodeId), f64> {
    let n = adj.len();
    let mut dist = vec![vec![i64::MAX; n]; n];
    let mut sigma = vec![vec![0.0f64; n]; n];
    for s in 0..n {
        let mut queue = VecDeque::new();
        dist[s][s] = 0;
        sigma[s][s] = 1.0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                let w = w as usize;
                if dist[s][w] == i64::MAX {
                    dist[s][w] = dist[s][v] + 1;
                    queue.push_back(w);
                }
                if dist[s][w] == dist[s][v] + 1 {
                    sigma[s][w] += sigma[s][v];
                }
            }
        }
    }

    let mut scores: HashMap<(NodeId, NodeId), f64> = HashMap::new();
    for (v, nbrs) in adj.iter().enumerate() {
        for &w in nbrs {
            if (v as NodeId) < w {
                scores.insert((v as NodeId, w), 0.0);
            }
        }
    }
    for s in 0..n {
        for t in s + 1..n {
            if dist[s][t] == i64::MAX || sigma[s][t] == 0.0 {
                continue;
            }
            for (&(a, b), score) in scores.iter_mut() {
                let (a, b) = (a as usize, b as usize);
                let mut through = 0.0;
                // Orientation a→b on the s→t geodesics.
                if dist[s][a] != i64::MAX
                    && dist[b][t] != i64::MAX
                    && dist[s][a] + 1 + dist[b][t] == dist[s][t]
                {
                    through += sigma[s][a] * sigma[b][t];
                }
                // Orientation b→a.
                if dist[s][b] != i64::MAX
                    && dist[a][t] != i64::MAX
                    && dist[s][b] + 1 + dist[a][t] == dist[s][t]
                {
                    through += sigma[s][b] * sigma[a][t];
                }
                *score += through / sigma[s][t];
            }
        }
    }
    scores
}

/// Maximum modularity over every set partition (restricted growth strings);
/// only feasible for n ≤ 9 or so.
pub fn exhaustive_best_modularity(u: &motifscope_core::graph::UndirectedView) -> f64 {
    let n = u.node_count();
    assert!(n <= 9, "exhaustive search explodes past Bell(9)");
    let mut best = f64::NEG_INFINITY;
    let mut labels = vec![0u32; n];
    fn recurse(
        u: &motifscope_core::graph::UndirectedView,
        labels: &mut Vec<u32>,
        pos: usize,
        max_used: u32,
        best: &mut f64,
    ) {
        if pos == labels.len() {
            let q = motifscope_core::community::modularity(u, labels);
            if q > *best {
                *best = q;
            }
            return;
        }
        for label in 0..=max_used + 1 {
            labels[pos] = label;
            recurse(u, labels, pos + 1, max_used.max(label), best);
        }
    }
    if n == 0 {
        return 0.0;
    }
    labels[0] = 0;
    recurse(u, &mut labels, 1, 0, &mut best);
    best
}

/// Directed two-cliques-plus-bridge fixture (fully mutual cliques).
pub fn two_mutual_cliques(size: u64) -> DirectedGraph {
    let mut edges = Vec::new();
    for base in [0, size] {
        for a in 0..size {
            for b in 0..size {
                if a != b {
                    edges.push((base + a, base + b));
                }
            }
        }
    }
    edges.push((0, size));
    DirectedGraph::build_from_edges(&edges).unwrap()
}

/// Resolves the full co-purchasing snapshot if it is available: the
/// MOTIFSCOPE_AMAZON0302 variable first, then data/amazon0302.txt at the
/// workspace root.
pub fn amazon_dataset_path() -> Option<std::path::PathBuf> {
    if let Ok(path) = std::env::var("MOTIFSCOPE_AMAZON0302") {
        let path = std::path::PathBuf::from(path);
        if path.exists() {
            return Some(path);
        }
    }
    let fallback = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/amazon0302.txt");
    if fallback.exists() {
        Some(fallback)
    } else {
        None
    }
}

pub fn load_amazon(path: &std::path::Path) -> (Vec<(u64, u64)>, DirectedGraph) {
    let file = std::fs::File::open(path).expect("dataset opens");
    let pairs = motifscope_core::ingest::parse_edge_list(std::io::BufReader::new(file))
        .expect("dataset parses");
    let graph = DirectedGraph::build_from_edges(&pairs).expect("dataset builds");
    (pairs, graph)
}
