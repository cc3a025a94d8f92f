//! Greedy modularity maximization: start from singletons, repeatedly merge
//! the community pair with the largest modularity gain, stop when no merge
//! helps. Ties break toward the smallest community-id pair.

use std::collections::{BinaryHeap, HashMap};

use super::{renumber, Partition};
use crate::graph::{NodeId, UndirectedView};

#[derive(Debug, Clone, PartialEq)]
pub struct MergeStep {
    /// Communities merged (smaller id survives).
    pub merged: (u32, u32),
    pub delta_q: f64,
    pub q_after: f64,
}

#[derive(Debug, PartialEq)]
struct HeapEntry {
    dq: f64,
    i: u32,
    j: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.dq
            .total_cmp(&other.dq)
            .then_with(|| other.i.cmp(&self.i))
            .then_with(|| other.j.cmp(&self.j))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub fn cnm_greedy(u: &UndirectedView) -> (Partition, Vec<MergeStep>) {
    let n = u.node_count();
    let m = u.edge_count();
    if m == 0 {
        let assignment: Vec<u32> = (0..n as u32).collect();
        return (
            Partition {
                assignment,
                community_count: n,
                modularity: 0.0,
            },
            Vec::new(),
        );
    }

    let two_m = 2.0 * m as f64;
    // a[i]: degree fraction; e[i][j]: fraction of edges between i and j
    // (each endpoint's half), so row sums stay equal to a[i].
    let mut a: Vec<f64> = (0..n as NodeId).map(|v| u.degree(v) as f64 / two_m).collect();
    let mut e: Vec<HashMap<u32, f64>> = (0..n as NodeId)
        .map(|v| {
            u.neighbors(v)
                .iter()
                .map(|&w| (w, 1.0 / two_m))
                .collect()
        })
        .collect();
    let mut alive = vec![true; n];
    let mut merged_into: Vec<Option<u32>> = vec![None; n];

    let mut q = -a.iter().map(|x| x * x).sum::<f64>();
    let mut dq_current: HashMap<(u32, u32), f64> = HashMap::new();
    let mut heap = BinaryHeap::new();
    for (v, nbrs) in e.iter().enumerate() {
        for (&w, &weight) in nbrs {
            if (v as u32) < w {
                let dq = 2.0 * (weight - a[v] * a[w as usize]);
                dq_current.insert((v as u32, w), dq);
                heap.push(HeapEntry {
                    dq,
                    i: v as u32,
                    j: w,
                });
            }
        }
    }

    let mut history = Vec::new();
    while let Some(entry) = heap.pop() {
        if entry.dq <= 0.0 {
            break;
        }
        let (i, j) = (entry.i, entry.j);
        if !alive[i as usize] || !alive[j as usize] {
            continue;
        }
        match dq_current.get(&(i, j)) {
            Some(&dq) if dq.to_bits() == entry.dq.to_bits() => {}
            _ => continue, // stale entry
        }

        // Merge j into i.
        q += entry.dq;
        history.push(MergeStep {
            merged: (i, j),
            delta_q: entry.dq,
            q_after: q,
        });
        alive[j as usize] = false;
        merged_into[j as usize] = Some(i);
        dq_current.remove(&(i, j));

        let j_nbrs: Vec<(u32, f64)> = e[j as usize].drain().collect();
        for (x, w) in j_nbrs {
            if x == i {
                continue;
            }
            dq_current.remove(&pair(j, x));
            *e[i as usize].entry(x).or_insert(0.0) += w;
            let merged_weight = e[i as usize][&x];
            let row = &mut e[x as usize];
            row.remove(&j);
            row.insert(i, merged_weight);
        }
        e[i as usize].remove(&j);
        a[i as usize] += a[j as usize];

        // Refresh the gains of every pair touching the merged community.
        let neighbors: Vec<u32> = e[i as usize].keys().copied().collect();
        for x in neighbors {
            let dq = 2.0 * (e[i as usize][&x] - a[i as usize] * a[x as usize]);
            let key = pair(i, x);
            dq_current.insert(key, dq);
            heap.push(HeapEntry {
                dq,
                i: key.0,
                j: key.1,
            });
        }
    }

    // Resolve each node to its surviving community.
    let labels: Vec<u32> = (0..n as u32)
        .map(|v| {
            let mut c = v;
            while let Some(p) = merged_into[c as usize] {
                c = p;
            }
            c
        })
        .collect();
    let (assignment, community_count) = renumber(&labels);
    let modularity = super::modularity(u, &assignment);
    (
        Partition {
            assignment,
            community_count,
            modularity,
        },
        history,
    )
}

fn pair(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}
