//! Canonical catalogs of connected k-node digraph classes.
//!
//! A class is the isomorphism class of a weakly connected k-node digraph,
//! identified by the minimum adjacency bitmask over all k! relabelings.
//! Class ids are assigned by (edge count, canonical encoding) order, which is
//! deterministic and independent of any published figure dictionary; the
//! handful of triads commonly cited by number in the motif literature are
//! exposed through [`classic_triad_aliases`].

use std::collections::BTreeMap;

use crate::graph::AdjacencyBitmask;

/// One isomorphism class of connected k-node digraphs.
#[derive(Debug, Clone)]
pub struct MotifClass {
    /// 1-based id, contiguous within a catalog.
    pub class_id: u32,
    pub k: usize,
    pub canonical: AdjacencyBitmask,
    pub edge_count: u32,
    /// In-degrees of the canonical representative, sorted ascending.
    /// Invariant under isomorphism as a multiset.
    pub in_degree_profile: Vec<u32>,
}

/// All connected k-node digraph classes plus an O(1) bitmask → class lookup.
#[derive(Debug, Clone)]
pub struct MotifCatalog {
    k: usize,
    classes: Vec<MotifClass>,
    // Indexed by raw bitmask; 0 means "not weakly connected".
    class_of_mask: Vec<u32>,
}

impl MotifCatalog {
    /// Enumerates all 2^(k·(k−1)) adjacency bitmasks, keeps the weakly
    /// connected ones, canonicalizes, deduplicates, and numbers the classes.
    pub fn build(k: usize) -> Self {
        assert!((3..=4).contains(&k), "catalog order must be 3 or 4");
        let mask_space = 1usize << (k * (k - 1));
        let perms = permutations(k);

        let mut canon_of_mask: Vec<u16> = Vec::with_capacity(mask_space);
        let mut seen: BTreeMap<u16, ()> = BTreeMap::new();
        for bits in 0..mask_space as u16 {
            let mask = AdjacencyBitmask::from_bits(k, bits);
            if mask.is_weakly_connected() {
                let canon = canonical_form_with(&mask, &perms);
                canon_of_mask.push(canon.bits());
                seen.entry(canon.bits()).or_insert(());
            } else {
                canon_of_mask.push(u16::MAX);
            }
        }

        let mut canonical_masks: Vec<u16> = seen.into_keys().collect();
        canonical_masks
            .sort_by_key(|&bits| (bits.count_ones(), bits));

        let classes: Vec<MotifClass> = canonical_masks
            .iter()
            .enumerate()
            .map(|(i, &bits)| {
                let canonical = AdjacencyBitmask::from_bits(k, bits);
                let mut profile = canonical.in_degrees();
                profile.sort_unstable();
                MotifClass {
                    class_id: i as u32 + 1,
                    k,
                    canonical,
                    edge_count: canonical.edge_count(),
                    in_degree_profile: profile,
                }
            })
            .collect();

        let id_of_canon: BTreeMap<u16, u32> = classes
            .iter()
            .map(|c| (c.canonical.bits(), c.class_id))
            .collect();
        let class_of_mask = canon_of_mask
            .iter()
            .map(|&canon| {
                if canon == u16::MAX {
                    0
                } else {
                    id_of_canon[&canon]
                }
            })
            .collect();

        MotifCatalog {
            k,
            classes,
            class_of_mask,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[MotifClass] {
        &self.classes
    }

    pub fn class(&self, class_id: u32) -> &MotifClass {
        &self.classes[class_id as usize - 1]
    }

    /// Class of an arbitrary (not necessarily canonical) bitmask; `None` when
    /// the subgraph is not weakly connected.
    pub fn class_id_of(&self, mask: AdjacencyBitmask) -> Option<u32> {
        debug_assert_eq!(mask.k(), self.k);
        match self.class_of_mask[mask.bits() as usize] {
            0 => None,
            id => Some(id),
        }
    }
}

/// Minimum bitmask value over all k! relabelings. Idempotent.
pub fn canonical_form(mask: &AdjacencyBitmask) -> AdjacencyBitmask {
    canonical_form_with(mask, &permutations(mask.k()))
}

fn canonical_form_with(mask: &AdjacencyBitmask, perms: &[Vec<usize>]) -> AdjacencyBitmask {
    perms
        .iter()
        .map(|perm| mask.relabel(perm))
        .min()
        .expect("at least the identity permutation")
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut result: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in &result {
            for x in 0..k {
                if !p.contains(&x) {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
        }
        result = next;
    }
    result
}

/// A triad class under the numbering used in the classic motif-dictionary
/// literature (Milo et al.'s figure ids), for the classes this toolkit
/// reports by name.
#[derive(Debug, Clone)]
pub struct TriadAlias {
    /// Id in the published triad dictionary.
    pub published_id: u32,
    pub name: &'static str,
    /// Matching class id in the deterministic catalog numbering.
    pub class_id: u32,
}

type AliasSpec = (u32, &'static str, &'static [(usize, usize)]);

const CLASSIC_TRIADS: [AliasSpec; 4] = [
    (1, "diverging pair", &[(0, 1), (0, 2)]),
    (3, "mutual pair with outgoing edge", &[(0, 1), (1, 0), (0, 2)]),
    (4, "converging pair", &[(1, 0), (2, 0)]),
    (10, "edge into mutual pair", &[(2, 0), (0, 1), (1, 0)]),
];

/// Maps the four named triads onto catalog class ids. Only defined for k = 3.
pub fn classic_triad_aliases(catalog: &MotifCatalog) -> Vec<TriadAlias> {
    assert_eq!(catalog.k(), 3, "triad aliases only exist for k = 3");
    CLASSIC_TRIADS
        .iter()
        .map(|&(published_id, name, edges)| {
            let mask = AdjacencyBitmask::from_edges(3, edges);
            let class_id = catalog
                .class_id_of(mask)
                .expect("alias structures are connected");
            TriadAlias {
                published_id,
                name,
                class_id,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_of_zero_mask_is_zero() {
        let mask = AdjacencyBitmask::from_bits(3, 0);
        assert_eq!(canonical_form(&mask).bits(), 0);
    }

    #[test]
    fn canonical_is_idempotent() {
        for bits in 0..64u16 {
            let mask = AdjacencyBitmask::from_bits(3, bits);
            let c = canonical_form(&mask);
            assert_eq!(canonical_form(&c), c);
        }
    }

    #[test]
    fn diverging_pair_canonical_under_all_relabelings() {
        let base = AdjacencyBitmask::from_edges(3, &[(0, 1), (0, 2)]);
        let expect = canonical_form(&base);
        for perm in permutations(3) {
            assert_eq!(canonical_form(&base.relabel(&perm)), expect);
        }
    }

    #[test]
    fn directed_three_cycle_has_one_canonical_value() {
        // Hand enumeration: the six relabelings of a 3-cycle produce only the
        // two orientations 0b011001 (25) and 0b100110 (38); the minimum is 25.
        let cycle = AdjacencyBitmask::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let mut values: Vec<u16> = permutations(3)
            .iter()
            .map(|perm| cycle.relabel(perm).bits())
            .collect();
        values.sort_unstable();
        values.dedup();
        assert_eq!(values, vec![25, 38]);
        for perm in permutations(3) {
            assert_eq!(canonical_form(&cycle.relabel(&perm)).bits(), 25);
        }
    }

    #[test]
    fn triad_catalog_has_thirteen_classes() {
        let catalog = MotifCatalog::build(3);
        assert_eq!(catalog.len(), 13);
        for (i, class) in catalog.classes().iter().enumerate() {
            assert_eq!(class.class_id, i as u32 + 1);
            assert_eq!(class.edge_count, class.canonical.edge_count());
        }
    }

    #[test]
    fn triad_edge_count_histogram() {
        // Frozen from the brute-force enumeration over all 64 bitmasks modulo
        // isomorphism: 3 classes with 2 edges, 4 with 3, 4 with 4, 1 with 5,
        // 1 with 6.
        let catalog = MotifCatalog::build(3);
        let mut hist = BTreeMap::new();
        for class in catalog.classes() {
            *hist.entry(class.edge_count).or_insert(0u32) += 1;
        }
        let expect: BTreeMap<u32, u32> = [(2, 3), (3, 4), (4, 4), (5, 1), (6, 1)].into();
        assert_eq!(hist, expect);
    }

    #[test]
    fn four_node_catalog_has_199_classes() {
        let catalog = MotifCatalog::build(4);
        assert_eq!(catalog.len(), 199);
    }

    #[test]
    fn class_ids_sorted_by_edges_then_encoding() {
        for k in [3, 4] {
            let catalog = MotifCatalog::build(k);
            for pair in catalog.classes().windows(2) {
                let a = (pair[0].edge_count, pair[0].canonical.bits());
                let b = (pair[1].edge_count, pair[1].canonical.bits());
                assert!(a < b);
            }
        }
    }

    #[test]
    fn lookup_closure_over_all_masks() {
        for k in [3, 4] {
            let catalog = MotifCatalog::build(k);
            let space = 1u32 << (k * (k - 1));
            for bits in 0..space as u16 {
                let mask = AdjacencyBitmask::from_bits(k, bits);
                match catalog.class_id_of(mask) {
                    Some(id) => {
                        assert!(mask.is_weakly_connected());
                        assert_eq!(
                            catalog.class(id).canonical,
                            canonical_form(&mask),
                            "lookup must agree with direct canonicalization"
                        );
                    }
                    None => assert!(!mask.is_weakly_connected()),
                }
            }
        }
    }

    #[test]
    fn aliases_resolve_to_distinct_classes() {
        let catalog = MotifCatalog::build(3);
        let aliases = classic_triad_aliases(&catalog);
        assert_eq!(aliases.len(), 4);
        let mut ids: Vec<u32> = aliases.iter().map(|a| a.class_id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 4);

        // Structural spot checks against the descriptions.
        for alias in &aliases {
            let class = catalog.class(alias.class_id);
            match alias.published_id {
                1 => {
                    assert_eq!(class.edge_count, 2);
                    assert_eq!(class.in_degree_profile, vec![0, 1, 1]);
                }
                3 => {
                    assert_eq!(class.edge_count, 3);
                    assert_eq!(class.in_degree_profile, vec![1, 1, 1]);
                }
                4 => {
                    assert_eq!(class.edge_count, 2);
                    assert_eq!(class.in_degree_profile, vec![0, 0, 2]);
                }
                10 => {
                    assert_eq!(class.edge_count, 3);
                    assert_eq!(class.in_degree_profile, vec![0, 1, 2]);
                }
                _ => unreachable!(),
            }
        }
    }
}
