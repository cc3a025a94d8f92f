//! Per-motif purchasability and motif-rank metrics.
//!
//! For a position in a motif's canonical representative, purchasability is
//! its in-degree divided by the motif's edge count, undefined at in-degree
//! zero. Motif rank is the fraction of positions where purchasability is
//! defined. Values are exact rationals; rendering to decimals happens only
//! at output time. Both metrics are comparable only within one motif order k.

use num_rational::Ratio;

use crate::catalog::{MotifCatalog, MotifClass};

pub type Fraction = Ratio<u64>;

/// Metrics of one motif class over its canonical positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotifMetrics {
    pub class_id: u32,
    pub k: usize,
    pub edge_count: u32,
    /// Purchasability per canonical position; `None` where in-degree is 0.
    pub per_position: Vec<Option<Fraction>>,
    pub motif_rank: Fraction,
}

impl MotifMetrics {
    /// Defined purchasability values keyed by in-degree, deduplicated and
    /// sorted. Canonical positions have no meaningful geometry, so values
    /// are reported as a multiset keyed by in-degree.
    pub fn values_by_in_degree(&self, class: &MotifClass) -> Vec<(u32, Fraction)> {
        let mut rows: Vec<(u32, Fraction)> = class
            .canonical
            .in_degrees()
            .iter()
            .filter(|&&d| d > 0)
            .map(|&d| (d, Fraction::new(d as u64, class.edge_count as u64)))
            .collect();
        rows.sort_unstable();
        rows.dedup();
        rows
    }
}

/// In-degree of the position divided by the motif's edge count; `None` when
/// the in-degree is zero.
pub fn purchasability(class: &MotifClass, position: usize) -> Option<Fraction> {
    let in_degree = class.canonical.in_degrees()[position];
    if in_degree == 0 {
        None
    } else {
        Some(Fraction::new(in_degree as u64, class.edge_count as u64))
    }
}

/// Fraction of the k positions with defined purchasability.
pub fn motif_rank(class: &MotifClass) -> Fraction {
    let defined = class
        .canonical
        .in_degrees()
        .iter()
        .filter(|&&d| d > 0)
        .count();
    Fraction::new(defined as u64, class.k as u64)
}

/// Metrics for every class in the catalog, in class-id order.
pub fn metrics_table(catalog: &MotifCatalog) -> Vec<MotifMetrics> {
    catalog
        .classes()
        .iter()
        .map(|class| {
            let per_position = (0..class.k)
                .map(|pos| purchasability(class, pos))
                .collect();
            MotifMetrics {
                class_id: class.class_id,
                k: class.k,
                edge_count: class.edge_count,
                per_position,
                motif_rank: motif_rank(class),
            }
        })
        .collect()
}
