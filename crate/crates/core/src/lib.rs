//! Motif analysis for directed graphs.
//!
//! The crate covers the full pipeline used to study product co-purchasing
//! networks: loading SNAP edge lists and Amazon-style product metadata,
//! whole-graph statistics, exact and sampled k-node motif censuses (k = 3, 4),
//! purchasability/motif-rank metrics, degree-preserving null models with
//! z-score significance, and community detection (Girvan–Newman and greedy
//! modularity) with per-community motif reports.

pub mod catalog;
pub mod census;
pub mod community;
pub mod emit;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod nullmodel;
pub mod stats;

pub use catalog::{MotifCatalog, MotifClass};
pub use census::CensusResult;
pub use community::{Dendrogram, Partition};
pub use graph::{AdjacencyBitmask, DirectedGraph, GraphError, NodeId, UndirectedView};
pub use ingest::ProductRecord;
pub use stats::GraphSummary;
