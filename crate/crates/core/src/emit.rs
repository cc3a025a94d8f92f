//! Deterministic text renderers for every result type.
//!
//! Formatting rules: rationals and rates print with four decimal places,
//! counts print as integers, and all row orders are fixed, so repeated runs
//! over the same inputs emit byte-identical files.
//!
//! The census CSV lists only classes that occur (an empty census is just the
//! header); the histogram file lists every class, zeros included, so bar
//! charts have the full id range on the axis.

use serde::Serialize;

use crate::catalog::MotifCatalog;
use crate::census::CensusResult;
use crate::community::CommunityReport;
use crate::metrics::{metrics_table, Fraction};
use crate::nullmodel::SignificanceReport;
use crate::stats::GraphSummary;

pub fn format_rate(x: f64) -> String {
    format!("{:.4}", x)
}

pub fn format_fraction(f: Fraction) -> String {
    format!("{:.4}", *f.numer() as f64 / *f.denom() as f64)
}

/// Integers print bare; anything fractional gets four decimals.
fn format_count(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        format!("{}", x as i64)
    } else {
        format!("{:.4}", x)
    }
}

pub const CENSUS_CSV_HEADER: &str = "class_id,k,edges,count,frequency_fraction";

/// One row per class with a nonzero count, ascending class id.
pub fn census_csv(census: &CensusResult, catalog: &MotifCatalog) -> String {
    let mut out = String::from(CENSUS_CSV_HEADER);
    out.push('\n');
    for class in catalog.classes() {
        if census.count(class.class_id) == 0 {
            continue;
        }
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            class.class_id,
            class.k,
            class.edge_count,
            format_count(census.estimate(class.class_id)),
            format_rate(census.frequency(class.class_id)),
        ));
    }
    out
}

/// Frequency histogram: every class, zeros included.
pub fn histogram_csv(census: &CensusResult, catalog: &MotifCatalog) -> String {
    let mut out = String::from("class_id,count\n");
    for class in catalog.classes() {
        out.push_str(&format!(
            "{},{}\n",
            class.class_id,
            format_count(census.estimate(class.class_id))
        ));
    }
    out
}

pub fn catalog_csv(catalog: &MotifCatalog) -> String {
    let mut out =
        String::from("class_id,k,edges,canonical_bitmask,in_degree_profile,example_edge_list\n");
    for class in catalog.classes() {
        let profile = class
            .in_degree_profile
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("|");
        let edges = class
            .canonical
            .edge_pairs()
            .iter()
            .map(|(i, j)| format!("{}->{}", i, j))
            .collect::<Vec<_>>()
            .join("|");
        out.push_str(&format!(
            "{},{},{},0x{:03x},{},{}\n",
            class.class_id,
            class.k,
            class.edge_count,
            class.canonical.bits(),
            profile,
            edges,
        ));
    }
    out
}

/// One row per distinct positive in-degree of each class.
pub fn metrics_csv(catalog: &MotifCatalog) -> String {
    let mut out = String::from("class_id,k,edges,in_degree,f_value,motif_rank\n");
    for row in metrics_table(catalog) {
        let class = catalog.class(row.class_id);
        for (in_degree, f) in row.values_by_in_degree(class) {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.class_id,
                row.k,
                row.edge_count,
                in_degree,
                format_fraction(f),
                format_fraction(row.motif_rank),
            ));
        }
    }
    out
}

pub fn significance_csv(report: &SignificanceReport) -> String {
    let mut out = String::from("class_id,real_count,mean,stddev,z,profile_component\n");
    for class in &report.classes {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            class.class_id,
            format_count(class.real_count),
            format_rate(class.ensemble_mean),
            format_rate(class.ensemble_stddev),
            class.z_score.map(format_rate).unwrap_or_default(),
            class.profile_component.map(format_rate).unwrap_or_default(),
        ));
    }
    out
}

/// Aligned property/value table for terminals.
pub fn summary_text(s: &GraphSummary) -> String {
    let nodes = s.nodes as f64;
    let edges = s.edges as f64;
    let mut rows: Vec<(String, String)> = vec![
        ("Nodes".into(), s.nodes.to_string()),
        ("Edges".into(), s.edges.to_string()),
        (
            "Nodes in largest WCC".into(),
            format!("{} ({:.3})", s.wcc_nodes, s.wcc_nodes as f64 / nodes),
        ),
        (
            "Edges in largest WCC".into(),
            format!("{} ({:.3})", s.wcc_edges, s.wcc_edges as f64 / edges),
        ),
        (
            "Nodes in largest SCC".into(),
            format!("{} ({:.3})", s.scc_nodes, s.scc_nodes as f64 / nodes),
        ),
        (
            "Edges in largest SCC".into(),
            format!("{} ({:.3})", s.scc_edges, s.scc_edges as f64 / edges),
        ),
        (
            "Average clustering coefficient".into(),
            format_rate(s.avg_clustering),
        ),
        ("Number of triangles".into(), s.triangles.to_string()),
        (
            "Fraction of closed triangles".into(),
            format_rate(s.closed_triangle_fraction),
        ),
    ];
    if let Some(d) = s.diameter {
        let label = if s.diameter_is_exact {
            "Diameter (longest shortest path)"
        } else {
            "Diameter (lower bound, budget hit)"
        };
        rows.push((label.into(), d.to_string()));
    }
    rows.push((
        "90-percentile effective diameter".into(),
        format_rate(s.effective_diameter_90),
    ));

    let mut out = String::new();
    for (label, value) in rows {
        out.push_str(&format!("{:<36}{:>16}\n", label, value));
    }
    out
}

pub fn summary_json(s: &GraphSummary) -> String {
    let mut text = serde_json::to_string_pretty(s).expect("summary serializes");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct CensusJson {
    k: usize,
    total_subgraphs: u64,
    sampled: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampling_probabilities: Option<Vec<f64>>,
    counts: Vec<CensusRowJson>,
}

#[derive(Serialize)]
struct CensusRowJson {
    class_id: u32,
    edges: u32,
    count: serde_json::Value,
    frequency_fraction: String,
}

fn census_rows(census: &CensusResult, catalog: &MotifCatalog) -> Vec<CensusRowJson> {
    catalog
        .classes()
        .iter()
        .filter(|class| census.count(class.class_id) > 0)
        .map(|class| {
            let count = if census.sampled {
                serde_json::json!(census.estimate(class.class_id))
            } else {
                serde_json::json!(census.count(class.class_id))
            };
            CensusRowJson {
                class_id: class.class_id,
                edges: class.edge_count,
                count,
                frequency_fraction: format_rate(census.frequency(class.class_id)),
            }
        })
        .collect()
}

fn census_json_value(census: &CensusResult, catalog: &MotifCatalog) -> CensusJson {
    CensusJson {
        k: census.k,
        total_subgraphs: census.total_subgraphs,
        sampled: census.sampled,
        sampling_probabilities: census.sampling_probabilities.clone(),
        counts: census_rows(census, catalog),
    }
}

pub fn census_json(census: &CensusResult, catalog: &MotifCatalog) -> String {
    let mut text =
        serde_json::to_string_pretty(&census_json_value(census, catalog)).expect("serializes");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct CommunityReportJson {
    communities: Vec<CommunityJson>,
    modularity: f64,
    algo: &'static str,
    parameters: ParametersJson,
}

#[derive(Serialize)]
struct ParametersJson {
    k: usize,
    max_community_size: usize,
    gn_node_budget: usize,
}

#[derive(Serialize)]
struct CommunityJson {
    id: u32,
    size: usize,
    label: String,
    label_share: f64,
    indivisible: bool,
    census: CensusJson,
    motif_rank_table: Vec<MotifRankRowJson>,
}

#[derive(Serialize)]
struct MotifRankRowJson {
    class_id: u32,
    edges: u32,
    motif_rank: String,
    purchasability: Vec<PurchasabilityJson>,
}

#[derive(Serialize)]
struct PurchasabilityJson {
    in_degree: u32,
    f: String,
}

pub fn community_report_json(report: &CommunityReport, catalog: &MotifCatalog) -> String {
    let table = metrics_table(catalog);
    let communities = report
        .communities
        .iter()
        .map(|entry| {
            let motif_rank_table = table
                .iter()
                .filter(|row| entry.census.count(row.class_id) > 0)
                .map(|row| {
                    let class = catalog.class(row.class_id);
                    MotifRankRowJson {
                        class_id: row.class_id,
                        edges: row.edge_count,
                        motif_rank: format_fraction(row.motif_rank),
                        purchasability: row
                            .values_by_in_degree(class)
                            .into_iter()
                            .map(|(in_degree, f)| PurchasabilityJson {
                                in_degree,
                                f: format_fraction(f),
                            })
                            .collect(),
                    }
                })
                .collect();
            CommunityJson {
                id: entry.id,
                size: entry.size,
                label: entry.label.clone(),
                label_share: entry.label_share,
                indivisible: entry.indivisible,
                census: census_json_value(&entry.census, catalog),
                motif_rank_table,
            }
        })
        .collect();
    let value = CommunityReportJson {
        communities,
        modularity: report.modularity,
        algo: report.algo.name(),
        parameters: ParametersJson {
            k: report.k,
            max_community_size: report.max_community_size,
            gn_node_budget: report.gn_node_budget,
        },
    };
    let mut text = serde_json::to_string_pretty(&value).expect("serializes");
    text.push('\n');
    text
}
