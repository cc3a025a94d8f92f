//! motifscope: statistics, motif censuses, significance and community
//! reports for directed graphs in SNAP edge-list format.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. All outputs are
//! byte-stable for fixed inputs, flags and seed, independent of the worker
//! thread count (`--threads`, or the MOTIFSCOPE_THREADS variable).

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use motifscope_core::catalog::MotifCatalog;
use motifscope_core::census;
use motifscope_core::community::{
    cnm_greedy, girvan_newman, pipeline, CommunityAlgo, GnStop, Partition, PipelineOptions,
};
use motifscope_core::emit;
use motifscope_core::graph::DirectedGraph;
use motifscope_core::ingest;
use motifscope_core::nullmodel;
use motifscope_core::stats;

#[derive(Parser)]
#[command(name = "motifscope", version, about = "Directed-graph motif analysis toolkit")]
struct Cli {
    /// Worker threads (default: all cores; MOTIFSCOPE_THREADS also works)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Whole-graph statistics: components, clustering, triangles, diameters
    Stats {
        /// SNAP edge-list file
        edges: PathBuf,
        /// BFS sources for the effective-diameter estimate
        #[arg(long, default_value_t = 1000)]
        sources: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Also compute the exact diameter (expensive on large graphs)
        #[arg(long)]
        exact_diameter: bool,
        /// Give the exact-diameter search a time budget, in seconds
        #[arg(long)]
        diameter_budget_secs: Option<u64>,
        /// Additionally write the summary as JSON to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Dump the catalog of connected k-node digraph classes
    Catalog {
        #[arg(long)]
        k: usize,
        /// Output file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count connected induced k-subgraphs per motif class
    Census {
        edges: PathBuf,
        #[arg(long)]
        k: usize,
        /// Per-depth branch probabilities for sampled (RAND-ESU) mode,
        /// e.g. --sample 1,1,0.1
        #[arg(long, value_delimiter = ',')]
        sample: Option<Vec<f64>>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Also write a full class_id,count histogram to this path
        #[arg(long)]
        hist: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Purchasability and motif-rank table for the k-node catalog
    Metrics {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Motif z-scores against degree-preserving randomized graphs
    Significance {
        edges: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        ensembles: usize,
        #[arg(long, default_value_t = 10)]
        swaps_per_edge: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Sampled census probabilities, applied to the real graph and every
        /// ensemble member alike
        #[arg(long, value_delimiter = ',')]
        sample: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Community detection on the undirected projection
    Communities {
        edges: PathBuf,
        #[arg(long, value_enum)]
        algo: AlgoChoice,
        /// Stop Girvan–Newman at this many communities instead of the
        /// best-modularity cut
        #[arg(long)]
        target_communities: Option<usize>,
        /// Write node_id,community_id assignments to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split into communities, census each one, label from metadata
    Pipeline {
        edges: PathBuf,
        /// Product metadata file for community labels
        #[arg(long)]
        meta: Option<PathBuf>,
        #[arg(long, value_enum)]
        algo: AlgoChoice,
        /// Recursively split communities larger than this
        #[arg(long, default_value_t = 1000)]
        max_size: usize,
        #[arg(long)]
        k: usize,
        /// Node budget above which Girvan–Newman falls back to the greedy
        /// algorithm
        #[arg(long, default_value_t = 2000)]
        gn_budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoChoice {
    Gn,
    Cnm,
}

impl From<AlgoChoice> for CommunityAlgo {
    fn from(choice: AlgoChoice) -> Self {
        match choice {
            AlgoChoice::Gn => CommunityAlgo::GirvanNewman,
            AlgoChoice::Cnm => CommunityAlgo::Cnm,
        }
    }
}

enum CliError {
    Usage(String),
    Data(String),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("MOTIFSCOPE_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    // num_threads(0) keeps rayon's core-count default.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();

    match dispatch(cli.command) {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Stats {
            edges,
            sources,
            seed,
            exact_diameter,
            diameter_budget_secs,
            json,
        } => {
            if sources == 0 {
                return Err(CliError::Usage("--sources must be at least 1".into()));
            }
            let graph = load_graph(&edges)?;
            let options = stats::SummaryOptions {
                effective_diameter_sources: sources,
                seed,
                exact_diameter,
                diameter_budget: diameter_budget_secs.map(Duration::from_secs),
            };
            let summary = stats::summarize(&graph, &options);
            print!("{}", emit::summary_text(&summary));
            if let Some(path) = json {
                write_file(&path, &emit::summary_json(&summary))?;
            }
            Ok(())
        }
        Command::Catalog { k, out } => {
            let catalog = build_catalog(k)?;
            write_output(out, &emit::catalog_csv(&catalog))
        }
        Command::Census {
            edges,
            k,
            sample,
            seed,
            hist,
            out,
            format,
        } => {
            let catalog = build_catalog(k)?;
            let graph = load_graph(&edges)?;
            let result = match sample {
                None => census::census_with_catalog(&graph, &catalog),
                Some(probs) => census::sampled_census(&graph, &catalog, &probs, seed)
                    .map_err(|e| CliError::Usage(e.to_string()))?,
            };
            eprintln!(
                "census: {} subgraphs visited in {:.2?}",
                result.total_subgraphs, result.elapsed
            );
            if let Some(path) = hist {
                write_file(&path, &emit::histogram_csv(&result, &catalog))?;
            }
            let text = match format {
                OutputFormat::Csv => emit::census_csv(&result, &catalog),
                OutputFormat::Json => emit::census_json(&result, &catalog),
            };
            write_output(out, &text)
        }
        Command::Metrics { k, out } => {
            let catalog = build_catalog(k)?;
            write_output(out, &emit::metrics_csv(&catalog))
        }
        Command::Significance {
            edges,
            k,
            ensembles,
            swaps_per_edge,
            seed,
            sample,
            out,
        } => {
            if ensembles < 2 {
                return Err(CliError::Usage("--ensembles must be at least 2".into()));
            }
            if swaps_per_edge == 0 {
                return Err(CliError::Usage("--swaps-per-edge must be at least 1".into()));
            }
            let catalog = build_catalog(k)?;
            let graph = load_graph(&edges)?;
            let report = nullmodel::significance(
                &graph,
                &catalog,
                ensembles,
                swaps_per_edge,
                seed,
                sample.as_deref(),
            )
            .map_err(|e| CliError::Usage(e.to_string()))?;
            write_output(out, &emit::significance_csv(&report))
        }
        Command::Communities {
            edges,
            algo,
            target_communities,
            out,
        } => {
            let graph = load_graph(&edges)?;
            let view = graph.undirected_projection();
            let partition: Partition = match algo {
                AlgoChoice::Cnm => cnm_greedy(&view).0,
                AlgoChoice::Gn => {
                    let stop = match target_communities {
                        Some(c) => GnStop::CommunityCount(c),
                        None => GnStop::BestModularity,
                    };
                    girvan_newman(&view, stop).1
                }
            };
            println!("algorithm    {}", CommunityAlgo::from(algo).name());
            println!("communities  {}", partition.community_count);
            println!("modularity   {}", emit::format_rate(partition.modularity));
            if let Some(path) = out {
                let mut text = String::from("node_id,community_id\n");
                for v in 0..graph.node_count() {
                    text.push_str(&format!(
                        "{},{}\n",
                        graph.original_id(v as motifscope_core::graph::NodeId),
                        partition.assignment[v]
                    ));
                }
                write_file(&path, &text)?;
            }
            Ok(())
        }
        Command::Pipeline {
            edges,
            meta,
            algo,
            max_size,
            k,
            gn_budget,
            out,
        } => {
            let catalog = build_catalog(k)?;
            if max_size < k {
                return Err(CliError::Usage(format!(
                    "--max-size must be at least k ({k})"
                )));
            }
            let graph = load_graph(&edges)?;
            let records = match meta {
                Some(path) => {
                    let records = load_metadata(&path)?;
                    let matched = records
                        .iter()
                        .filter(|r| graph.node_for_original(r.id).is_some())
                        .count();
                    eprintln!(
                        "metadata: {} records, {} matched to graph nodes",
                        records.len(),
                        matched
                    );
                    Some(records)
                }
                None => None,
            };
            let options = PipelineOptions {
                algo: algo.into(),
                max_community_size: max_size,
                k,
                gn_node_budget: gn_budget,
            };
            let report = pipeline(&graph, &catalog, records.as_deref(), &options);
            write_output(out, &emit::community_report_json(&report, &catalog))
        }
    }
}

fn build_catalog(k: usize) -> Result<MotifCatalog, CliError> {
    if !(3..=4).contains(&k) {
        return Err(CliError::Usage(format!("--k must be 3 or 4, got {k}")));
    }
    Ok(MotifCatalog::build(k))
}

fn load_graph(path: &Path) -> Result<DirectedGraph, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    let pairs = ingest::parse_edge_list(BufReader::new(file))
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let graph = DirectedGraph::build_from_edges(&pairs)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if graph.self_loops_dropped() > 0 || graph.duplicates_dropped() > 0 {
        eprintln!(
            "loaded {} nodes, {} edges ({} self-loops, {} duplicates dropped)",
            graph.node_count(),
            graph.edge_count(),
            graph.self_loops_dropped(),
            graph.duplicates_dropped()
        );
    } else {
        eprintln!("loaded {} nodes, {} edges", graph.node_count(), graph.edge_count());
    }
    Ok(graph)
}

fn load_metadata(path: &Path) -> Result<Vec<motifscope_core::ingest::ProductRecord>, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    ingest::parse_metadata(BufReader::new(file))
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(&path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}
