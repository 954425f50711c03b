//! `fondue`: contract graphs, embed them, score and split ambiguous nodes, run benchmarks.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fondue_core::baselines::{baseline_scores, mcl_split, Baseline, Clustering, MclParams};
use fondue_core::cne::{fit_embedding, CneParams, Embedding};
use fondue_core::contraction::{sample_contraction, RecordDocument, TruthPartition};
use fondue_core::experiment::{
    emit_report, partition_ari, run_experiment, ExperimentConfig, SharedPolicy,
};
use fondue_core::fondue::{best_split, score_all_nodes, HeuristicConfig};
use fondue_core::graph::load_edge_list;
use fondue_core::synth::{generate_synthetic, SynthSpec};
use fondue_core::{Error, Graph};

#[derive(Parser)]
#[command(
    name = "fondue",
    version,
    about = "Find and split ambiguous nodes in undirected graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Merge random node pairs and record the ground truth.
    Contract {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ratio: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge list of the contracted graph.
        #[arg(long)]
        out: PathBuf,
        /// JSON contraction record.
        #[arg(long)]
        truth: PathBuf,
    },
    /// Fit a conditional network embedding.
    Embed {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma1: f64,
        #[arg(long, default_value_t = 2.0)]
        sigma2: f64,
        #[arg(long, default_value_t = 1)]
        restarts: usize,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score every node; writes `node,score,method,degree`.
    Score {
        #[arg(long)]
        graph: PathBuf,
        /// Required for `--method fondue`.
        #[arg(long)]
        embedding: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ScoreMethod::Fondue)]
        method: ScoreMethod,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Propose splits for nodes; prints one JSON object per line.
    Split {
        #[arg(long)]
        graph: PathBuf,
        /// Required for `--method fondue`.
        #[arg(long)]
        embedding: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SplitMethodArg::Fondue)]
        method: SplitMethodArg,
        /// Comma-separated node labels; `ambiguous` takes the nodes of `--truth`.
        /// Defaults to every node with at least two neighbors.
        #[arg(long)]
        nodes: Option<String>,
        /// Contraction record; adds per-node ARI against its partitions.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SharedArg::Exclude)]
        shared: SharedArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment described by a JSON config.
    Eval {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a stochastic block model graph from a JSON spec.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreMethod {
    Fondue,
    Degree,
    Cc,
    Nc,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitMethodArg {
    Fondue,
    Mcl,
}

#[derive(Clone, Copy, ValueEnum)]
enum SharedArg {
    Exclude,
    AssignLarger,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = Result<T, Failure>;

#[derive(Serialize)]
struct SplitLine {
    node: String,
    value: Option<f64>,
    groups: Vec<Vec<String>>,
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    ari: Option<f64>,
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| {
        Failure::Core(Error::Io {
            path: path.to_path_buf(),
            source,
        })
    })
}

fn load_embedding(path: Option<&PathBuf>, graph: &Graph, method: &str) -> CliResult<Embedding> {
    let path = path
        .ok_or_else(|| Failure::Usage(format!("--embedding is required for --method {method}")))?;
    Ok(Embedding::read_csv(path, graph)?)
}

/// Truth partitions re-expressed in the ids of `graph`, matched by label.
fn load_truth(path: &Path, graph: &Graph) -> CliResult<Vec<TruthPartition>> {
    let doc = RecordDocument::read(path)?;
    let remap = |id: usize| -> CliResult<usize> {
        let label = doc.labels.get(id).ok_or_else(|| {
            Failure::Core(Error::InvalidInput(format!(
                "truth record refers to unknown node id {id}"
            )))
        })?;
        graph.id_of(label).ok_or_else(|| {
            Failure::Core(Error::InvalidInput(format!(
                "truth node {label:?} is not in the graph"
            )))
        })
    };
    let remap_all = |ids: &[usize]| -> CliResult<Vec<usize>> {
        let mut out = ids
            .iter()
            .map(|&v| remap(v))
            .collect::<CliResult<Vec<_>>>()?;
        out.sort_unstable();
        Ok(out)
    };
    let mut parts = doc
        .truth_partitions
        .iter()
        .map(|p| {
            Ok(TruthPartition {
                node: remap(p.node)?,
                kept: remap_all(&p.kept)?,
                absorbed: remap_all(&p.absorbed)?,
                shared: remap_all(&p.shared)?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    parts.sort_by_key(|p| p.node);
    Ok(parts)
}

fn labels(graph: &Graph, clustering: &Clustering) -> Vec<Vec<String>> {
    clustering
        .clusters()
        .iter()
        .map(|c| c.iter().map(|&v| graph.label(v).to_string()).collect())
        .collect()
}

fn contract_cmd(input: &Path, ratio: f64, seed: u64, out: &Path, truth: &Path) -> CliResult<()> {
    let g = load_edge_list(input)?;
    let rec = sample_contraction(&g, ratio, seed)?;
    rec.contracted_graph.write_edge_list(out)?;
    rec.to_document().write(truth)?;
    log::info!(
        "merged {} pairs: {} -> {} nodes",
        rec.merge_pairs.len(),
        g.node_count(),
        rec.contracted_graph.node_count()
    );
    Ok(())
}

fn score_cmd(
    graph: &Path,
    embedding: Option<&PathBuf>,
    method: ScoreMethod,
    seed: u64,
    out: &Path,
) -> CliResult<()> {
    let g = load_edge_list(graph)?;
    let mcl = MclParams::default();
    let table = match method {
        ScoreMethod::Fondue => {
            let emb = load_embedding(embedding, &g, "fondue")?;
            let cfg = HeuristicConfig {
                seed,
                ..HeuristicConfig::default()
            };
            score_all_nodes(&g, &emb, &cfg)?
        }
        ScoreMethod::Degree => baseline_scores(&g, Baseline::Degree, &mcl)?,
        ScoreMethod::Cc => baseline_scores(&g, Baseline::Cc, &mcl)?,
        ScoreMethod::Nc => baseline_scores(&g, Baseline::Nc, &mcl)?,
    };
    table.write_csv(out, &g)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn split_cmd(
    graph: &Path,
    embedding: Option<&PathBuf>,
    method: SplitMethodArg,
    nodes: Option<&str>,
    truth: Option<&PathBuf>,
    shared: SharedArg,
    seed: u64,
    out: Option<&PathBuf>,
) -> CliResult<()> {
    let g = load_edge_list(graph)?;
    let emb = match method {
        SplitMethodArg::Fondue => Some(load_embedding(embedding, &g, "fondue")?),
        SplitMethodArg::Mcl => None,
    };
    let truth = truth.map(|p| load_truth(p, &g)).transpose()?;
    let policy = match shared {
        SharedArg::Exclude => SharedPolicy::Exclude,
        SharedArg::AssignLarger => SharedPolicy::AssignLarger,
    };
    let targets: Vec<usize> = match nodes {
        None => (0..g.node_count()).filter(|&i| g.degree(i) >= 2).collect(),
        Some("ambiguous") => truth
            .as_ref()
            .ok_or_else(|| Failure::Usage("--nodes ambiguous needs --truth".into()))?
            .iter()
            .map(|p| p.node)
            .collect(),
        Some(list) => list
            .split(',')
            .map(|label| {
                g.id_of(label.trim()).ok_or_else(|| {
                    Failure::Core(Error::InvalidInput(format!("unknown node {label:?}")))
                })
            })
            .collect::<CliResult<Vec<_>>>()?,
    };
    let heuristics = HeuristicConfig {
        seed,
        ..HeuristicConfig::default()
    };
    let mut text = String::new();
    for i in targets {
        if g.degree(i) < 2 {
            log::warn!("skipping {:?}: fewer than two neighbors", g.label(i));
            continue;
        }
        let (value, candidate, name) = match method {
            SplitMethodArg::Fondue => {
                let emb = emb.as_ref().expect("loaded above");
                let s = best_split(&g, emb, i, &heuristics)?;
                (
                    Some(s.value),
                    Clustering::new(vec![s.groups.0, s.groups.1])?,
                    "fondue",
                )
            }
            SplitMethodArg::Mcl => (
                None,
                mcl_split(&g, i, &MclParams::default())?.clustering(),
                "mcl",
            ),
        };
        let ari = match truth.as_ref().and_then(|t| t.iter().find(|p| p.node == i)) {
            Some(p) => partition_ari(&candidate, p, policy)?,
            None => None,
        };
        let line = SplitLine {
            node: g.label(i).to_string(),
            value,
            groups: labels(&g, &candidate),
            method: name,
            ari,
        };
        text.push_str(&serde_json::to_string(&line).map_err(Error::from)?);
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text).map_err(|source| {
            Failure::Core(Error::Io {
                path: path.clone(),
                source,
            })
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn eval_cmd(config: &Path, out: Option<&PathBuf>) -> CliResult<()> {
    let cfg = ExperimentConfig::from_json(&read_text(config)?)?;
    let dir = out
        .cloned()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("report"));
    let report = run_experiment(&cfg)?;
    emit_report(&report, &dir)?;
    for a in &report.aggregates {
        println!(
            "{}\tr={}\t{}\t{} {:.4} ± {:.4} (n={})",
            a.dataset,
            a.ratio,
            a.method.as_str(),
            a.metric,
            a.mean,
            a.std,
            a.count
        );
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Contract {
            input,
            ratio,
            seed,
            out,
            truth,
        } => contract_cmd(&input, ratio, seed, &out, &truth),
        Command::Embed {
            input,
            dim,
            sigma1,
            sigma2,
            restarts,
            max_iter,
            seed,
            out,
        } => {
            let g = load_edge_list(&input)?;
            let params = CneParams {
                dim,
                sigma1,
                sigma2,
                restarts,
                max_iter,
                ..CneParams::default()
            };
            params
                .validate()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let emb = fit_embedding(&g, &params, seed)?;
            emb.write_csv(&out, &g)?;
            Ok(())
        }
        Command::Score {
            graph,
            embedding,
            method,
            seed,
            out,
        } => score_cmd(&graph, embedding.as_ref(), method, seed, &out),
        Command::Split {
            graph,
            embedding,
            method,
            nodes,
            truth,
            shared,
            seed,
            out,
        } => split_cmd(
            &graph,
            embedding.as_ref(),
            method,
            nodes.as_deref(),
            truth.as_ref(),
            shared,
            seed,
            out.as_ref(),
        ),
        Command::Eval { config, out } => eval_cmd(&config, out.as_ref()),
        Command::Synth { spec, seed, out } => {
            let spec: SynthSpec = serde_json::from_str(&read_text(&spec)?).map_err(Error::from)?;
            generate_synthetic(&spec, seed)?.write_edge_list(&out)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
