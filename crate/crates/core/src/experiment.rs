//! Contraction benchmarks: identification (AUC) and splitting (ARI) pipelines and report files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{baseline_scores, mcl_split, Baseline, Clustering, MclParams};
use crate::cne::{fit_embedding, CneParams, Embedding};
use crate::contraction::{sample_contraction, ContractionRecord, TruthPartition};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::fondue::{
    best_split, build_quotient_matrix, rayleigh_quotient, score_all_nodes, HeuristicConfig,
    SplitVector,
};
use crate::graph::{load_edge_list, Graph};
use crate::metrics::{adjusted_rand_index, auc};
use crate::scores::ScoreTable;
use crate::seed::derive_seed;
use crate::synth::{generate_synthetic, SynthSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Fondue,
    Degree,
    Cc,
    Nc,
    Mcl,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Fondue => "fondue",
            Method::Degree => "degree",
            Method::Cc => "cc",
            Method::Nc => "nc",
            Method::Mcl => "mcl",
        }
    }

    fn baseline(self) -> Option<Baseline> {
        match self {
            Method::Degree => Some(Baseline::Degree),
            Method::Cc => Some(Baseline::Cc),
            Method::Nc => Some(Baseline::Nc),
            _ => None,
        }
    }
}

/// Whether larger scores mean "more likely ambiguous".
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    Higher,
    Lower,
}

/// How neighbors adjacent to both merged originals enter the truth partition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharedPolicy {
    /// Removed from both the truth and the candidate partitions.
    #[default]
    Exclude,
    /// Added to the larger side; ties go to the kept original's side.
    AssignLarger,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    #[default]
    Identification,
    Splitting,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dataset {
    /// Edge-list file.
    Path(PathBuf),
    /// One of [`fixtures::BUNDLED`].
    Bundled(String),
    Synthetic {
        spec: SynthSpec,
        seed: u64,
    },
}

impl Dataset {
    pub fn name(&self) -> String {
        match self {
            Dataset::Path(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            Dataset::Bundled(name) => name.clone(),
            Dataset::Synthetic { seed, .. } => format!("synthetic-{seed}"),
        }
    }

    pub fn load(&self) -> Result<Graph> {
        match self {
            Dataset::Path(p) => load_edge_list(p),
            Dataset::Bundled(name) => fixtures::bundled(name),
            Dataset::Synthetic { spec, seed } => generate_synthetic(spec, *seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub datasets: Vec<Dataset>,
    pub ratios: Vec<f64>,
    pub seeds: Vec<u64>,
    pub methods: Vec<Method>,
    pub embedding: CneParams,
    pub heuristics: HeuristicConfig,
    pub mcl: MclParams,
    /// Overrides of the default [`Orientation::Higher`].
    pub orientation: BTreeMap<Method, Orientation>,
    pub shared_policy: SharedPolicy,
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::Identification,
            datasets: Vec::new(),
            ratios: vec![0.1],
            seeds: vec![0],
            methods: vec![Method::Fondue, Method::Degree, Method::Cc, Method::Nc],
            embedding: CneParams::default(),
            heuristics: HeuristicConfig::default(),
            mcl: MclParams::default(),
            orientation: BTreeMap::new(),
            shared_policy: SharedPolicy::Exclude,
            output_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::InvalidInput(
                "experiment config lists no datasets".into(),
            ));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidInput(
                "experiment config lists no seeds".into(),
            ));
        }
        if let Some(r) = self.ratios.iter().find(|r| !(**r > 0.0 && **r < 0.5)) {
            return Err(Error::InvalidInput(format!(
                "ratio {r} is outside (0, 0.5)"
            )));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidInput(
                "experiment config lists no methods".into(),
            ));
        }
        let allowed: &[Method] = match self.experiment {
            ExperimentKind::Identification => {
                &[Method::Fondue, Method::Degree, Method::Cc, Method::Nc]
            }
            ExperimentKind::Splitting => &[Method::Fondue, Method::Mcl],
        };
        if let Some(m) = self.methods.iter().find(|m| !allowed.contains(m)) {
            return Err(Error::InvalidInput(format!(
                "method {} is not available for {:?} experiments",
                m.as_str(),
                self.experiment
            )));
        }
        self.embedding.validate()?;
        self.mcl.validate()
    }

    pub fn orientation(&self, method: Method) -> Orientation {
        self.orientation.get(&method).copied().unwrap_or_default()
    }
}

/// One (dataset, ratio, seed, method) result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub dataset: String,
    pub ratio: f64,
    pub seed: u64,
    pub method: Method,
    pub metric: String,
    pub value: f64,
    /// Ambiguous nodes in the run (identification) or nodes averaged over (splitting).
    pub nodes: usize,
}

/// Per-node splitting result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeRow {
    pub dataset: String,
    pub ratio: f64,
    pub seed: u64,
    pub node: String,
    pub method: Method,
    pub ari: f64,
    /// Groups of the candidate split, as node labels.
    pub groups: Vec<Vec<String>>,
}

/// FONDUE's split quotient against the quotient of the origin-based split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientCheck {
    pub dataset: String,
    pub ratio: f64,
    pub seed: u64,
    pub node: String,
    pub fondue_value: f64,
    pub truth_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skip {
    pub dataset: String,
    pub ratio: f64,
    pub seed: u64,
    pub node: Option<String>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub dataset: String,
    pub ratio: f64,
    pub method: Method,
    pub metric: String,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub std: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub dataset: String,
    pub ratio: f64,
    pub seed: u64,
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub experiment: ExperimentKind,
    /// Rule used to combine per-node values into one run value.
    pub aggregation: String,
    pub shared_policy: SharedPolicy,
    pub config: ExperimentConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub meta: ReportMeta,
    pub rows: Vec<MetricRow>,
    pub node_rows: Vec<NodeRow>,
    pub quotient_checks: Vec<QuotientCheck>,
    pub skipped: Vec<Skip>,
    pub aggregates: Vec<Aggregate>,
    /// Wall-clock measurements, stored apart from the deterministic report body.
    #[serde(skip)]
    pub timings: Vec<Timing>,
}

impl MetricReport {
    pub fn empty(cfg: &ExperimentConfig) -> Self {
        MetricReport {
            meta: ReportMeta {
                experiment: cfg.experiment,
                aggregation: "mean".into(),
                shared_policy: cfg.shared_policy,
                config: cfg.clone(),
            },
            rows: Vec::new(),
            node_rows: Vec::new(),
            quotient_checks: Vec::new(),
            skipped: Vec::new(),
            aggregates: Vec::new(),
            timings: Vec::new(),
        }
    }

    /// Rows for one method, in run order.
    pub fn values(&self, dataset: &str, method: Method) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.dataset == dataset && r.method == method)
            .map(|r| r.value)
            .collect()
    }
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (`n − 1` denominator), 0 when fewer than two values.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

/// Mean and spread over seeds for every (dataset, ratio, method, metric), in first-seen order.
pub fn aggregate(rows: &[MetricRow]) -> Vec<Aggregate> {
    let mut keys: Vec<(String, u64, Method, String)> = Vec::new();
    let mut values: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        let key = (
            r.dataset.clone(),
            r.ratio.to_bits(),
            r.method,
            r.metric.clone(),
        );
        match keys.iter().position(|k| *k == key) {
            Some(k) => values[k].push(r.value),
            None => {
                keys.push(key);
                values.push(vec![r.value]);
            }
        }
    }
    keys.into_iter()
        .zip(values)
        .map(|((dataset, ratio, method, metric), v)| Aggregate {
            dataset,
            ratio: f64::from_bits(ratio),
            method,
            metric,
            mean: mean(&v),
            std: sample_std(&v),
            count: v.len(),
        })
        .collect()
}

/// Origin-based partition of an ambiguous node's neighbors, in contracted ids.
pub fn ground_truth_partition(
    rec: &ContractionRecord,
    i: usize,
    policy: SharedPolicy,
) -> Result<Clustering> {
    let p = rec.partition_of(i).ok_or_else(|| {
        Error::InvalidInput(format!("node {i} is not ambiguous in this contraction"))
    })?;
    truth_clustering(p, policy)
}

/// The kept and absorbed sides of `p` as a clustering, shared neighbors placed per `policy`.
pub fn truth_clustering(p: &TruthPartition, policy: SharedPolicy) -> Result<Clustering> {
    let (kept, absorbed) = truth_sides(p, policy);
    Clustering::new(
        [kept, absorbed]
            .into_iter()
            .filter(|s| !s.is_empty())
            .collect(),
    )
}

fn truth_sides(p: &TruthPartition, policy: SharedPolicy) -> (Vec<usize>, Vec<usize>) {
    let mut kept = p.kept.clone();
    let mut absorbed = p.absorbed.clone();
    if policy == SharedPolicy::AssignLarger {
        if absorbed.len() > kept.len() {
            absorbed.extend(&p.shared);
        } else {
            kept.extend(&p.shared);
        }
    }
    kept.sort_unstable();
    absorbed.sort_unstable();
    (kept, absorbed)
}

/// ARI of a candidate neighbor partition against the truth partition `p`.
///
/// Under [`SharedPolicy::Exclude`] shared neighbors are removed from the
/// candidate before comparison. `None` when fewer than two neighbors remain.
pub fn partition_ari(
    candidate: &Clustering,
    p: &TruthPartition,
    policy: SharedPolicy,
) -> Result<Option<f64>> {
    let truth = truth_clustering(p, policy)?;
    if truth.universe().len() < 2 {
        return Ok(None);
    }
    let candidate = match policy {
        SharedPolicy::Exclude => candidate.without(&p.shared),
        SharedPolicy::AssignLarger => candidate.clone(),
    };
    adjusted_rand_index(&candidate, &truth).map(Some)
}

struct RunOutput {
    rows: Vec<MetricRow>,
    node_rows: Vec<NodeRow>,
    checks: Vec<QuotientCheck>,
    skipped: Vec<Skip>,
    timings: Vec<Timing>,
}

impl RunOutput {
    fn new() -> Self {
        RunOutput {
            rows: Vec::new(),
            node_rows: Vec::new(),
            checks: Vec::new(),
            skipped: Vec::new(),
            timings: Vec::new(),
        }
    }
}

struct RunKey<'a> {
    dataset: &'a str,
    ratio: f64,
    seed: u64,
}

impl RunKey<'_> {
    fn timing(&self, stage: &str, start: Instant) -> Timing {
        Timing {
            dataset: self.dataset.into(),
            ratio: self.ratio,
            seed: self.seed,
            stage: stage.into(),
            seconds: start.elapsed().as_secs_f64(),
        }
    }

    fn skip(&self, node: Option<String>, reason: &str) -> Skip {
        Skip {
            dataset: self.dataset.into(),
            ratio: self.ratio,
            seed: self.seed,
            node,
            reason: reason.into(),
        }
    }
}

/// Seed of the embedding fit for a run seeded with `seed`.
pub fn embedding_seed(seed: u64) -> u64 {
    derive_seed(seed, 1)
}

fn embed(
    g: &Graph,
    cfg: &ExperimentConfig,
    key: &RunKey<'_>,
    out: &mut RunOutput,
) -> Result<Embedding> {
    let start = Instant::now();
    let emb = fit_embedding(g, &cfg.embedding, embedding_seed(key.seed))?;
    out.timings.push(key.timing("embed", start));
    Ok(emb)
}

/// Scores every node of `g` with `method`, oriented so that larger means more ambiguous.
pub fn method_scores(
    g: &Graph,
    emb: Option<&Embedding>,
    method: Method,
    cfg: &ExperimentConfig,
) -> Result<ScoreTable> {
    let mut table = match (method, method.baseline()) {
        (Method::Fondue, _) => {
            let emb =
                emb.ok_or_else(|| Error::InvalidInput("FONDUE scoring needs an embedding".into()))?;
            score_all_nodes(g, emb, &cfg.heuristics)?
        }
        (_, Some(b)) => baseline_scores(g, b, &cfg.mcl)?,
        _ => {
            return Err(Error::InvalidInput(format!(
                "{} does not produce node scores",
                method.as_str()
            )))
        }
    };
    if cfg.orientation(method) == Orientation::Lower {
        table.rows.iter_mut().for_each(|r| r.score = -r.score);
    }
    Ok(table)
}

fn identification_run(g: &Graph, cfg: &ExperimentConfig, key: &RunKey<'_>) -> Result<RunOutput> {
    let mut out = RunOutput::new();
    let rec = sample_contraction(g, key.ratio, key.seed)?;
    let positives = rec.ambiguous_count();
    if positives == 0 || positives == rec.contracted_graph.node_count() {
        out.skipped.push(key.skip(None, "insufficient positives"));
        return Ok(out);
    }
    let h = &rec.contracted_graph;
    let emb = if cfg.methods.contains(&Method::Fondue) {
        Some(embed(h, cfg, key, &mut out)?)
    } else {
        None
    };
    for &method in &cfg.methods {
        let start = Instant::now();
        let table = method_scores(h, emb.as_ref(), method, cfg)?;
        out.timings.push(key.timing(method.as_str(), start));
        out.rows.push(MetricRow {
            dataset: key.dataset.into(),
            ratio: key.ratio,
            seed: key.seed,
            method,
            metric: "auc".into(),
            value: auc(&table.scores(), &rec.truth_labels)?,
            nodes: positives,
        });
    }
    Ok(out)
}

fn labels_of(g: &Graph, clustering: &Clustering) -> Vec<Vec<String>> {
    clustering
        .clusters()
        .iter()
        .map(|c| c.iter().map(|&v| g.label(v).to_string()).collect())
        .collect()
}

fn splitting_run(g: &Graph, cfg: &ExperimentConfig, key: &RunKey<'_>) -> Result<RunOutput> {
    let mut out = RunOutput::new();
    let rec = sample_contraction(g, key.ratio, key.seed)?;
    if rec.ambiguous_count() == 0 {
        out.skipped.push(key.skip(None, "insufficient positives"));
        return Ok(out);
    }
    let h = &rec.contracted_graph;
    let emb = if cfg.methods.contains(&Method::Fondue) {
        Some(embed(h, cfg, key, &mut out)?)
    } else {
        None
    };
    let mut per_method: BTreeMap<Method, Vec<f64>> = BTreeMap::new();
    let start = Instant::now();
    for p in &rec.truth_partitions {
        let i = p.node;
        let label = h.label(i).to_string();
        if truth_clustering(p, cfg.shared_policy)?.universe().len() < 2 {
            out.skipped
                .push(key.skip(Some(label), "fewer than two comparable neighbors"));
            continue;
        }
        for &method in &cfg.methods {
            let candidate = match method {
                Method::Fondue => {
                    let emb = emb.as_ref().expect("embedding fitted for FONDUE");
                    let split = best_split(h, emb, i, &cfg.heuristics)?;
                    let (a, b) = split.groups.clone();
                    let m = build_quotient_matrix(h, emb, i)?;
                    let (kept, _) = truth_sides(p, SharedPolicy::AssignLarger);
                    let truth_b = SplitVector::from_positive(
                        m.size(),
                        m.neighbors()
                            .iter()
                            .enumerate()
                            .filter(|(_, j)| kept.contains(j))
                            .map(|(k, _)| k),
                    );
                    if !truth_b.is_one_sided() {
                        out.checks.push(QuotientCheck {
                            dataset: key.dataset.into(),
                            ratio: key.ratio,
                            seed: key.seed,
                            node: label.clone(),
                            fondue_value: split.value,
                            truth_value: rayleigh_quotient(&m, &truth_b)?,
                        });
                    }
                    Clustering::new(vec![a, b])?
                }
                Method::Mcl => mcl_split(h, i, &cfg.mcl)?.clustering(),
                other => {
                    return Err(Error::InvalidInput(format!(
                        "{} does not produce splits",
                        other.as_str()
                    )))
                }
            };
            let ari = partition_ari(&candidate, p, cfg.shared_policy)?
                .expect("comparable universe checked above");
            per_method.entry(method).or_default().push(ari);
            out.node_rows.push(NodeRow {
                dataset: key.dataset.into(),
                ratio: key.ratio,
                seed: key.seed,
                node: label.clone(),
                method,
                ari,
                groups: labels_of(h, &candidate),
            });
        }
    }
    out.timings.push(key.timing("split", start));
    for &method in &cfg.methods {
        if let Some(values) = per_method.get(&method) {
            out.rows.push(MetricRow {
                dataset: key.dataset.into(),
                ratio: key.ratio,
                seed: key.seed,
                method,
                metric: "ari".into(),
                value: mean(values),
                nodes: values.len(),
            });
        }
    }
    Ok(out)
}

fn run_all(
    cfg: &ExperimentConfig,
    run: fn(&Graph, &ExperimentConfig, &RunKey<'_>) -> Result<RunOutput>,
) -> Result<MetricReport> {
    cfg.validate()?;
    let mut report = MetricReport::empty(cfg);
    for dataset in &cfg.datasets {
        let name = dataset.name();
        let g = dataset.load()?;
        let jobs: Vec<(f64, u64)> = cfg
            .ratios
            .iter()
            .flat_map(|&r| cfg.seeds.iter().map(move |&s| (r, s)))
            .collect();
        let outputs = jobs
            .par_iter()
            .map(|&(ratio, seed)| {
                let key = RunKey {
                    dataset: &name,
                    ratio,
                    seed,
                };
                log::info!("{name}: ratio {ratio}, seed {seed}");
                run(&g, cfg, &key)
            })
            .collect::<Result<Vec<_>>>()?;
        for o in outputs {
            report.rows.extend(o.rows);
            report.node_rows.extend(o.node_rows);
            report.quotient_checks.extend(o.checks);
            report.skipped.extend(o.skipped);
            report.timings.extend(o.timings);
        }
    }
    report.aggregates = aggregate(&report.rows);
    Ok(report)
}

/// Contract, embed, score with every method, and compute AUC against the truth labels.
pub fn run_identification_experiment(cfg: &ExperimentConfig) -> Result<MetricReport> {
    run_all(cfg, identification_run)
}

/// Split every ambiguous node with each method and compare with its origin-based partition.
pub fn run_splitting_experiment(cfg: &ExperimentConfig) -> Result<MetricReport> {
    run_all(cfg, splitting_run)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<MetricReport> {
    match cfg.experiment {
        ExperimentKind::Identification => run_identification_experiment(cfg),
        ExperimentKind::Splitting => run_splitting_experiment(cfg),
    }
}

pub const REPORT_JSON: &str = "report.json";
pub const SUMMARY_CSV: &str = "summary.csv";
pub const PLOT_CSV: &str = "plot_data.csv";
pub const NODES_CSV: &str = "nodes.csv";
pub const TIMINGS_JSON: &str = "timings.json";

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `report.json`, `summary.csv`, `plot_data.csv`, `nodes.csv` and `timings.json` into `dir`.
///
/// Everything except `timings.json` is a deterministic function of the report rows.
pub fn emit_report(rep: &MetricReport, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_json(&dir.join(REPORT_JSON), rep)?;
    write_json(&dir.join(TIMINGS_JSON), &rep.timings)?;

    let path = dir.join(SUMMARY_CSV);
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record([
        "dataset", "ratio", "method", "metric", "mean", "std", "count",
    ])?;
    for a in &rep.aggregates {
        w.write_record([
            a.dataset.clone(),
            a.ratio.to_string(),
            a.method.as_str().into(),
            a.metric.clone(),
            num(a.mean),
            num(a.std),
            a.count.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = dir.join(PLOT_CSV);
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["method", "ratio", "dataset", "metric", "mean"])?;
    for a in &rep.aggregates {
        w.write_record([
            a.method.as_str().into(),
            a.ratio.to_string(),
            a.dataset.clone(),
            a.metric.clone(),
            num(a.mean),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = dir.join(NODES_CSV);
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["dataset", "ratio", "seed", "node", "method", "ari"])?;
    for r in &rep.node_rows {
        w.write_record([
            r.dataset.clone(),
            r.ratio.to_string(),
            r.seed.to_string(),
            r.node.clone(),
            r.method.as_str().into(),
            num(r.ari),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))
}

/// Reads a report written by [`emit_report`], including its timings.
pub fn load_report(dir: impl AsRef<Path>) -> Result<MetricReport> {
    let dir = dir.as_ref();
    let path = dir.join(REPORT_JSON);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut rep: MetricReport = serde_json::from_str(&text)?;
    let path = dir.join(TIMINGS_JSON);
    if let Ok(text) = fs::read_to_string(&path) {
        rep.timings = serde_json::from_str(&text)?;
    }
    Ok(rep)
}
