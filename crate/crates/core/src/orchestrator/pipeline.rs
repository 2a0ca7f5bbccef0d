//! The three stages and their wiring.
//!
//! Store layout:
//!
//! ```text
//! config/<name>.json          the configuration as submitted
//! raw/node-<w>.json           one per worker: JSON array of RunRecord
//! timing/node-<w>.json        wall-clock seconds per run (not reproducible)
//! models/best.qmodel          best run of the selected spec
//! processed/aggregate.csv     per-spec statistics
//! processed/selection.json    composite ranking and winners
//! plots/<name>.{csv,svg}      one pair per requested visualization
//! ```
//!
//! A stage starts once the previous one has written all of its blobs; the
//! raw blobs are the last thing a worker writes, so their count is the
//! completion signal.

use std::collections::{BTreeMap, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::config::{parse_config, ConfigError, ExperimentConfig};
use super::grid::expand_grid;
use super::plots::{self, CapabilityRow, EntropySeries, VISUALIZATIONS};
use super::schedule::schedule_static;
use super::store::{DirStore, ObjectStore, StoreError};
use super::trigger::{PipelineTrigger, TriggerError};
use crate::data::{discretize, load_samples, DataError, TargetDistribution};
use crate::gan::{train_qgan, ExperimentSpec, ModelError, ModelFile, RunResult};
use crate::metrics::{aggregate_runs, select_best, AggregateStats, MetricsError, RankedSpec, SelectionWeights};
use crate::quantum::{build_ansatz, entangling_capability, DEFAULT_CAPABILITY_SAMPLES};
use crate::seed::{derive_seed, run_seed};

pub const RECORD_FORMAT: u32 = 1;
pub const AGGREGATE_KEY: &str = "processed/aggregate.csv";
pub const SELECTION_KEY: &str = "processed/selection.json";
pub const MODEL_KEY: &str = "models/best.qmodel";
/// Prefixes written by the pipelines; a fresh run requires them empty.
pub const MANAGED_PREFIXES: &[&str] = &["config/", "raw/", "timing/", "processed/", "models/", "plots/"];
/// Specs drawn in the entropy-curve plot, best ranked first.
pub const ENTROPY_PLOT_SPECS: usize = 10;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read {path}: {source}")]
    ReadConfig {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Trigger(#[from] TriggerError),
    #[error("distribution {path:?}: {source}")]
    Data {
        path: String,
        #[source]
        source: DataError,
    },
    #[error("malformed blob {key:?}: {reason}")]
    MalformedBlob { key: String, reason: String },
    #[error("no training run succeeded")]
    NoSuccessfulRuns,
    #[error("unknown visualization {0:?} (known: entropy_curve, entanglement_histogram, distribution_overlay)")]
    UnknownVisualization(String),
    #[error("store already holds pipeline output: {}", .0.join(", "))]
    NonEmptyStore(Vec<String>),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("worker {0} panicked")]
    WorkerPanicked(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    Failed,
}

/// One entry of a raw node blob.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub format: u32,
    pub status: RunStatus,
    pub spec: ExperimentSpec,
    pub run_index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<RunResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Binned target the run was trained against.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub target_probabilities: Vec<f64>,
}

impl RunRecord {
    pub fn ok(spec: &ExperimentSpec, result: RunResult, target_probabilities: Vec<f64>) -> Self {
        Self {
            format: RECORD_FORMAT,
            status: RunStatus::Ok,
            spec: spec.clone(),
            run_index: result.run_index,
            result: Some(result),
            error: None,
            target_probabilities,
        }
    }

    pub fn failed(spec: &ExperimentSpec, run_index: usize, error: String) -> Self {
        Self {
            format: RECORD_FORMAT,
            status: RunStatus::Failed,
            spec: spec.clone(),
            run_index,
            result: None,
            error: Some(error),
            target_probabilities: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub spec_id: String,
    pub run_index: usize,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Worker threads; `None` uses the available parallelism. Never more
    /// than the configured container count.
    pub max_parallel: Option<usize>,
    /// How long a stage waits for the previous stage's blobs to appear.
    pub trigger_timeout: Duration,
    pub poll_interval: Duration,
    pub weights: SelectionWeights,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            max_parallel: None,
            trigger_timeout: Duration::from_secs(60),
            poll_interval: super::trigger::DEFAULT_POLL_INTERVAL,
            weights: SelectionWeights::default(),
        }
    }
}

impl RunOptions {
    fn trigger(&self, prefix: &str, expected: usize) -> PipelineTrigger {
        let mut t = PipelineTrigger::new(prefix, expected, self.trigger_timeout);
        t.poll_interval = self.poll_interval;
        t
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainingSummary {
    pub specs: usize,
    pub runs_ok: usize,
    pub runs_failed: usize,
    pub budget_exhausted: usize,
}

// ---------------------------------------------------------------------------
// Stage 1: training.

fn load_targets(
    config: &ExperimentConfig,
    store: &dyn ObjectStore,
) -> Result<HashMap<(usize, usize), TargetDistribution>, PipelineError> {
    let mut targets = HashMap::new();
    for (d, source) in config.distributions.iter().enumerate() {
        let key = source.store_key();
        let data_err = |source| PipelineError::Data {
            path: key.clone(),
            source,
        };
        let bytes = store.get(&key)?;
        let mut samples = load_samples(&bytes).map_err(data_err)?;
        if let Some(n) = source.samples {
            if samples.len() < n {
                log::warn!("{key}: {n} samples requested, file has {}; using all", samples.len());
            }
            samples.truncate(n);
        }
        for &nq in &config.num_qubits {
            let target = discretize(&samples, nq, &source.discretization).map_err(data_err)?;
            targets.insert((d, nq), target);
        }
    }
    Ok(targets)
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

struct Progress {
    done: AtomicUsize,
    total: usize,
}

fn run_worker(
    worker: usize,
    specs: &[ExperimentSpec],
    config: &ExperimentConfig,
    targets: &HashMap<(usize, usize), TargetDistribution>,
    store: &dyn ObjectStore,
    progress: &Progress,
) -> Result<TrainingSummary, PipelineError> {
    let mut records = Vec::new();
    let mut timing = Vec::new();
    let mut summary = TrainingSummary {
        specs: specs.len(),
        ..Default::default()
    };
    for spec in specs {
        let target = &targets[&(spec.distribution_index, spec.num_qubits)];
        for run in 0..spec.num_training_runs {
            let seed = run_seed(&spec.spec_id, run, config.master_seed);
            let outcome = panic::catch_unwind(AssertUnwindSafe(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                train_qgan(spec, target, &config.budget, run, &mut rng)
            }));
            let record = match outcome {
                Ok(Ok(result)) => {
                    timing.push(TimingRecord {
                        spec_id: spec.spec_id.clone(),
                        run_index: run,
                        wall_seconds: result.wall_seconds,
                    });
                    summary.runs_ok += 1;
                    summary.budget_exhausted += result.budget_exhausted as usize;
                    RunRecord::ok(spec, result, target.bin_probabilities.clone())
                }
                Ok(Err(e)) => {
                    log::warn!("worker {worker}: spec {} run {run} failed: {e}", spec.spec_id);
                    summary.runs_failed += 1;
                    RunRecord::failed(spec, run, e.to_string())
                }
                Err(p) => {
                    let msg = panic_message(p);
                    log::error!("worker {worker}: spec {} run {run} panicked: {msg}", spec.spec_id);
                    summary.runs_failed += 1;
                    RunRecord::failed(spec, run, format!("panic: {msg}"))
                }
            };
            records.push(record);
            let done = progress.done.fetch_add(1, Ordering::Relaxed) + 1;
            log::info!("training: {done}/{} runs finished", progress.total);
        }
    }
    let timing_json = serde_json::to_vec(&timing).expect("timing serializes");
    store.put_atomic(&format!("timing/node-{worker}.json"), &timing_json)?;
    // the raw blob is the completion signal, so it goes last
    let raw = serde_json::to_vec(&records).expect("records serialize");
    store.put_atomic(&format!("raw/node-{worker}.json"), &raw)?;
    log::info!("worker {worker}: wrote {} records", records.len());
    Ok(summary)
}

/// Trains every run of the grid on `n_containers` workers and writes one raw
/// blob per worker, including workers with nothing to do.
pub fn run_pipeline_1(
    config: &ExperimentConfig,
    store: &dyn ObjectStore,
    options: &RunOptions,
) -> Result<TrainingSummary, PipelineError> {
    let specs = expand_grid(config);
    let targets = load_targets(config, store)?;
    let sets = schedule_static(&specs, config.n_containers);
    let threads = options
        .max_parallel
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .clamp(1, config.n_containers);
    let progress = Progress {
        done: AtomicUsize::new(0),
        total: specs.iter().map(|s| s.num_training_runs).sum(),
    };
    log::info!(
        "training: {} specs, {} runs on {} workers ({} threads)",
        specs.len(),
        progress.total,
        config.n_containers,
        threads
    );
    let next = AtomicUsize::new(0);
    let outcomes = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let w = next.fetch_add(1, Ordering::Relaxed);
                if w >= sets.len() {
                    break;
                }
                let res = panic::catch_unwind(AssertUnwindSafe(|| {
                    run_worker(w, &sets[w], config, &targets, store, &progress)
                }))
                .unwrap_or(Err(PipelineError::WorkerPanicked(w)));
                outcomes.lock().expect("outcome lock").push(res);
            });
        }
    });
    let mut total = TrainingSummary::default();
    for res in outcomes.into_inner().expect("outcome lock") {
        let s = res?;
        total.specs += s.specs;
        total.runs_ok += s.runs_ok;
        total.runs_failed += s.runs_failed;
        total.budget_exhausted += s.budget_exhausted;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Stage 2: aggregation and selection.

pub fn read_records(store: &dyn ObjectStore) -> Result<Vec<RunRecord>, PipelineError> {
    let mut out = Vec::new();
    for key in store.list("raw/")? {
        let bytes = store.get(&key)?;
        let records: Vec<RunRecord> = serde_json::from_slice(&bytes).map_err(|e| PipelineError::MalformedBlob {
            key: key.clone(),
            reason: e.to_string(),
        })?;
        if let Some(r) = records.iter().find(|r| r.format != RECORD_FORMAT) {
            return Err(PipelineError::MalformedBlob {
                key,
                reason: format!("record format {} (expected {RECORD_FORMAT})", r.format),
            });
        }
        out.extend(records);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecSummary {
    pub spec_id: String,
    pub spec: ExperimentSpec,
    pub score: f64,
    pub stats: AggregateStats,
    pub best_run_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitWinner {
    pub num_qubits: usize,
    pub spec_id: String,
    pub score: f64,
}

/// Contents of `processed/selection.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub weights: SelectionWeights,
    pub winner: SpecSummary,
    pub ranking: Vec<RankedSpec>,
    /// Winner among the specs of each qubit count, ranked among themselves.
    pub per_qubit_winners: Vec<QubitWinner>,
    pub runs_ok: usize,
    pub runs_failed: usize,
}

/// One aggregate row with the grid coordinates of its spec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub spec_id: String,
    pub family: String,
    pub num_qubits: usize,
    pub k: usize,
    pub initialization: String,
    pub discriminator: String,
    pub discriminator_lr: f64,
    pub generator_lr: f64,
    pub n_runs: usize,
    pub n_failed: usize,
    pub mu_ks: f64,
    pub sigma_ks: f64,
    pub mu_re: f64,
    pub sigma_re: f64,
    pub mu_depth: f64,
    pub sigma_depth: f64,
    pub mu_loss_instability: f64,
}

fn best_run<'a>(runs: &[&'a RunResult]) -> &'a RunResult {
    runs.iter()
        .min_by(|a, b| a.final_re.total_cmp(&b.final_re).then(a.run_index.cmp(&b.run_index)))
        .expect("non-empty")
}

/// Aggregates the raw records, ranks the specs and exports the best model.
pub fn run_pipeline_2(store: &dyn ObjectStore, options: &RunOptions) -> Result<Selection, PipelineError> {
    let records = read_records(store)?;
    let mut specs: BTreeMap<String, &ExperimentSpec> = BTreeMap::new();
    let mut ok: BTreeMap<String, Vec<&RunRecord>> = BTreeMap::new();
    let mut failed: BTreeMap<String, usize> = BTreeMap::new();
    for r in &records {
        specs.insert(r.spec.spec_id.clone(), &r.spec);
        match (r.status, &r.result) {
            (RunStatus::Ok, Some(_)) => ok.entry(r.spec.spec_id.clone()).or_default().push(r),
            _ => *failed.entry(r.spec.spec_id.clone()).or_default() += 1,
        }
    }
    let runs_failed: usize = failed.values().sum();
    if ok.is_empty() {
        return Err(PipelineError::NoSuccessfulRuns);
    }
    let mut stats = Vec::new();
    let mut rows = Vec::new();
    for (id, recs) in &ok {
        let results: Vec<RunResult> = recs.iter().filter_map(|r| r.result.clone()).collect();
        let s = aggregate_runs(&results)?;
        let spec = specs[id];
        rows.push(AggregateRow {
            spec_id: id.clone(),
            family: spec.family.name().to_string(),
            num_qubits: spec.num_qubits,
            k: spec.repetitions,
            initialization: spec.initialization.kind.name().to_string(),
            discriminator: spec.discriminator.type_name.name().to_string(),
            discriminator_lr: spec.discriminator.learning_rate,
            generator_lr: spec.generator_lr,
            n_runs: s.n_runs,
            n_failed: failed.get(id).copied().unwrap_or(0),
            mu_ks: s.mu_ks,
            sigma_ks: s.sigma_ks,
            mu_re: s.mu_re,
            sigma_re: s.sigma_re,
            mu_depth: s.mu_depth,
            sigma_depth: s.sigma_depth,
            mu_loss_instability: s.mu_loss_instability,
        });
        stats.push(s);
    }
    let report = select_best(&stats, options.weights)?;

    let mut by_qubits: BTreeMap<usize, Vec<AggregateStats>> = BTreeMap::new();
    for s in &stats {
        by_qubits.entry(specs[&s.spec_id].num_qubits).or_default().push(s.clone());
    }
    let mut per_qubit_winners = Vec::new();
    for (nq, group) in by_qubits {
        let r = select_best(&group, options.weights)?;
        per_qubit_winners.push(QubitWinner {
            num_qubits: nq,
            score: r.ranking[0].score,
            spec_id: r.winner,
        });
    }

    let winner_id = report.winner.clone();
    let winner_runs: Vec<&RunRecord> = ok[&winner_id].clone();
    let results: Vec<&RunResult> = winner_runs.iter().filter_map(|r| r.result.as_ref()).collect();
    let best = best_run(&results);
    let best_record = winner_runs
        .iter()
        .find(|r| r.run_index == best.run_index)
        .expect("best run has a record");
    let spec = specs[&winner_id];
    let model = ModelFile::from_run(spec, best, best_record.target_probabilities.clone());

    let selection = Selection {
        weights: options.weights,
        winner: SpecSummary {
            spec_id: winner_id.clone(),
            spec: spec.clone(),
            score: report.ranking[0].score,
            stats: stats.iter().find(|s| s.spec_id == winner_id).cloned().expect("winner has stats"),
            best_run_index: best.run_index,
        },
        ranking: report.ranking,
        per_qubit_winners,
        runs_ok: records.len() - runs_failed,
        runs_failed,
    };

    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        w.serialize(row).expect("in-memory csv");
    }
    let csv_bytes = w.into_inner().expect("in-memory csv");

    store.put_atomic(MODEL_KEY, &model.to_bytes())?;
    store.put_atomic(AGGREGATE_KEY, &csv_bytes)?;
    let mut json = serde_json::to_vec_pretty(&selection).expect("selection serializes");
    json.push(b'\n');
    store.put_atomic(SELECTION_KEY, &json)?;
    log::info!(
        "selection: winner {winner_id} ({} {} k={} N={}) over {} specs",
        spec.family,
        spec.initialization.kind,
        spec.repetitions,
        spec.num_qubits,
        stats.len()
    );
    Ok(selection)
}

pub fn read_aggregate(store: &dyn ObjectStore) -> Result<Vec<AggregateRow>, PipelineError> {
    let bytes = store.get(AGGREGATE_KEY)?;
    csv::Reader::from_reader(bytes.as_slice())
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| PipelineError::MalformedBlob {
            key: AGGREGATE_KEY.into(),
            reason: e.to_string(),
        })
}

pub fn read_selection(store: &dyn ObjectStore) -> Result<Selection, PipelineError> {
    let bytes = store.get(SELECTION_KEY)?;
    serde_json::from_slice(&bytes).map_err(|e| PipelineError::MalformedBlob {
        key: SELECTION_KEY.into(),
        reason: e.to_string(),
    })
}

// ---------------------------------------------------------------------------
// Stage 3: visualizations.

fn spec_label(s: &ExperimentSpec) -> String {
    format!(
        "{} k{} N{} {}",
        s.family,
        s.repetitions,
        s.num_qubits,
        s.initialization.kind
    )
}

/// Writes `plots/<name>.csv` and `plots/<name>.svg` for every requested
/// visualization. Names are checked before anything is written.
pub fn run_pipeline_3(config: &ExperimentConfig, store: &dyn ObjectStore) -> Result<Vec<String>, PipelineError> {
    if let Some(bad) = config
        .visualizations
        .iter()
        .find(|v| !VISUALIZATIONS.contains(&v.as_str()))
    {
        return Err(PipelineError::UnknownVisualization(bad.clone()));
    }
    let mut written = Vec::new();
    for name in &config.visualizations {
        let (csv, svg) = match name.as_str() {
            "entropy_curve" => {
                let selection = read_selection(store)?;
                let records = read_records(store)?;
                let series: Vec<EntropySeries> = selection
                    .ranking
                    .iter()
                    .take(ENTROPY_PLOT_SPECS)
                    .filter_map(|r| {
                        let recs: Vec<&RunRecord> = records
                            .iter()
                            .filter(|x| x.spec.spec_id == r.spec_id && x.result.is_some())
                            .collect();
                        let first = recs.first()?;
                        Some(EntropySeries {
                            spec_id: r.spec_id.clone(),
                            label: spec_label(&first.spec),
                            runs: recs
                                .iter()
                                .map(|x| x.result.as_ref().expect("filtered").entropy_curve.clone())
                                .collect(),
                        })
                    })
                    .collect();
                plots::entropy_curve(&series)
            }
            "entanglement_histogram" => plots::entanglement_histogram(&capability_rows(config)?),
            "distribution_overlay" => {
                let model = ModelFile::from_bytes(&store.get(MODEL_KEY)?)?;
                let generated = model.generator_probabilities()?;
                plots::distribution_overlay(model.range, &model.target_probabilities, &generated)
            }
            _ => unreachable!("checked above"),
        };
        for (ext, body) in [("csv", csv), ("svg", svg)] {
            let key = format!("plots/{name}.{ext}");
            store.put_atomic(&key, body.as_bytes())?;
            written.push(key);
        }
        log::info!("reporting: {name} written");
    }
    Ok(written)
}

/// Entangling capability of every (family, N, k) in the grid with N ≥ 2.
pub fn capability_rows(config: &ExperimentConfig) -> Result<Vec<CapabilityRow>, PipelineError> {
    let mut rows = Vec::new();
    for a in &config.ansaetze {
        for &k in &a.repetitions {
            for &n in &config.num_qubits {
                if n < 2 {
                    continue;
                }
                let template = build_ansatz(&crate::quantum::AnsatzDescriptor::new(a.family, n, k))
                    .map_err(|e| PipelineError::MalformedBlob {
                        key: "config".into(),
                        reason: e.to_string(),
                    })?;
                let seed = derive_seed(&[
                    b"capability",
                    a.family.name().as_bytes(),
                    &(n as u64).to_le_bytes(),
                    &(k as u64).to_le_bytes(),
                    &config.master_seed.to_le_bytes(),
                ]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let capability = entangling_capability(&template, DEFAULT_CAPABILITY_SAMPLES, &mut rng)
                    .expect("N ≥ 2 and positive sample count");
                rows.push(CapabilityRow {
                    family: a.family.name().to_string(),
                    num_qubits: n,
                    repetitions: k,
                    capability,
                });
            }
        }
    }
    rows.sort_by(|a, b| (&a.family, a.num_qubits, a.repetitions).cmp(&(&b.family, b.num_qubits, b.repetitions)));
    rows.dedup();
    Ok(rows)
}

// ---------------------------------------------------------------------------
// End to end.

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub training: TrainingSummary,
    pub selection: Selection,
    pub plots: Vec<String>,
}

/// Keys under the managed prefixes, i.e. output of an earlier run.
pub fn existing_output(store: &dyn ObjectStore) -> Result<Vec<String>, StoreError> {
    let mut out = Vec::new();
    for p in MANAGED_PREFIXES {
        out.extend(store.list(p)?);
    }
    Ok(out)
}

/// Runs all three stages against `store`. The configuration text is stored
/// verbatim under `config/<name>.json`.
pub fn run_with_store(
    config_name: &str,
    config_bytes: &[u8],
    store: &dyn ObjectStore,
    options: &RunOptions,
) -> Result<RunSummary, PipelineError> {
    let config = parse_config(config_bytes)?;
    let existing = existing_output(store)?;
    if !existing.is_empty() {
        return Err(PipelineError::NonEmptyStore(existing));
    }
    store.put_atomic(&format!("config/{config_name}.json"), config_bytes)?;

    let training = run_pipeline_1(&config, store, options)?;
    log::info!(
        "training done: {} ok, {} failed, {} hit the budget",
        training.runs_ok,
        training.runs_failed,
        training.budget_exhausted
    );
    options.trigger("raw/", config.n_containers).wait(store)?;
    let selection = run_pipeline_2(store, options)?;
    options.trigger("processed/", 2).wait(store)?;
    let plots = run_pipeline_3(&config, store)?;
    Ok(RunSummary {
        training,
        selection,
        plots,
    })
}

/// [`run_with_store`] on a directory store, reading the config from disk.
pub fn run_all(config_path: &Path, store_root: &Path, options: &RunOptions) -> Result<RunSummary, PipelineError> {
    let bytes = std::fs::read(config_path).map_err(|source| PipelineError::ReadConfig {
        path: config_path.display().to_string(),
        source,
    })?;
    let name = config_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .filter(|s| !s.is_empty() && !s.starts_with('.'))
        .unwrap_or_else(|| "config".into());
    let store = DirStore::open(store_root)?;
    run_with_store(&name, &bytes, &store, options)
}
