//! End-to-end experiment orchestration: dataset → kernel → spectral
//! clustering → metrics, over seeded repetitions with aggregation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qsc_core::dataset::{balance_by_class, generate, load_csv, scale_to_pi, subsample, DatasetKind};
use qsc_core::metrics::{k_sweep, score_clustering, KSweep, SilhouetteSpace};
use qsc_core::neuromorphic::{
    spike_kernel, GridConfig, LifConfig, NeuronModel, QlifConfig, SpikeMetric, SpikeTrain,
};
use qsc_core::pqk::{gram, search_params};
use qsc_core::spectral::rbf_kernel;
use qsc_core::{
    DatasetSpec64, EncodingParams64, Error, KernelKind, KernelMatrix64, LabeledDataset64,
    MetricsReport, Result, SpectralConfig, SpectralDecomposition,
};

/// The six kernel constructions an experiment can select.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelId {
    Pqk,
    Rbf,
    LifVp,
    LifVr,
    QlifVp,
    QlifVr,
}

impl KernelId {
    pub const ALL: [KernelId; 6] = [
        KernelId::Pqk,
        KernelId::Rbf,
        KernelId::LifVp,
        KernelId::LifVr,
        KernelId::QlifVp,
        KernelId::QlifVr,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            KernelId::Pqk => "pqk",
            KernelId::Rbf => "rbf",
            KernelId::LifVp => "lif_vp",
            KernelId::LifVr => "lif_vr",
            KernelId::QlifVp => "qlif_vp",
            KernelId::QlifVr => "qlif_vr",
        }
    }

    /// Tag carried by the kernel matrices this id produces.
    pub fn kind(self) -> KernelKind {
        match self {
            KernelId::Pqk => KernelKind::Pqk,
            KernelId::Rbf => KernelKind::Rbf,
            KernelId::LifVp | KernelId::QlifVp => KernelKind::Vp,
            KernelId::LifVr | KernelId::QlifVr => KernelKind::Vr,
        }
    }

    pub fn is_spiking(self) -> bool {
        !matches!(self, KernelId::Pqk | KernelId::Rbf)
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelId::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown kernel '{s}'; expected one of pqk, rbf, lif_vp, lif_vr, qlif_vp, qlif_vr"
                ))
            })
    }
}

fn default_search_budget() -> usize {
    200
}

fn default_rbf_gamma() -> f64 {
    10.0
}

fn default_vp_q() -> f64 {
    1.0
}

fn default_vr_tau() -> f64 {
    0.05
}

/// Hyperparameters for every kernel family. Only the fields of the selected
/// kernel are consulted, but all of them are serialized into reports so the
/// resolved configuration is always on record.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KernelOptions {
    /// pqk: number of random parameter candidates scored by alignment.
    #[serde(default = "default_search_budget")]
    pub search_budget: usize,
    /// rbf: exponent scale in exp(−γ‖x − x'‖²).
    #[serde(default = "default_rbf_gamma")]
    pub rbf_gamma: f64,
    #[serde(default)]
    pub lif: LifConfig<f64>,
    #[serde(default)]
    pub qlif: QlifConfig<f64>,
    /// Victor-Purpura shift cost.
    #[serde(default = "default_vp_q")]
    pub vp_q: f64,
    /// Van Rossum filter time constant.
    #[serde(default = "default_vr_tau")]
    pub vr_tau: f64,
    #[serde(default)]
    pub grid: GridConfig,
    /// Distance-to-kernel scale; `None` uses the median heuristic.
    #[serde(default)]
    pub gamma_scale: Option<f64>,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self {
            search_budget: default_search_budget(),
            rbf_gamma: default_rbf_gamma(),
            lif: LifConfig::default(),
            qlif: QlifConfig::default(),
            vp_q: default_vp_q(),
            vr_tau: default_vr_tau(),
            grid: GridConfig::default(),
            gamma_scale: None,
        }
    }
}

fn default_kmeans_restarts() -> usize {
    10
}

fn default_kmeans_max_iter() -> usize {
    300
}

/// Spectral-clustering knobs that are not swept.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpectralOptions {
    #[serde(default = "default_kmeans_restarts")]
    pub kmeans_restarts: usize,
    #[serde(default = "default_kmeans_max_iter")]
    pub kmeans_max_iter: usize,
    #[serde(default)]
    pub skip_trivial_eigenvector: bool,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            kmeans_restarts: default_kmeans_restarts(),
            kmeans_max_iter: default_kmeans_max_iter(),
            skip_trivial_eigenvector: false,
        }
    }
}

fn default_reps() -> usize {
    10
}

/// A complete experiment description, loadable from JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec64,
    pub kernel: KernelId,
    #[serde(default)]
    pub options: KernelOptions,
    /// Cluster count; `None` uses the dataset's class count.
    #[serde(default)]
    pub k: Option<usize>,
    /// When set, every repetition also sweeps these cluster counts.
    #[serde(default)]
    pub k_range: Option<Vec<usize>>,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub spectral: SpectralOptions,
    #[serde(default)]
    pub silhouette_space: SilhouetteSpace,
    /// CSV datasets: per-repetition resample size applied after balancing.
    #[serde(default)]
    pub subsample: Option<usize>,
    /// CSV datasets: downsample every class to the minority count first.
    #[serde(default = "default_true")]
    pub balance_csv: bool,
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn new(dataset: DatasetSpec64, kernel: KernelId) -> Self {
        Self {
            dataset,
            kernel,
            options: KernelOptions::default(),
            k: None,
            k_range: None,
            reps: default_reps(),
            base_seed: 0,
            spectral: SpectralOptions::default(),
            silhouette_space: SilhouetteSpace::default(),
            subsample: None,
            balance_csv: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Config("reps must be ≥ 1".into()));
        }
        if self.k == Some(0) {
            return Err(Error::Config("k must be ≥ 1".into()));
        }
        if let Some(range) = &self.k_range {
            if range.is_empty() || range.contains(&0) {
                return Err(Error::Config("k_range must be nonempty with every k ≥ 1".into()));
            }
        }
        if self.spectral.kmeans_restarts == 0 || self.spectral.kmeans_max_iter == 0 {
            return Err(Error::Config(
                "kmeans_restarts and kmeans_max_iter must be ≥ 1".into(),
            ));
        }
        match self.kernel {
            KernelId::Pqk => {
                if self.options.search_budget == 0 {
                    return Err(Error::Config("search_budget must be ≥ 1".into()));
                }
            }
            KernelId::Rbf => {
                let g = self.options.rbf_gamma;
                if g <= 0.0 || !g.is_finite() {
                    return Err(Error::Config(format!(
                        "rbf_gamma must be finite and > 0, got {g}"
                    )));
                }
            }
            _ => {
                self.spike_config()?.validate()?;
            }
        }
        Ok(())
    }

    /// Assembles the spike-pipeline configuration for a spiking kernel id.
    pub fn spike_config(&self) -> Result<qsc_core::SpikeKernelConfig64> {
        let neuron = match self.kernel {
            KernelId::LifVp | KernelId::LifVr => NeuronModel::Lif(self.options.lif),
            KernelId::QlifVp | KernelId::QlifVr => NeuronModel::Qlif(self.options.qlif),
            other => {
                return Err(Error::Config(format!(
                    "kernel '{other}' has no spiking pipeline"
                )))
            }
        };
        let metric = match self.kernel {
            KernelId::LifVp | KernelId::QlifVp => SpikeMetric::VictorPurpura { q: self.options.vp_q },
            _ => SpikeMetric::VanRossum { tau: self.options.vr_tau },
        };
        Ok(qsc_core::SpikeKernelConfig64 {
            neuron,
            metric,
            grid: self.options.grid.clone(),
            gamma_scale: self.options.gamma_scale,
        })
    }
}

/// One kernel matrix plus construction-specific byproducts.
pub struct KernelBuild {
    pub kernel: KernelMatrix64,
    /// pqk: alignment of the winning parameters.
    pub best_kta: Option<f64>,
    /// pqk: the winning parameters themselves.
    pub best_params: Option<EncodingParams64>,
    /// Spiking kernels: the γ used in exp(−γ·D²).
    pub gamma_scale: Option<f64>,
    /// Spiking kernels: response trains per sample.
    pub responses: Option<Vec<Vec<SpikeTrain<f64>>>>,
}

/// Builds the configured kernel on features already scaled to [0, π].
pub fn build_kernel(
    ds: &LabeledDataset64,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<KernelBuild> {
    match config.kernel {
        KernelId::Rbf => Ok(KernelBuild {
            kernel: rbf_kernel(&ds.features, config.options.rbf_gamma)?,
            best_kta: None,
            best_params: None,
            gamma_scale: None,
            responses: None,
        }),
        KernelId::Pqk => {
            let search = search_params(
                &ds.features,
                &ds.labels,
                config.options.search_budget,
                seed,
            )?;
            let kernel = gram(&ds.features, &search.best_params)?;
            Ok(KernelBuild {
                kernel,
                best_kta: Some(search.best_kta),
                best_params: Some(search.best_params),
                gamma_scale: None,
                responses: None,
            })
        }
        _ => {
            let out = spike_kernel(&ds.features, &config.spike_config()?)?;
            Ok(KernelBuild {
                kernel: out.kernel,
                best_kta: None,
                best_params: None,
                gamma_scale: Some(out.gamma_scale),
                responses: Some(out.responses),
            })
        }
    }
}

/// Materializes the working dataset for one repetition, scaled to [0, π].
/// Synthetic kinds regenerate with the repetition seed; CSV kinds rebalance
/// and resample the base table with it.
pub fn materialize(
    config: &ExperimentConfig,
    csv_base: Option<&LabeledDataset64>,
    seed: u64,
) -> Result<LabeledDataset64> {
    let working = match &config.dataset.kind {
        DatasetKind::Csv { .. } => {
            let base = csv_base.expect("csv base loaded before repetitions");
            let mut ds = if config.balance_csv {
                balance_by_class(base, seed)
            } else {
                base.clone()
            };
            if let Some(n) = config.subsample {
                ds = subsample(&ds, n, seed);
            }
            ds
        }
        _ => {
            let mut spec = config.dataset.clone();
            spec.seed = seed;
            generate(&spec)?
        }
    };
    working.validate()?;
    Ok(scale_to_pi(&working))
}

/// Loads the CSV base table when the config points at one.
pub fn load_csv_base(config: &ExperimentConfig) -> Result<Option<LabeledDataset64>> {
    match &config.dataset.kind {
        DatasetKind::Csv { path, label_column } => Ok(Some(load_csv(path, label_column)?)),
        _ => Ok(None),
    }
}

/// Outcome of a single seeded repetition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Repetition {
    pub rep: usize,
    pub seed: u64,
    /// Scores, when every stage succeeded.
    pub metrics: Option<MetricsReport>,
    /// Stage error, when one failed; the repetition is then excluded from
    /// aggregation and the report is marked partial.
    pub error: Option<String>,
    /// pqk only: alignment reached by the parameter search.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub best_kta: Option<f64>,
    /// Spiking kernels only: γ used by the Gaussian distance-to-kernel map.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma_scale: Option<f64>,
    /// Cluster-count sweep, when the config requests one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sweep: Option<KSweep>,
}

/// Mean and sample standard deviation of every metric over the successful
/// repetitions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: MetricsReport,
    /// Sample (n−1) standard deviation; zero when `single_run`.
    pub std: MetricsReport,
    pub successes: usize,
    /// One successful repetition: std is reported as 0 by convention.
    pub single_run: bool,
}

/// Tallies of the per-repetition sweep argmaxes plus mean curves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummary {
    pub ks: Vec<usize>,
    pub mean_ari: Vec<f64>,
    pub mean_v_measure: Vec<f64>,
    pub mean_silhouette: Vec<f64>,
    /// best-k → number of repetitions electing it.
    pub argmax_ari: BTreeMap<usize, usize>,
    pub argmax_v_measure: BTreeMap<usize, usize>,
    pub argmax_silhouette: BTreeMap<usize, usize>,
    /// Most frequently elected k (ties to the smallest k).
    pub modal_k_ari: usize,
    pub modal_k_v_measure: usize,
    pub modal_k_silhouette: usize,
}

/// The serializable result of a full experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    /// FNV-1a-64 hash of the canonical config JSON.
    pub config_hash: String,
    /// Resolved dataset name (generator id or CSV file stem).
    pub dataset: String,
    /// Resolved cluster count.
    pub k: usize,
    pub repetitions: Vec<Repetition>,
    /// `None` only when every repetition failed.
    pub aggregate: Option<Aggregate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sweep: Option<SweepSummary>,
    /// Fewer successful repetitions than requested.
    pub partial: bool,
    pub wall_time_secs: f64,
}

/// A finished run: the report plus first-repetition artifacts that are
/// written to disk but too bulky for the report itself.
pub struct ExperimentRun {
    pub report: ExperimentReport,
    pub rep0_kernel: Option<KernelMatrix64>,
    pub rep0_truth: Option<Vec<usize>>,
    pub rep0_labels: Option<Vec<usize>>,
}

struct RepOutcome {
    repetition: Repetition,
    artifacts: Option<(KernelMatrix64, Vec<usize>, Vec<usize>)>,
    k: usize,
}

fn metrics_fields(m: &MetricsReport) -> [f64; 8] {
    [
        m.accuracy,
        m.precision,
        m.recall,
        m.silhouette,
        m.ari,
        m.homogeneity,
        m.completeness,
        m.v_measure,
    ]
}

fn metrics_from_fields(f: [f64; 8]) -> MetricsReport {
    MetricsReport {
        accuracy: f[0],
        precision: f[1],
        recall: f[2],
        silhouette: f[3],
        ari: f[4],
        homogeneity: f[5],
        completeness: f[6],
        v_measure: f[7],
    }
}

fn aggregate(reps: &[Repetition]) -> Option<Aggregate> {
    let scores: Vec<[f64; 8]> = reps
        .iter()
        .filter_map(|r| r.metrics.as_ref().map(metrics_fields))
        .collect();
    if scores.is_empty() {
        return None;
    }
    let n = scores.len() as f64;
    let mut mean = [0.0f64; 8];
    for s in &scores {
        for (m, v) in mean.iter_mut().zip(s) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let mut std = [0.0f64; 8];
    let single_run = scores.len() == 1;
    if !single_run {
        for s in &scores {
            for ((acc, v), m) in std.iter_mut().zip(s).zip(&mean) {
                let d = v - m;
                *acc += d * d;
            }
        }
        for acc in &mut std {
            *acc = (*acc / (n - 1.0)).sqrt();
        }
    }
    Some(Aggregate {
        mean: metrics_from_fields(mean),
        std: metrics_from_fields(std),
        successes: scores.len(),
        single_run,
    })
}

fn summarize_sweep(reps: &[Repetition], ks: &[usize]) -> Option<SweepSummary> {
    let sweeps: Vec<&KSweep> = reps.iter().filter_map(|r| r.sweep.as_ref()).collect();
    if sweeps.is_empty() {
        return None;
    }
    let mut mean_ari = vec![0.0f64; ks.len()];
    let mut mean_v = vec![0.0f64; ks.len()];
    let mut mean_sil = vec![0.0f64; ks.len()];
    let mut argmax_ari: BTreeMap<usize, usize> = BTreeMap::new();
    let mut argmax_v: BTreeMap<usize, usize> = BTreeMap::new();
    let mut argmax_sil: BTreeMap<usize, usize> = BTreeMap::new();
    for sweep in &sweeps {
        for (i, p) in sweep.points.iter().enumerate() {
            mean_ari[i] += p.ari;
            mean_v[i] += p.v_measure;
            mean_sil[i] += p.silhouette;
        }
        *argmax_ari.entry(sweep.best_k_ari).or_default() += 1;
        *argmax_v.entry(sweep.best_k_v_measure).or_default() += 1;
        *argmax_sil.entry(sweep.best_k_silhouette).or_default() += 1;
    }
    let n = sweeps.len() as f64;
    for v in mean_ari
        .iter_mut()
        .chain(mean_v.iter_mut())
        .chain(mean_sil.iter_mut())
    {
        *v /= n;
    }
    // BTreeMap iterates ascending, so strict > keeps the smallest k on ties.
    let modal = |counts: &BTreeMap<usize, usize>| {
        let mut best_k = 0;
        let mut best = 0usize;
        for (&k, &c) in counts {
            if c > best {
                best = c;
                best_k = k;
            }
        }
        best_k
    };
    Some(SweepSummary {
        ks: ks.to_vec(),
        mean_ari,
        mean_v_measure: mean_v,
        mean_silhouette: mean_sil,
        modal_k_ari: modal(&argmax_ari),
        modal_k_v_measure: modal(&argmax_v),
        modal_k_silhouette: modal(&argmax_sil),
        argmax_ari,
        argmax_v_measure: argmax_v,
        argmax_silhouette: argmax_sil,
    })
}

fn run_repetition(
    config: &ExperimentConfig,
    csv_base: Option<&LabeledDataset64>,
    rep: usize,
) -> RepOutcome {
    let seed = config.base_seed.wrapping_add(rep as u64);
    let failed = |e: Error| RepOutcome {
        repetition: Repetition {
            rep,
            seed,
            metrics: None,
            error: Some(e.to_string()),
            best_kta: None,
            gamma_scale: None,
            sweep: None,
        },
        artifacts: None,
        k: 0,
    };

    let ds = match materialize(config, csv_base, seed) {
        Ok(ds) => ds,
        Err(e) => return failed(e),
    };
    let k = config.k.unwrap_or(ds.n_classes);
    let build = match build_kernel(&ds, config, seed) {
        Ok(b) => b,
        Err(e) => return failed(e),
    };
    let dec = match SpectralDecomposition::new(&build.kernel) {
        Ok(d) => d,
        Err(e) => return failed(e),
    };
    let spectral_cfg = SpectralConfig {
        k,
        kmeans_restarts: config.spectral.kmeans_restarts,
        kmeans_max_iter: config.spectral.kmeans_max_iter,
        seed,
        skip_trivial_eigenvector: config.spectral.skip_trivial_eigenvector,
    };
    let assignment = match dec.cluster(&spectral_cfg) {
        Ok(a) => a,
        Err(e) => return failed(e),
    };
    let points = match config.silhouette_space {
        SilhouetteSpace::Feature => &ds.features,
        SilhouetteSpace::Embedding => &assignment.embedding,
    };
    let metrics = match score_clustering(points, &ds.labels, &assignment.labels) {
        Ok(m) => m,
        Err(e) => return failed(e),
    };
    let sweep = match &config.k_range {
        Some(ks) => match k_sweep(&dec, &ds.features, &ds.labels, ks, &spectral_cfg) {
            Ok(s) => Some(s),
            Err(e) => return failed(e),
        },
        None => None,
    };
    let artifacts = (rep == 0).then(|| (build.kernel, ds.labels.clone(), assignment.labels.clone()));
    RepOutcome {
        repetition: Repetition {
            rep,
            seed,
            metrics: Some(metrics),
            error: None,
            best_kta: build.best_kta,
            gamma_scale: build.gamma_scale,
            sweep,
        },
        artifacts,
        k,
    }
}

/// Runs the full experiment: R seeded repetitions (concurrently), metric
/// aggregation, and optional sweep summarization. Deterministic for a fixed
/// config, wall time aside.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRun> {
    config.validate()?;
    let started = Instant::now();
    let csv_base = load_csv_base(config)?;

    let mut outcomes: Vec<RepOutcome> = (0..config.reps)
        .into_par_iter()
        .map(|rep| run_repetition(config, csv_base.as_ref(), rep))
        .collect();

    let k = outcomes
        .iter()
        .find(|o| o.repetition.error.is_none())
        .map(|o| o.k)
        .unwrap_or_else(|| config.k.unwrap_or(0));
    let mut rep0 = None;
    for o in &mut outcomes {
        if let Some(art) = o.artifacts.take() {
            rep0 = Some(art);
        }
    }
    let repetitions: Vec<Repetition> = outcomes.into_iter().map(|o| o.repetition).collect();

    let aggregate = aggregate(&repetitions);
    let sweep = config
        .k_range
        .as_ref()
        .and_then(|ks| summarize_sweep(&repetitions, ks));
    let successes = aggregate.as_ref().map_or(0, |a| a.successes);
    let dataset_name = csv_base
        .as_ref()
        .map(|b| b.name.clone())
        .unwrap_or_else(|| config.dataset.kind.name().to_string());

    let report = ExperimentReport {
        config_hash: config_hash(config)?,
        config: config.clone(),
        dataset: dataset_name,
        k,
        partial: successes < config.reps,
        repetitions,
        aggregate,
        sweep,
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    let (rep0_kernel, rep0_truth, rep0_labels) = match rep0 {
        Some((kernel, truth, labels)) => (Some(kernel), Some(truth), Some(labels)),
        None => (None, None, None),
    };
    Ok(ExperimentRun {
        report,
        rep0_kernel,
        rep0_truth,
        rep0_labels,
    })
}

/// FNV-1a 64-bit hash of arbitrary bytes.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Hash of the canonical (serde field order) config JSON, as fixed-width hex.
pub fn config_hash(config: &ExperimentConfig) -> Result<String> {
    let canonical = serde_json::to_string(config)?;
    Ok(format!("{:016x}", fnv1a64(canonical.as_bytes())))
}
