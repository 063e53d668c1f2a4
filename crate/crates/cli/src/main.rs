//! `qsc`: spectral clustering with quantum-encoded, spiking, and classical
//! kernels. Subcommands cover the pipeline stages individually (generate,
//! kernel, cluster, evaluate) and end to end (run, sweep, compare).

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qsc_cli::experiment::{
    build_kernel, load_csv_base, materialize, run_experiment, ExperimentConfig, KernelId,
};
use qsc_cli::output::{
    read_labels_csv, resolve_out_dir, write_cluster_labels_csv, write_run,
};
use qsc_cli::table::{compare, load_report, render_markdown, write_comparison};
use qsc_core::dataset::{
    balance_by_class, generate, load_csv, save_csv, scale_to_pi, subsample, DatasetKind,
};
use qsc_core::metrics::{default_k_range, score_clustering, SilhouetteSpace};
use qsc_core::neuromorphic::save_spike_trains_csv;
use qsc_core::{DatasetSpec64, KernelKind, KernelMatrix64, SpectralConfig, SpectralDecomposition64};

#[derive(Parser)]
#[command(
    name = "qsc",
    version,
    about = "Spectral clustering with quantum-encoded, spiking, and classical kernels"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Materialize a dataset (synthetic generator or CSV) and save it as CSV
    Generate(GenerateArgs),
    /// Build one kernel matrix and write it as CSV and JSON
    Kernel(KernelArgs),
    /// Spectrally cluster a stored kernel matrix
    Cluster(ClusterArgs),
    /// Score stored predicted labels against a dataset's ground truth
    Evaluate(EvaluateArgs),
    /// Run a full experiment: seeded repetitions, metrics, aggregation
    Run(RunArgs),
    /// Run an experiment that also sweeps the cluster count per repetition
    Sweep(RunArgs),
    /// Compare experiment reports that share a dataset
    Compare(CompareArgs),
}

#[derive(Args)]
struct DatasetArgs {
    /// Synthetic generator: blobs, circles, or moons
    #[arg(long, conflicts_with = "csv")]
    dataset: Option<String>,
    /// Sample count for synthetic generators
    #[arg(long, default_value_t = 300)]
    n: usize,
    /// blobs: isotropic cluster standard deviation
    #[arg(long)]
    std: Option<f64>,
    /// circles/moons: Gaussian feature noise
    #[arg(long)]
    noise: Option<f64>,
    /// circles: inner/outer radius ratio
    #[arg(long)]
    factor: Option<f64>,
    /// Load the dataset from this CSV instead of generating it
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Label column name in the CSV
    #[arg(long, default_value = "label")]
    label_column: String,
    /// CSV datasets: per-repetition resample size (after balancing)
    #[arg(long)]
    subsample: Option<usize>,
    /// CSV datasets: skip downsampling classes to the minority count
    #[arg(long)]
    no_balance: bool,
}

impl DatasetArgs {
    fn kind(&self) -> Result<DatasetKind<f64>> {
        if let Some(path) = &self.csv {
            return Ok(DatasetKind::Csv {
                path: path.display().to_string(),
                label_column: self.label_column.clone(),
            });
        }
        match self.dataset.as_deref() {
            Some("blobs") => Ok(DatasetKind::Blobs {
                std: self.std.unwrap_or(1.40),
            }),
            Some("circles") => Ok(DatasetKind::Circles {
                noise: self.noise.unwrap_or(0.1),
                factor: self.factor.unwrap_or(0.2),
            }),
            Some("moons") => Ok(DatasetKind::Moons {
                noise: self.noise.unwrap_or(0.075),
            }),
            Some(other) => bail!("unknown dataset '{other}'; expected blobs, circles, or moons"),
            None => bail!("specify --dataset <blobs|circles|moons> or --csv <path>"),
        }
    }

    fn given(&self) -> bool {
        self.dataset.is_some() || self.csv.is_some()
    }
}

#[derive(Args)]
struct KernelFlags {
    /// Kernel: pqk, rbf, lif_vp, lif_vr, qlif_vp, or qlif_vr
    #[arg(long)]
    kernel: Option<String>,
    /// pqk: random-search candidate budget
    #[arg(long)]
    budget: Option<usize>,
    /// rbf: γ in exp(−γ‖x − x'‖²)
    #[arg(long)]
    rbf_gamma: Option<f64>,
    /// Victor-Purpura shift cost q
    #[arg(long)]
    vp_q: Option<f64>,
    /// Van Rossum filter time constant τ
    #[arg(long)]
    vr_tau: Option<f64>,
    /// LIF membrane decay β
    #[arg(long)]
    lif_beta: Option<f64>,
    /// LIF input weight
    #[arg(long)]
    lif_weight: Option<f64>,
    /// LIF firing threshold
    #[arg(long)]
    lif_threshold: Option<f64>,
    /// QLIF input rotation angle θ
    #[arg(long)]
    qlif_theta: Option<f64>,
    /// QLIF damping ratio τ/T1
    #[arg(long)]
    qlif_tau_ratio: Option<f64>,
    /// QLIF firing threshold on the excited population
    #[arg(long)]
    qlif_threshold: Option<f64>,
    /// Population grid nodes per feature dimension
    #[arg(long)]
    grid_nodes: Option<usize>,
    /// Population tuning width σ
    #[arg(long)]
    sigma_tuning: Option<f64>,
    /// Encoding window length
    #[arg(long)]
    t_max: Option<f64>,
    /// Encoding time step
    #[arg(long)]
    dt: Option<f64>,
    /// Peak spikes per window at a grid node
    #[arg(long)]
    max_rate: Option<usize>,
    /// Distance-to-kernel γ (default: median heuristic)
    #[arg(long)]
    gamma_scale: Option<f64>,
}

#[derive(Args)]
struct ConfigArgs {
    /// Experiment config JSON; other flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    data: DatasetArgs,
    #[command(flatten)]
    kernel: KernelFlags,
    /// Base RNG seed (repetition r uses seed + r)
    #[arg(long)]
    seed: Option<u64>,
}

impl ConfigArgs {
    /// Resolves the experiment config: the JSON file when given, defaults
    /// otherwise, with every explicitly passed flag overriding its field.
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str::<ExperimentConfig>(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => {
                let kind = self.data.kind()?;
                let kernel: KernelId = self
                    .kernel
                    .kernel
                    .as_deref()
                    .context("--kernel is required (or pass --config)")?
                    .parse()?;
                ExperimentConfig::new(DatasetSpec64::new(kind, self.data.n, 0), kernel)
            }
        };
        if self.config.is_some() {
            if self.data.given() {
                config.dataset =
                    DatasetSpec64::new(self.data.kind()?, self.data.n, config.dataset.seed);
            }
            if let Some(kernel) = &self.kernel.kernel {
                config.kernel = kernel.parse()?;
            }
        }
        if let Some(n) = self.data.subsample {
            config.subsample = Some(n);
        }
        if self.data.no_balance {
            config.balance_csv = false;
        }
        if let Some(seed) = self.seed {
            config.base_seed = seed;
        }
        let k = &self.kernel;
        let o = &mut config.options;
        if let Some(v) = k.budget {
            o.search_budget = v;
        }
        if let Some(v) = k.rbf_gamma {
            o.rbf_gamma = v;
        }
        if let Some(v) = k.vp_q {
            o.vp_q = v;
        }
        if let Some(v) = k.vr_tau {
            o.vr_tau = v;
        }
        if let Some(v) = k.lif_beta {
            o.lif.beta_decay = v;
        }
        if let Some(v) = k.lif_weight {
            o.lif.weight = v;
        }
        if let Some(v) = k.lif_threshold {
            o.lif.u_thresh = v;
        }
        if let Some(v) = k.qlif_theta {
            o.qlif.theta = v;
        }
        if let Some(v) = k.qlif_tau_ratio {
            o.qlif.tau_ratio = v;
        }
        if let Some(v) = k.qlif_threshold {
            o.qlif.alpha_thresh = v;
        }
        if let Some(v) = k.grid_nodes {
            o.grid.nodes_per_dim = Some(v);
        }
        if let Some(v) = k.sigma_tuning {
            o.grid.sigma_tuning = Some(v);
        }
        if let Some(v) = k.t_max {
            o.grid.t_max = v;
        }
        if let Some(v) = k.dt {
            o.grid.dt = v;
        }
        if let Some(v) = k.max_rate {
            o.grid.max_rate = v;
        }
        if let Some(v) = k.gamma_scale {
            o.gamma_scale = Some(v);
        }
        Ok(config)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (default: $QSC_OUT_DIR, then ./qsc-out)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KernelArgs {
    #[command(flatten)]
    base: ConfigArgs,
    /// Output directory (default: $QSC_OUT_DIR, then ./qsc-out)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Spiking kernels: also save response trains (sample_id,neuron_id,spike_time)
    #[arg(long)]
    spikes_out: Option<PathBuf>,
    /// pqk: also save the winning encoding parameters as JSON
    #[arg(long)]
    params_out: Option<PathBuf>,
}

#[derive(Args)]
struct ClusterArgs {
    /// Kernel matrix CSV (headerless n×n), as written by `kernel` or `run`
    #[arg(long, required_unless_present = "kernel_json", conflicts_with = "kernel_json")]
    kernel_csv: Option<PathBuf>,
    /// Kernel matrix JSON with an embedded kind tag
    #[arg(long)]
    kernel_json: Option<PathBuf>,
    /// Kernel kind tag for the CSV: pqk, rbf, vp, or vr
    #[arg(long)]
    kind: Option<String>,
    /// Number of clusters
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    kmeans_restarts: usize,
    #[arg(long, default_value_t = 300)]
    kmeans_max_iter: usize,
    /// Skip the leading Laplacian eigenvector
    #[arg(long)]
    skip_trivial: bool,
    /// Output directory (default: $QSC_OUT_DIR, then ./qsc-out)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Dataset CSV holding features and the ground-truth label column
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "label")]
    label_column: String,
    /// Predicted labels CSV (a `predicted` or `label` column)
    #[arg(long)]
    labels: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    base: ConfigArgs,
    /// Number of clusters (default: the dataset's class count)
    #[arg(long)]
    k: Option<usize>,
    /// Cluster counts to sweep, A..B with both ends included
    #[arg(long)]
    k_range: Option<String>,
    /// Number of seeded repetitions
    #[arg(long)]
    reps: Option<usize>,
    /// Silhouette space: feature or embedding
    #[arg(long)]
    silhouette_space: Option<String>,
    #[arg(long)]
    kmeans_restarts: Option<usize>,
    #[arg(long)]
    kmeans_max_iter: Option<usize>,
    /// Skip the leading Laplacian eigenvector
    #[arg(long)]
    skip_trivial: bool,
    /// Output directory (default: $QSC_OUT_DIR, then ./qsc-out)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Report JSON paths written by `run` or `sweep`
    #[arg(required = true)]
    reports: Vec<PathBuf>,
    /// Output directory for comparison.json/csv (default: $QSC_OUT_DIR, then ./qsc-out)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_k_range(s: &str) -> Result<Vec<usize>> {
    let (lo, hi) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .with_context(|| format!("k range '{s}' is not of the form A..B"))?;
    let lo: usize = lo.trim().parse().context("k range start")?;
    let hi: usize = hi.trim().parse().context("k range end")?;
    if lo == 0 || hi < lo {
        bail!("k range '{s}' must satisfy 1 ≤ A ≤ B");
    }
    Ok((lo..=hi).collect())
}

fn parse_silhouette_space(s: &str) -> Result<SilhouetteSpace> {
    match s {
        "feature" => Ok(SilhouetteSpace::Feature),
        "embedding" => Ok(SilhouetteSpace::Embedding),
        other => bail!("unknown silhouette space '{other}'; expected feature or embedding"),
    }
}

fn resolve_run_config(args: &RunArgs, sweep: bool) -> Result<ExperimentConfig> {
    let mut config = args.base.resolve()?;
    if let Some(k) = args.k {
        config.k = Some(k);
    }
    if let Some(range) = &args.k_range {
        config.k_range = Some(parse_k_range(range)?);
    }
    if sweep && config.k_range.is_none() {
        config.k_range = Some(default_k_range());
    }
    if let Some(reps) = args.reps {
        config.reps = reps;
    }
    if let Some(space) = &args.silhouette_space {
        config.silhouette_space = parse_silhouette_space(space)?;
    }
    if let Some(v) = args.kmeans_restarts {
        config.spectral.kmeans_restarts = v;
    }
    if let Some(v) = args.kmeans_max_iter {
        config.spectral.kmeans_max_iter = v;
    }
    if args.skip_trivial {
        config.spectral.skip_trivial_eigenvector = true;
    }
    Ok(config)
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let kind = args.data.kind()?;
    let ds = match &kind {
        DatasetKind::Csv { path, label_column } => {
            let base = load_csv::<f64, _>(path, label_column)?;
            let mut ds = if args.data.no_balance {
                base
            } else {
                balance_by_class(&base, args.seed)
            };
            if let Some(n) = args.data.subsample {
                ds = subsample(&ds, n, args.seed);
            }
            ds
        }
        _ => generate(&DatasetSpec64::new(kind.clone(), args.data.n, args.seed))?,
    };
    let dir = resolve_out_dir(args.out);
    fs::create_dir_all(&dir)?;
    let path = dir.join(format!("{}.csv", ds.name));
    save_csv(&ds, &path)?;
    let summary = json!({
        "dataset": ds.name,
        "n_samples": ds.n(),
        "n_features": ds.d(),
        "n_classes": ds.n_classes,
        "seed": args.seed,
        "path": path.display().to_string(),
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn cmd_kernel(args: KernelArgs) -> Result<()> {
    let config = args.base.resolve()?;
    config.validate()?;
    let seed = config.base_seed;
    let csv_base = load_csv_base(&config)?;
    let ds = materialize(&config, csv_base.as_ref(), seed)?;
    let build = build_kernel(&ds, &config, seed)?;

    let dir = resolve_out_dir(args.out);
    fs::create_dir_all(&dir)?;
    let csv_path = dir.join("kernel.csv");
    let json_path = dir.join("kernel.json");
    build.kernel.write_csv(&csv_path)?;
    build.kernel.write_json(&json_path)?;
    if let Some(path) = &args.spikes_out {
        match &build.responses {
            Some(responses) => save_spike_trains_csv(responses, path)?,
            None => bail!("--spikes-out requires a spiking kernel (lif_* or qlif_*)"),
        }
    }
    if let Some(path) = &args.params_out {
        match &build.best_params {
            Some(params) => params.write_json(path)?,
            None => bail!("--params-out applies to the pqk kernel only"),
        }
    }
    let summary = json!({
        "kernel": config.kernel.to_string(),
        "kind": build.kernel.kind().to_string(),
        "n": build.kernel.n(),
        "seed": seed,
        "best_kta": build.best_kta,
        "gamma_scale": build.gamma_scale,
        "kernel_csv": csv_path.display().to_string(),
        "kernel_json": json_path.display().to_string(),
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn cmd_cluster(args: ClusterArgs) -> Result<()> {
    let kernel = match (&args.kernel_csv, &args.kernel_json) {
        (Some(path), None) => {
            let kind: KernelKind = args
                .kind
                .as_deref()
                .context("--kind is required with --kernel-csv (the CSV is headerless)")?
                .parse()?;
            KernelMatrix64::read_csv(path, kind)?
        }
        (None, Some(path)) => KernelMatrix64::read_json(path)?,
        _ => bail!("provide exactly one of --kernel-csv or --kernel-json"),
    };
    let dec = SpectralDecomposition64::new(&kernel)?;
    let cfg = SpectralConfig {
        k: args.k,
        kmeans_restarts: args.kmeans_restarts,
        kmeans_max_iter: args.kmeans_max_iter,
        seed: args.seed,
        skip_trivial_eigenvector: args.skip_trivial,
    };
    let assignment = dec.cluster(&cfg)?;
    let dir = resolve_out_dir(args.out);
    fs::create_dir_all(&dir)?;
    let path = dir.join("labels.csv");
    write_cluster_labels_csv(&assignment.labels, &path)?;
    let summary = json!({
        "n": kernel.n(),
        "k": args.k,
        "seed": args.seed,
        "wcss": assignment.wcss,
        "labels": path.display().to_string(),
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let ds = load_csv::<f64, _>(&args.data, &args.label_column)?;
    let pred = read_labels_csv(&args.labels)?;
    if pred.len() != ds.n() {
        bail!(
            "{} predictions but the dataset has {} samples",
            pred.len(),
            ds.n()
        );
    }
    let scaled = scale_to_pi(&ds);
    let report = score_clustering(&scaled.features, &ds.labels, &pred)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn cmd_run(args: RunArgs, sweep: bool) -> Result<()> {
    let config = resolve_run_config(&args, sweep)?;
    let run = run_experiment(&config)?;
    let dir = resolve_out_dir(args.out);
    let report_path = write_run(&run, &dir)?;
    let report = &run.report;
    let mut summary = json!({
        "dataset": report.dataset,
        "kernel": report.config.kernel.to_string(),
        "k": report.k,
        "reps": report.config.reps,
        "successes": report.aggregate.as_ref().map_or(0, |a| a.successes),
        "partial": report.partial,
        "config_hash": report.config_hash,
        "mean": report.aggregate.as_ref().map(|a| a.mean),
        "std": report.aggregate.as_ref().map(|a| a.std),
        "wall_time_secs": report.wall_time_secs,
        "report": report_path.display().to_string(),
    });
    if let Some(s) = &report.sweep {
        summary["sweep"] = json!({
            "ks": s.ks,
            "modal_k_ari": s.modal_k_ari,
            "modal_k_v_measure": s.modal_k_v_measure,
            "modal_k_silhouette": s.modal_k_silhouette,
            "argmax_ari": s.argmax_ari,
            "argmax_v_measure": s.argmax_v_measure,
            "argmax_silhouette": s.argmax_silhouette,
        });
    }
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let reports = args
        .reports
        .iter()
        .map(|p| load_report(p).with_context(|| format!("loading report {}", p.display())))
        .collect::<Result<Vec<_>>>()?;
    let cmp = compare(&reports)?;
    let dir = resolve_out_dir(args.out);
    write_comparison(&cmp, &dir)?;
    print!("{}", render_markdown(&cmp));
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Generate(args) => cmd_generate(args),
        Cmd::Kernel(args) => cmd_kernel(args),
        Cmd::Cluster(args) => cmd_cluster(args),
        Cmd::Evaluate(args) => cmd_evaluate(args),
        Cmd::Run(args) => cmd_run(args, false),
        Cmd::Sweep(args) => cmd_run(args, true),
        Cmd::Compare(args) => cmd_compare(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
