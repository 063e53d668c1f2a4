//! Report and artifact writing: a run directory holds the JSON report plus
//! CSV companions that round-trip (kernel matrix, per-repetition scores,
//! first-repetition labels, sweep curves).

use std::fs;
use std::path::{Path, PathBuf};

use qsc_core::{Error, MetricsReport, Result};

use crate::experiment::{ExperimentRun, Repetition};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QSC_OUT_DIR";

/// Fallback output directory when neither a flag nor the environment names one.
pub const OUT_DIR_DEFAULT: &str = "qsc-out";

pub const REPORT_FILE: &str = "report.json";
pub const REPS_FILE: &str = "reps.csv";
pub const KERNEL_FILE: &str = "kernel_rep0.csv";
pub const LABELS_FILE: &str = "labels_rep0.csv";
pub const SWEEP_ARI_FILE: &str = "sweep_ari.csv";
pub const SWEEP_V_FILE: &str = "sweep_v_measure.csv";
pub const SWEEP_SIL_FILE: &str = "sweep_silhouette.csv";

/// Resolves the output directory: explicit flag, then `QSC_OUT_DIR`, then
/// `qsc-out` in the working directory.
pub fn resolve_out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(OUT_DIR_DEFAULT))
}

pub const METRIC_NAMES: [&str; 8] = [
    "accuracy",
    "precision",
    "recall",
    "silhouette",
    "ari",
    "homogeneity",
    "completeness",
    "v_measure",
];

pub fn metric_values(m: &MetricsReport) -> [f64; 8] {
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

/// Writes one row per successful repetition with every metric column.
/// Values are printed with `Display`, which round-trips f64 exactly.
pub fn write_reps_csv(reps: &[Repetition], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["rep".to_string(), "seed".to_string()];
    header.extend(METRIC_NAMES.iter().map(|s| s.to_string()));
    w.write_record(&header)?;
    for rep in reps {
        let Some(m) = &rep.metrics else { continue };
        let mut row = vec![rep.rep.to_string(), rep.seed.to_string()];
        row.extend(metric_values(m).iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `sample,truth,predicted` for the stored repetition.
pub fn write_labels_csv(truth: &[usize], predicted: &[usize], path: &Path) -> Result<()> {
    if truth.len() != predicted.len() {
        return Err(Error::Argument(format!(
            "{} truth labels but {} predictions",
            truth.len(),
            predicted.len()
        )));
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["sample", "truth", "predicted"])?;
    for (i, (t, p)) in truth.iter().zip(predicted).enumerate() {
        w.write_record([i.to_string(), t.to_string(), p.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes one sweep curve: a `k` column, one column per repetition, and the
/// mean. Failed repetitions contribute no column.
fn write_sweep_csv(
    reps: &[Repetition],
    ks: &[usize],
    mean: &[f64],
    pick: impl Fn(&qsc_core::metrics::KSweepPoint) -> f64,
    path: &Path,
) -> Result<()> {
    let swept: Vec<&Repetition> = reps.iter().filter(|r| r.sweep.is_some()).collect();
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["k".to_string()];
    header.extend(swept.iter().map(|r| format!("rep{}", r.rep)));
    header.push("mean".to_string());
    w.write_record(&header)?;
    for (i, &k) in ks.iter().enumerate() {
        let mut row = vec![k.to_string()];
        for r in &swept {
            let sweep = r.sweep.as_ref().expect("filtered on sweep presence");
            row.push(pick(&sweep.points[i]).to_string());
        }
        row.push(mean[i].to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes every artifact of a finished run into `dir` and returns the
/// report path.
pub fn write_run(run: &ExperimentRun, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let report_path = dir.join(REPORT_FILE);
    let json = serde_json::to_string_pretty(&run.report)?;
    fs::write(&report_path, json)?;

    write_reps_csv(&run.report.repetitions, &dir.join(REPS_FILE))?;
    if let Some(kernel) = &run.rep0_kernel {
        kernel.write_csv(dir.join(KERNEL_FILE))?;
    }
    if let (Some(truth), Some(pred)) = (&run.rep0_truth, &run.rep0_labels) {
        write_labels_csv(truth, pred, &dir.join(LABELS_FILE))?;
    }
    if let Some(sweep) = &run.report.sweep {
        write_sweep_csv(
            &run.report.repetitions,
            &sweep.ks,
            &sweep.mean_ari,
            |p| p.ari,
            &dir.join(SWEEP_ARI_FILE),
        )?;
        write_sweep_csv(
            &run.report.repetitions,
            &sweep.ks,
            &sweep.mean_v_measure,
            |p| p.v_measure,
            &dir.join(SWEEP_V_FILE),
        )?;
        write_sweep_csv(
            &run.report.repetitions,
            &sweep.ks,
            &sweep.mean_silhouette,
            |p| p.silhouette,
            &dir.join(SWEEP_SIL_FILE),
        )?;
    }
    Ok(report_path)
}

/// Writes predicted labels as `sample,label` rows.
pub fn write_cluster_labels_csv(labels: &[usize], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["sample", "label"])?;
    for (i, l) in labels.iter().enumerate() {
        w.write_record([i.to_string(), l.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads predicted labels from a CSV with either a `predicted` or a `label`
/// column (the formats written by `run` and `cluster`).
pub fn read_labels_csv(path: &Path) -> Result<Vec<usize>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    let col = headers
        .iter()
        .position(|h| h == "predicted")
        .or_else(|| headers.iter().position(|h| h == "label"))
        .ok_or_else(|| {
            Error::Parse {
                row: 0,
                column: "predicted".into(),
                message: "no 'predicted' or 'label' column in labels CSV".into(),
            }
        })?;
    let mut labels = Vec::new();
    for (row, record) in r.records().enumerate() {
        let record = record?;
        let field = record.get(col).ok_or_else(|| Error::Parse {
            row: row + 1,
            column: headers[col].to_string(),
            message: "missing field".into(),
        })?;
        let value: usize = field.parse().map_err(|_| Error::Parse {
            row: row + 1,
            column: headers[col].to_string(),
            message: format!("expected a nonnegative integer label, got '{field}'"),
        })?;
        labels.push(value);
    }
    if labels.is_empty() {
        return Err(Error::Argument("labels CSV contains no rows".into()));
    }
    Ok(labels)
}
