//! Side-by-side comparison of experiment reports sharing a dataset.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use qsc_core::{Error, MetricsReport, Result};

use crate::experiment::ExperimentReport;

/// The metric columns shown by `compare` (all higher-is-better).
pub const COMPARE_METRICS: [&str; 6] = [
    "accuracy",
    "precision",
    "recall",
    "silhouette",
    "ari",
    "v_measure",
];

fn compare_values(m: &MetricsReport) -> [f64; 6] {
    [
        m.accuracy,
        m.precision,
        m.recall,
        m.silhouette,
        m.ari,
        m.v_measure,
    ]
}

/// One comparison row: a kernel's aggregated scores on the shared dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareRow {
    pub kernel: String,
    pub config_hash: String,
    pub successes: usize,
    pub partial: bool,
    pub mean: MetricsReport,
    pub std: MetricsReport,
    /// Metric names where this row attains the best mean (ties included).
    pub best: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Comparison {
    pub dataset: String,
    pub k: usize,
    pub rows: Vec<CompareRow>,
}

/// Builds a comparison from reports that must share a dataset. Rows keep the
/// input order; per metric, every row matching the best mean is marked.
pub fn compare(reports: &[ExperimentReport]) -> Result<Comparison> {
    if reports.is_empty() {
        return Err(Error::Argument("compare needs at least one report".into()));
    }
    let dataset = reports[0].dataset.clone();
    for r in reports {
        if r.dataset != dataset {
            return Err(Error::Argument(format!(
                "reports compare different datasets: '{}' vs '{}'",
                dataset, r.dataset
            )));
        }
        if r.aggregate.is_none() {
            return Err(Error::Argument(format!(
                "report for kernel '{}' has no successful repetitions",
                r.config.kernel
            )));
        }
    }
    let means: Vec<[f64; 6]> = reports
        .iter()
        .map(|r| compare_values(&r.aggregate.as_ref().expect("checked above").mean))
        .collect();
    let mut best_per_metric = [f64::NEG_INFINITY; 6];
    for row in &means {
        for (best, v) in best_per_metric.iter_mut().zip(row) {
            if v > best {
                *best = *v;
            }
        }
    }
    let rows = reports
        .iter()
        .zip(&means)
        .map(|(r, m)| {
            let agg = r.aggregate.as_ref().expect("checked above");
            let best = COMPARE_METRICS
                .iter()
                .zip(m)
                .zip(&best_per_metric)
                .filter(|((_, v), b)| *v == *b)
                .map(|((name, _), _)| name.to_string())
                .collect();
            CompareRow {
                kernel: r.config.kernel.to_string(),
                config_hash: r.config_hash.clone(),
                successes: agg.successes,
                partial: r.partial,
                mean: agg.mean,
                std: agg.std,
                best,
            }
        })
        .collect();
    Ok(Comparison { dataset, k: reports[0].k, rows })
}

/// Renders the comparison as a Markdown table, best means bolded.
pub fn render_markdown(cmp: &Comparison) -> String {
    let mut out = format!("dataset: {} (k = {})\n\n", cmp.dataset, cmp.k);
    out.push_str("| kernel |");
    for m in COMPARE_METRICS {
        out.push_str(&format!(" {m} |"));
    }
    out.push_str("\n|---|");
    out.push_str(&"---|".repeat(COMPARE_METRICS.len()));
    out.push('\n');
    for row in &cmp.rows {
        out.push_str(&format!("| {} |", row.kernel));
        let mean = compare_values(&row.mean);
        let std = compare_values(&row.std);
        for ((name, m), s) in COMPARE_METRICS.iter().zip(mean).zip(std) {
            let cell = format!("{m:.4} ± {s:.4}");
            if row.best.iter().any(|b| b == name) {
                out.push_str(&format!(" **{cell}** |"));
            } else {
                out.push_str(&format!(" {cell} |"));
            }
        }
        out.push('\n');
    }
    out
}

/// Writes `comparison.json` and `comparison.csv` into `dir`.
pub fn write_comparison(cmp: &Comparison, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(
        dir.join("comparison.json"),
        serde_json::to_string_pretty(cmp)?,
    )?;
    let mut w = csv::Writer::from_path(dir.join("comparison.csv"))?;
    let mut header = vec!["kernel".to_string()];
    for m in COMPARE_METRICS {
        header.push(format!("{m}_mean"));
        header.push(format!("{m}_std"));
    }
    w.write_record(&header)?;
    for row in &cmp.rows {
        let mean = compare_values(&row.mean);
        let std = compare_values(&row.std);
        let mut record = vec![row.kernel.clone()];
        for (m, s) in mean.iter().zip(std) {
            record.push(m.to_string());
            record.push(s.to_string());
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Loads a report JSON from disk.
pub fn load_report(path: &Path) -> Result<ExperimentReport> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
