//! Clustering evaluation: label-alignment scores, silhouette, adjusted
//! Rand index, V-measure, and a sweep over cluster counts.
//!
//! Cluster labels are arbitrary ids, so supervised scores first map each
//! cluster to its modal ground-truth class. Scores are plain f64 whatever
//! the feature scalar type.

use std::collections::BTreeMap;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{SpectralConfig, SpectralDecomposition};

fn check_pair(a: &[usize], b: &[usize]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::Argument("label arrays must be nonempty".into()));
    }
    if a.len() != b.len() {
        return Err(Error::Argument(format!(
            "label arrays differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Maps every predicted cluster to the most common true class among its
/// members (ties go to the smallest class id) and returns the relabeled
/// predictions.
pub fn majority_map(pred: &[usize], truth: &[usize]) -> Result<Vec<usize>> {
    check_pair(pred, truth)?;
    let mut votes: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    for (&c, &t) in pred.iter().zip(truth) {
        *votes.entry(c).or_default().entry(t).or_default() += 1;
    }
    let mapping: BTreeMap<usize, usize> = votes
        .into_iter()
        .map(|(cluster, counts)| {
            // BTreeMap iterates classes ascending, so strict > keeps the
            // smallest class on ties.
            let (mut best_class, mut best_count) = (0usize, 0usize);
            for (class, count) in counts {
                if count > best_count {
                    best_class = class;
                    best_count = count;
                }
            }
            (cluster, best_class)
        })
        .collect();
    Ok(pred.iter().map(|c| mapping[c]).collect())
}

/// How per-class precision and recall combine into one number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    /// Unweighted mean over classes.
    #[default]
    Macro,
    /// Mean weighted by true-class support.
    Weighted,
}

/// Accuracy plus averaged one-vs-rest precision and recall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationScores {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
}

/// Scores `pred` against `truth` with macro averaging. `pred` should
/// already be aligned, e.g. through [`majority_map`].
pub fn classification_scores(pred: &[usize], truth: &[usize]) -> Result<ClassificationScores> {
    classification_scores_with(pred, truth, Averaging::Macro)
}

/// Scores with an explicit averaging mode. Classes are the union of both
/// label sets; a class never predicted scores precision 0, and 0/0 ratios
/// collapse to 0.
pub fn classification_scores_with(
    pred: &[usize],
    truth: &[usize],
    averaging: Averaging,
) -> Result<ClassificationScores> {
    check_pair(pred, truth)?;
    let n = truth.len();
    let mut classes: Vec<usize> = truth.iter().chain(pred).copied().collect();
    classes.sort_unstable();
    classes.dedup();

    let mut correct = 0usize;
    for (&p, &t) in pred.iter().zip(truth) {
        if p == t {
            correct += 1;
        }
    }

    let mut precision = 0.0;
    let mut recall = 0.0;
    let mut weight_total = 0.0;
    for &class in &classes {
        let tp = pred
            .iter()
            .zip(truth)
            .filter(|&(&p, &t)| p == class && t == class)
            .count() as f64;
        let pred_count = pred.iter().filter(|&&p| p == class).count() as f64;
        let true_count = truth.iter().filter(|&&t| t == class).count() as f64;
        let p = if pred_count > 0.0 { tp / pred_count } else { 0.0 };
        let r = if true_count > 0.0 { tp / true_count } else { 0.0 };
        let w = match averaging {
            Averaging::Macro => 1.0,
            Averaging::Weighted => true_count,
        };
        precision += w * p;
        recall += w * r;
        weight_total += w;
    }
    // The union of nonempty label arrays is nonempty, and under weighted
    // averaging every sample contributes its class weight, so  > 0.
    debug_assert!(weight_total > 0.0);
    Ok(ClassificationScores {
        accuracy: correct as f64 / n as f64,
        precision: precision / weight_total,
        recall: recall / weight_total,
    })
}

/// Mean silhouette coefficient of `labels` over points in the given space.
/// For each sample, a = mean distance to its own cluster (excluding
/// itself), b = smallest mean distance to another cluster, and
/// s = (b − a)/max(a, b), with singletons and a = b = 0 scoring 0.
/// A single cluster leaves b undefined and is an error.
pub fn silhouette<T: Scalar>(points: &Array2<T>, labels: &[usize]) -> Result<f64> {
    let n = points.nrows();
    if labels.len() != n {
        return Err(Error::Argument(format!(
            "{n} points but {} labels",
            labels.len()
        )));
    }
    if n < 2 {
        return Err(Error::UndefinedMetric(format!(
            "silhouette needs at least 2 samples, got {n}"
        )));
    }
    let mut classes: Vec<usize> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::UndefinedMetric(
            "silhouette needs at least 2 clusters".into(),
        ));
    }
    let class_index: BTreeMap<usize, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let mut sizes = vec![0usize; classes.len()];
    for &l in labels {
        sizes[class_index[&l]] += 1;
    }

    let mut total = 0.0;
    for i in 0..n {
        let own = class_index[&labels[i]];
        if sizes[own] == 1 {
            continue; // singleton scores 0
        }
        let mut sums = vec![0.0f64; classes.len()];
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut d2 = 0.0f64;
            for (a, b) in points.row(i).iter().zip(points.row(j)) {
                let diff = a.as_f64() - b.as_f64();
                d2 += diff * diff;
            }
            sums[class_index[&labels[j]]] += d2.sqrt();
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = sums
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != own && sizes[c] > 0)
            .map(|(c, &s)| s / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        total += if denom > 0.0 { (b - a) / denom } else { 0.0 };
    }
    Ok(total / n as f64)
}

fn binom2(n: usize) -> i128 {
    let n = n as i128;
    n * (n - 1) / 2
}

/// Adjusted Rand index between two labelings: the pair-counting Rand index
/// rescaled so random agreement scores 0 and identical partitions score 1.
/// When the adjustment denominator vanishes (e.g. both partitions trivial)
/// the partitions are necessarily identical and the value is 1.
pub fn ari(a: &[usize], b: &[usize]) -> Result<f64> {
    check_pair(a, b)?;
    let n = a.len();
    let mut joint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cols: BTreeMap<usize, usize> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: i128 = joint.values().map(|&c| binom2(c)).sum();
    let sum_rows: i128 = rows.values().map(|&c| binom2(c)).sum();
    let sum_cols: i128 = cols.values().map(|&c| binom2(c)).sum();
    let total = binom2(n);
    if total == 0 {
        return Ok(1.0);
    }
    let expected = (sum_rows as f64) * (sum_cols as f64) / (total as f64);
    let max_index = 0.5 * (sum_rows + sum_cols) as f64;
    let denom = max_index - expected;
    if denom == 0.0 {
        return Ok(1.0);
    }
    Ok((index as f64 - expected) / denom)
}

/// Homogeneity, completeness, and their harmonic mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VMeasure {
    pub homogeneity: f64,
    pub completeness: f64,
    pub v_measure: f64,
}

/// Entropy-based cluster quality in nats. Homogeneity h = 1 − H(C|K)/H(C)
/// (1 when H(C) = 0), completeness c = 1 − H(K|C)/H(K) (1 when H(K) = 0),
/// and V = 2hc/(h + c) (0 when h = c = 0).
pub fn v_measure(truth: &[usize], pred: &[usize]) -> Result<VMeasure> {
    check_pair(truth, pred)?;
    let n = truth.len() as f64;
    let mut joint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut by_class: BTreeMap<usize, usize> = BTreeMap::new();
    let mut by_cluster: BTreeMap<usize, usize> = BTreeMap::new();
    for (&c, &k) in truth.iter().zip(pred) {
        *joint.entry((c, k)).or_default() += 1;
        *by_class.entry(c).or_default() += 1;
        *by_cluster.entry(k).or_default() += 1;
    }
    let h_class = entropy(by_class.values(), n);
    let h_cluster = entropy(by_cluster.values(), n);
    let mut h_class_given_cluster = 0.0;
    let mut h_cluster_given_class = 0.0;
    for (&(c, k), &count) in &joint {
        let p = count as f64 / n;
        h_class_given_cluster -= p * (count as f64 / by_cluster[&k] as f64).ln();
        h_cluster_given_class -= p * (count as f64 / by_class[&c] as f64).ln();
    }
    let homogeneity = if h_class > 0.0 {
        1.0 - h_class_given_cluster / h_class
    } else {
        1.0
    };
    let completeness = if h_cluster > 0.0 {
        1.0 - h_cluster_given_class / h_cluster
    } else {
        1.0
    };
    let sum = homogeneity + completeness;
    let v = if sum > 0.0 {
        2.0 * homogeneity * completeness / sum
    } else {
        0.0
    };
    Ok(VMeasure {
        homogeneity,
        completeness,
        v_measure: v,
    })
}

fn entropy<'a>(counts: impl Iterator<Item = &'a usize>, n: f64) -> f64 {
    counts
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Which representation the silhouette is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SilhouetteSpace {
    /// Original (scaled) feature space.
    #[default]
    Feature,
    /// Row-normalized spectral embedding.
    Embedding,
}

/// Every score for one clustering against ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub silhouette: f64,
    pub ari: f64,
    pub homogeneity: f64,
    pub completeness: f64,
    pub v_measure: f64,
}

/// Scores a clustering end to end: majority-maps the cluster labels, then
/// computes classification scores (macro), silhouette of the raw clusters
/// over `points`, ARI, and V-measure.
pub fn score_clustering<T: Scalar>(
    points: &Array2<T>,
    truth: &[usize],
    pred: &[usize],
) -> Result<MetricsReport> {
    check_pair(pred, truth)?;
    if points.nrows() != truth.len() {
        return Err(Error::Argument(format!(
            "{} points but {} labels",
            points.nrows(),
            truth.len()
        )));
    }
    let mapped = majority_map(pred, truth)?;
    let cls = classification_scores(&mapped, truth)?;
    let sil = silhouette(points, pred)?;
    let ari_score = ari(truth, pred)?;
    let vm = v_measure(truth, pred)?;
    Ok(MetricsReport {
        accuracy: cls.accuracy,
        precision: cls.precision,
        recall: cls.recall,
        silhouette: sil,
        ari: ari_score,
        homogeneity: vm.homogeneity,
        completeness: vm.completeness,
        v_measure: vm.v_measure,
    })
}

/// Scores at one cluster count within a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KSweepPoint {
    pub k: usize,
    pub ari: f64,
    pub v_measure: f64,
    pub silhouette: f64,
}

/// Model-selection curve over cluster counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSweep {
    pub points: Vec<KSweepPoint>,
    /// argmax over the curve; ties resolve to the smallest k.
    pub best_k_ari: usize,
    pub best_k_v_measure: usize,
    pub best_k_silhouette: usize,
    /// A flat curve makes the argmax meaningless; flagged at spread ≤ 1e-9.
    pub flat_ari: bool,
    pub flat_v_measure: bool,
    pub flat_silhouette: bool,
}

/// Default sweep range: 2 through 11 clusters.
pub fn default_k_range() -> Vec<usize> {
    (2..=11).collect()
}

const FLAT_CURVE_SPREAD: f64 = 1e-9;

/// Clusters one cached decomposition at every k in `ks` and scores each
/// labeling against `truth`; the silhouette is measured over `points`.
pub fn k_sweep<T: Scalar>(
    dec: &SpectralDecomposition<T>,
    points: &Array2<T>,
    truth: &[usize],
    ks: &[usize],
    base: &SpectralConfig,
) -> Result<KSweep> {
    if ks.is_empty() {
        return Err(Error::Argument("sweep needs at least one k".into()));
    }
    if truth.len() != dec.n() || points.nrows() != dec.n() {
        return Err(Error::Argument(format!(
            "decomposition over {} samples but {} labels and {} points",
            dec.n(),
            truth.len(),
            points.nrows()
        )));
    }
    let mut curve = Vec::with_capacity(ks.len());
    for &k in ks {
        let assignment = dec.cluster(&SpectralConfig { k, ..*base })?;
        let vm = v_measure(truth, &assignment.labels)?;
        curve.push(KSweepPoint {
            k,
            ari: ari(truth, &assignment.labels)?,
            v_measure: vm.v_measure,
            silhouette: silhouette(points, &assignment.labels)?,
        });
    }
    let (best_k_ari, flat_ari) = curve_argmax(curve.iter().map(|p| (p.k, p.ari)));
    let (best_k_v_measure, flat_v_measure) =
        curve_argmax(curve.iter().map(|p| (p.k, p.v_measure)));
    let (best_k_silhouette, flat_silhouette) =
        curve_argmax(curve.iter().map(|p| (p.k, p.silhouette)));
    Ok(KSweep {
        points: curve,
        best_k_ari,
        best_k_v_measure,
        best_k_silhouette,
        flat_ari,
        flat_v_measure,
        flat_silhouette,
    })
}

fn curve_argmax(curve: impl Iterator<Item = (usize, f64)>) -> (usize, bool) {
    let mut best_k = 0usize;
    let mut best = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (k, v) in curve {
        if v > best {
            best = v;
            best_k = k;
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (best_k, hi - lo <= FLAT_CURVE_SPREAD)
}
