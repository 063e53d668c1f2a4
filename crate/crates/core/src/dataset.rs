//! Labeled datasets: synthetic generators, CSV ingestion, scaling, and
//! class balancing.
//!
//! The three synthetic generators reproduce the standard recipes: isotropic
//! Gaussian blobs around three random centers drawn from the fixed box
//! [−10, 10]², two concentric noisy rings whose radius ratio is `factor`,
//! and two interleaved half-circles with additive Gaussian noise.

use std::collections::HashMap;
use std::path::Path;

use ndarray::{Array2, ArrayView1};
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Feature matrix plus ground-truth class labels.
#[derive(Debug, Clone)]
pub struct LabeledDataset<T> {
    /// n×d feature matrix.
    pub features: Array2<T>,
    /// Class index per sample, densely numbered 0..n_classes−1.
    pub labels: Vec<usize>,
    pub n_classes: usize,
    pub name: String,
}

impl<T: Scalar> LabeledDataset<T> {
    pub fn n(&self) -> usize {
        self.features.nrows()
    }

    pub fn d(&self) -> usize {
        self.features.ncols()
    }

    /// Checks finiteness and label range.
    pub fn validate(&self) -> Result<()> {
        if self.labels.len() != self.n() {
            return Err(Error::Argument(format!(
                "{} labels for {} samples",
                self.labels.len(),
                self.n()
            )));
        }
        if let Some(bad) = self.features.iter().position(|x| !x.is_finite()) {
            return Err(Error::Numeric(format!(
                "non-finite feature at flat index {bad}"
            )));
        }
        if let Some(&bad) = self.labels.iter().find(|&&l| l >= self.n_classes) {
            return Err(Error::Argument(format!(
                "label {bad} out of range for {} classes",
                self.n_classes
            )));
        }
        Ok(())
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// New dataset containing the given rows, in the given order.
    fn take_rows(&self, idx: &[usize], name: String) -> Self {
        let d = self.d();
        let mut features = Array2::zeros((idx.len(), d));
        let mut labels = Vec::with_capacity(idx.len());
        for (r, &i) in idx.iter().enumerate() {
            features.row_mut(r).assign(&self.features.row(i));
            labels.push(self.labels[i]);
        }
        Self {
            features,
            labels,
            n_classes: self.n_classes,
            name,
        }
    }
}

fn default_n_samples() -> usize {
    300
}

fn default_blob_std<T: Scalar>() -> T {
    T::of(1.40)
}

fn default_circle_noise<T: Scalar>() -> T {
    T::of(0.1)
}

fn default_circle_factor<T: Scalar>() -> T {
    T::of(0.2)
}

fn default_moon_noise<T: Scalar>() -> T {
    T::of(0.075)
}

/// Generator family plus its parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetKind<T: Scalar> {
    /// Three isotropic Gaussian clusters, centers uniform in [−10, 10]².
    Blobs {
        #[serde(default = "default_blob_std::<T>")]
        std: T,
    },
    /// Two concentric rings; inner radius = factor × outer radius.
    Circles {
        #[serde(default = "default_circle_noise::<T>")]
        noise: T,
        #[serde(default = "default_circle_factor::<T>")]
        factor: T,
    },
    /// Two interleaved half-circles.
    Moons {
        #[serde(default = "default_moon_noise::<T>")]
        noise: T,
    },
    /// External CSV file with a named label column.
    Csv { path: String, label_column: String },
}

impl<T: Scalar> DatasetKind<T> {
    pub fn name(&self) -> &'static str {
        match self {
            DatasetKind::Blobs { .. } => "blobs",
            DatasetKind::Circles { .. } => "circles",
            DatasetKind::Moons { .. } => "moons",
            DatasetKind::Csv { .. } => "csv",
        }
    }
}

/// Everything needed to materialize a dataset deterministically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetSpec<T: Scalar> {
    #[serde(flatten)]
    pub kind: DatasetKind<T>,
    #[serde(default = "default_n_samples")]
    pub n_samples: usize,
    #[serde(default)]
    pub seed: u64,
}

impl<T: Scalar> DatasetSpec<T> {
    pub fn new(kind: DatasetKind<T>, n_samples: usize, seed: u64) -> Self {
        Self {
            kind,
            n_samples,
            seed,
        }
    }
}

/// Materializes a synthetic dataset. Deterministic for a fixed spec.
pub fn generate<T: Scalar>(spec: &DatasetSpec<T>) -> Result<LabeledDataset<T>> {
    let n = spec.n_samples;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match &spec.kind {
        DatasetKind::Blobs { std } => {
            if !std.is_finite() || *std < T::zero() {
                return Err(Error::Config(format!("blobs std must be ≥ 0, got {std}")));
            }
            if n < 3 {
                return Err(Error::Config(format!("blobs need ≥ 3 samples, got {n}")));
            }
            Ok(make_blobs(n, std.as_f64(), &mut rng))
        }
        DatasetKind::Circles { noise, factor } => {
            if !noise.is_finite() || *noise < T::zero() {
                return Err(Error::Config(format!("circles noise must be ≥ 0, got {noise}")));
            }
            if *factor <= T::zero() || *factor >= T::one() {
                return Err(Error::Config(format!(
                    "circles factor must lie in (0, 1), got {factor}"
                )));
            }
            if n < 2 {
                return Err(Error::Config(format!("circles need ≥ 2 samples, got {n}")));
            }
            Ok(make_circles(n, noise.as_f64(), factor.as_f64(), &mut rng))
        }
        DatasetKind::Moons { noise } => {
            if !noise.is_finite() || *noise < T::zero() {
                return Err(Error::Config(format!("moons noise must be ≥ 0, got {noise}")));
            }
            if n < 2 {
                return Err(Error::Config(format!("moons need ≥ 2 samples, got {n}")));
            }
            Ok(make_moons(n, noise.as_f64(), &mut rng))
        }
        DatasetKind::Csv { .. } => Err(Error::Config(
            "csv datasets are loaded with load_csv, not generated".into(),
        )),
    }
}

fn finish<T: Scalar>(
    rows: Vec<[f64; 2]>,
    labels: Vec<usize>,
    n_classes: usize,
    name: &str,
    rng: &mut ChaCha8Rng,
) -> LabeledDataset<T> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.shuffle(rng);
    let mut features = Array2::zeros((rows.len(), 2));
    let mut shuffled_labels = Vec::with_capacity(rows.len());
    for (r, &i) in order.iter().enumerate() {
        features[[r, 0]] = T::of(rows[i][0]);
        features[[r, 1]] = T::of(rows[i][1]);
        shuffled_labels.push(labels[i]);
    }
    LabeledDataset {
        features,
        labels: shuffled_labels,
        n_classes,
        name: name.to_string(),
    }
}

fn make_blobs<T: Scalar>(n: usize, std: f64, rng: &mut ChaCha8Rng) -> LabeledDataset<T> {
    const CENTERS: usize = 3;
    const BOX: f64 = 10.0;
    let centers: Vec<[f64; 2]> = (0..CENTERS)
        .map(|_| {
            [
                rng.random_range(-BOX..BOX),
                rng.random_range(-BOX..BOX),
            ]
        })
        .collect();
    // n split as evenly as possible; the first n % 3 centers get one extra.
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let normal = Normal::new(0.0, std.max(0.0)).expect("std validated as finite and ≥ 0");
    for (c, center) in centers.iter().enumerate() {
        let count = n / CENTERS + usize::from(c < n % CENTERS);
        for _ in 0..count {
            let dx = if std > 0.0 { normal.sample(rng) } else { 0.0 };
            let dy = if std > 0.0 { normal.sample(rng) } else { 0.0 };
            rows.push([center[0] + dx, center[1] + dy]);
            labels.push(c);
        }
    }
    finish(rows, labels, CENTERS, "blobs", rng)
}

fn make_circles<T: Scalar>(
    n: usize,
    noise: f64,
    factor: f64,
    rng: &mut ChaCha8Rng,
) -> LabeledDataset<T> {
    let n_out = n / 2;
    let n_in = n - n_out;
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n_out {
        let t = 2.0 * std::f64::consts::PI * i as f64 / n_out as f64;
        rows.push([t.cos(), t.sin()]);
        labels.push(0);
    }
    for i in 0..n_in {
        let t = 2.0 * std::f64::consts::PI * i as f64 / n_in as f64;
        rows.push([factor * t.cos(), factor * t.sin()]);
        labels.push(1);
    }
    add_noise(&mut rows, noise, rng);
    finish(rows, labels, 2, "circles", rng)
}

fn make_moons<T: Scalar>(n: usize, noise: f64, rng: &mut ChaCha8Rng) -> LabeledDataset<T> {
    let n_out = n / 2;
    let n_in = n - n_out;
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n_out {
        let t = linspace_point(0.0, std::f64::consts::PI, n_out, i);
        rows.push([t.cos(), t.sin()]);
        labels.push(0);
    }
    for i in 0..n_in {
        let t = linspace_point(0.0, std::f64::consts::PI, n_in, i);
        rows.push([1.0 - t.cos(), 1.0 - t.sin() - 0.5]);
        labels.push(1);
    }
    add_noise(&mut rows, noise, rng);
    finish(rows, labels, 2, "moons", rng)
}

fn linspace_point(a: f64, b: f64, count: usize, i: usize) -> f64 {
    if count <= 1 {
        a
    } else {
        a + (b - a) * i as f64 / (count - 1) as f64
    }
}

fn add_noise(rows: &mut [[f64; 2]], noise: f64, rng: &mut ChaCha8Rng) {
    if noise <= 0.0 {
        return;
    }
    let normal = Normal::new(0.0, noise).expect("noise validated as finite and > 0");
    for row in rows {
        row[0] += normal.sample(rng);
        row[1] += normal.sample(rng);
    }
}

/// Loads a CSV with a header row. All columns except `label_column` must be
/// numeric features; labels are re-indexed densely by first appearance.
pub fn load_csv<T: Scalar, P: AsRef<Path>>(path: P, label_column: &str) -> Result<LabeledDataset<T>> {
    let name = path
        .as_ref()
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string());
    let mut reader = csv::Reader::from_path(&path)?;
    let headers = reader.headers()?.clone();
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::Argument(format!("label column '{label_column}' not in header")))?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.to_string())
        .collect();
    let d = feature_names.len();
    if d == 0 {
        return Err(Error::Argument("CSV has no feature columns".into()));
    }

    let mut data: Vec<T> = Vec::new();
    let mut labels = Vec::new();
    let mut class_index: HashMap<String, usize> = HashMap::new();
    let mut n = 0usize;
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        let row = row_idx + 1;
        let mut col_cursor = 0usize;
        for (i, field) in record.iter().enumerate() {
            if i == label_idx {
                continue;
            }
            let column = feature_names[col_cursor].clone();
            col_cursor += 1;
            if field.trim().is_empty() {
                return Err(Error::Parse {
                    row,
                    column,
                    message: "missing value".into(),
                });
            }
            let x: f64 = field.trim().parse().map_err(|e| Error::Parse {
                row,
                column: column.clone(),
                message: format!("{e}"),
            })?;
            if !x.is_finite() {
                return Err(Error::Parse {
                    row,
                    column,
                    message: format!("non-finite value {x}"),
                });
            }
            data.push(T::of(x));
        }
        let label_field = record
            .get(label_idx)
            .ok_or_else(|| Error::Parse {
                row,
                column: label_column.to_string(),
                message: "missing label".into(),
            })?
            .trim()
            .to_string();
        if label_field.is_empty() {
            return Err(Error::Parse {
                row,
                column: label_column.to_string(),
                message: "missing label".into(),
            });
        }
        let next = class_index.len();
        let class = *class_index.entry(label_field).or_insert(next);
        labels.push(class);
        n += 1;
    }
    let features = Array2::from_shape_vec((n, d), data)
        .map_err(|e| Error::Argument(format!("ragged CSV: {e}")))?;
    let ds = LabeledDataset {
        features,
        labels,
        n_classes: class_index.len(),
        name,
    };
    ds.validate()?;
    Ok(ds)
}

/// Writes `f0..f{d−1},label` rows, mirroring the ingestion format.
pub fn save_csv<T: Scalar, P: AsRef<Path>>(ds: &LabeledDataset<T>, path: P) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let header: Vec<String> = (0..ds.d())
        .map(|j| format!("f{j}"))
        .chain(std::iter::once("label".to_string()))
        .collect();
    w.write_record(&header)?;
    for (row, &label) in ds.features.rows().into_iter().zip(&ds.labels) {
        let record: Vec<String> = row
            .iter()
            .map(|x| x.to_string())
            .chain(std::iter::once(label.to_string()))
            .collect();
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Min-max scales each feature column to [0, π]. Constant columns map to 0.
pub fn scale_to_pi<T: Scalar>(ds: &LabeledDataset<T>) -> LabeledDataset<T> {
    let mut features = ds.features.clone();
    let pi = T::PI();
    for mut col in features.columns_mut() {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for &x in col.iter() {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        let span = hi - lo;
        if span > T::zero() {
            col.mapv_inplace(|x| pi * (x - lo) / span);
        } else {
            col.fill(T::zero());
        }
    }
    LabeledDataset {
        features,
        labels: ds.labels.clone(),
        n_classes: ds.n_classes,
        name: ds.name.clone(),
    }
}

/// Downsamples every class (without replacement, seeded) to the
/// minority-class count. Selected rows keep their original order.
pub fn balance_by_class<T: Scalar>(ds: &LabeledDataset<T>, seed: u64) -> LabeledDataset<T> {
    let counts = ds.class_counts();
    let min_count = counts.iter().copied().min().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep: Vec<usize> = Vec::with_capacity(min_count * ds.n_classes);
    for class in 0..ds.n_classes {
        let mut members: Vec<usize> = (0..ds.n())
            .filter(|&i| ds.labels[i] == class)
            .collect();
        members.shuffle(&mut rng);
        members.truncate(min_count);
        keep.extend(members);
    }
    keep.sort_unstable();
    ds.take_rows(&keep, ds.name.clone())
}

/// Keeps a seeded random subset of `n_samples` rows (original order
/// preserved). A request covering the whole dataset is an identity copy.
pub fn subsample<T: Scalar>(ds: &LabeledDataset<T>, n_samples: usize, seed: u64) -> LabeledDataset<T> {
    if n_samples >= ds.n() {
        return ds.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..ds.n()).collect();
    idx.shuffle(&mut rng);
    idx.truncate(n_samples);
    idx.sort_unstable();
    ds.take_rows(&idx, ds.name.clone())
}

/// Squared Euclidean distance between two feature rows.
pub(crate) fn sq_dist<T: Scalar>(a: ArrayView1<'_, T>, b: ArrayView1<'_, T>) -> T {
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| {
            let diff = x - y;
            diff * diff
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec<T: Scalar>(kind: DatasetKind<T>, n: usize, seed: u64) -> DatasetSpec<T> {
        DatasetSpec::new(kind, n, seed)
    }

    #[test]
    fn blobs_have_three_balanced_classes() {
        let ds = generate::<f64>(&spec(DatasetKind::Blobs { std: 1.40 }, 300, 7)).unwrap();
        assert_eq!(ds.n(), 300);
        assert_eq!(ds.d(), 2);
        assert_eq!(ds.n_classes, 3);
        assert_eq!(ds.class_counts(), vec![100, 100, 100]);
        ds.validate().unwrap();
    }

    #[test]
    fn zero_std_blobs_collapse_onto_centers() {
        let ds = generate::<f64>(&spec(DatasetKind::Blobs { std: 0.0 }, 30, 3)).unwrap();
        // Every class should occupy exactly one distinct point.
        for class in 0..3 {
            let rows: Vec<_> = (0..ds.n())
                .filter(|&i| ds.labels[i] == class)
                .map(|i| (ds.features[[i, 0]], ds.features[[i, 1]]))
                .collect();
            assert!(rows.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn noiseless_circles_have_exact_radius_ratio() {
        let ds = generate::<f64>(&spec(
            DatasetKind::Circles {
                noise: 0.0,
                factor: 0.2,
            },
            100,
            5,
        ))
        .unwrap();
        for i in 0..ds.n() {
            let r = (ds.features[[i, 0]].powi(2) + ds.features[[i, 1]].powi(2)).sqrt();
            let expected = if ds.labels[i] == 0 { 1.0 } else { 0.2 };
            assert_abs_diff_eq!(r, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn moons_split_half_and_half() {
        let ds = generate::<f64>(&spec(DatasetKind::Moons { noise: 0.075 }, 301, 11)).unwrap();
        let counts = ds.class_counts();
        assert_eq!(counts[0], 150);
        assert_eq!(counts[1], 151);
    }

    #[test]
    fn generation_is_bitwise_deterministic() {
        let s = spec(DatasetKind::Moons { noise: 0.075 }, 64, 99);
        let a = generate::<f64>(&s).unwrap();
        let b = generate::<f64>(&s).unwrap();
        assert_eq!(a.features, b.features);
        assert_eq!(a.labels, b.labels);
    }

    #[test]
    fn invalid_parameters_are_config_errors() {
        assert!(generate::<f64>(&spec(DatasetKind::Blobs { std: -1.0 }, 10, 0)).is_err());
        assert!(generate::<f64>(&spec(
            DatasetKind::Circles {
                noise: 0.1,
                factor: 1.5,
            },
            10,
            0,
        ))
        .is_err());
        assert!(generate::<f64>(&spec(
            DatasetKind::Csv {
                path: "x.csv".into(),
                label_column: "label".into(),
            },
            10,
            0,
        ))
        .is_err());
    }

    #[test]
    fn scaling_maps_min_max_to_endpoints() {
        let ds = LabeledDataset::<f64> {
            features: Array2::from_shape_vec((3, 2), vec![0.0, -1.0, 5.0, 0.0, 10.0, 3.0]).unwrap(),
            labels: vec![0, 0, 0],
            n_classes: 1,
            name: "t".into(),
        };
        let scaled = scale_to_pi(&ds);
        let pi = std::f64::consts::PI;
        assert_abs_diff_eq!(scaled.features[[0, 0]], 0.0);
        assert_abs_diff_eq!(scaled.features[[1, 0]], pi / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(scaled.features[[2, 0]], pi, epsilon = 1e-15);
        // second column is {−1, 0, 3} → {0, π/4, π}
        assert_abs_diff_eq!(scaled.features[[0, 1]], 0.0);
        assert_abs_diff_eq!(scaled.features[[1, 1]], pi / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(scaled.features[[2, 1]], pi, epsilon = 1e-15);
    }

    #[test]
    fn constant_columns_scale_to_zero() {
        let ds = LabeledDataset::<f64> {
            features: Array2::from_elem((4, 1), 3.0),
            labels: vec![0; 4],
            n_classes: 1,
            name: "t".into(),
        };
        let scaled = scale_to_pi(&ds);
        assert!(scaled.features.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn scaling_is_idempotent_and_order_preserving() {
        let ds = generate::<f64>(&spec(DatasetKind::Moons { noise: 0.075 }, 50, 1)).unwrap();
        let once = scale_to_pi(&ds);
        let twice = scale_to_pi(&once);
        for (a, b) in once.features.iter().zip(twice.features.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        for j in 0..ds.d() {
            let mut order: Vec<usize> = (0..ds.n()).collect();
            order.sort_by(|&a, &b| ds.features[[a, j]].partial_cmp(&ds.features[[b, j]]).unwrap());
            for w in order.windows(2) {
                assert!(once.features[[w[0], j]] <= once.features[[w[1], j]]);
            }
        }
    }

    #[test]
    fn balancing_downsamples_to_minority_count() {
        let mut labels = vec![0usize; 200];
        labels.extend(vec![1usize; 70]);
        labels.extend(vec![2usize; 30]);
        let n = labels.len();
        let ds = LabeledDataset::<f64> {
            features: Array2::from_shape_fn((n, 2), |(i, j)| (i * 2 + j) as f64),
            labels,
            n_classes: 3,
            name: "t".into(),
        };
        let balanced = balance_by_class(&ds, 42);
        assert_eq!(balanced.class_counts(), vec![30, 30, 30]);
        let again = balance_by_class(&ds, 42);
        assert_eq!(balanced.labels, again.labels);
        assert_eq!(balanced.features, again.features);
    }

    #[test]
    fn balancing_already_balanced_keeps_all_rows() {
        let ds = generate::<f64>(&spec(DatasetKind::Blobs { std: 1.0 }, 30, 2)).unwrap();
        let balanced = balance_by_class(&ds, 0);
        assert_eq!(balanced.n(), 30);
        assert_eq!(balanced.class_counts(), ds.class_counts());
    }

    #[test]
    fn csv_round_trip_preserves_everything() {
        let dir = std::env::temp_dir().join("qsc_dataset_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ds.csv");
        let ds = generate::<f64>(&spec(DatasetKind::Blobs { std: 1.4 }, 30, 9)).unwrap();
        save_csv(&ds, &path).unwrap();
        let back: LabeledDataset<f64> = load_csv(&path, "label").unwrap();
        assert_eq!(back.n(), 30);
        assert_eq!(back.d(), 2);
        assert_eq!(back.n_classes, 3);
        assert_eq!(ds.features, back.features);
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn csv_errors_name_row_and_column() {
        let dir = std::env::temp_dir().join("qsc_dataset_csv_err_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");
        std::fs::write(&path, "f0,f1,label\n1.0,2.0,a\n1.0,oops,b\n").unwrap();
        let err = load_csv::<f64, _>(&path, "label").unwrap_err();
        match err {
            Error::Parse { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "f1");
            }
            other => panic!("expected parse error, got {other}"),
        }
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn single_row_csv_loads() {
        let dir = std::env::temp_dir().join("qsc_dataset_csv_one_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("one.csv");
        std::fs::write(&path, "f0,label\n0.5,x\n").unwrap();
        let ds: LabeledDataset<f64> = load_csv(&path, "label").unwrap();
        assert_eq!(ds.n(), 1);
        assert_eq!(ds.n_classes, 1);
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn subsample_keeps_requested_count() {
        let ds = generate::<f64>(&spec(DatasetKind::Blobs { std: 1.4 }, 90, 4)).unwrap();
        let sub = subsample(&ds, 30, 5);
        assert_eq!(sub.n(), 30);
        let same = subsample(&ds, 90, 5);
        assert_eq!(same.features, ds.features);
    }
}
