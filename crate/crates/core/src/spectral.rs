//! Normalized spectral clustering over a precomputed kernel.
//!
//! Any Gram matrix produced in this crate can serve as the affinity: build
//! the symmetric normalized Laplacian L = I − D^{−1/2} K D^{−1/2}, take the
//! eigenvectors for the k smallest eigenvalues, row-normalize that n×k
//! embedding, and run k-means on the rows. The eigendecomposition is kept
//! on the side so sweeping over k reuses one factorization.

use ndarray::{Array1, Array2, ArrayView1};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::sq_dist;
use crate::error::{Error, Result};
use crate::kernel::{KernelKind, KernelMatrix};
use crate::linalg::{symmetric_eigen, SymmetricEigen};
use crate::scalar::Scalar;

/// Gaussian RBF Gram matrix K = exp(−γ‖xᵢ − xⱼ‖²) with an exact unit
/// diagonal and bitwise symmetry.
pub fn rbf_kernel<T: Scalar>(features: &Array2<T>, gamma: T) -> Result<KernelMatrix<T>> {
    if !(gamma > T::zero()) || !gamma.is_finite() {
        return Err(Error::Argument(format!(
            "gamma must be finite and > 0, got {gamma}"
        )));
    }
    let n = features.nrows();
    if n < 2 {
        return Err(Error::Argument(format!("need at least 2 samples, got {n}")));
    }
    let mut k = Array2::zeros((n, n));
    for i in 0..n {
        k[[i, i]] = T::one();
        for j in i + 1..n {
            let v = (-gamma * sq_dist(features.row(i), features.row(j))).exp();
            k[[i, j]] = v;
            k[[j, i]] = v;
        }
    }
    KernelMatrix::new(KernelKind::Rbf, k)
}

/// Symmetric normalized Laplacian L = I − D^{−1/2} A D^{−1/2} of a
/// nonnegative symmetric affinity matrix. A zero-degree row has no place
/// in the normalization and is reported as a degenerate graph.
pub fn laplacian_sym<T: Scalar>(affinity: &Array2<T>) -> Result<Array2<T>> {
    let n = affinity.nrows();
    if n == 0 || affinity.ncols() != n {
        return Err(Error::Argument(format!(
            "affinity must be square and nonempty, got {}×{}",
            affinity.nrows(),
            affinity.ncols()
        )));
    }
    for &v in affinity.iter() {
        if !v.is_finite() || v < T::zero() {
            return Err(Error::Argument(format!(
                "affinity entries must be finite and ≥ 0, got {v}"
            )));
        }
    }
    let mut inv_sqrt_deg = Array1::zeros(n);
    for i in 0..n {
        let deg = affinity.row(i).iter().fold(T::zero(), |acc, &v| acc + v);
        if !(deg > T::zero()) {
            return Err(Error::DegenerateGraph(i));
        }
        inv_sqrt_deg[i] = T::one() / deg.sqrt();
    }
    let mut l = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let norm = affinity[[i, j]] * inv_sqrt_deg[i] * inv_sqrt_deg[j];
            l[[i, j]] = if i == j { T::one() - norm } else { -norm };
        }
    }
    Ok(l)
}

/// Cached Laplacian eigendecomposition, reusable across different k.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T> {
    eigen: SymmetricEigen<T>,
}

impl<T: Scalar> SpectralDecomposition<T> {
    pub fn new(kernel: &KernelMatrix<T>) -> Result<Self> {
        Self::from_affinity(kernel.values())
    }

    pub fn from_affinity(affinity: &Array2<T>) -> Result<Self> {
        let l = laplacian_sym(affinity)?;
        let eigen = symmetric_eigen(&l)?;
        Ok(Self { eigen })
    }

    pub fn n(&self) -> usize {
        self.eigen.eigenvalues.len()
    }

    /// Laplacian spectrum, ascending.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigen.eigenvalues
    }

    /// Row-normalized n×k embedding from the eigenvectors of the k smallest
    /// eigenvalues. `skip_trivial` drops the leading (constant-direction)
    /// eigenvector and takes the next k. All-zero rows are left at zero.
    pub fn embedding(&self, k: usize, skip_trivial: bool) -> Result<Array2<T>> {
        let n = self.n();
        let offset = usize::from(skip_trivial);
        if k == 0 || k + offset > n {
            return Err(Error::Argument(format!(
                "embedding dimension k={k} (skip {offset}) out of range for n={n}"
            )));
        }
        let mut u = Array2::zeros((n, k));
        for j in 0..k {
            for i in 0..n {
                u[[i, j]] = self.eigen.eigenvectors[[i, j + offset]];
            }
        }
        for mut row in u.rows_mut() {
            let norm = row
                .iter()
                .fold(T::zero(), |acc, &v| acc + v * v)
                .sqrt();
            if norm > T::zero() {
                row.mapv_inplace(|v| v / norm);
            }
        }
        Ok(u)
    }

    /// Embeds with `cfg.k` dimensions and k-means-clusters the rows.
    pub fn cluster(&self, cfg: &SpectralConfig) -> Result<ClusterAssignment<T>> {
        cfg.validate()?;
        let embedding = self.embedding(cfg.k, cfg.skip_trivial_eigenvector)?;
        let km = kmeans(
            &embedding,
            cfg.k,
            cfg.kmeans_restarts,
            cfg.kmeans_max_iter,
            cfg.seed,
        )?;
        let offset = usize::from(cfg.skip_trivial_eigenvector);
        Ok(ClusterAssignment {
            labels: km.labels,
            embedding,
            eigenvalues: self.eigen.eigenvalues[offset..offset + cfg.k].to_vec(),
            wcss: km.wcss,
        })
    }
}

/// Embedding convenience that hides the decomposition cache.
pub fn spectral_embed<T: Scalar>(
    kernel: &KernelMatrix<T>,
    k: usize,
    skip_trivial: bool,
) -> Result<Array2<T>> {
    SpectralDecomposition::new(kernel)?.embedding(k, skip_trivial)
}

/// Spectral clustering knobs. `k` is both the embedding width and the
/// number of clusters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpectralConfig {
    pub k: usize,
    #[serde(default = "default_restarts")]
    pub kmeans_restarts: usize,
    #[serde(default = "default_max_iter")]
    pub kmeans_max_iter: usize,
    #[serde(default)]
    pub seed: u64,
    /// Skip the leading Laplacian eigenvector instead of including it.
    #[serde(default)]
    pub skip_trivial_eigenvector: bool,
}

fn default_restarts() -> usize {
    10
}

fn default_max_iter() -> usize {
    300
}

impl SpectralConfig {
    pub fn with_k(k: usize) -> Self {
        Self {
            k,
            kmeans_restarts: default_restarts(),
            kmeans_max_iter: default_max_iter(),
            seed: 0,
            skip_trivial_eigenvector: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be ≥ 1".into()));
        }
        if self.kmeans_restarts == 0 || self.kmeans_max_iter == 0 {
            return Err(Error::Config(
                "kmeans_restarts and kmeans_max_iter must be ≥ 1".into(),
            ));
        }
        Ok(())
    }
}

/// Clustering output: labels in 0..k plus the embedding it was computed in.
#[derive(Debug, Clone)]
pub struct ClusterAssignment<T> {
    pub labels: Vec<usize>,
    pub embedding: Array2<T>,
    /// Laplacian eigenvalues of the embedding columns.
    pub eigenvalues: Vec<T>,
    /// Within-cluster sum of squares of the winning k-means run.
    pub wcss: T,
}

/// One-call spectral clustering of a kernel.
pub fn spectral_cluster<T: Scalar>(
    kernel: &KernelMatrix<T>,
    cfg: &SpectralConfig,
) -> Result<ClusterAssignment<T>> {
    SpectralDecomposition::new(kernel)?.cluster(cfg)
}

/// Labels plus the objective they achieved.
#[derive(Debug, Clone)]
pub struct KmeansResult<T> {
    pub labels: Vec<usize>,
    pub wcss: T,
}

/// Lloyd's algorithm with k-means++ seeding. Runs `restarts` independent
/// seedings from one deterministic stream and keeps the lowest
/// within-cluster sum of squares. Empty clusters are repaired by donating
/// the point farthest from its centroid, so exactly k clusters come back
/// even when the data holds fewer than k distinct points.
pub fn kmeans<T: Scalar>(
    data: &Array2<T>,
    k: usize,
    restarts: usize,
    max_iter: usize,
    seed: u64,
) -> Result<KmeansResult<T>> {
    let n = data.nrows();
    if k == 0 || k > n {
        return Err(Error::Argument(format!(
            "k must lie in 1..={n}, got {k}"
        )));
    }
    if restarts == 0 || max_iter == 0 {
        return Err(Error::Argument(
            "restarts and max_iter must be ≥ 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<KmeansResult<T>> = None;
    for _ in 0..restarts {
        let run = lloyd_run(data, k, max_iter, &mut rng);
        if best.as_ref().is_none_or(|b| run.wcss < b.wcss) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn lloyd_run<T: Scalar>(
    data: &Array2<T>,
    k: usize,
    max_iter: usize,
    rng: &mut ChaCha8Rng,
) -> KmeansResult<T> {
    let n = data.nrows();
    let dim = data.ncols();
    let mut centroids = plus_plus_init(data, k, rng);
    let mut labels = vec![0usize; n];

    for _ in 0..max_iter {
        let mut changed = false;
        for (i, label) in labels.iter_mut().enumerate() {
            let nearest = nearest_centroid(data.row(i), &centroids);
            if *label != nearest {
                *label = nearest;
                changed = true;
            }
        }
        changed |= repair_empty_clusters(data, &centroids, &mut labels, k);

        let mut sums = Array2::<T>::zeros((k, dim));
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            for j in 0..dim {
                sums[[labels[i], j]] += data[[i, j]];
            }
        }
        for c in 0..k {
            // Repair guarantees counts[c] ≥ 1.
            let inv = T::one() / T::of_usize(counts[c]);
            for j in 0..dim {
                centroids[[c, j]] = sums[[c, j]] * inv;
            }
        }
        if !changed {
            break;
        }
    }

    let wcss = labels
        .iter()
        .enumerate()
        .map(|(i, &c)| sq_dist(data.row(i), centroids.row(c)))
        .fold(T::zero(), |acc, v| acc + v);
    KmeansResult { labels, wcss }
}

/// k-means++ seeding: first centroid uniform, the rest drawn with
/// probability proportional to the squared distance from the chosen set.
fn plus_plus_init<T: Scalar>(data: &Array2<T>, k: usize, rng: &mut ChaCha8Rng) -> Array2<T> {
    let n = data.nrows();
    let dim = data.ncols();
    let mut centroids = Array2::zeros((k, dim));
    let first = rng.random_range(0..n);
    centroids.row_mut(0).assign(&data.row(first));
    let mut d2: Vec<T> = (0..n)
        .map(|i| sq_dist(data.row(i), data.row(first)))
        .collect();
    for c in 1..k {
        let total = d2.iter().fold(T::zero(), |acc, &v| acc + v);
        let chosen = if total > T::zero() {
            let r = T::of(rng.random_range(0.0..total.as_f64().max(f64::MIN_POSITIVE)));
            let mut cum = T::zero();
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                cum += w;
                if r < cum {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            // All remaining mass is zero (duplicates): any point works.
            rng.random_range(0..n)
        };
        centroids.row_mut(c).assign(&data.row(chosen));
        for (i, slot) in d2.iter_mut().enumerate() {
            let d = sq_dist(data.row(i), data.row(chosen));
            if d < *slot {
                *slot = d;
            }
        }
    }
    centroids
}

fn nearest_centroid<T: Scalar>(point: ArrayView1<T>, centroids: &Array2<T>) -> usize {
    let mut best = 0usize;
    let mut best_d = sq_dist(point, centroids.row(0));
    for c in 1..centroids.nrows() {
        let d = sq_dist(point, centroids.row(c));
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

/// Donates to every empty cluster the point farthest from its current
/// centroid, never breaking up a singleton. Returns whether labels moved.
fn repair_empty_clusters<T: Scalar>(
    data: &Array2<T>,
    centroids: &Array2<T>,
    labels: &mut [usize],
    k: usize,
) -> bool {
    let mut sizes = vec![0usize; k];
    for &c in labels.iter() {
        sizes[c] += 1;
    }
    let mut moved = false;
    for empty in 0..k {
        while sizes[empty] == 0 {
            let mut donor: Option<(usize, T)> = None;
            for (i, &c) in labels.iter().enumerate() {
                if sizes[c] < 2 {
                    continue;
                }
                let d = sq_dist(data.row(i), centroids.row(c));
                if donor.as_ref().is_none_or(|&(_, best)| d > best) {
                    donor = Some((i, d));
                }
            }
            match donor {
                Some((i, _)) => {
                    sizes[labels[i]] -= 1;
                    labels[i] = empty;
                    sizes[empty] += 1;
                    moved = true;
                }
                // n ≥ k rules this out, but never loop forever.
                None => break,
            }
        }
    }
    moved
}
