//! Spiking-network kernels over population-coded features.
//!
//! The pipeline turns a feature matrix into a Gram matrix in four steps:
//! population-encode each sample into m spike trains, pass every train
//! through a leaky integrate-and-fire neuron (classical or quantum),
//! measure pairwise train distances with a spike metric, and map summed
//! distances through a Gaussian kernel K = exp(−γ·D²).
//!
//! Both the encoder and the neurons are deterministic, so a dataset of
//! hundreds of samples produces only a few dozen distinct trains. The
//! response and distance stages deduplicate on exact spike times, which
//! collapses the quadratic distance work to a small table of unique pairs.

mod distance;
mod encoding;
mod neuron;

pub use distance::{sample_distance, vp_distance, vr_distance, SpikeMetric};
pub use encoding::{
    default_nodes_per_dim, encode_dataset, population_encode, save_spike_trains_csv,
    GridConfig, PopulationGrid, SpikeTrain,
};
pub use neuron::{
    lif_run, qlif_decay_angle, qlif_memory_angle, qlif_run, qlif_step, qlif_step_unified,
    LifConfig, NeuronModel, QlifConfig,
};

use std::collections::HashMap;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{KernelKind, KernelMatrix};
use crate::scalar::Scalar;

// Above this many entries the unique-pair distance table would cost more
// memory than recomputing, so the direct per-sample path takes over.
const PAIR_TABLE_LIMIT: usize = 1 << 22;

/// Exact content key for a spike train; f32 times widen losslessly.
fn times_key<T: Scalar>(times: &[T]) -> Vec<u64> {
    times.iter().map(|t| t.as_f64().to_bits()).collect()
}

/// Runs every encoded train through the neuron, computing each distinct
/// input train only once.
pub fn respond<T: Scalar>(
    encoded: &[Vec<SpikeTrain<T>>],
    neuron: &NeuronModel<T>,
) -> Vec<Vec<SpikeTrain<T>>> {
    let mut memo: HashMap<Vec<u64>, SpikeTrain<T>> = HashMap::new();
    encoded
        .iter()
        .map(|sample| {
            sample
                .iter()
                .map(|train| {
                    let mut key = times_key(train.times());
                    key.push(train.n_bins() as u64);
                    key.push(train.dt().as_f64().to_bits());
                    memo.entry(key)
                        .or_insert_with(|| neuron.run(train))
                        .clone()
                })
                .collect()
        })
        .collect()
}

/// Symmetric n×n matrix of population distances between samples: the spike
/// metric per matching neuron, summed over the population.
pub fn distance_matrix<T: Scalar>(
    samples: &[Vec<SpikeTrain<T>>],
    metric: &SpikeMetric<T>,
) -> Result<Array2<T>> {
    metric.validate()?;
    let n = samples.len();
    if n == 0 {
        return Err(Error::Argument("no samples to compare".into()));
    }
    let m = samples[0].len();
    for (i, s) in samples.iter().enumerate() {
        if s.len() != m {
            return Err(Error::Argument(format!(
                "sample {i} has {} trains, expected {m}",
                s.len()
            )));
        }
    }

    // Map every train to a unique-content id.
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut unique: Vec<&[T]> = Vec::new();
    let mut ids = vec![0usize; n * m];
    for (i, s) in samples.iter().enumerate() {
        for (k, t) in s.iter().enumerate() {
            let id = *index.entry(times_key(t.times())).or_insert_with(|| {
                unique.push(t.times());
                unique.len() - 1
            });
            ids[i * m + k] = id;
        }
    }
    let u = unique.len();

    let rows: Vec<Vec<T>> = if u.checked_mul(u).is_some_and(|sq| sq <= PAIR_TABLE_LIMIT) {
        // Distances between distinct train pairs, then table lookups.
        let table_rows: Vec<Vec<T>> = (0..u)
            .into_par_iter()
            .map(|p| {
                (p..u)
                    .map(|q| metric.distance_times(unique[p], unique[q]))
                    .collect()
            })
            .collect();
        let mut table = vec![T::zero(); u * u];
        for (p, row) in table_rows.into_iter().enumerate() {
            for (offset, d) in row.into_iter().enumerate() {
                let q = p + offset;
                table[p * u + q] = d;
                table[q * u + p] = d;
            }
        }
        (0..n)
            .into_par_iter()
            .map(|i| {
                (i + 1..n)
                    .map(|j| {
                        (0..m)
                            .map(|k| table[ids[i * m + k] * u + ids[j * m + k]])
                            .fold(T::zero(), |acc, d| acc + d)
                    })
                    .collect()
            })
            .collect()
    } else {
        (0..n)
            .into_par_iter()
            .map(|i| {
                (i + 1..n)
                    .map(|j| {
                        samples[i]
                            .iter()
                            .zip(&samples[j])
                            .map(|(a, b)| metric.distance(a, b))
                            .fold(T::zero(), |acc, d| acc + d)
                    })
                    .collect()
            })
            .collect()
    };

    let mut d = Array2::zeros((n, n));
    for (i, row) in rows.into_iter().enumerate() {
        for (offset, v) in row.into_iter().enumerate() {
            let j = i + 1 + offset;
            d[[i, j]] = v;
            d[[j, i]] = v;
        }
    }
    Ok(d)
}

/// Bandwidth from the median heuristic: γ = 1 / median(D²) over off-diagonal
/// entries, falling back to 1 when the median is zero or undefined.
pub fn median_heuristic_gamma<T: Scalar>(distances: &Array2<T>) -> T {
    let n = distances.nrows();
    let mut sq: Vec<T> = Vec::with_capacity(n.saturating_sub(1) * n / 2);
    for i in 0..n {
        for j in i + 1..n {
            let d = distances[[i, j]];
            sq.push(d * d);
        }
    }
    if sq.is_empty() {
        return T::one();
    }
    sq.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    let mid = sq.len() / 2;
    let median = if sq.len() % 2 == 1 {
        sq[mid]
    } else {
        (sq[mid - 1] + sq[mid]) * T::of(0.5)
    };
    if median > T::zero() && median.is_finite() {
        T::one() / median
    } else {
        T::one()
    }
}

/// Gaussian kernel over a distance matrix: K = exp(−γ·D²). The result is
/// built from the upper triangle so it is bitwise symmetric, and carries
/// an exact unit diagonal because D has a zero diagonal.
pub fn distance_kernel<T: Scalar>(
    distances: &Array2<T>,
    gamma_scale: T,
    kind: KernelKind,
) -> Result<KernelMatrix<T>> {
    if distances.nrows() != distances.ncols() {
        return Err(Error::Argument(format!(
            "distance matrix must be square, got {}×{}",
            distances.nrows(),
            distances.ncols()
        )));
    }
    if !(gamma_scale >= T::zero()) || !gamma_scale.is_finite() {
        return Err(Error::Argument(format!(
            "gamma_scale must be finite and ≥ 0, got {gamma_scale}"
        )));
    }
    let n = distances.nrows();
    let mut k = Array2::zeros((n, n));
    for i in 0..n {
        k[[i, i]] = T::one();
        for j in i + 1..n {
            let d = distances[[i, j]];
            let v = (-gamma_scale * d * d).exp();
            k[[i, j]] = v;
            k[[j, i]] = v;
        }
    }
    KernelMatrix::new(kind, k)
}

/// Full spiking-kernel configuration: neuron model, spike metric, encoder
/// grid, and kernel bandwidth (`None` → median heuristic).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SpikeKernelConfig<T: Scalar> {
    pub neuron: NeuronModel<T>,
    pub metric: SpikeMetric<T>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub gamma_scale: Option<T>,
}

impl<T: Scalar> Default for SpikeKernelConfig<T> {
    fn default() -> Self {
        Self {
            neuron: NeuronModel::Qlif(QlifConfig::default()),
            metric: SpikeMetric::victor_purpura(),
            grid: GridConfig::default(),
            gamma_scale: None,
        }
    }
}

impl<T: Scalar> SpikeKernelConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.neuron.validate()?;
        self.metric.validate()?;
        if let Some(g) = self.gamma_scale {
            if !(g >= T::zero()) || !g.is_finite() {
                return Err(Error::Config(format!(
                    "gamma_scale must be finite and ≥ 0, got {g}"
                )));
            }
        }
        Ok(())
    }

    /// Kernel label matching the configured metric.
    pub fn kernel_kind(&self) -> KernelKind {
        match self.metric {
            SpikeMetric::VictorPurpura { .. } => KernelKind::Vp,
            SpikeMetric::VanRossum { .. } => KernelKind::Vr,
        }
    }
}

/// Everything the spiking pipeline produces for one feature matrix.
#[derive(Debug, Clone)]
pub struct SpikeKernelOutput<T> {
    pub kernel: KernelMatrix<T>,
    pub distances: Array2<T>,
    /// Bandwidth actually used (configured or median heuristic).
    pub gamma_scale: T,
    pub responses: Vec<Vec<SpikeTrain<T>>>,
}

/// Runs the full pipeline on features already scaled to [0, π]^d.
pub fn spike_kernel<T: Scalar>(
    features: &Array2<T>,
    cfg: &SpikeKernelConfig<T>,
) -> Result<SpikeKernelOutput<T>> {
    cfg.validate()?;
    if features.nrows() < 2 {
        return Err(Error::Argument(format!(
            "need at least 2 samples, got {}",
            features.nrows()
        )));
    }
    let grid = cfg.grid.build::<T>(features.ncols())?;
    let encoded = encode_dataset(features, &grid)?;
    let responses = respond(&encoded, &cfg.neuron);
    let distances = distance_matrix(&responses, &cfg.metric)?;
    let gamma_scale = cfg
        .gamma_scale
        .unwrap_or_else(|| median_heuristic_gamma(&distances));
    let kernel = distance_kernel(&distances, gamma_scale, cfg.kernel_kind())?;
    Ok(SpikeKernelOutput {
        kernel,
        distances,
        gamma_scale,
        responses,
    })
}
