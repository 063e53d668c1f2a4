//! Spike trains and Gaussian receptive-field population coding.
//!
//! A sample x ∈ [0, π]^d is represented by a lattice of receptive-field
//! neurons. Neuron k with preferred point p_k responds with
//! r_k = exp(−‖x − p_k‖² / (2σ²)) and emits round(r_k · max_rate) spikes
//! evenly spaced over [0, t_max]. Rate coding is deterministic by design:
//! equal samples always produce identical trains.

use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sorted spike times on a discrete timebase.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeTrain<T> {
    times: Vec<T>,
    t_max: T,
    dt: T,
}

impl<T: Scalar> SpikeTrain<T> {
    pub fn new(times: Vec<T>, t_max: T, dt: T) -> Result<Self> {
        if !(dt > T::zero()) || !(t_max > T::zero()) {
            return Err(Error::Argument(format!(
                "spike train timebase must be positive, got t_max={t_max}, dt={dt}"
            )));
        }
        for w in times.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::Argument(format!(
                    "spike times must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(&t) = times.first() {
            if t < T::zero() {
                return Err(Error::Argument(format!("negative spike time {t}")));
            }
        }
        if let Some(&t) = times.last() {
            if t > t_max {
                return Err(Error::Argument(format!(
                    "spike time {t} beyond horizon {t_max}"
                )));
            }
        }
        Ok(Self { times, t_max, dt })
    }

    pub(crate) fn new_unchecked(times: Vec<T>, t_max: T, dt: T) -> Self {
        Self { times, t_max, dt }
    }

    pub fn empty(t_max: T, dt: T) -> Result<Self> {
        Self::new(Vec::new(), t_max, dt)
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn t_max(&self) -> T {
        self.t_max
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Number of bins in the binary view.
    pub fn n_bins(&self) -> usize {
        (self.t_max / self.dt).as_f64().round().max(1.0) as usize
    }

    /// Binary occupancy per bin. A spike at time t lands in bin ⌊t/dt⌋,
    /// clamped so that t = t_max falls in the last bin.
    pub fn bits(&self) -> Vec<bool> {
        let n = self.n_bins();
        let mut bits = vec![false; n];
        for &t in &self.times {
            let bin = ((t / self.dt).as_f64().floor() as usize).min(n - 1);
            bits[bin] = true;
        }
        bits
    }
}

fn default_t_max() -> f64 {
    1.0
}

fn default_dt() -> f64 {
    0.01
}

fn default_max_rate() -> usize {
    50
}

/// Lattice of receptive-field neurons with a shared Gaussian tuning width
/// and spike-train timebase.
#[derive(Debug, Clone)]
pub struct PopulationGrid<T> {
    /// m×d preferred points.
    pub preferred_points: Array2<T>,
    pub sigma_tuning: T,
    pub t_max: T,
    pub dt: T,
    pub max_rate: usize,
}

/// Serializable knobs for building a [`PopulationGrid`] over [0, π]^d.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridConfig {
    /// Lattice nodes per feature dimension; `None` picks a default that
    /// keeps m = G^d manageable (8 for d ≤ 2, 3 for d ≤ 4, 2 above).
    #[serde(default)]
    pub nodes_per_dim: Option<usize>,
    /// Gaussian tuning width; `None` uses the lattice spacing.
    #[serde(default)]
    pub sigma_tuning: Option<f64>,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_max_rate")]
    pub max_rate: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            nodes_per_dim: None,
            sigma_tuning: None,
            t_max: default_t_max(),
            dt: default_dt(),
            max_rate: default_max_rate(),
        }
    }
}

impl GridConfig {
    pub fn build<T: Scalar>(&self, d: usize) -> Result<PopulationGrid<T>> {
        let g = self.nodes_per_dim.unwrap_or_else(|| default_nodes_per_dim(d));
        let mut grid = PopulationGrid::lattice(d, g)?;
        if let Some(sigma) = self.sigma_tuning {
            if !(sigma > 0.0) {
                return Err(Error::Config(format!("sigma_tuning must be > 0, got {sigma}")));
            }
            grid.sigma_tuning = T::of(sigma);
        }
        grid.t_max = T::of(self.t_max);
        grid.dt = T::of(self.dt);
        grid.max_rate = self.max_rate;
        grid.validate()?;
        Ok(grid)
    }
}

/// Default lattice resolution per dimension, trading coverage against the
/// exponential growth of m = G^d.
pub fn default_nodes_per_dim(d: usize) -> usize {
    match d {
        0..=2 => 8,
        3..=4 => 3,
        _ => 2,
    }
}

impl<T: Scalar> PopulationGrid<T> {
    /// Regular lattice over [0, π]^d with `nodes_per_dim` nodes per axis
    /// (axis endpoints included) and σ equal to the lattice spacing, so
    /// neighboring receptive fields overlap at exp(−1/2).
    pub fn lattice(d: usize, nodes_per_dim: usize) -> Result<Self> {
        if d == 0 || nodes_per_dim == 0 {
            return Err(Error::Config(format!(
                "lattice needs d ≥ 1 and nodes ≥ 1, got d={d}, nodes={nodes_per_dim}"
            )));
        }
        let m = nodes_per_dim
            .checked_pow(d as u32)
            .filter(|&m| m <= 1 << 20)
            .ok_or_else(|| {
                Error::Config(format!(
                    "population lattice {nodes_per_dim}^{d} is too large"
                ))
            })?;
        let pi = T::PI();
        let (axis, spacing) = if nodes_per_dim == 1 {
            // Single node sits at the domain midpoint with a wide field.
            (vec![pi * T::of(0.5)], pi)
        } else {
            let step = pi / T::of_usize(nodes_per_dim - 1);
            (
                (0..nodes_per_dim).map(|i| step * T::of_usize(i)).collect(),
                step,
            )
        };
        let mut points = Array2::zeros((m, d));
        for k in 0..m {
            let mut rem = k;
            for j in (0..d).rev() {
                points[[k, j]] = axis[rem % nodes_per_dim];
                rem /= nodes_per_dim;
            }
        }
        let grid = Self {
            preferred_points: points,
            sigma_tuning: spacing,
            t_max: T::of(default_t_max()),
            dt: T::of(default_dt()),
            max_rate: default_max_rate(),
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Lattice with the dimension-dependent default resolution.
    pub fn for_dimension(d: usize) -> Result<Self> {
        Self::lattice(d, default_nodes_per_dim(d))
    }

    pub fn m(&self) -> usize {
        self.preferred_points.nrows()
    }

    pub fn d(&self) -> usize {
        self.preferred_points.ncols()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m() == 0 {
            return Err(Error::Config("population grid has no neurons".into()));
        }
        if !(self.sigma_tuning > T::zero()) {
            return Err(Error::Config(format!(
                "sigma_tuning must be > 0, got {}",
                self.sigma_tuning
            )));
        }
        if !(self.dt > T::zero()) || !(self.t_max > T::zero()) {
            return Err(Error::Config(format!(
                "timebase must be positive, got t_max={}, dt={}",
                self.t_max, self.dt
            )));
        }
        let budget = T::of_usize(self.max_rate) * self.dt;
        if budget > self.t_max * (T::one() + T::of(1e-9)) {
            return Err(Error::Config(format!(
                "max_rate·dt = {budget} exceeds t_max = {}",
                self.t_max
            )));
        }
        Ok(())
    }

    fn n_bins(&self) -> usize {
        (self.t_max / self.dt).as_f64().round().max(1.0) as usize
    }
}

/// Encodes one sample as m deterministic rate-coded spike trains.
pub fn population_encode<T: Scalar>(
    x: &[T],
    grid: &PopulationGrid<T>,
) -> Result<Vec<SpikeTrain<T>>> {
    if x.len() != grid.d() {
        return Err(Error::Argument(format!(
            "sample has {} features but grid expects {}",
            x.len(),
            grid.d()
        )));
    }
    let two_sigma_sq = T::of(2.0) * grid.sigma_tuning * grid.sigma_tuning;
    let n_bins = grid.n_bins();
    let mut trains = Vec::with_capacity(grid.m());
    for p in grid.preferred_points.rows() {
        let d2 = x
            .iter()
            .zip(p.iter())
            .map(|(&a, &b)| {
                let diff = a - b;
                diff * diff
            })
            .fold(T::zero(), |acc, v| acc + v);
        let response = (-d2 / two_sigma_sq).exp();
        let count = (response * T::of_usize(grid.max_rate)).as_f64().round() as usize;
        let times = evenly_spaced_bins(count, n_bins)
            .map(|bin| T::of_usize(bin) * grid.dt)
            .collect();
        trains.push(SpikeTrain::new_unchecked(times, grid.t_max, grid.dt));
    }
    Ok(trains)
}

/// Encodes every row of a feature matrix.
pub fn encode_dataset<T: Scalar>(
    features: &Array2<T>,
    grid: &PopulationGrid<T>,
) -> Result<Vec<Vec<SpikeTrain<T>>>> {
    features
        .rows()
        .into_iter()
        .map(|row| population_encode(row.as_slice().expect("row-major features"), grid))
        .collect()
}

/// `count` bin indices spread evenly over `0..n_bins`. Strictly increasing
/// whenever count ≤ n_bins, which the grid invariant max_rate·dt ≤ t_max
/// guarantees.
fn evenly_spaced_bins(count: usize, n_bins: usize) -> impl Iterator<Item = usize> {
    let count = count.min(n_bins);
    (0..count).map(move |j| {
        (((j as f64 + 0.5) * n_bins as f64 / count as f64).floor() as usize).min(n_bins - 1)
    })
}

/// Writes one row per spike: `sample_id,neuron_id,spike_time`.
pub fn save_spike_trains_csv<T: Scalar, P: AsRef<Path>>(
    samples: &[Vec<SpikeTrain<T>>],
    path: P,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["sample_id", "neuron_id", "spike_time"])?;
    for (sample_id, trains) in samples.iter().enumerate() {
        for (neuron_id, train) in trains.iter().enumerate() {
            for &t in train.times() {
                w.write_record([
                    sample_id.to_string(),
                    neuron_id.to_string(),
                    t.to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
