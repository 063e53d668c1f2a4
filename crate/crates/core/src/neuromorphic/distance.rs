//! Spike-train distances: Victor-Purpura edit distance and van Rossum
//! filtered-trace distance.

use serde::{Deserialize, Serialize};

use super::encoding::SpikeTrain;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Victor-Purpura distance with cost parameter q ≥ 0: the cheapest way to
/// turn one train into the other, paying 1 to insert or delete a spike and
/// q·|Δt| to shift one. Equals the spike-count difference at q = 0 and
/// approaches insert-plus-delete for far-apart spikes.
pub fn vp_distance<T: Scalar>(a: &SpikeTrain<T>, b: &SpikeTrain<T>, q: T) -> T {
    vp_times(a.times(), b.times(), q)
}

/// Edit-distance recurrence over raw time slices:
/// G[i][j] = min(G[i−1][j] + 1, G[i][j−1] + 1, G[i−1][j−1] + q·|aᵢ − bⱼ|),
/// G[i][0] = i, G[0][j] = j. Rolling rows keep memory at O(min(|a|, |b|)).
pub(crate) fn vp_times<T: Scalar>(a: &[T], b: &[T], q: T) -> T {
    let (outer, inner) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let m = inner.len();
    let mut prev: Vec<T> = (0..=m).map(T::of_usize).collect();
    let mut cur: Vec<T> = vec![T::zero(); m + 1];
    for (i, &ti) in outer.iter().enumerate() {
        cur[0] = T::of_usize(i + 1);
        for (j, &tj) in inner.iter().enumerate() {
            let shift = prev[j] + q * (ti - tj).abs();
            let delete = prev[j + 1] + T::one();
            let insert = cur[j] + T::one();
            cur[j + 1] = shift.min(delete).min(insert);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

/// Van Rossum distance with kernel time constant τ > 0: the L² distance
/// between the trains after convolution with a causal exponential filter
/// e^{−t/τ}, normalized so two lone spikes τ·ln 2 apart or a lone spike
/// against silence both score √½.
pub fn vr_distance<T: Scalar>(a: &SpikeTrain<T>, b: &SpikeTrain<T>, tau: T) -> T {
    vr_times(a.times(), b.times(), tau)
}

/// Closed form of (1/τ)·∫ (f_a − f_b)² dt over t ∈ [0, ∞):
/// D² = ½·(Σᵢⱼ e^{−|aᵢ−aⱼ|/τ} + Σᵢⱼ e^{−|bᵢ−bⱼ|/τ} − 2·Σᵢⱼ e^{−|aᵢ−bⱼ|/τ}),
/// clamped at zero before the square root to absorb cancellation noise.
pub(crate) fn vr_times<T: Scalar>(a: &[T], b: &[T], tau: T) -> T {
    let half = T::of(0.5);
    let d2 = half * (exp_pair_sum(a, a, tau) + exp_pair_sum(b, b, tau))
        - exp_pair_sum(a, b, tau);
    d2.max(T::zero()).sqrt()
}

fn exp_pair_sum<T: Scalar>(a: &[T], b: &[T], tau: T) -> T {
    let mut acc = T::zero();
    for &x in a {
        for &y in b {
            acc += (-(x - y).abs() / tau).exp();
        }
    }
    acc
}

/// Which distance compares response trains, with its cost scale.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(tag = "metric", rename_all = "snake_case")]
pub enum SpikeMetric<T: Scalar> {
    VictorPurpura {
        #[serde(default = "default_q::<T>")]
        q: T,
    },
    VanRossum {
        #[serde(default = "default_tau::<T>")]
        tau: T,
    },
}

fn default_q<T: Scalar>() -> T {
    T::one()
}

fn default_tau<T: Scalar>() -> T {
    T::of(0.05)
}

impl<T: Scalar> SpikeMetric<T> {
    pub fn victor_purpura() -> Self {
        Self::VictorPurpura { q: default_q() }
    }

    pub fn van_rossum() -> Self {
        Self::VanRossum { tau: default_tau() }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::VictorPurpura { q } => {
                if !(q >= T::zero()) || !q.is_finite() {
                    return Err(Error::Config(format!("q must be finite and ≥ 0, got {q}")));
                }
            }
            Self::VanRossum { tau } => {
                if !(tau > T::zero()) || !tau.is_finite() {
                    return Err(Error::Config(format!("tau must be finite and > 0, got {tau}")));
                }
            }
        }
        Ok(())
    }

    pub fn distance(&self, a: &SpikeTrain<T>, b: &SpikeTrain<T>) -> T {
        match *self {
            Self::VictorPurpura { q } => vp_distance(a, b, q),
            Self::VanRossum { tau } => vr_distance(a, b, tau),
        }
    }

    pub(crate) fn distance_times(&self, a: &[T], b: &[T]) -> T {
        match *self {
            Self::VictorPurpura { q } => vp_times(a, b, q),
            Self::VanRossum { tau } => vr_times(a, b, tau),
        }
    }
}

/// Distance between two population responses: the chosen spike metric per
/// matching neuron, summed over the population.
pub fn sample_distance<T: Scalar>(
    a: &[SpikeTrain<T>],
    b: &[SpikeTrain<T>],
    metric: &SpikeMetric<T>,
) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::Argument(format!(
            "population sizes differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(ta, tb)| metric.distance(ta, tb))
        .fold(T::zero(), |acc, d| acc + d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn train(times: Vec<f64>) -> SpikeTrain<f64> {
        SpikeTrain::new(times, 1.0, 0.01).unwrap()
    }

    #[test]
    fn vp_identical_trains_cost_nothing() {
        let t = train(vec![0.1, 0.2, 0.7]);
        assert_eq!(vp_distance(&t, &t, 1.0), 0.0);
    }

    #[test]
    fn vp_against_silence_counts_spikes() {
        let t = train(vec![0.1, 0.2, 0.7]);
        let empty = train(vec![]);
        assert_eq!(vp_distance(&t, &empty, 1.0), 3.0);
        assert_eq!(vp_distance(&empty, &t, 1.0), 3.0);
    }

    #[test]
    fn vp_prefers_shifting_nearby_spikes() {
        // |0.5 − 0.1|·q = 0.4 beats delete + insert = 2.
        let a = train(vec![0.1]);
        let b = train(vec![0.5]);
        assert_abs_diff_eq!(vp_distance(&a, &b, 1.0), 0.4, epsilon = 1e-15);
        // At q = 10 the shift costs 4, so re-creating the spike wins.
        assert_abs_diff_eq!(vp_distance(&a, &b, 10.0), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn vp_zero_q_reduces_to_count_difference() {
        let a = train(vec![0.1, 0.4, 0.6, 0.9]);
        let b = train(vec![0.85]);
        assert_eq!(vp_distance(&a, &b, 0.0), 3.0);
    }

    #[test]
    fn vp_is_symmetric() {
        let a = train(vec![0.05, 0.3, 0.31]);
        let b = train(vec![0.2, 0.33, 0.4, 0.8]);
        assert_eq!(vp_distance(&a, &b, 2.5), vp_distance(&b, &a, 2.5));
    }

    #[test]
    fn vp_mixed_alignment_hand_value() {
        // Optimal: shift 0.1→0.15 (0.05·2 = 0.1), delete 0.5, shift
        // 0.9→0.95 (0.1): total 1.2.
        let a = train(vec![0.1, 0.5, 0.9]);
        let b = train(vec![0.15, 0.95]);
        assert_abs_diff_eq!(vp_distance(&a, &b, 2.0), 1.2, epsilon = 1e-12);
    }

    #[test]
    fn vr_identical_trains_are_indistinguishable() {
        let t = train(vec![0.2, 0.4, 0.8]);
        assert_eq!(vr_distance(&t, &t, 0.05), 0.0);
    }

    #[test]
    fn vr_lone_spike_against_silence() {
        let t = train(vec![0.3]);
        let empty = train(vec![]);
        assert_abs_diff_eq!(
            vr_distance(&t, &empty, 0.05),
            (0.5f64).sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn vr_half_life_separation() {
        // D² = ½(1 + 1 − 2·e^{−ln2}) = ½, for any τ.
        let tau = 0.07;
        let a = train(vec![0.1]);
        let b = train(vec![0.1 + tau * (2.0f64).ln()]);
        assert_abs_diff_eq!(vr_distance(&a, &b, tau), (0.5f64).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn vr_is_symmetric_and_nonnegative() {
        let a = train(vec![0.11, 0.32]);
        let b = train(vec![0.3, 0.33, 0.9]);
        let d = vr_distance(&a, &b, 0.05);
        assert!(d >= 0.0);
        assert_eq!(d, vr_distance(&b, &a, 0.05));
    }

    #[test]
    fn vr_coincident_pair_cancels_exactly() {
        let a = train(vec![0.25, 0.75]);
        let b = train(vec![0.25, 0.75]);
        assert_eq!(vr_distance(&a, &b, 0.01), 0.0);
    }

    #[test]
    fn sample_distance_sums_over_the_population() {
        let metric = SpikeMetric::VictorPurpura { q: 1.0 };
        let a = vec![train(vec![0.1]), train(vec![])];
        let b = vec![train(vec![0.1]), train(vec![0.4, 0.5])];
        assert_eq!(sample_distance(&a, &b, &metric).unwrap(), 2.0);
        let short = vec![train(vec![])];
        assert!(sample_distance(&a, &short, &metric).is_err());
    }

    #[test]
    fn metric_validation() {
        assert!(SpikeMetric::VictorPurpura { q: -1.0 }.validate().is_err());
        assert!(SpikeMetric::VanRossum { tau: 0.0 }.validate().is_err());
        assert!(SpikeMetric::<f64>::victor_purpura().validate().is_ok());
        assert!(SpikeMetric::<f64>::van_rossum().validate().is_ok());
    }
}
