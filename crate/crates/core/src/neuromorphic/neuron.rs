//! Leaky integrate-and-fire neurons, classical and single-qubit.
//!
//! Both neurons consume a binary spike train on a shared timebase and emit
//! an output train. The classical model tracks a membrane potential with
//! multiplicative leak and soft reset; the quantum model tracks an excited
//! population α of one qubit evolved by rotation angles, with amplitude
//! damping between steps and a hard reset to the ground state on spiking.

use serde::{Deserialize, Serialize};

use super::encoding::SpikeTrain;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Classical leaky integrate-and-fire parameters.
///
/// Membrane update: U[t] = β·U[t−1] + W·X[t] − S[t−1]·U_thr with U[0] = 0,
/// spiking when U[t] > U_thr (strict).
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct LifConfig<T: Scalar> {
    #[serde(default = "defaults::beta_decay::<T>")]
    pub beta_decay: T,
    #[serde(default = "defaults::weight::<T>")]
    pub weight: T,
    #[serde(default = "defaults::u_thresh::<T>")]
    pub u_thresh: T,
}

/// Quantum leaky integrate-and-fire parameters.
///
/// State update per step, starting from population α ∈ [0, 1]:
///   φ = 2·arcsin(√α)                         restores the pre-reset phase
///   input spike:  α' = sin²((θ + φ)/2)        integration rotation θ
///   no spike:     α' = sin²((γ + φ)/2)        leak rotation γ < 0
/// where γ is chosen so a silent step realizes amplitude damping exactly:
/// sin²((γ + φ)/2) = α·exp(−τ/T1). Spiking (α' > alpha_thresh, strict)
/// resets the qubit to the ground state.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct QlifConfig<T: Scalar> {
    /// Integration rotation angle applied on an input spike.
    #[serde(default = "defaults::theta::<T>")]
    pub theta: T,
    /// Idle time between steps, in units of the damping time T1. Stored as
    /// the ratio τ/T1 directly.
    #[serde(default = "defaults::tau_ratio::<T>")]
    pub tau_ratio: T,
    #[serde(default = "defaults::alpha_thresh::<T>")]
    pub alpha_thresh: T,
}

mod defaults {
    use crate::scalar::Scalar;

    pub fn beta_decay<T: Scalar>() -> T {
        T::of(0.9)
    }
    pub fn weight<T: Scalar>() -> T {
        T::of(0.3)
    }
    pub fn u_thresh<T: Scalar>() -> T {
        T::one()
    }
    pub fn theta<T: Scalar>() -> T {
        T::FRAC_PI_4()
    }
    pub fn tau_ratio<T: Scalar>() -> T {
        T::of(0.1)
    }
    pub fn alpha_thresh<T: Scalar>() -> T {
        T::of(0.5)
    }
}

impl<T: Scalar> Default for LifConfig<T> {
    fn default() -> Self {
        Self {
            beta_decay: defaults::beta_decay(),
            weight: defaults::weight(),
            u_thresh: defaults::u_thresh(),
        }
    }
}

impl<T: Scalar> Default for QlifConfig<T> {
    fn default() -> Self {
        Self {
            theta: defaults::theta(),
            tau_ratio: defaults::tau_ratio(),
            alpha_thresh: defaults::alpha_thresh(),
        }
    }
}

impl<T: Scalar> LifConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta_decay >= T::zero() && self.beta_decay <= T::one()) {
            return Err(Error::Config(format!(
                "beta_decay must lie in [0, 1], got {}",
                self.beta_decay
            )));
        }
        for (name, v) in [("weight", self.weight), ("u_thresh", self.u_thresh)] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite, got {v}")));
            }
        }
        if !(self.u_thresh > T::zero()) {
            return Err(Error::Config(format!(
                "u_thresh must be > 0, got {}",
                self.u_thresh
            )));
        }
        Ok(())
    }
}

impl<T: Scalar> QlifConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !self.theta.is_finite() {
            return Err(Error::Config(format!("theta must be finite, got {}", self.theta)));
        }
        if !(self.tau_ratio >= T::zero()) || !self.tau_ratio.is_finite() {
            return Err(Error::Config(format!(
                "tau_ratio must be finite and ≥ 0, got {}",
                self.tau_ratio
            )));
        }
        if !(self.alpha_thresh > T::zero() && self.alpha_thresh < T::one()) {
            return Err(Error::Config(format!(
                "alpha_thresh must lie in (0, 1), got {}",
                self.alpha_thresh
            )));
        }
        Ok(())
    }
}

/// Runs the classical neuron over the binary view of `input`.
pub fn lif_run<T: Scalar>(input: &SpikeTrain<T>, cfg: &LifConfig<T>) -> SpikeTrain<T> {
    let bits = input.bits();
    let mut times = Vec::new();
    let mut u = T::zero();
    let mut fired = false;
    for (step, bit) in bits.into_iter().enumerate() {
        let x = if bit { T::one() } else { T::zero() };
        let reset = if fired { cfg.u_thresh } else { T::zero() };
        u = cfg.beta_decay * u + cfg.weight * x - reset;
        fired = u > cfg.u_thresh;
        if fired {
            times.push(T::of_usize(step) * input.dt());
        }
    }
    SpikeTrain::new_unchecked(times, input.t_max(), input.dt())
}

// Populations within this slack of [0, 1] are clamped; anything further out
// is a caller error.
const UNIT_INTERVAL_TOL: f64 = 1e-12;

fn checked_population<T: Scalar>(alpha: T, what: &str) -> Result<T> {
    let tol = T::of(UNIT_INTERVAL_TOL);
    if !alpha.is_finite() || alpha < -tol || alpha > T::one() + tol {
        return Err(Error::Argument(format!(
            "{what} must be a population in [0, 1], got {alpha}"
        )));
    }
    Ok(clamp_unit(alpha))
}

fn clamp_unit<T: Scalar>(alpha: T) -> T {
    alpha.max(T::zero()).min(T::one())
}

/// Angle whose single-qubit rotation from the ground state recreates the
/// excited population α: φ = 2·arcsin(√α).
pub fn qlif_memory_angle<T: Scalar>(alpha: T) -> Result<T> {
    let a = checked_population(alpha, "alpha")?;
    Ok(memory_angle(a))
}

fn memory_angle<T: Scalar>(alpha: T) -> T {
    T::of(2.0) * alpha.sqrt().asin()
}

/// Leak angle for one silent step. Composed with the memory restore φ it
/// lands exactly on the damped population:
/// sin²((γ + φ)/2) = α·exp(−τ/T1), hence
/// γ = 2·arcsin(√(α·exp(−τ/T1))) − 2·arcsin(√α) ≤ 0.
pub fn qlif_decay_angle<T: Scalar>(alpha: T, tau_ratio: T) -> Result<T> {
    let a = checked_population(alpha, "alpha")?;
    if !(tau_ratio >= T::zero()) {
        return Err(Error::Argument(format!(
            "tau_ratio must be ≥ 0, got {tau_ratio}"
        )));
    }
    Ok(decay_angle(a, tau_ratio))
}

fn decay_angle<T: Scalar>(alpha: T, tau_ratio: T) -> T {
    let damped = alpha * (-tau_ratio).exp();
    memory_angle(damped) - memory_angle(alpha)
}

/// One step of the quantum neuron: restore memory, rotate by θ (input
/// spike) or by the leak angle γ (silence), and read out the new excited
/// population. α is clamped against harmless floating-point drift.
pub fn qlif_step<T: Scalar>(alpha: T, spike_in: bool, cfg: &QlifConfig<T>) -> T {
    let a = clamp_unit(alpha);
    let phi = memory_angle(a);
    let half = T::of(0.5);
    let angle = if spike_in {
        cfg.theta + phi
    } else {
        decay_angle(a, cfg.tau_ratio) + phi
    };
    let s = (angle * half).sin();
    s * s
}

/// Branch-free form of [`qlif_step`] treating the input bit as a number
/// x ∈ {0, 1}:
///   α' = sin²((θ + φ)·x / 2) + sin²((γ + φ)·(x − 1) / 2).
/// Agrees with the case form bit for bit on both inputs: the inactive term
/// has a zero argument, and sin is odd so squaring erases the sign flip on
/// the x = 0 branch.
pub fn qlif_step_unified<T: Scalar>(alpha: T, spike_in: bool, cfg: &QlifConfig<T>) -> T {
    let a = clamp_unit(alpha);
    let phi = memory_angle(a);
    let gamma = decay_angle(a, cfg.tau_ratio);
    let x = if spike_in { T::one() } else { T::zero() };
    let half = T::of(0.5);
    let s1 = ((cfg.theta + phi) * x * half).sin();
    let s0 = ((gamma + phi) * (x - T::one()) * half).sin();
    s1 * s1 + s0 * s0
}

/// Runs the quantum neuron over the binary view of `input`, starting from
/// the ground state. Spiking (α' > alpha_thresh) emits at that step's time
/// and hard-resets the qubit.
pub fn qlif_run<T: Scalar>(input: &SpikeTrain<T>, cfg: &QlifConfig<T>) -> SpikeTrain<T> {
    let bits = input.bits();
    let mut times = Vec::new();
    let mut alpha = T::zero();
    for (step, bit) in bits.into_iter().enumerate() {
        alpha = qlif_step(alpha, bit, cfg);
        if alpha > cfg.alpha_thresh {
            times.push(T::of_usize(step) * input.dt());
            alpha = T::zero();
        }
    }
    SpikeTrain::new_unchecked(times, input.t_max(), input.dt())
}

/// Which membrane model turns encoded input trains into response trains.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum NeuronModel<T: Scalar> {
    Lif(LifConfig<T>),
    Qlif(QlifConfig<T>),
}

impl<T: Scalar> NeuronModel<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Lif(cfg) => cfg.validate(),
            Self::Qlif(cfg) => cfg.validate(),
        }
    }

    pub fn run(&self, input: &SpikeTrain<T>) -> SpikeTrain<T> {
        match self {
            Self::Lif(cfg) => lif_run(input, cfg),
            Self::Qlif(cfg) => qlif_run(input, cfg),
        }
    }
}
