//! Bulk randomized checks of the quantum neuron's state update.

use qsc_core::neuromorphic::{
    qlif_decay_angle, qlif_memory_angle, qlif_step, qlif_step_unified, QlifConfig,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn silent_steps_realize_amplitude_damping() {
    // A step without input must damp the population by exactly e^{-τ/T1}.
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100_000 {
        let alpha: f64 = rng.random_range(0.0..=1.0);
        let tau_ratio = rng.random_range(0.0..3.0);
        let cfg = QlifConfig { theta: 0.0, tau_ratio, alpha_thresh: 0.5 };
        let next = qlif_step(alpha, false, &cfg);
        let expected = alpha * (-tau_ratio).exp();
        assert!(
            (next - expected).abs() <= 1e-9,
            "damping identity broke: alpha={alpha} tau_ratio={tau_ratio} \
             next={next} expected={expected}"
        );
    }
}

#[test]
fn unified_update_is_bit_identical_to_case_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..100_000 {
        let alpha: f64 = rng.random_range(0.0..=1.0);
        let cfg = QlifConfig {
            theta: rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            tau_ratio: rng.random_range(0.0..2.0),
            alpha_thresh: 0.5,
        };
        let bit = rng.random_range(0..2) == 1;
        let a = qlif_step(alpha, bit, &cfg);
        let b = qlif_step_unified(alpha, bit, &cfg);
        assert_eq!(a.to_bits(), b.to_bits(), "alpha={alpha} bit={bit} cfg={cfg:?}");
    }
}

#[test]
fn updated_population_stays_physical() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..100_000 {
        let alpha: f64 = rng.random_range(0.0..=1.0);
        let cfg = QlifConfig {
            theta: rng.random_range(-10.0..10.0),
            tau_ratio: rng.random_range(0.0..5.0),
            alpha_thresh: 0.5,
        };
        for bit in [false, true] {
            let next = qlif_step(alpha, bit, &cfg);
            assert!((0.0..=1.0).contains(&next), "alpha'={next} escaped [0, 1]");
        }
    }
}

#[test]
fn angle_helpers_respect_their_ranges() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..10_000 {
        let alpha: f64 = rng.random_range(0.0..=1.0);
        let phi = qlif_memory_angle(alpha).unwrap();
        assert!((0.0..=std::f64::consts::PI).contains(&phi));
        // Damping only shrinks the population, so the leak angle never
        // rotates upward.
        let gamma = qlif_decay_angle(alpha, rng.random_range(0.0..4.0)).unwrap();
        assert!(gamma <= 0.0, "leak angle {gamma} points upward");
    }
}
