//! Acceptance suite: every check the pipeline must satisfy before a release.
//!
//! Two layers. Reference runs execute the full experiment (n = 300, ten
//! seeded repetitions) and gate on aggregate scores; structural checks pit
//! each algorithmic core against a brute-force oracle on randomized input.
//! Every test prints one PASS/FAIL line with the measured values so a log
//! scan shows the whole scorecard.

use ndarray::Array2;
use qsc_cli::{run_experiment, ExperimentConfig, KernelId};
use qsc_core::dataset::{generate, scale_to_pi, DatasetKind, DatasetSpec};
use qsc_core::linalg::symmetric_eigen;
use qsc_core::metrics::{ari, default_k_range, majority_map};
use qsc_core::neuromorphic::{
    qlif_step, qlif_step_unified, spike_kernel, GridConfig, LifConfig, NeuronModel, QlifConfig,
    SpikeMetric, SpikeTrain,
};
use qsc_core::oracles;
use qsc_core::pqk::{fidelity, gram, kta, EncodingParams};
use qsc_core::spectral::{laplacian_sym, rbf_kernel, spectral_cluster, SpectralConfig};
use qsc_core::{KernelKind, KernelMatrix, SpikeKernelConfig64};
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check(name: &str, pass: bool, detail: &str) {
    println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

// ---------------------------------------------------------------- reference
// runs: full pipeline at n = 300, ten repetitions, base seed 0, defaults.

fn blobs() -> DatasetKind<f64> {
    DatasetKind::Blobs { std: 1.40 }
}

fn circles() -> DatasetKind<f64> {
    DatasetKind::Circles {
        noise: 0.1,
        factor: 0.2,
    }
}

fn moons() -> DatasetKind<f64> {
    DatasetKind::Moons { noise: 0.075 }
}

fn reference_config(kind: DatasetKind<f64>, kernel: KernelId) -> ExperimentConfig {
    ExperimentConfig::new(DatasetSpec::new(kind, 300, 0), kernel)
}

/// Runs the experiment and returns (mean accuracy, mean ARI), insisting
/// every repetition succeeded.
fn reference_scores(kind: DatasetKind<f64>, kernel: KernelId) -> (f64, f64) {
    let config = reference_config(kind, kernel);
    let run = run_experiment(&config).expect("experiment failed outright");
    let agg = run.report.aggregate.expect("no repetition succeeded");
    assert_eq!(agg.successes, config.reps, "partial run");
    (agg.mean.accuracy, agg.mean.ari)
}

#[test]
fn rbf_recovers_concentric_circles() {
    let (acc, ari) = reference_scores(circles(), KernelId::Rbf);
    check(
        "rbf circles",
        acc >= 0.99 && ari >= 0.98,
        &format!("mean accuracy {acc:.4} (need >= 0.99), mean ARI {ari:.4} (need >= 0.98)"),
    );
}

#[test]
fn rbf_scores_blobs_and_moons() {
    let (blob_acc, _) = reference_scores(blobs(), KernelId::Rbf);
    let (moon_acc, _) = reference_scores(moons(), KernelId::Rbf);
    check(
        "rbf blobs + moons",
        (0.93..=1.0).contains(&blob_acc) && moon_acc >= 0.95,
        &format!(
            "blobs mean accuracy {blob_acc:.4} (need within [0.93, 1.0]), \
             moons mean accuracy {moon_acc:.4} (need >= 0.95)"
        ),
    );
}

#[test]
fn qlif_vp_separates_circles_and_blobs() {
    let (circle_acc, _) = reference_scores(circles(), KernelId::QlifVp);
    let (blob_acc, _) = reference_scores(blobs(), KernelId::QlifVp);
    check(
        "qlif+vp circles + blobs",
        circle_acc >= 0.90 && blob_acc >= 0.80,
        &format!(
            "circles mean accuracy {circle_acc:.4} (need >= 0.90), \
             blobs mean accuracy {blob_acc:.4} (need >= 0.80)"
        ),
    );
}

#[test]
fn qlif_vr_trails_vp_on_circles() {
    let (vp_acc, _) = reference_scores(circles(), KernelId::QlifVp);
    let (vr_acc, _) = reference_scores(circles(), KernelId::QlifVr);
    let gap = vp_acc - vr_acc;
    check(
        "qlif vp-over-vr ordering on circles",
        gap >= 0.15,
        &format!(
            "vp mean accuracy {vp_acc:.4}, vr mean accuracy {vr_acc:.4}, \
             gap {gap:.4} (need >= 0.15)"
        ),
    );
}

#[test]
fn pqk_scores_blobs_and_moons() {
    let (blob_acc, _) = reference_scores(blobs(), KernelId::Pqk);
    let (moon_acc, _) = reference_scores(moons(), KernelId::Pqk);
    check(
        "pqk blobs + moons",
        blob_acc >= 0.80 && (0.65..=0.95).contains(&moon_acc),
        &format!(
            "blobs mean accuracy {blob_acc:.4} (need >= 0.80), \
             moons mean accuracy {moon_acc:.4} (need within [0.65, 0.95])"
        ),
    );
}

/// Index of the largest curve value, ties to the smallest k.
fn curve_argmax(ks: &[usize], curve: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..curve.len() {
        if curve[i] > curve[best] {
            best = i;
        }
    }
    ks[best]
}

#[test]
fn sweep_elects_three_clusters_on_blobs() {
    let mut detail = String::new();
    let mut pass = true;
    for kernel in [KernelId::Pqk, KernelId::QlifVp] {
        let mut config = reference_config(blobs(), kernel);
        config.k_range = Some(default_k_range());
        let run = run_experiment(&config).expect("experiment failed outright");
        let sweep = run.report.sweep.expect("sweep missing");
        let ari_votes = sweep.argmax_ari.get(&3).copied().unwrap_or(0);
        let v_votes = sweep.argmax_v_measure.get(&3).copied().unwrap_or(0);
        pass &= ari_votes >= 8 && v_votes >= 8;
        detail.push_str(&format!(
            "{kernel}: ARI argmax=3 in {ari_votes}/10, V-measure argmax=3 in {v_votes}/10 \
             (need >= 8/10 each); "
        ));
    }
    check("sweep blobs elects k=3", pass, detail.trim_end());
}

#[test]
fn sweep_elects_two_clusters_on_moons() {
    let mut config = reference_config(moons(), KernelId::Pqk);
    config.k_range = Some(default_k_range());
    let run = run_experiment(&config).expect("experiment failed outright");
    let sweep = run.report.sweep.expect("sweep missing");
    let ari_k = curve_argmax(&sweep.ks, &sweep.mean_ari);
    let sil_k = curve_argmax(&sweep.ks, &sweep.mean_silhouette);
    check(
        "sweep moons elects k=2",
        ari_k == 2,
        &format!("mean-ARI curve argmax {ari_k} (need 2); mean-silhouette curve argmax {sil_k}"),
    );
}

#[test]
fn qlif_vp_scores_iris() {
    let kind = DatasetKind::Csv {
        path: concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/iris.csv").into(),
        label_column: "label".into(),
    };
    let (acc, _) = reference_scores(kind, KernelId::QlifVp);
    check(
        "qlif+vp iris",
        (0.82..=0.95).contains(&acc),
        &format!("mean accuracy {acc:.4} (need within [0.82, 0.95])"),
    );
}

// ------------------------------------------------------------- structural
// checks: randomized draws against exact or brute-force oracles.

fn random_dataset(rng: &mut ChaCha8Rng, round: u64) -> qsc_core::LabeledDataset64 {
    let kind = match rng.random_range(0..3u32) {
        0 => DatasetKind::Blobs {
            std: rng.random_range(0.5..3.0),
        },
        1 => DatasetKind::Circles {
            noise: rng.random_range(0.0..0.15),
            factor: rng.random_range(0.1..0.9),
        },
        _ => DatasetKind::Moons {
            noise: rng.random_range(0.0..0.15),
        },
    };
    let n = rng.random_range(8..=16usize);
    let ds = generate(&DatasetSpec::new(kind, n, round)).unwrap();
    scale_to_pi(&ds)
}

fn random_spike_config(rng: &mut ChaCha8Rng) -> SpikeKernelConfig64 {
    let neuron = if rng.random_bool(0.5) {
        NeuronModel::Lif(LifConfig::default())
    } else {
        NeuronModel::Qlif(QlifConfig::default())
    };
    let metric = if rng.random_bool(0.5) {
        SpikeMetric::VictorPurpura {
            q: rng.random_range(0.1..5.0),
        }
    } else {
        SpikeMetric::VanRossum {
            tau: rng.random_range(0.02..0.5),
        }
    };
    SpikeKernelConfig64 {
        neuron,
        metric,
        grid: GridConfig {
            nodes_per_dim: Some([2, 3, 4, 8][rng.random_range(0..4usize)]),
            ..GridConfig::default()
        },
        gamma_scale: None,
    }
}

#[test]
fn random_kernels_are_valid_gram_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    let mut worst_asym = 0.0f64;
    for round in 0..100u64 {
        let ds = random_dataset(&mut rng, round);
        let kernel = match rng.random_range(0..3u32) {
            0 => rbf_kernel(&ds.features, rng.random_range(0.1..20.0)).unwrap(),
            1 => {
                let d = ds.features.ncols();
                let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
                    (0..d).map(|_| rng.random_range(0.0..2.0)).collect()
                };
                let p =
                    EncodingParams::new(draw(&mut rng), draw(&mut rng), draw(&mut rng)).unwrap();
                gram(&ds.features, &p).unwrap()
            }
            _ => {
                let cfg = random_spike_config(&mut rng);
                spike_kernel(&ds.features, &cfg).unwrap().kernel
            }
        };
        let k = kernel.values();
        let n = kernel.n();
        for i in 0..n {
            let diag = (k[[i, i]] - 1.0).abs();
            assert!(diag <= 1e-10, "round {round}: diagonal off by {diag}");
            for j in 0..n {
                let asym = (k[[i, j]] - k[[j, i]]).abs();
                worst_asym = worst_asym.max(asym);
                assert!(asym <= 1e-10, "round {round}: asymmetry {asym}");
                let v = k[[i, j]];
                assert!(
                    (-1e-12..=1.0 + 1e-12).contains(&v),
                    "round {round}: entry {v} outside [0, 1]"
                );
            }
        }
    }
    check(
        "kernel invariants",
        true,
        &format!(
            "100 random (dataset, kernel, hyperparameter) draws symmetric within 1e-10 \
             (worst {worst_asym:.2e}), entries in [0, 1], unit diagonal"
        ),
    );
}

#[test]
fn product_fidelity_matches_statevector_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let mut worst = 0.0f64;
    for i in 0..1000usize {
        let d = 1 + i % 4;
        let draw = |rng: &mut ChaCha8Rng, hi: f64| -> Vec<f64> {
            (0..d).map(|_| rng.random_range(0.0..hi)).collect()
        };
        let x = draw(&mut rng, std::f64::consts::PI);
        let y = draw(&mut rng, std::f64::consts::PI);
        let alpha = draw(&mut rng, 2.0);
        let beta = draw(&mut rng, 2.0);
        let gamma = draw(&mut rng, 2.0);
        let p = EncodingParams::new(alpha.clone(), beta.clone(), gamma.clone()).unwrap();
        let fast = fidelity(&x, &y, &p).unwrap();
        let slow = oracles::statevector_fidelity(&x, &y, &alpha, &beta, &gamma);
        worst = worst.max((fast - slow).abs());
    }
    check(
        "fidelity vs dense statevector",
        worst <= 1e-10,
        &format!("1000 random pairs, d in 1..=4, worst deviation {worst:.2e} (need <= 1e-10)"),
    );
}

#[test]
fn quantum_neuron_idle_step_is_amplitude_damping() {
    let mut rng = ChaCha8Rng::seed_from_u64(82);
    let mut worst = 0.0f64;
    for _ in 0..100_000u32 {
        let alpha: f64 = rng.random_range(0.0..=1.0);
        let cfg = QlifConfig::<f64> {
            tau_ratio: rng.random_range(0.0..5.0),
            ..QlifConfig::default()
        };
        let idle = qlif_step(alpha, false, &cfg);
        worst = worst.max((idle - alpha * (-cfg.tau_ratio).exp()).abs());
        // The branched and single-expression updates must agree bit for bit.
        for spike_in in [false, true] {
            let a = qlif_step(alpha, spike_in, &cfg);
            let b = qlif_step_unified(alpha, spike_in, &cfg);
            assert_eq!(a, b, "case/unified mismatch at alpha={alpha}");
        }
    }
    check(
        "qlif idle decay",
        worst <= 1e-9,
        &format!("100000 random (alpha, tau/T1) draws, worst |a' - a*exp(-tau/T1)| = {worst:.2e} (need <= 1e-9)"),
    );
}

fn grid_trains() -> Vec<SpikeTrain<f64>> {
    let slots = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut out = Vec::new();
    for mask in 0u32..32 {
        if mask.count_ones() <= 3 {
            let times: Vec<f64> = (0..5)
                .filter(|&b| mask & (1 << b) != 0)
                .map(|b| slots[b as usize])
                .collect();
            out.push(SpikeTrain::new(times, 1.0, 0.01).unwrap());
        }
    }
    out
}

fn random_train(rng: &mut ChaCha8Rng, max_spikes: usize) -> SpikeTrain<f64> {
    let count = rng.random_range(0..=max_spikes);
    let mut times: Vec<f64> = (0..count).map(|_| rng.random_range(0.0..1.0)).collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    SpikeTrain::new(times, 1.0, 0.01).unwrap()
}

#[test]
fn edit_distance_matches_exhaustive_matching_and_is_a_metric() {
    use qsc_core::neuromorphic::vp_distance;
    let trains = grid_trains();
    assert_eq!(trains.len(), 26);
    let mut worst = 0.0f64;
    for q in [0.0, 0.5, 1.0, 2.0, 10.0] {
        for a in &trains {
            for b in &trains {
                let fast = vp_distance(a, b, q);
                let slow = oracles::vp_exhaustive(a.times(), b.times(), q);
                worst = worst.max((fast - slow).abs());
                assert_eq!(fast, vp_distance(b, a, q), "symmetry must be exact");
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    for _ in 0..10_000u32 {
        let a = random_train(&mut rng, 8);
        let b = random_train(&mut rng, 8);
        let c = random_train(&mut rng, 8);
        let dac = vp_distance(&a, &c, 1.0);
        let dab = vp_distance(&a, &b, 1.0);
        let dbc = vp_distance(&b, &c, 1.0);
        assert!(dac <= dab + dbc + 1e-12, "triangle inequality violated");
    }
    check(
        "edit distance vs exhaustive matching",
        worst <= 1e-12,
        &format!(
            "all 26x26 grid-train pairs at 5 cost scales, worst deviation {worst:.2e}; \
             symmetry exact; triangle inequality over 10000 random triples"
        ),
    );
}

#[test]
fn filtered_distance_matches_numerical_integration() {
    use qsc_core::neuromorphic::vr_distance;
    let mut rng = ChaCha8Rng::seed_from_u64(84);
    let mut worst = 0.0f64;
    for i in 0..1000usize {
        let tau = [0.02, 0.05, 0.2][i % 3];
        let a = random_train(&mut rng, 6);
        let b = random_train(&mut rng, 6);
        let fast = vr_distance(&a, &b, tau);
        let slow = oracles::vr_quadrature(a.times(), b.times(), tau, 256);
        worst = worst.max((fast - slow).abs());
    }
    check(
        "filtered distance vs quadrature",
        worst <= 1e-4,
        &format!("1000 random train pairs, worst deviation {worst:.2e} (need <= 1e-4)"),
    );
}

#[test]
fn laplacian_is_psd_and_planted_blocks_are_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(85);
    let mut min_eig = f64::INFINITY;
    let mut worst_residual = 0.0f64;
    for round in 0..100u32 {
        let n = rng.random_range(4..=20usize);
        let mut a = Array2::zeros((n, n));
        for i in 0..n {
            a[[i, i]] = 1.0;
            for j in i + 1..n {
                let v = rng.random_range(0.0..1.0);
                a[[i, j]] = v;
                a[[j, i]] = v;
            }
        }
        let l = laplacian_sym(&a).unwrap();
        let eig = symmetric_eigen(&l).unwrap();
        for &lambda in &eig.eigenvalues {
            min_eig = min_eig.min(lambda);
            assert!(lambda >= -1e-8, "round {round}: eigenvalue {lambda}");
        }
        for j in 0..n {
            let lambda = eig.eigenvalues[j];
            for i in 0..n {
                let lv: f64 = (0..n).map(|m| l[[i, m]] * eig.eigenvectors[[m, j]]).sum();
                let r = (lv - lambda * eig.eigenvectors[[i, j]]).abs();
                worst_residual = worst_residual.max(r);
                assert!(r <= 1e-6, "round {round}: residual {r}");
            }
        }
    }
    // Planted partitions: strong in-block, faint cross-block affinity.
    for round in 0..100u32 {
        let k = 2 + (round as usize % 2);
        let mut labels = Vec::new();
        for block in 0..k {
            for _ in 0..rng.random_range(3..=8usize) {
                labels.push(block);
            }
        }
        labels.shuffle(&mut rng);
        let n = labels.len();
        let mut a = Array2::zeros((n, n));
        for i in 0..n {
            a[[i, i]] = 1.0;
            for j in i + 1..n {
                let v = if labels[i] == labels[j] {
                    rng.random_range(0.85..0.95)
                } else {
                    rng.random_range(0.0..0.02)
                };
                a[[i, j]] = v;
                a[[j, i]] = v;
            }
        }
        let kernel = KernelMatrix::new(KernelKind::Rbf, a).unwrap();
        let got = spectral_cluster(&kernel, &SpectralConfig::with_k(k)).unwrap();
        let score = ari(&labels, &got.labels).unwrap();
        assert_eq!(score, 1.0, "round {round}: ARI {score} for k={k}");
    }
    check(
        "laplacian spectrum + block recovery",
        true,
        &format!(
            "100 random affinities: min eigenvalue {min_eig:.2e} (need >= -1e-8), worst \
             eigenpair residual {worst_residual:.2e} (need <= 1e-6); 100 planted 2-/3-block \
             kernels recovered with ARI = 1"
        ),
    );
}

#[test]
fn clustering_scores_match_brute_force() {
    // Agreement index against direct pair counting, every partition pair.
    let mut worst_ari = 0.0f64;
    let mut pairs = 0usize;
    for n in 1..=6usize {
        let parts = oracles::all_partitions(n);
        for a in &parts {
            for b in &parts {
                let fast = ari(a, b).unwrap();
                let slow = oracles::ari_pair_counting(a, b);
                worst_ari = worst_ari.max((fast - slow).abs());
                pairs += 1;
            }
        }
    }
    assert!(worst_ari <= 1e-12, "pair-counting deviation {worst_ari}");

    // Majority vote must attain the best fixed cluster-to-class mapping.
    let mut rng = ChaCha8Rng::seed_from_u64(86);
    for round in 0..2000u32 {
        let n = rng.random_range(4..=12usize);
        let k = rng.random_range(1..=4usize);
        let c = rng.random_range(1..=4usize);
        let pred: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let truth: Vec<usize> = (0..n).map(|_| rng.random_range(0..c)).collect();
        let mapped = majority_map(&pred, &truth).unwrap();
        let acc = mapped.iter().zip(&truth).filter(|(m, t)| m == t).count() as f64 / n as f64;
        let best = oracles::best_mapping_accuracy(&pred, &truth);
        assert!(
            (acc - best).abs() <= 1e-12,
            "round {round}: majority vote {acc} vs best mapping {best}"
        );
    }

    // Alignment is invariant to positive rescaling of the kernel.
    let mut worst_kta = 0.0f64;
    for round in 0..100u64 {
        let n = rng.random_range(4..=16usize);
        let mut a: Array2<f64> = Array2::zeros((n, n));
        for i in 0..n {
            a[[i, i]] = 1.0;
            for j in i + 1..n {
                let v = rng.random_range(0.0..1.0);
                a[[i, j]] = v;
                a[[j, i]] = v;
            }
        }
        let labels: Vec<usize> = (0..n).map(|i| i % (2 + (round as usize % 2))).collect();
        let base = kta(&KernelMatrix::new(KernelKind::Rbf, a.clone()).unwrap(), &labels).unwrap();
        for scale in [0.25, 0.5, 2.0, 7.5] {
            let scaled =
                KernelMatrix::new(KernelKind::Rbf, a.mapv(|v| v * scale)).unwrap();
            let got = kta(&scaled, &labels).unwrap();
            worst_kta = worst_kta.max((got - base).abs());
        }
    }
    check(
        "score oracles",
        worst_kta <= 1e-10,
        &format!(
            "ARI matches pair counting on {pairs} partition pairs (worst {worst_ari:.2e}); \
             majority vote optimal in 2000 random draws; alignment scale-invariant within \
             {worst_kta:.2e} (need <= 1e-10)"
        ),
    );
}
