//! Parameterized quantum fidelity kernel.
//!
//! Each scaled feature x_i drives one qubit through Rz(γ_i·x_i)·Ry(β_i·x_i)·
//! Rx(α_i·x_i) applied to |0⟩, with the convention R_a(θ) = cos(θ/2)·I −
//! i·sin(θ/2)·A. The circuit has no entangling gates, so the full-register
//! fidelity factorizes into a product of per-qubit overlaps and every kernel
//! entry costs O(d) complex 2-vector operations instead of a 2^d statevector.
//!
//! Kernel quality is scored by kernel-target alignment (KTA), and
//! [`search_params`] looks for good per-feature scaling parameters by seeded
//! uniform random search over [0,2]^{3d}.

use ndarray::Array2;
use num_complex::Complex;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{KernelKind, KernelMatrix};
use crate::scalar::Scalar;

/// Per-feature rotation scalings (α, β, γ), each restricted to [0, 2].
///
/// The z-rotation scaling is named `gamma_rot` to keep it apart from the
/// Gaussian width γ used by the RBF and distance kernels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingParams<T> {
    pub alpha: Vec<T>,
    pub beta: Vec<T>,
    pub gamma_rot: Vec<T>,
}

impl<T: Scalar> EncodingParams<T> {
    pub fn new(alpha: Vec<T>, beta: Vec<T>, gamma_rot: Vec<T>) -> Result<Self> {
        let p = Self {
            alpha,
            beta,
            gamma_rot,
        };
        p.check()?;
        Ok(p)
    }

    /// All-zero scalings: every qubit stays in |0⟩ and the kernel is all-ones.
    pub fn zeros(d: usize) -> Self {
        Self {
            alpha: vec![T::zero(); d],
            beta: vec![T::zero(); d],
            gamma_rot: vec![T::zero(); d],
        }
    }

    pub fn d(&self) -> usize {
        self.alpha.len()
    }

    fn check(&self) -> Result<()> {
        if self.beta.len() != self.alpha.len() || self.gamma_rot.len() != self.alpha.len() {
            return Err(Error::Config(format!(
                "encoding parameter vectors must share a length, got {}/{}/{}",
                self.alpha.len(),
                self.beta.len(),
                self.gamma_rot.len()
            )));
        }
        let hi = T::of(2.0);
        for v in [&self.alpha, &self.beta, &self.gamma_rot] {
            if let Some(&bad) = v.iter().find(|x| !x.is_finite() || **x < T::zero() || **x > hi) {
                return Err(Error::Config(format!(
                    "encoding parameter {bad} outside [0, 2]"
                )));
            }
        }
        Ok(())
    }

    pub fn write_json<P: AsRef<std::path::Path>>(&self, path: P) -> Result<()>
    where
        T: Serialize,
    {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), self)?;
        Ok(())
    }

    pub fn read_json<P: AsRef<std::path::Path>>(path: P) -> Result<Self>
    where
        T: serde::de::DeserializeOwned,
    {
        let file = std::fs::File::open(path)?;
        let p: Self = serde_json::from_reader(std::io::BufReader::new(file))?;
        p.check()?;
        Ok(p)
    }
}

/// Single-qubit state in the computational basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitAmplitudes<T> {
    pub a0: Complex<T>,
    pub a1: Complex<T>,
}

impl<T: Scalar> QubitAmplitudes<T> {
    pub fn norm_sqr(&self) -> T {
        self.a0.norm_sqr() + self.a1.norm_sqr()
    }
}

/// Applies Rz(γ·x)·Ry(β·x)·Rx(α·x) to |0⟩.
pub fn encode_qubit<T: Scalar>(x: T, alpha: T, beta: T, gamma_rot: T) -> QubitAmplitudes<T> {
    let half = T::of(0.5);

    // Rx(θ)|0⟩ = (cos θ/2, −i sin θ/2)
    let tx = alpha * x * half;
    let mut a0 = Complex::new(tx.cos(), T::zero());
    let mut a1 = Complex::new(T::zero(), -tx.sin());

    // Ry(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]
    let ty = beta * x * half;
    let (c, s) = (ty.cos(), ty.sin());
    let b0 = a0 * c - a1 * s;
    let b1 = a0 * s + a1 * c;
    a0 = b0;
    a1 = b1;

    // Rz(θ) = diag(e^{−iθ/2}, e^{iθ/2})
    let tz = gamma_rot * x * half;
    let (c, s) = (tz.cos(), tz.sin());
    a0 *= Complex::new(c, -s);
    a1 *= Complex::new(c, s);

    QubitAmplitudes { a0, a1 }
}

fn qubit_overlap_sqr<T: Scalar>(a: &QubitAmplitudes<T>, b: &QubitAmplitudes<T>) -> T {
    // |⟨b|a⟩|²
    (b.a0.conj() * a.a0 + b.a1.conj() * a.a1).norm_sqr()
}

/// |⟨φ(x')|φ(x)⟩|² as the product of per-qubit overlap probabilities.
pub fn fidelity<T: Scalar>(x: &[T], x_other: &[T], p: &EncodingParams<T>) -> Result<T> {
    if x.len() != x_other.len() || x.len() != p.d() {
        return Err(Error::Argument(format!(
            "fidelity dimension mismatch: {} vs {} with {} parameters",
            x.len(),
            x_other.len(),
            p.d()
        )));
    }
    let mut f = T::one();
    for i in 0..x.len() {
        let a = encode_qubit(x[i], p.alpha[i], p.beta[i], p.gamma_rot[i]);
        let b = encode_qubit(x_other[i], p.alpha[i], p.beta[i], p.gamma_rot[i]);
        f *= qubit_overlap_sqr(&a, &b);
    }
    Ok(f)
}

fn encode_sample<T: Scalar>(row: &[T], p: &EncodingParams<T>) -> Vec<QubitAmplitudes<T>> {
    row.iter()
        .enumerate()
        .map(|(i, &x)| encode_qubit(x, p.alpha[i], p.beta[i], p.gamma_rot[i]))
        .collect()
}

/// Full fidelity Gram matrix. The diagonal is set to exactly 1 and only the
/// upper triangle is computed, then mirrored.
pub fn gram<T: Scalar>(features: &Array2<T>, p: &EncodingParams<T>) -> Result<KernelMatrix<T>> {
    let n = features.nrows();
    if n < 2 {
        return Err(Error::Argument(format!("gram needs n ≥ 2 samples, got {n}")));
    }
    if features.ncols() != p.d() {
        return Err(Error::Argument(format!(
            "gram dimension mismatch: {} features vs {} parameters",
            features.ncols(),
            p.d()
        )));
    }
    let states: Vec<Vec<QubitAmplitudes<T>>> = features
        .rows()
        .into_iter()
        .map(|row| encode_sample(row.as_slice().expect("row-major features"), p))
        .collect();

    let rows: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    states[i]
                        .iter()
                        .zip(states[j].iter())
                        .map(|(a, b)| qubit_overlap_sqr(a, b))
                        .fold(T::one(), |acc, f| acc * f)
                })
                .collect()
        })
        .collect();

    let mut values = Array2::from_elem((n, n), T::one());
    for (i, row) in rows.into_iter().enumerate() {
        for (offset, v) in row.into_iter().enumerate() {
            let j = i + 1 + offset;
            values[[i, j]] = v;
            values[[j, i]] = v;
        }
    }
    KernelMatrix::new(KernelKind::Pqk, values)
}

/// Kernel-target alignment Tr(KᵀYYᵀ) / (√Tr(KᵀK) · √Tr((YYᵀ)²)) with Y the
/// n×C one-hot label matrix. Undefined for the zero matrix.
pub fn kta<T: Scalar>(k: &KernelMatrix<T>, labels: &[usize]) -> Result<T> {
    let n = k.n();
    if labels.len() != n {
        return Err(Error::Argument(format!(
            "kta needs one label per sample: {} labels for n={n}",
            labels.len()
        )));
    }
    if n == 0 {
        return Err(Error::Argument("kta of an empty kernel".into()));
    }
    let v = k.values();
    let mut aligned = T::zero();
    let mut frob2 = T::zero();
    for i in 0..n {
        for j in 0..n {
            let x = v[[i, j]];
            frob2 += x * x;
            if labels[i] == labels[j] {
                aligned += x;
            }
        }
    }
    if frob2 == T::zero() {
        return Err(Error::UndefinedMetric(
            "kernel-target alignment of the zero matrix".into(),
        ));
    }
    // Tr((YYᵀ)²) counts same-class pairs: Σ_c n_c².
    let n_classes = labels.iter().copied().max().unwrap_or(0) + 1;
    let mut counts = vec![0usize; n_classes];
    for &l in labels {
        counts[l] += 1;
    }
    let target2 = counts
        .iter()
        .map(|&c| T::of_usize(c * c))
        .fold(T::zero(), |a, b| a + b);
    Ok(aligned / (frob2.sqrt() * target2.sqrt()))
}

/// 1 − KTA, the quantity minimized by the parameter search.
pub fn kta_loss<T: Scalar>(k: &KernelMatrix<T>, labels: &[usize]) -> Result<T> {
    Ok(T::one() - kta(k, labels)?)
}

/// Outcome of [`search_params`]: the winning candidate plus the full
/// evaluation trace in sampling order.
#[derive(Debug, Clone)]
pub struct SearchResult<T> {
    pub best_params: EncodingParams<T>,
    pub best_kta: T,
    pub trace: Vec<(EncodingParams<T>, T)>,
}

/// Seeded uniform random search over [0,2]^{3d}: samples `budget`
/// candidates, scores each full Gram by KTA, and returns the argmax
/// (ties broken by earliest candidate index).
pub fn search_params<T: Scalar>(
    features: &Array2<T>,
    labels: &[usize],
    budget: usize,
    seed: u64,
) -> Result<SearchResult<T>> {
    if budget == 0 {
        return Err(Error::Argument("search budget must be ≥ 1".into()));
    }
    let n = features.nrows();
    if n < 2 {
        return Err(Error::Argument(format!("search needs n ≥ 2 samples, got {n}")));
    }
    if labels.len() != n {
        return Err(Error::Argument(format!(
            "search needs one label per sample: {} labels for n={n}",
            labels.len()
        )));
    }
    let d = features.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<T> {
        (0..d).map(|_| T::of(rng.random_range(0.0..2.0))).collect()
    };
    let candidates: Vec<EncodingParams<T>> = (0..budget)
        .map(|_| EncodingParams {
            alpha: draw(&mut rng),
            beta: draw(&mut rng),
            gamma_rot: draw(&mut rng),
        })
        .collect();

    let scores: Vec<T> = candidates
        .par_iter()
        .map(|p| {
            let k = gram(features, p).expect("candidate dimensions match by construction");
            // The Gram diagonal is exactly 1, so the zero-matrix case cannot occur.
            kta(&k, labels).expect("unit-diagonal kernel has defined alignment")
        })
        .collect();

    let mut best = 0usize;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    let trace: Vec<(EncodingParams<T>, T)> =
        candidates.iter().cloned().zip(scores.iter().copied()).collect();
    Ok(SearchResult {
        best_params: candidates[best].clone(),
        best_kta: scores[best],
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use std::f64::consts::PI;

    #[test]
    fn zero_params_leave_ground_state() {
        let s = encode_qubit(1.3f64, 0.0, 0.0, 0.0);
        assert_eq!(s.a0, Complex::new(1.0, 0.0));
        assert_eq!(s.a1, Complex::new(0.0, 0.0));
    }

    #[test]
    fn x_rotation_by_pi_flips_with_phase() {
        // Rx(π)|0⟩ = (0, −i)
        let s = encode_qubit(PI, 1.0f64, 0.0, 0.0);
        assert_abs_diff_eq!(s.a0.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.a0.im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.a1.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.a1.im, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn y_rotation_by_half_pi_is_real_superposition() {
        // Ry(π/2)|0⟩ = (cos π/4, sin π/4)
        let s = encode_qubit(PI / 2.0, 0.0f64, 1.0, 0.0);
        assert_abs_diff_eq!(s.a0.re, (PI / 4.0).cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.a1.re, (PI / 4.0).sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.a0.im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.a1.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn states_stay_normalized() {
        for i in 0..50 {
            let x = PI * (i as f64) / 49.0;
            let s = encode_qubit(x, 1.7f64, 0.3, 1.9);
            assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn identical_inputs_have_unit_fidelity() {
        let p = EncodingParams::new(vec![1.0], vec![0.5], vec![1.5]).unwrap();
        let f = fidelity(&[2.0f64], &[2.0], &p).unwrap();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn orthogonal_states_have_zero_fidelity() {
        // d=1, α=1: Rx(π)|0⟩ ⟂ |0⟩.
        let p = EncodingParams::new(vec![1.0], vec![0.0], vec![0.0]).unwrap();
        let f = fidelity(&[PI], &[0.0f64], &p).unwrap();
        assert_abs_diff_eq!(f, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn fidelity_factorizes_over_features() {
        let p2 = EncodingParams::new(vec![1.0, 0.7], vec![0.2, 1.1], vec![1.9, 0.4]).unwrap();
        let x = [0.3f64, 2.0];
        let y = [1.2f64, 0.9];
        let f12 = fidelity(&x, &y, &p2).unwrap();
        let p_a = EncodingParams::new(vec![1.0], vec![0.2], vec![1.9]).unwrap();
        let p_b = EncodingParams::new(vec![0.7], vec![1.1], vec![0.4]).unwrap();
        let f1 = fidelity(&x[..1], &y[..1], &p_a).unwrap();
        let f2 = fidelity(&x[1..], &y[1..], &p_b).unwrap();
        assert_abs_diff_eq!(f12, f1 * f2, epsilon = 1e-14);
    }

    #[test]
    fn fidelity_is_symmetric() {
        let p = EncodingParams::new(vec![1.3, 0.2], vec![0.9, 1.8], vec![0.1, 1.0]).unwrap();
        let x = [0.4f64, 3.0];
        let y = [2.2f64, 0.1];
        let fxy = fidelity(&x, &y, &p).unwrap();
        let fyx = fidelity(&y, &x, &p).unwrap();
        assert_abs_diff_eq!(fxy, fyx, epsilon = 1e-12);
    }

    #[test]
    fn zero_params_give_all_ones_gram() {
        let x = array![[0.1f64, 2.0], [1.0, 0.3], [2.8, 1.1]];
        let k = gram(&x, &EncodingParams::zeros(2)).unwrap();
        assert!(k.values().iter().all(|&v| v == 1.0));
        assert_eq!(k.kind(), KernelKind::Pqk);
    }

    #[test]
    fn duplicated_sample_duplicates_gram_row() {
        let x = array![[0.1f64, 2.0], [1.0, 0.3], [0.1, 2.0]];
        let p = EncodingParams::new(vec![1.0, 0.5], vec![0.3, 1.2], vec![0.8, 0.2]).unwrap();
        let k = gram(&x, &p).unwrap();
        for j in 0..3 {
            assert_abs_diff_eq!(k.values()[[0, j]], k.values()[[2, j]], epsilon = 1e-14);
        }
        k.validate_strict().unwrap();
    }

    #[test]
    fn kta_of_identity_with_distinct_labels_is_one() {
        let k = KernelMatrix::new(KernelKind::Pqk, Array2::<f64>::eye(2)).unwrap();
        assert_abs_diff_eq!(kta(&k, &[0, 1]).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn kta_of_identity_with_single_class() {
        // YYᵀ all-ones: aligned = 2, √Tr(KᵀK) = √2, √Tr((YYᵀ)²) = 2.
        let k = KernelMatrix::new(KernelKind::Pqk, Array2::<f64>::eye(2)).unwrap();
        assert_abs_diff_eq!(
            kta(&k, &[0, 0]).unwrap(),
            1.0 / 2.0f64.sqrt(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            kta_loss(&k, &[0, 0]).unwrap(),
            1.0 - 1.0 / 2.0f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn kta_of_label_outer_product_is_one() {
        let labels = [0usize, 0, 1, 1, 2];
        let n = labels.len();
        let v = Array2::from_shape_fn((n, n), |(i, j)| {
            if labels[i] == labels[j] {
                1.0
            } else {
                0.0
            }
        });
        let k = KernelMatrix::new(KernelKind::Pqk, v).unwrap();
        assert_abs_diff_eq!(kta(&k, &labels).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn kta_of_zero_matrix_is_undefined() {
        let k = KernelMatrix::new(KernelKind::Pqk, Array2::<f64>::zeros((3, 3))).unwrap();
        assert!(kta(&k, &[0, 1, 0]).is_err());
    }

    #[test]
    fn search_with_unit_budget_returns_the_sample() {
        let x = array![[0.0f64, 1.0], [2.0, 0.5], [1.5, 2.5]];
        let labels = [0, 1, 1];
        let r = search_params(&x, &labels, 1, 9).unwrap();
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.best_params, r.trace[0].0);
        assert_eq!(r.best_kta, r.trace[0].1);
    }

    #[test]
    fn search_is_deterministic_and_never_suboptimal() {
        let x = array![
            [0.0f64, 1.0],
            [0.2, 2.0],
            [3.0, 1.1],
            [2.9, 0.2],
            [0.1, 0.5],
            [3.1, 2.2]
        ];
        let labels = [0, 0, 1, 1, 0, 1];
        let a = search_params(&x, &labels, 32, 1234).unwrap();
        let b = search_params(&x, &labels, 32, 1234).unwrap();
        assert_eq!(a.best_params, b.best_params);
        assert_eq!(a.best_kta, b.best_kta);
        assert!(a.trace.iter().all(|&(_, s)| s <= a.best_kta));
    }

    #[test]
    fn search_beats_the_uninformative_all_ones_kernel() {
        // Classes separated along feature 0 only.
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            let jitter = 0.01 * i as f64;
            rows.push([0.1 + jitter, 1.0 + jitter]);
            labels.push(0usize);
            rows.push([3.0 + jitter, 1.0 + jitter]);
            labels.push(1usize);
        }
        let n = rows.len();
        let x = Array2::from_shape_fn((n, 2), |(i, j)| rows[i][j]);
        // KTA of the all-ones kernel: Σ n_c² / (n · √(Σ n_c²)).
        let same: f64 = labels
            .iter()
            .map(|&l| labels.iter().filter(|&&m| m == l).count() as f64)
            .sum();
        let ones_kta = same / (n as f64 * same.sqrt());
        let r = search_params(&x, &labels, 64, 77).unwrap();
        assert!(
            r.best_kta >= ones_kta,
            "search KTA {} below all-ones baseline {}",
            r.best_kta,
            ones_kta
        );
    }

    #[test]
    fn params_outside_range_are_rejected() {
        assert!(EncodingParams::new(vec![2.5f64], vec![0.0], vec![0.0]).is_err());
        assert!(EncodingParams::new(vec![-0.1f64], vec![0.0], vec![0.0]).is_err());
        assert!(EncodingParams::new(vec![1.0f64], vec![0.0, 0.0], vec![0.0]).is_err());
    }
}
