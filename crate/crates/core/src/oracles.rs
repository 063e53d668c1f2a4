//! Slow reference implementations used by tests to check the fast paths.
//!
//! Everything here is deliberately naive and derived straight from
//! definitions: a dense tensor-product statevector for the quantum kernel,
//! exhaustive matching enumeration for the edit distance, piecewise
//! quadrature for the filtered-trace distance, pair counting for the
//! adjusted Rand index, and full set-partition enumeration. Compiled only
//! with the `test-oracles` feature and fixed to f64.

use num_complex::Complex64;

type Mat2 = [[Complex64; 2]; 2];

fn rx(theta: f64) -> Mat2 {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let mis = Complex64::new(0.0, -(theta / 2.0).sin());
    [[c, mis], [mis, c]]
}

fn ry(theta: f64) -> Mat2 {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new((theta / 2.0).sin(), 0.0);
    [[c, -s], [s, c]]
}

fn rz(theta: f64) -> Mat2 {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    [
        [Complex64::new(c, -s), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(c, s)],
    ]
}

fn apply(m: &Mat2, v: [Complex64; 2]) -> [Complex64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

/// Tensor product, first factor owning the most significant qubit.
fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Full 2^d statevector of the product-encoded sample: qubit i carries
/// Rz(γᵢxᵢ)·Ry(βᵢxᵢ)·Rx(αᵢxᵢ)|0⟩.
pub fn product_encoding_statevector(
    x: &[f64],
    alpha: &[f64],
    beta: &[f64],
    gamma: &[f64],
) -> Vec<Complex64> {
    assert_eq!(x.len(), alpha.len());
    assert_eq!(x.len(), beta.len());
    assert_eq!(x.len(), gamma.len());
    let mut state = vec![Complex64::new(1.0, 0.0)];
    for i in 0..x.len() {
        let mut q = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        q = apply(&rx(alpha[i] * x[i]), q);
        q = apply(&ry(beta[i] * x[i]), q);
        q = apply(&rz(gamma[i] * x[i]), q);
        state = kron(&state, &q);
    }
    state
}

/// |⟨ψ(y)|ψ(x)⟩|² via the dense statevectors.
pub fn statevector_fidelity(
    x: &[f64],
    y: &[f64],
    alpha: &[f64],
    beta: &[f64],
    gamma: &[f64],
) -> f64 {
    let sx = product_encoding_statevector(x, alpha, beta, gamma);
    let sy = product_encoding_statevector(y, alpha, beta, gamma);
    let inner: Complex64 = sy
        .iter()
        .zip(&sx)
        .map(|(b, a)| b.conj() * a)
        .sum();
    inner.norm_sqr()
}

/// Edit distance by exhaustive search over every injective partial
/// matching between the two spike sets, crossing matchings included:
/// matched pairs pay q·|Δt|, unmatched spikes pay 1 each.
pub fn vp_exhaustive(a: &[f64], b: &[f64], q: f64) -> f64 {
    fn recurse(a: &[f64], b: &[f64], q: f64, i: usize, used: &mut Vec<bool>) -> f64 {
        if i == a.len() {
            // Remaining b spikes are inserted.
            return used.iter().filter(|&&u| !u).count() as f64;
        }
        // Leave a[i] unmatched (delete).
        let mut best = 1.0 + recurse(a, b, q, i + 1, used);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                let cost = q * (a[i] - b[j]).abs() + recurse(a, b, q, i + 1, used);
                used[j] = false;
                if cost < best {
                    best = cost;
                }
            }
        }
        best
    }
    let mut used = vec![false; b.len()];
    recurse(a, b, q, 0, &mut used)
}

/// Filtered-trace distance by numeric quadrature: each train becomes
/// f(t) = Σᵢ H(t − tᵢ)·e^{−(t − tᵢ)/τ}, and D = √((1/τ)·∫ (f_a − f_b)² dt).
/// The integrand is smooth only between spike times, so the grid is split
/// at every spike and each segment is integrated with composite Simpson
/// using the right-limit value at its left edge.
pub fn vr_quadrature(a: &[f64], b: &[f64], tau: f64, steps_per_segment: usize) -> f64 {
    // f(t) on a segment where exactly the spikes ≤ segment start are active.
    fn trace(t: f64, active: &[f64], tau: f64) -> f64 {
        active.iter().map(|&ti| (-(t - ti) / tau).exp()).sum()
    }

    let mut events: Vec<f64> = a.iter().chain(b).copied().collect();
    events.sort_by(|x, y| x.partial_cmp(y).expect("finite spike times"));
    events.dedup();
    if events.is_empty() {
        return 0.0;
    }
    // Past the last spike both traces decay; 45τ leaves a tail below 1e-39.
    let t_end = events.last().unwrap() + 45.0 * tau;
    events.push(t_end);

    let n = steps_per_segment.max(2) & !1; // Simpson needs an even count
    let mut integral = 0.0;
    for w in events.windows(2) {
        let (u, v) = (w[0], w[1]);
        if v <= u {
            continue;
        }
        let active_a: Vec<f64> = a.iter().copied().filter(|&t| t <= u).collect();
        let active_b: Vec<f64> = b.iter().copied().filter(|&t| t <= u).collect();
        let h = (v - u) / n as f64;
        let mut seg = 0.0;
        for s in 0..=n {
            let t = u + h * s as f64;
            let diff = trace(t, &active_a, tau) - trace(t, &active_b, tau);
            let weight = if s == 0 || s == n {
                1.0
            } else if s % 2 == 1 {
                4.0
            } else {
                2.0
            };
            seg += weight * diff * diff;
        }
        integral += seg * h / 3.0;
    }
    (integral / tau).max(0.0).sqrt()
}

/// Adjusted Rand index by direct pair counting. With pair classes
/// n11 (together in both), n00 (apart in both), n10, n01:
/// ARI = 2(n11·n00 − n10·n01) / ((n11+n10)(n10+n00) + (n11+n01)(n01+n00)),
/// defined as 1 when the denominator vanishes.
pub fn ari_pair_counting(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let (mut n11, mut n00, mut n10, mut n01) = (0f64, 0f64, 0f64, 0f64);
    for i in 0..n {
        for j in i + 1..n {
            let same_a = a[i] == a[j];
            let same_b = b[i] == b[j];
            match (same_a, same_b) {
                (true, true) => n11 += 1.0,
                (false, false) => n00 += 1.0,
                (true, false) => n10 += 1.0,
                (false, true) => n01 += 1.0,
            }
        }
    }
    let denom = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00);
    if denom == 0.0 {
        return 1.0;
    }
    2.0 * (n11 * n00 - n10 * n01) / denom
}

/// Every set partition of {0, …, n−1} as canonical label vectors
/// (restricted growth strings: l[0] = 0 and l[i] ≤ max(l[..i]) + 1).
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, max_used: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for label in 0..=max_used + 1 {
            prefix.push(label);
            grow(prefix, max_used.max(label), n, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut prefix = vec![0usize];
    grow(&mut prefix, 0, n, &mut out);
    out
}

/// Best possible accuracy over every mapping from cluster ids to class
/// ids, by exhaustive enumeration. The majority vote must attain this.
pub fn best_mapping_accuracy(pred: &[usize], truth: &[usize]) -> f64 {
    assert_eq!(pred.len(), truth.len());
    let mut clusters: Vec<usize> = pred.to_vec();
    clusters.sort_unstable();
    clusters.dedup();
    let mut classes: Vec<usize> = truth.to_vec();
    classes.sort_unstable();
    classes.dedup();

    let mut assignment = vec![0usize; clusters.len()];
    let mut best = 0usize;
    loop {
        let correct = pred
            .iter()
            .zip(truth)
            .filter(|&(&p, &t)| {
                let ci = clusters.binary_search(&p).unwrap();
                classes[assignment[ci]] == t
            })
            .count();
        best = best.max(correct);

        // Odometer over classes^clusters.
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                return best as f64 / truth.len() as f64;
            }
            assignment[pos] += 1;
            if assignment[pos] < classes.len() {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}
