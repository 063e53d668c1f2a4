//! Dense symmetric eigendecomposition.
//!
//! Householder reduction to tridiagonal form followed by the implicitly
//! shifted QL iteration, the classic EISPACK tred2/tql2 pair. Cubic in n
//! with a small constant, which comfortably covers the few-hundred-sample
//! graph Laplacians this crate decomposes.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

// QL sweeps per eigenvalue before declaring failure. EISPACK used 30;
// a little headroom costs nothing.
const MAX_QL_SWEEPS: usize = 64;

/// Eigenpairs of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    /// Ascending. Ties keep the order in which the QL iteration found them.
    pub eigenvalues: Vec<T>,
    /// Column j is the unit eigenvector for `eigenvalues[j]`, with its
    /// first nonzero component made positive.
    pub eigenvectors: Array2<T>,
}

/// Full eigendecomposition of a symmetric matrix.
pub fn symmetric_eigen<T: Scalar>(a: &Array2<T>) -> Result<SymmetricEigen<T>> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::Argument(format!(
            "eigendecomposition needs a nonempty square matrix, got {}×{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let mut max_abs = T::zero();
    for &v in a.iter() {
        if !v.is_finite() {
            return Err(Error::Argument("matrix has a non-finite entry".into()));
        }
        max_abs = max_abs.max(v.abs());
    }
    let sym_tol = T::of(1e-8) * (T::one() + max_abs);
    for i in 0..n {
        for j in i + 1..n {
            if (a[[i, j]] - a[[j, i]]).abs() > sym_tol {
                return Err(Error::Argument(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }

    let mut v = a.clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e)?;

    // Ascending eigenvalue order; stable sort keeps tie order deterministic.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| d[p].partial_cmp(&d[q]).expect("finite eigenvalues"));
    let eigenvalues: Vec<T> = order.iter().map(|&p| d[p]).collect();
    let mut eigenvectors = Array2::zeros((n, n));
    for (j, &p) in order.iter().enumerate() {
        let flip = matches!(
            (0..n).map(|k| v[[k, p]]).find(|c| *c != T::zero()),
            Some(first) if first < T::zero()
        );
        for k in 0..n {
            let c = v[[k, p]];
            eigenvectors[[k, j]] = if flip { -c } else { c };
        }
    }
    Ok(SymmetricEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Householder reduction of the symmetric matrix in `v` to tridiagonal
/// form: diagonal into `d`, subdiagonal into `e[1..]`, and `v` left holding
/// the accumulated orthogonal transformation.
fn tred2<T: Scalar>(v: &mut Array2<T>, d: &mut [T], e: &mut [T]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[[n - 1, j]];
    }

    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[[i - 1, j]];
                v[[i, j]] = T::zero();
                v[[j, i]] = T::zero();
            }
        } else {
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = T::zero();
            }

            for j in 0..i {
                let f = d[j];
                v[[j, i]] = f;
                let mut g = e[j] + v[[j, j]] * f;
                for k in j + 1..i {
                    g += v[[k, j]] * d[k];
                    e[k] += v[[k, j]] * f;
                }
                e[j] = g;
            }
            let mut f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    let delta = f * e[k] + g * d[k];
                    v[[k, j]] -= delta;
                }
                d[j] = v[[i - 1, j]];
                v[[i, j]] = T::zero();
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[[n - 1, i]] = v[[i, i]];
        v[[i, i]] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for (k, item) in d.iter_mut().enumerate().take(i + 1) {
                *item = v[[k, i + 1]] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g += v[[k, i + 1]] * v[[k, j]];
                }
                for k in 0..=i {
                    let delta = g * d[k];
                    v[[k, j]] -= delta;
                }
            }
        }
        for k in 0..=i {
            v[[k, i + 1]] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[[n - 1, j]];
        v[[n - 1, j]] = T::zero();
    }
    v[[n - 1, n - 1]] = T::one();
    e[0] = T::zero();
}

/// Implicitly shifted QL iteration on the tridiagonal matrix (d, e),
/// rotating the transformation in `v` along so its columns end up as
/// eigenvectors. Fails only if some eigenvalue refuses to converge.
fn tql2<T: Scalar>(v: &mut Array2<T>, d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_QL_SWEEPS {
                    return Err(Error::Numeric(format!(
                        "QL iteration for eigenvalue {l} did not converge in {MAX_QL_SWEEPS} sweeps"
                    )));
                }

                let g = d[l];
                let two = T::of(2.0);
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[[k, i + 1]];
                        v[[k, i + 1]] = s * v[[k, i]] + c * h;
                        v[[k, i]] = c * v[[k, i]] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}
