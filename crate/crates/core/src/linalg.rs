//! Dense symmetric eigendecomposition and operator-norm helpers.
//!
//! Householder tridiagonalization followed by implicit-shift QL, the classic
//! EISPACK tred2/tql2 pair. Deterministic and dependency-free; the sizes used
//! here (up to a few thousand) stay well within reach.

use crate::error::{CoreError, Result};
use ndarray::{Array1, Array2};

/// Reduce a symmetric matrix to tridiagonal form, accumulating the transform
/// when `vectors` is set. Returns (diagonal, off-diagonal).
fn tridiagonalize(a: &mut Array2<f64>, vectors: bool) -> (Vec<f64>, Vec<f64>) {
    let n = a.nrows();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    for i in (1..n).rev() {
        let l = i;
        let mut h = 0.0;
        let mut scale = 0.0;
        if l > 1 {
            for k in 0..l {
                scale += a[[i, k]].abs();
            }
            if scale == 0.0 {
                e[i] = a[[i, l - 1]];
            } else {
                for k in 0..l {
                    a[[i, k]] /= scale;
                    h += a[[i, k]] * a[[i, k]];
                }
                let mut f = a[[i, l - 1]];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[[i, l - 1]] = f - g;
                f = 0.0;
                for j in 0..l {
                    if vectors {
                        a[[j, i]] = a[[i, j]] / h;
                    }
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[[j, k]] * a[[i, k]];
                    }
                    for k in (j + 1)..l {
                        g += a[[k, j]] * a[[i, k]];
                    }
                    e[j] = g / h;
                    f += e[j] * a[[i, j]];
                }
                let hh = f / (h + h);
                for j in 0..l {
                    let f = a[[i, j]];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[[j, k]] -= f * e[k] + g * a[[i, k]];
                    }
                }
            }
        } else {
            e[i] = a[[i, l - 1]];
        }
        d[i] = h;
    }

    if vectors {
        d[0] = 0.0;
    }
    e[0] = 0.0;
    for i in 0..n {
        if vectors {
            if d[i] != 0.0 {
                for j in 0..i {
                    let mut g = 0.0;
                    for k in 0..i {
                        g += a[[i, k]] * a[[k, j]];
                    }
                    for k in 0..i {
                        a[[k, j]] -= g * a[[k, i]];
                    }
                }
            }
            d[i] = a[[i, i]];
            a[[i, i]] = 1.0;
            for j in 0..i {
                a[[j, i]] = 0.0;
                a[[i, j]] = 0.0;
            }
        } else {
            d[i] = a[[i, i]];
        }
    }
    (d, e)
}

/// Implicit-shift QL on a tridiagonal matrix; `z` (when present) accumulates
/// eigenvectors starting from the tridiagonalizing transform.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Array2<f64>>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(CoreError::Numerical(
                    "symmetric QL failed to converge within 50 iterations".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zm) = z.as_deref_mut() {
                    for k in 0..n {
                        f = zm[[k, i + 1]];
                        zm[[k, i + 1]] = s * zm[[k, i]] + c * f;
                        zm[[k, i]] = c * zm[[k, i]] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Full eigendecomposition of a symmetric matrix. Eigenvalues ascending,
/// eigenvectors as the corresponding columns.
pub fn sym_eigen(a: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(CoreError::Domain("sym_eigen requires a square matrix".into()));
    }
    let mut work = a.clone();
    let (mut d, mut e) = tridiagonalize(&mut work, true);
    ql_implicit(&mut d, &mut e, Some(&mut work))?;
    sort_eigen(&mut d, Some(&mut work));
    Ok((Array1::from(d), work))
}

/// Eigenvalues only; avoids accumulating the transform.
pub fn sym_eigenvalues(a: &Array2<f64>) -> Result<Array1<f64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(CoreError::Domain(
            "sym_eigenvalues requires a square matrix".into(),
        ));
    }
    let mut work = a.clone();
    let (mut d, mut e) = tridiagonalize(&mut work, false);
    ql_implicit(&mut d, &mut e, None)?;
    sort_eigen(&mut d, None);
    Ok(Array1::from(d))
}

fn sort_eigen(d: &mut [f64], z: Option<&mut Array2<f64>>) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    d.copy_from_slice(&sorted);
    if let Some(z) = z {
        let zc = z.clone();
        for (new, &old) in order.iter().enumerate() {
            z.column_mut(new).assign(&zc.column(old));
        }
    }
}

/// Symmetric PSD square root with negative eigenvalues clamped to zero.
pub fn psd_sqrt(a: &Array2<f64>) -> Result<Array2<f64>> {
    let (vals, vecs) = sym_eigen(a)?;
    let n = a.nrows();
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let s = v.max(0.0).sqrt();
        scaled.column_mut(j).mapv_inplace(|x| x * s);
    }
    let mut out = Array2::zeros((n, n));
    ndarray::linalg::general_mat_mul(1.0, &scaled, &vecs.t(), 0.0, &mut out);
    Ok(out)
}

/// Operator norm (largest |eigenvalue|) of a symmetric matrix by power
/// iteration with a deterministic start.
pub fn op_norm_sym(a: &Array2<f64>, iters: usize) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 0.0;
    }
    let mut v = Array1::from_iter((0..n).map(|i| 1.0 + 0.37 * ((i as f64 * 0.7311).sin())));
    let norm = v.dot(&v).sqrt();
    v.mapv_inplace(|x| x / norm);
    let mut lambda = 0.0;
    for _ in 0..iters {
        let w = a.dot(&v);
        let norm = w.dot(&w).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm;
        v = w / norm;
    }
    lambda
}
