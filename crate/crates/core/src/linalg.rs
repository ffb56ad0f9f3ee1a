//! Dense symmetric eigensolvers and deterministic parallel vector kernels.
//!
//! The eigensolvers are classic Householder tridiagonalization followed by
//! implicit-shift QL, plus a cyclic Jacobi routine for small matrices. They
//! are self-contained so the whole solver has no linear algebra backend
//! dependency.
//!
//! The vector kernels split work into fixed-size chunks and reduce partials
//! in chunk order, so results are bitwise identical for any thread count.

use crate::error::{Result, SolverError};
use ndarray::Array2;
use rayon::prelude::*;

pub const PAR_CHUNK: usize = 8192;

/// Dot product, deterministic under parallel execution.
pub fn par_dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    if a.len() <= PAR_CHUNK {
        return a.iter().zip(b).map(|(&x, &y)| x * y).sum();
    }
    let partials: Vec<f64> = a
        .par_chunks(PAR_CHUNK)
        .zip(b.par_chunks(PAR_CHUNK))
        .map(|(ca, cb)| ca.iter().zip(cb).map(|(&x, &y)| x * y).sum::<f64>())
        .collect();
    partials.iter().sum()
}

/// y += alpha * x, elementwise parallel.
pub fn par_axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    assert_eq!(y.len(), x.len());
    if y.len() <= PAR_CHUNK {
        for (yy, &xx) in y.iter_mut().zip(x) {
            *yy += alpha * xx;
        }
        return;
    }
    y.par_chunks_mut(PAR_CHUNK)
        .zip(x.par_chunks(PAR_CHUNK))
        .for_each(|(cy, cx)| {
            for (yy, &xx) in cy.iter_mut().zip(cx) {
                *yy += alpha * xx;
            }
        });
}

/// y *= alpha, elementwise parallel.
pub fn par_scale(y: &mut [f64], alpha: f64) {
    if y.len() <= PAR_CHUNK {
        for yy in y.iter_mut() {
            *yy *= alpha;
        }
        return;
    }
    y.par_chunks_mut(PAR_CHUNK).for_each(|cy| {
        for yy in cy.iter_mut() {
            *yy *= alpha;
        }
    });
}

/// Euclidean norm via the deterministic dot product.
pub fn par_norm(a: &[f64]) -> f64 {
    par_dot(a, a).sqrt()
}

/// Householder reduction of a symmetric matrix (flat row-major) to
/// tridiagonal form. On exit d holds the diagonal and e the subdiagonal
/// (e[i] couples rows i-1 and i, e[0] = 0). With `vectors` set, `a` is
/// overwritten by the accumulated orthogonal transform Q with Q^T A Q = T.
fn tred2(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64], vectors: bool) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    if vectors {
                        a[j * n + i] = a[i * n + j] / h;
                    }
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g_acc += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    if vectors {
        for i in 0..n {
            if d[i] != 0.0 {
                for j in 0..i {
                    let mut g = 0.0;
                    for k in 0..i {
                        g += a[i * n + k] * a[k * n + j];
                    }
                    for k in 0..i {
                        a[k * n + j] -= g * a[k * n + i];
                    }
                }
            }
            d[i] = a[i * n + i];
            a[i * n + i] = 1.0;
            for j in 0..i {
                a[j * n + i] = 0.0;
                a[i * n + j] = 0.0;
            }
        }
    } else {
        for i in 0..n {
            d[i] = a[i * n + i];
        }
    }
}

/// Implicit-shift QL iteration on a tridiagonal matrix. d is the diagonal,
/// e the subdiagonal in tred2's convention (e[0] = 0). If z is given (flat
/// row-major, columns become eigenvectors), the rotations are accumulated
/// into it; pass Q from tred2 or the identity for a plain tridiagonal.
fn tqli(d: &mut [f64], e: &mut [f64], n: usize, mut z: Option<&mut [f64]>) -> Result<()> {
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
            if iter > 60 {
                return Err(SolverError::NotConverged {
                    reason: format!("QL iteration stalled at eigenvalue {l}"),
                    ritz_values: vec![],
                    residuals: vec![],
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
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
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
                if let Some(zz) = z.as_deref_mut() {
                    for k in 0..n {
                        let t = zz[k * n + i + 1];
                        zz[k * n + i + 1] = s * zz[k * n + i] + c * t;
                        zz[k * n + i] = c * zz[k * n + i] - s * t;
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

fn sort_pairs(d: Vec<f64>, z: Option<Vec<f64>>, n: usize) -> (Vec<f64>, Option<Vec<f64>>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].partial_cmp(&d[y]).unwrap());
    let vals = order.iter().map(|&i| d[i]).collect();
    let vecs = z.map(|zf| {
        let mut out = vec![0.0; n * n];
        for (newc, &oldc) in order.iter().enumerate() {
            for r in 0..n {
                out[r * n + newc] = zf[r * n + oldc];
            }
        }
        out
    });
    (vals, vecs)
}

fn check_square_symmetric(a: &Array2<f64>) -> Result<usize> {
    let (r, c) = a.dim();
    if r != c {
        return Err(SolverError::DimensionMismatch { expected: r, got: c });
    }
    let scale = a.iter().fold(0.0f64, |m, &v| m.max(v.abs())).max(1e-300);
    for i in 0..r {
        for j in (i + 1)..r {
            if (a[[i, j]] - a[[j, i]]).abs() > 1e-9 * scale {
                return Err(SolverError::InvalidParameter(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(r)
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn dense_symmetric_eigenvalues(a: &Array2<f64>) -> Result<Vec<f64>> {
    let n = check_square_symmetric(a)?;
    if n == 0 {
        return Ok(vec![]);
    }
    let mut flat: Vec<f64> = a.iter().copied().collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut flat, n, &mut d, &mut e, false);
    tqli(&mut d, &mut e, n, None)?;
    let (vals, _) = sort_pairs(d, None, n);
    Ok(vals)
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a symmetric matrix.
pub fn dense_symmetric_eigen(a: &Array2<f64>) -> Result<(Vec<f64>, Array2<f64>)> {
    let n = check_square_symmetric(a)?;
    if n == 0 {
        return Ok((vec![], Array2::zeros((0, 0))));
    }
    let mut flat: Vec<f64> = a.iter().copied().collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut flat, n, &mut d, &mut e, true);
    tqli(&mut d, &mut e, n, Some(&mut flat))?;
    let (vals, vecs) = sort_pairs(d, Some(flat), n);
    let v = Array2::from_shape_vec((n, n), vecs.unwrap()).unwrap();
    Ok((vals, v))
}

/// Eigen-decomposition of a symmetric tridiagonal matrix given by its
/// diagonal and subdiagonal (off[i] couples rows i and i+1). Returns the
/// ascending eigenvalues and a flat row-major matrix whose column c is the
/// eigenvector for eigenvalue c.
pub fn tridiag_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((vec![], vec![]));
    }
    if off.len() + 1 != n {
        return Err(SolverError::DimensionMismatch {
            expected: n - 1,
            got: off.len(),
        });
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[1..n].copy_from_slice(off);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tqli(&mut d, &mut e, n, Some(&mut z))?;
    let (vals, vecs) = sort_pairs(d, Some(z), n);
    Ok((vals, vecs.unwrap()))
}

/// Eigenvalues of a symmetric tridiagonal matrix, ascending.
pub fn tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(vec![]);
    }
    if off.len() + 1 != n {
        return Err(SolverError::DimensionMismatch {
            expected: n - 1,
            got: off.len(),
        });
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[1..n].copy_from_slice(off);
    tqli(&mut d, &mut e, n, None)?;
    let (vals, _) = sort_pairs(d, None, n);
    Ok(vals)
}

/// Cyclic Jacobi eigen-decomposition for small symmetric matrices (such as
/// coupling matrices). Returns ascending eigenvalues and eigenvector columns.
pub fn jacobi_eigen(a: &Array2<f64>) -> Result<(Vec<f64>, Array2<f64>)> {
    let n = check_square_symmetric(a)?;
    if n == 0 {
        return Ok((vec![], Array2::zeros((0, 0))));
    }
    let mut w: Vec<f64> = a.iter().copied().collect();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob = w.iter().map(|&x| x * x).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += w[p * n + q] * w[p * n + q];
            }
        }
        if off.sqrt() <= 1e-14 * frob {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (w[q * n + q] - w[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let app = w[p * n + p];
                let aqq = w[q * n + q];
                w[p * n + p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                w[q * n + q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                w[p * n + q] = 0.0;
                w[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = w[r * n + p];
                    let arq = w[r * n + q];
                    w[r * n + p] = c * arp - s * arq;
                    w[p * n + r] = w[r * n + p];
                    w[r * n + q] = s * arp + c * arq;
                    w[q * n + r] = w[r * n + q];
                }
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
    }
    let d: Vec<f64> = (0..n).map(|i| w[i * n + i]).collect();
    let (vals, vecs) = sort_pairs(d, Some(v), n);
    let vm = Array2::from_shape_vec((n, n), vecs.unwrap()).unwrap();
    Ok((vals, vm))
}
