//! Dense-free symmetric eigensolvers: implicit QL for tridiagonal
//! matrices and cyclic Jacobi for small dense ones.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Eigenvalues (ascending) and eigenvectors of a symmetric matrix, possibly
/// restricted to a contiguous block of components.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    rows: Range<usize>,
    // Eigenvector k occupies data[k*m..(k+1)*m], m = rows.len().
    data: Vec<f64>,
}

impl Eigen {
    /// Dimension.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True for the empty matrix.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Components that were tracked.
    pub fn rows(&self) -> Range<usize> {
        self.rows.clone()
    }

    /// Component `i` of eigenvector `k`; `i` must lie in [`Eigen::rows`].
    pub fn vector(&self, i: usize, k: usize) -> f64 {
        let m = self.rows.len();
        self.data[k * m + (i - self.rows.start)]
    }

    /// Tracked components of eigenvector `k`.
    pub fn column(&self, k: usize) -> &[f64] {
        let m = self.rows.len();
        &self.data[k * m..(k + 1) * m]
    }
}

/// Implicit QL with Wilkinson-type shifts on the tridiagonal matrix with
/// diagonal `diag` and off-diagonal `off` (`off[i]` couples `i` and `i+1`).
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<Eigen> {
    tridiagonal_eigen_rows(diag, off, 0..diag.len())
}

/// As [`tridiagonal_eigen`], but only the eigenvector components in `rows`
/// are accumulated. The rotations act on each component independently, so
/// the cost of the vectors scales with `rows.len()`.
pub fn tridiagonal_eigen_rows(diag: &[f64], off: &[f64], rows: Range<usize>) -> Result<Eigen> {
    let n = diag.len();
    if rows.start > rows.end || rows.end > n {
        return Err(Error::InvalidParameter("row range out of bounds"));
    }
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            rows,
            data: Vec::new(),
        });
    }
    if off.len() + 1 != n {
        return Err(Error::InvalidParameter("off-diagonal length must be n - 1"));
    }
    let w = rows.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    let mut v = vec![0.0; n * w];
    for i in rows.clone() {
        v[i * w + (i - rows.start)] = 1.0;
    }

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::EigenSolve { index: l });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (left, right) = v.split_at_mut((i + 1) * w);
                    let vi = &mut left[i * w..];
                    let vi1 = &mut right[..w];
                    for (a, b) in vi.iter_mut().zip(vi1.iter_mut()) {
                        let h = *b;
                        *b = s * *a + c * h;
                        *a = c * *a - s * h;
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
        e[l] = 0.0;
    }
    Ok(sorted(d, rows, v))
}

/// Sorts eigenpairs; `vectors` holds eigenvector `k` in `k*m..(k+1)*m`.
fn sorted(values: Vec<f64>, rows: Range<usize>, vectors: Vec<f64>) -> Eigen {
    let n = values.len();
    let m = rows.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut data = Vec::with_capacity(n * m);
    for &old in &order {
        data.extend_from_slice(&vectors[old * m..(old + 1) * m]);
    }
    Eigen {
        values: order.iter().map(|&k| values[k]).collect(),
        rows,
        data,
    }
}

/// Cyclic Jacobi on a small dense symmetric matrix (row-major `n × n`).
pub fn jacobi_eigen(matrix: &[f64], n: usize) -> Result<Eigen> {
    if matrix.len() != n * n {
        return Err(Error::InvalidParameter("matrix must be n × n"));
    }
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                if apq.abs() <= f64::EPSILON * (app * aqq).abs().sqrt() || apq.abs() < f64::MIN_POSITIVE {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            let values = (0..n).map(|i| a[i * n + i]).collect();
            let mut by_vector = vec![0.0; n * n];
            for k in 0..n {
                for i in 0..n {
                    by_vector[k * n + i] = v[i * n + k];
                }
            }
            return Ok(sorted(values, 0..n, by_vector));
        }
    }
    Err(Error::EigenSolve { index: 0 })
}
