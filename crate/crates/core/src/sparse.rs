//! Minimal sparse kernels: CSR matrices, LSQR for least squares, and
//! conjugate gradients for symmetric positive definite operators.
//!
//! Reductions are chunked with a fixed chunk size and summed in order, so
//! results are bit-stable regardless of the number of worker threads.

use rayon::prelude::*;

const CHUNK: usize = 8192;

/// Deterministic parallel dot product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() < 4 * CHUNK {
        return a.iter().zip(b).map(|(x, y)| x * y).sum();
    }
    a.par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(ca, cb)| ca.iter().zip(cb).map(|(x, y)| x * y).sum::<f64>())
        .collect::<Vec<_>>()
        .iter()
        .sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone)]
pub struct Csr {
    pub nrows: usize,
    pub ncols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<u32>,
    pub data: Vec<f64>,
}

/// Row-by-row builder.
pub struct CsrBuilder {
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    data: Vec<f64>,
}

impl CsrBuilder {
    pub fn new(ncols: usize) -> Self {
        CsrBuilder {
            ncols,
            indptr: vec![0],
            indices: Vec::new(),
            data: Vec::new(),
        }
    }

    pub fn push_row(&mut self, entries: &[(u32, f64)]) {
        for &(j, v) in entries {
            debug_assert!((j as usize) < self.ncols);
            if v != 0.0 {
                self.indices.push(j);
                self.data.push(v);
            }
        }
        self.indptr.push(self.indices.len());
    }

    pub fn finish(self) -> Csr {
        Csr {
            nrows: self.indptr.len() - 1,
            ncols: self.ncols,
            indptr: self.indptr,
            indices: self.indices,
            data: self.data,
        }
    }
}

impl Csr {
    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        let indptr = &self.indptr;
        let indices = &self.indices;
        let data = &self.data;
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let mut s = 0.0;
            for k in indptr[i]..indptr[i + 1] {
                s += data[k] * x[indices[k] as usize];
            }
            *yi = s;
        });
    }

    pub fn transpose(&self) -> Csr {
        let mut counts = vec![0usize; self.ncols + 1];
        for &j in &self.indices {
            counts[j as usize + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let mut indices = vec![0u32; self.nnz()];
        let mut data = vec![0.0; self.nnz()];
        let mut cursor = counts.clone();
        for i in 0..self.nrows {
            for k in self.indptr[i]..self.indptr[i + 1] {
                let j = self.indices[k] as usize;
                let dst = cursor[j];
                indices[dst] = i as u32;
                data[dst] = self.data[k];
                cursor[j] += 1;
            }
        }
        Csr {
            nrows: self.ncols,
            ncols: self.nrows,
            indptr: counts,
            indices,
            data,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LsqrResult {
    pub iterations: usize,
    /// Final estimate of ‖b − Ax‖.
    pub residual: f64,
    /// Final estimate of ‖Aᵀ(b − Ax)‖.
    pub atr: f64,
}

/// Paige–Saunders LSQR for min ‖Ax − b‖. `at` must be the transpose of `a`.
pub fn lsqr(a: &Csr, at: &Csr, b: &[f64], atol: f64, max_iter: usize) -> (Vec<f64>, LsqrResult) {
    let m = a.nrows;
    let n = a.ncols;
    let mut x = vec![0.0; n];
    let mut u = b.to_vec();
    let mut beta = norm2(&u);
    if beta == 0.0 {
        return (
            x,
            LsqrResult {
                iterations: 0,
                residual: 0.0,
                atr: 0.0,
            },
        );
    }
    u.iter_mut().for_each(|v| *v /= beta);
    let mut v = vec![0.0; n];
    at.matvec(&u, &mut v);
    let mut alpha = norm2(&v);
    v.iter_mut().for_each(|w| *w /= alpha);
    let mut w = v.clone();
    let mut phibar = beta;
    let mut rhobar = alpha;
    let b_norm = beta;
    let mut tmp_m = vec![0.0; m];
    let mut tmp_n = vec![0.0; n];
    let mut res = LsqrResult {
        iterations: 0,
        residual: phibar,
        atr: alpha * beta,
    };
    for it in 1..=max_iter {
        // Bidiagonalisation step.
        a.matvec(&v, &mut tmp_m);
        for i in 0..m {
            u[i] = tmp_m[i] - alpha * u[i];
        }
        beta = norm2(&u);
        if beta > 0.0 {
            u.iter_mut().for_each(|t| *t /= beta);
        }
        at.matvec(&u, &mut tmp_n);
        for j in 0..n {
            v[j] = tmp_n[j] - beta * v[j];
        }
        alpha = norm2(&v);
        if alpha > 0.0 {
            v.iter_mut().for_each(|t| *t /= alpha);
        }
        // Givens rotation.
        let rho = rhobar.hypot(beta);
        let c = rhobar / rho;
        let s = beta / rho;
        let theta = s * alpha;
        rhobar = -c * alpha;
        let phi = c * phibar;
        phibar *= s;
        let t1 = phi / rho;
        let t2 = -theta / rho;
        for j in 0..n {
            x[j] += t1 * w[j];
            w[j] = v[j] + t2 * w[j];
        }
        res = LsqrResult {
            iterations: it,
            residual: phibar,
            atr: phibar * alpha * c.abs(),
        };
        if phibar <= atol * b_norm || res.atr <= atol * atol * b_norm {
            break;
        }
    }
    (x, res)
}

#[derive(Debug, Clone, Copy)]
pub struct CgResult {
    pub iterations: usize,
    pub residual: f64,
}

/// Conjugate gradients for an SPD operator given as a closure.
pub fn cg<F>(apply: F, b: &[f64], tol: f64, max_iter: usize) -> (Vec<f64>, CgResult)
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let b_norm = norm2(b).max(f64::MIN_POSITIVE);
    let mut rr = dot(&r, &r);
    let mut res = CgResult {
        iterations: 0,
        residual: rr.sqrt() / b_norm,
    };
    for it in 1..=max_iter {
        apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        x.par_iter_mut()
            .zip(p.par_iter())
            .for_each(|(xi, pi)| *xi += alpha * pi);
        r.par_iter_mut()
            .zip(ap.par_iter())
            .for_each(|(ri, api)| *ri -= alpha * api);
        let rr_new = dot(&r, &r);
        res = CgResult {
            iterations: it,
            residual: rr_new.sqrt() / b_norm,
        };
        if res.residual <= tol {
            break;
        }
        let beta = rr_new / rr;
        rr = rr_new;
        p.par_iter_mut()
            .zip(r.par_iter())
            .for_each(|(pi, ri)| *pi = ri + beta * *pi);
    }
    (x, res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lsqr_solves_consistent_overdetermined_system() {
        let mut b = CsrBuilder::new(3);
        b.push_row(&[(0, 1.0), (1, 2.0)]);
        b.push_row(&[(1, 1.0), (2, -1.0)]);
        b.push_row(&[(0, 2.0), (2, 1.0)]);
        b.push_row(&[(0, 1.0), (1, 1.0), (2, 1.0)]);
        let a = b.finish();
        let xtrue = [1.0, -2.0, 0.5];
        let mut rhs = vec![0.0; 4];
        a.matvec(&xtrue, &mut rhs);
        let at = a.transpose();
        let (x, info) = lsqr(&a, &at, &rhs, 1e-14, 200);
        for (xi, ti) in x.iter().zip(xtrue.iter()) {
            assert!((xi - ti).abs() < 1e-12);
        }
        assert!(info.residual < 1e-12);
    }

    #[test]
    fn cg_solves_small_laplacian() {
        let n = 50;
        let apply = |x: &[f64], y: &mut [f64]| {
            for i in 0..n {
                let left = if i > 0 { x[i - 1] } else { 0.0 };
                let right = if i + 1 < n { x[i + 1] } else { 0.0 };
                y[i] = 2.1 * x[i] - left - right;
            }
        };
        let b = vec![1.0; n];
        let (x, info) = cg(apply, &b, 1e-13, 1000);
        assert!(info.residual < 1e-12);
        let mut check = vec![0.0; n];
        apply(&x, &mut check);
        for i in 0..n {
            assert!((check[i] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn transpose_roundtrip() {
        let mut b = CsrBuilder::new(4);
        b.push_row(&[(0, 1.0), (3, -2.0)]);
        b.push_row(&[(1, 5.0)]);
        b.push_row(&[(0, 0.5), (2, 3.0), (3, 1.0)]);
        let a = b.finish();
        let att = a.transpose().transpose();
        assert_eq!(a.indptr, att.indptr);
        assert_eq!(a.indices, att.indices);
        assert_eq!(a.data, att.data);
    }
}
