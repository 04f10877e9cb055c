//! Lowest eigenpair of a real symmetric operator.

use crate::error::{Error, Result};
use crate::hamiltonian::LinearOperator;
use crate::linalg::{self, RMatrix};
use serde::{Deserialize, Serialize};

/// Dimensions up to this are solved densely.
pub const DENSE_LIMIT: usize = 64;
pub const RESTART_DIM: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dense_matrix(op: &dyn LinearOperator) -> RMatrix {
    let d = op.dim();
    let mut m = RMatrix::zeros(d, d);
    let mut e = vec![0.0; d];
    let mut col = vec![0.0; d];
    for j in 0..d {
        e[j] = 1.0;
        op.apply(&e, &mut col);
        e[j] = 0.0;
        for i in 0..d {
            m[(i, j)] = col[i];
        }
    }
    m
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonalize `v` against `basis` (twice) and normalize; `None` if it vanishes.
fn orthonormalize(mut v: Vec<f64>, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let before = dot(&v, &v).sqrt();
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, &v);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
    let norm = dot(&v, &v).sqrt();
    if norm < 1e-10 * before.max(1e-300) || norm == 0.0 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Some(v)
}

/// Davidson with block size 1, diagonal preconditioner and restarts at
/// [`RESTART_DIM`]; dense diagonalization for small operators. The returned
/// vector is normalized with its largest component positive.
pub fn diagonalize_subspace(op: &dyn LinearOperator, tol: f64, max_iter: usize) -> Result<EigenResult> {
    let d = op.dim();
    if d == 0 {
        return Err(Error::EmptySubspace);
    }
    if d <= DENSE_LIMIT {
        let (vals, vecs) = linalg::eigh_real(&dense_matrix(op));
        let mut vector: Vec<f64> = vecs.column(0).iter().copied().collect();
        fix_sign(&mut vector);
        return Ok(EigenResult { value: vals[0], vector, residual: 0.0, iterations: 0, converged: true });
    }
    let diag = op.diagonal();
    let start = (0..d).min_by(|&a, &b| diag[a].total_cmp(&diag[b])).expect("d > 0");
    let mut guess = vec![0.0; d];
    guess[start] = 1.0;
    let mut basis: Vec<Vec<f64>> = vec![guess];
    let mut images: Vec<Vec<f64>> = Vec::new();
    let mut best = EigenResult { value: diag[start], vector: basis[0].clone(), residual: f64::INFINITY, iterations: 0, converged: false };
    for iter in 1..=max_iter {
        while images.len() < basis.len() {
            let mut w = vec![0.0; d];
            op.apply(&basis[images.len()], &mut w);
            images.push(w);
        }
        let k = basis.len();
        let small = RMatrix::from_fn(k, k, |i, j| 0.5 * (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i])));
        let (theta, s) = linalg::eigh_real(&small);
        let mut x = vec![0.0; d];
        let mut ax = vec![0.0; d];
        for i in 0..k {
            let c = s[(i, 0)];
            x.iter_mut().zip(&basis[i]).for_each(|(a, b)| *a += c * b);
            ax.iter_mut().zip(&images[i]).for_each(|(a, b)| *a += c * b);
        }
        let r: Vec<f64> = ax.iter().zip(&x).map(|(a, b)| a - theta[0] * b).collect();
        let rnorm = dot(&r, &r).sqrt();
        best = EigenResult { value: theta[0], vector: x.clone(), residual: rnorm, iterations: iter, converged: rnorm <= tol };
        if best.converged {
            break;
        }
        let t: Vec<f64> = r
            .iter()
            .zip(&diag)
            .map(|(ri, di)| {
                let den = theta[0] - di;
                ri / if den.abs() < 1e-8 { 1e-8f64.copysign(den) } else { den }
            })
            .collect();
        if basis.len() >= RESTART_DIM {
            basis = vec![x.clone()];
            images = vec![ax];
        }
        match orthonormalize(t, &basis).or_else(|| orthonormalize(r, &basis)) {
            Some(v) => basis.push(v),
            None => {
                // Krylov space exhausted: the Ritz pair is exact to rounding.
                best.converged = rnorm <= tol.max(1e-10);
                break;
            }
        }
    }
    fix_sign(&mut best.vector);
    let n = dot(&best.vector, &best.vector).sqrt();
    best.vector.iter_mut().for_each(|x| *x /= n);
    Ok(best)
}

fn fix_sign(v: &mut [f64]) {
    if let Some(big) = v.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())) {
        if big < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}
