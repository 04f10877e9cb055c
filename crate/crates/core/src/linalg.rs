//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `i^p` for integer `p` (taken mod 4).
pub fn i_pow(p: i64) -> C64 {
    match p.rem_euclid(4) {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// Largest entry of `|U†U - 1|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    if u.ncols() != n {
        return f64::INFINITY;
    }
    let prod = u.adjoint() * u;
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { ONE } else { ZERO };
            dev = dev.max((prod[(i, j)] - target).norm());
        }
    }
    dev
}

pub fn symmetry_deviation(m: &RMatrix) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..i {
            dev = dev.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    dev
}

pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..=i {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues ascending.
pub fn eigh(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(h.clone());
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(k));
    }
    (values, vectors)
}

/// Eigendecomposition of a real symmetric matrix with eigenvalues ascending.
pub fn eigh_real(h: &RMatrix) -> (Vec<f64>, RMatrix) {
    let eig = SymmetricEigen::new(h.clone());
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = RMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(k));
    }
    (values, vectors)
}

/// `exp(X)` for anti-Hermitian `X`, through the Hermitian matrix `-iX`.
pub fn expm_antihermitian(x: &CMatrix) -> CMatrix {
    let h = x.map(|z| -I * z);
    let h = (&h + h.adjoint()).scale(0.5);
    let (vals, vecs) = eigh(&h);
    let phases = DVector::from_iterator(vals.len(), vals.iter().map(|&v| (I * v).exp()));
    &vecs * CMatrix::from_diagonal(&phases) * vecs.adjoint()
}

/// `exp(X)` for a general square matrix.
pub fn expm(x: &CMatrix) -> CMatrix {
    x.clone().exp()
}

/// Thin QR via modified Gram–Schmidt: returns `Q` with orthonormal columns and
/// `det(R)`, so that the Slater determinant of `c` equals `det(R)` times that of `Q`.
pub fn orthonormalize_columns(c: &CMatrix) -> Option<(CMatrix, C64)> {
    let (m, n) = c.shape();
    let mut q = c.clone();
    let mut det = ONE;
    for k in 0..n {
        for j in 0..k {
            let proj: C64 = q.column(j).dotc(&q.column(k));
            let qj = q.column(j).into_owned();
            let mut col = q.column_mut(k);
            col -= qj * proj;
        }
        let norm = q.column(k).norm();
        if norm < 1e-14 {
            return None;
        }
        det *= norm;
        let mut col = q.column_mut(k);
        col.unscale_mut(norm);
    }
    debug_assert_eq!(q.nrows(), m);
    Some((q, det))
}

/// Extend orthonormal columns to a full unitary; the first `n` columns are kept as-is.
pub fn complete_to_unitary(q: &CMatrix) -> CMatrix {
    let (m, n) = q.shape();
    let mut out = CMatrix::zeros(m, m);
    for k in 0..n {
        out.set_column(k, &q.column(k));
    }
    let mut filled = n;
    for e in 0..m {
        if filled == m {
            break;
        }
        let mut v = DVector::<C64>::zeros(m);
        v[e] = ONE;
        for _ in 0..2 {
            for j in 0..filled {
                let proj = out.column(j).dotc(&v);
                v -= out.column(j) * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            out.set_column(filled, &(v / C64::new(norm, 0.0)));
            filled += 1;
        }
    }
    out
}

/// Nodes and weights of Gauss–Hermite quadrature for the standard normal
/// measure (probabilists' convention), by the Golub–Welsch algorithm.
/// Weights sum to one.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = RMatrix::zeros(n, n);
    for k in 1..n {
        let b = (k as f64).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let (nodes, vecs) = eigh_real(&jacobi);
    let weights = (0..n).map(|k| vecs[(0, k)].powi(2)).collect();
    (nodes, weights)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}
