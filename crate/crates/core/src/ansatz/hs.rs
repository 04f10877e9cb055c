//! Hubbard–Stratonovich one-body operators for the opposite-spin doubles.
//!
//! With the SVD `t2_αβ[(ia),(jb)] = Σ_s τ_s U_s[(ia)] V_s[(jb)]` and
//! `u_s = √τ_s Σ U_s a†_{aα} a_{iα}`, `v_s = √τ_s Σ V_s a†_{bβ} a_{jβ}`, the
//! four operators per singular value satisfy `½ Σ X² = T_αβ − T_αβ†`.

use super::amplitudes::Tensor4;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, I};
use rand::Rng;
use rand_distr::StandardNormal;

/// Singular values below this are dropped.
pub const SINGULAR_VALUE_TOL: f64 = 1e-12;

/// A spin-block-diagonal one-body operator.
#[derive(Clone, Debug, PartialEq)]
pub struct HsOperator {
    pub alpha: CMatrix,
    pub beta: CMatrix,
}

#[derive(Clone, Debug)]
pub struct HsOperatorSet {
    pub norb: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub operators: Vec<HsOperator>,
    pub singular_values: Vec<f64>,
    /// `u_s` and `v_s` as M×M matrices (before the `√τ` scaling).
    pub u_factors: Vec<CMatrix>,
    pub v_factors: Vec<CMatrix>,
}

impl HsOperatorSet {
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Per-spin matrices of `Σ_δ y_δ X_δ`.
    pub fn combine(&self, fields: &[f64]) -> Result<(CMatrix, CMatrix)> {
        if fields.len() != self.len() {
            return Err(Error::Dimension(format!("{} fields for {} operators", fields.len(), self.len())));
        }
        let m = self.norb;
        let (mut a, mut b) = (CMatrix::zeros(m, m), CMatrix::zeros(m, m));
        for (y, op) in fields.iter().zip(&self.operators) {
            a += &op.alpha * C64::new(*y, 0.0);
            b += &op.beta * C64::new(*y, 0.0);
        }
        Ok((a, b))
    }

    /// Orbital matrices (M×N_σ) of `exp(Σ y X)|HF⟩` per spin.
    pub fn determinant(&self, fields: &[f64]) -> Result<HsDeterminant> {
        let (xa, xb) = self.combine(fields)?;
        let occ = |x: &CMatrix, n: usize| linalg::expm(x).columns(0, n).into_owned();
        Ok(HsDeterminant { fields: fields.to_vec(), alpha: occ(&xa, self.n_alpha), beta: occ(&xb, self.n_beta) })
    }
}

#[derive(Clone, Debug)]
pub struct HsDeterminant {
    pub fields: Vec<f64>,
    pub alpha: CMatrix,
    pub beta: CMatrix,
}

pub fn build_hs_operators(t2_ab: &Tensor4, norb: usize, n_alpha: usize, n_beta: usize) -> Result<HsOperatorSet> {
    let (va, vb) = (norb - n_alpha, norb - n_beta);
    if t2_ab.dims() != [n_alpha, va, n_beta, vb] {
        return Err(Error::Dimension(format!(
            "t2_ab dims {:?} inconsistent with M={norb}, N=({n_alpha}, {n_beta})",
            t2_ab.dims()
        )));
    }
    let mut set = HsOperatorSet {
        norb,
        n_alpha,
        n_beta,
        operators: Vec::new(),
        singular_values: Vec::new(),
        u_factors: Vec::new(),
        v_factors: Vec::new(),
    };
    let t = t2_ab.matricize();
    if t.nrows() == 0 || t.ncols() == 0 {
        return Ok(set);
    }
    let svd = t.svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    for k in order {
        let tau = svd.singular_values[k];
        if tau < SINGULAR_VALUE_TOL {
            continue;
        }
        let mut us = CMatrix::zeros(norb, norb);
        for i in 0..n_alpha {
            for a in 0..va {
                us[(n_alpha + a, i)] = C64::new(u[(i * va + a, k)], 0.0);
            }
        }
        let mut vs = CMatrix::zeros(norb, norb);
        for j in 0..n_beta {
            for b in 0..vb {
                vs[(n_beta + b, j)] = C64::new(vt[(k, j * vb + b)], 0.0);
            }
        }
        let r = C64::new(tau.sqrt() * s2, 0.0);
        let (ua, vb_) = (&us * r, &vs * r);
        let (uad, vbd) = (ua.adjoint(), vb_.adjoint());
        set.operators.push(HsOperator { alpha: ua.clone(), beta: vb_.clone() });
        set.operators.push(HsOperator { alpha: &ua * I, beta: &vb_ * (-I) });
        set.operators.push(HsOperator { alpha: &uad * I, beta: &vbd * I });
        set.operators.push(HsOperator { alpha: uad.clone(), beta: -vbd.clone() });
        set.singular_values.push(tau);
        set.u_factors.push(us);
        set.v_factors.push(vs);
    }
    Ok(set)
}

/// Draw `n_det` standard-normal field vectors and the determinants they define.
pub fn sample_hs_determinants<R: Rng + ?Sized>(ops: &HsOperatorSet, n_det: usize, rng: &mut R) -> Result<Vec<HsDeterminant>> {
    if n_det == 0 {
        return Err(Error::Invalid("n_det must be at least 1".into()));
    }
    (0..n_det)
        .map(|_| {
            let y: Vec<f64> = (0..ops.len()).map(|_| rng.sample(StandardNormal)).collect();
            ops.determinant(&y)
        })
        .collect()
}
