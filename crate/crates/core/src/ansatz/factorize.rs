//! Double factorization of same-spin doubles into LUCJ layers.
//!
//! The symmetric matricization `t[(ia),(jb)] = Σ_k λ_k g_k g_kᵀ` gives
//! `T − T† = Σ_k λ_k (Ĝ_k² − Ĝ_k†²)` with `Ĝ_k = Σ g_k[(ia)] a†_a a_i`.
//! Writing `H₁ = e^{−iπ/4} G + e^{iπ/4} G†` and `H₂ = e^{iπ/4} G + e^{−iπ/4} G†`
//! (both Hermitian), `Ĝ² − Ĝ†² = (i/2)(Ĥ₁² − Ĥ₂²)`, so every eigenpair yields
//! two layers `e^{i(±λ/2) Ĥ²}`, each an orbital rotation around a
//! density-density phase.

use super::amplitudes::Tensor4;
use crate::error::{Error, Result};
use crate::fock::{DiagonalCoulombSpec, LucjLayer, OrbitalRotationSpec, Sparsity};
use crate::linalg::{self, CMatrix, RMatrix, C64};

/// Eigenvalues below this magnitude are dropped.
pub const EIGENVALUE_TOL: f64 = 1e-12;

/// `n_layers = 0` keeps every layer; larger requests than available are clamped.
pub fn double_factorize_t2(
    t2: &Tensor4,
    norb: usize,
    n_occ: usize,
    n_layers: usize,
    sparsity: Sparsity,
) -> Result<Vec<LucjLayer>> {
    let nv = norb - n_occ;
    if t2.dims() != [n_occ, nv, n_occ, nv] {
        return Err(Error::Dimension(format!("t2 dims {:?} inconsistent with M={norb}, N={n_occ}", t2.dims())));
    }
    let dev = t2.antisymmetry_deviation();
    if dev > 1e-10 {
        return Err(Error::Invalid(format!("same-spin amplitudes violate antisymmetry by {dev:.3e}")));
    }
    let mat = t2.matricize();
    if mat.nrows() == 0 {
        return Ok(Vec::new());
    }
    let (vals, vecs) = linalg::eigh_real(&mat);
    let mut order: Vec<usize> = (0..vals.len()).filter(|&k| vals[k].abs() > EIGENVALUE_TOL).collect();
    order.sort_by(|&a, &b| vals[b].abs().total_cmp(&vals[a].abs()).then(a.cmp(&b)));
    let available = 2 * order.len();
    let wanted = if n_layers == 0 {
        available
    } else if n_layers > available {
        log::warn!("requested {n_layers} LUCJ layers, only {available} available; clamping");
        available
    } else {
        n_layers
    };
    let e_minus = C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let e_plus = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let mut layers = Vec::with_capacity(wanted);
    'outer: for &k in &order {
        let lambda = vals[k];
        let mut g = CMatrix::zeros(norb, norb);
        for i in 0..n_occ {
            for a in 0..nv {
                g[(n_occ + a, i)] = C64::new(vecs[(i * nv + a, k)], 0.0);
            }
        }
        let gd = g.adjoint();
        for (h, scale) in [(&g * e_minus + &gd * e_plus, 0.5 * lambda), (&g * e_plus + &gd * e_minus, -0.5 * lambda)] {
            if layers.len() == wanted {
                break 'outer;
            }
            let (eps, w) = linalg::eigh(&h);
            let j = RMatrix::from_fn(norb, norb, |p, r| scale * eps[p] * eps[r]);
            let coulomb = DiagonalCoulombSpec::new(j, sparsity)?;
            layers.push(LucjLayer::new(OrbitalRotationSpec::from_unitary(w)?, coulomb)?);
        }
    }
    Ok(layers)
}

/// Two-body tensor `V[p][q][r][s]` of `Σ_layers i Σ_kl J_kl n'_k n'_l`
/// written as `Σ V_pqrs a†_p a_q a†_r a_s`, flattened `((p*M+q)*M+r)*M+s`.
pub fn layer_generator_tensor(layers: &[LucjLayer], norb: usize) -> Vec<C64> {
    let m = norb;
    let mut v = vec![C64::new(0.0, 0.0); m.pow(4)];
    for layer in layers {
        let w = layer.rotation.unitary();
        let j = layer.coulomb.matrix();
        for k in 0..m {
            for l in 0..m {
                let jkl = j[(k, l)];
                if jkl == 0.0 {
                    continue;
                }
                for p in 0..m {
                    for q in 0..m {
                        let a = w[(p, k)] * w[(q, k)].conj() * jkl;
                        for r in 0..m {
                            for s in 0..m {
                                v[((p * m + q) * m + r) * m + s] += C64::new(0.0, 1.0) * a * w[(r, l)] * w[(s, l)].conj();
                            }
                        }
                    }
                }
            }
        }
    }
    v
}
