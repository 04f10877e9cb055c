//! Non-orthogonal CI over Hubbard–Stratonovich determinants and a
//! finite-difference optimizer for their auxiliary fields.

use super::hs::{HsDeterminant, HsOperatorSet};
use super::sector::{matrix_element, product_vector, sector_configurations};
use super::state::{fix_phase, DeterminantPair};
use crate::error::{Error, Result};
use crate::fock::{prepare_slater, OrbitalRotationSpec, SpinStatevector};
use crate::hamiltonian::{low_bits, ActiveSpaceHamiltonian, Configuration, SubspaceOperator};
use crate::linalg::{self, CMatrix, C64};
use rayon::prelude::*;

/// Overlap eigenvalues at or below this are discarded.
pub const OVERLAP_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct NociSolution {
    /// Coefficients of the normalized determinants in `determinants`.
    pub coefficients: Vec<C64>,
    pub energy: f64,
    /// Overlap directions dropped as numerically dependent.
    pub dropped: usize,
    pub determinants: Vec<DeterminantPair>,
}

/// Orthonormalize orbital columns and complete them to a rotation of the
/// lowest-orbital reference. The overall scale `det R` is discarded.
pub fn normalize_orbitals(orbitals: &CMatrix) -> Result<OrbitalRotationSpec> {
    let (q, _) = linalg::orthonormalize_columns(orbitals)
        .ok_or_else(|| Error::Invalid("determinant orbitals are linearly dependent".into()))?;
    OrbitalRotationSpec::from_unitary(linalg::complete_to_unitary(&q))
}

pub fn normalize_determinant(det: &HsDeterminant) -> Result<DeterminantPair> {
    Ok(DeterminantPair { alpha: normalize_orbitals(&det.alpha)?, beta: normalize_orbitals(&det.beta)? })
}

/// Reusable full-sector Hamiltonian for repeated NOCI solves.
pub struct NociContext {
    configs: Vec<Configuration>,
    op: SubspaceOperator,
    n_alpha: usize,
    n_beta: usize,
}

impl NociContext {
    pub fn new(ham: &ActiveSpaceHamiltonian) -> Result<Self> {
        let configs = sector_configurations(ham)?;
        let op = SubspaceOperator::new(ham, configs.clone(), 0.0, 0.0)?;
        Ok(Self { configs, op, n_alpha: ham.n_alpha(), n_beta: ham.n_beta() })
    }

    pub fn solve(&self, determinants: Vec<DeterminantPair>) -> Result<NociSolution> {
        if determinants.is_empty() {
            return Err(Error::EmptySubspace);
        }
        let n = determinants.len();
        let regs: Vec<(SpinStatevector, SpinStatevector)> = determinants
            .par_iter()
            .map(|d| Ok((prepare_slater(&d.alpha, low_bits(self.n_alpha))?, prepare_slater(&d.beta, low_bits(self.n_beta))?)))
            .collect::<Result<_>>()?;
        let vecs: Vec<Vec<C64>> = regs.iter().map(|(a, b)| product_vector(a, b, &self.configs)).collect();
        let mut s = CMatrix::zeros(n, n);
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let sij = regs[i].0.overlap(&regs[j].0)? * regs[i].1.overlap(&regs[j].1)?;
                let hij = matrix_element(&self.op, &vecs[i], &vecs[j]);
                s[(i, j)] = sij;
                s[(j, i)] = sij.conj();
                h[(i, j)] = hij;
                h[(j, i)] = hij.conj();
            }
        }
        let (coefficients, energy, dropped) = generalized_lowest(&h, &s)?;
        Ok(NociSolution { coefficients, energy, dropped, determinants })
    }
}

/// Lowest root of `H c = E S c` by canonical orthogonalization, with
/// `c† S c = 1` and the largest coefficient real positive.
pub fn generalized_lowest(h: &CMatrix, s: &CMatrix) -> Result<(Vec<C64>, f64, usize)> {
    let (sv, su) = linalg::eigh(s);
    let keep: Vec<usize> = (0..sv.len()).filter(|&k| sv[k] > OVERLAP_TOL).collect();
    if keep.is_empty() {
        return Err(Error::DegenerateBasis);
    }
    let n = s.nrows();
    let x = CMatrix::from_fn(n, keep.len(), |i, k| su[(i, keep[k])] / sv[keep[k]].sqrt());
    let hp = x.adjoint() * h * &x;
    let hp = (&hp + hp.adjoint()) * C64::new(0.5, 0.0);
    let (e, y) = linalg::eigh(&hp);
    let c = &x * y.column(0);
    let mut c: Vec<C64> = c.iter().copied().collect();
    fix_phase(&mut c);
    Ok((c, e[0], n - keep.len()))
}

pub fn noci_coefficients(ham: &ActiveSpaceHamiltonian, determinants: &[HsDeterminant]) -> Result<NociSolution> {
    let pairs = determinants.iter().map(normalize_determinant).collect::<Result<Vec<_>>>()?;
    NociContext::new(ham)?.solve(pairs)
}

#[derive(Clone, Debug)]
pub struct NociOptimization {
    pub fields: Vec<Vec<f64>>,
    pub solution: NociSolution,
    pub converged: bool,
    pub iterations: usize,
    /// Energy after each accepted step, starting with the initial energy.
    pub history: Vec<f64>,
}

/// Steepest descent on `E₀(y)` with central-difference gradients and a
/// backtracking line search; only energy-lowering steps are accepted.
pub fn optimize_noci_fields(
    ham: &ActiveSpaceHamiltonian,
    ops: &HsOperatorSet,
    initial: Vec<Vec<f64>>,
    max_iters: usize,
    tol: f64,
) -> Result<NociOptimization> {
    let ctx = NociContext::new(ham)?;
    let n_det = initial.len();
    let k = ops.len();
    if initial.iter().any(|y| y.len() != k) {
        return Err(Error::Dimension(format!("every field vector must have {k} entries")));
    }
    let solve = |flat: &[f64]| -> Result<NociSolution> {
        let dets = (0..n_det)
            .map(|d| ops.determinant(&flat[d * k..(d + 1) * k]).and_then(|h| normalize_determinant(&h)))
            .collect::<Result<Vec<_>>>()?;
        ctx.solve(dets)
    };
    let energy = |flat: &[f64]| solve(flat).map(|s| s.energy).unwrap_or(f64::INFINITY);

    let mut y: Vec<f64> = initial.concat();
    let mut best = solve(&y)?;
    let mut history = vec![best.energy];
    let mut converged = y.is_empty();
    let mut iterations = 0;
    let step = 1e-5;
    while !converged && iterations < max_iters {
        iterations += 1;
        let grad: Vec<f64> = (0..y.len())
            .into_par_iter()
            .map(|i| {
                let mut yp = y.clone();
                let mut ym = y.clone();
                yp[i] += step;
                ym[i] -= step;
                (energy(&yp) - energy(&ym)) / (2.0 * step)
            })
            .collect();
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if !gnorm.is_finite() || gnorm < tol {
            converged = gnorm.is_finite();
            break;
        }
        let mut alpha = (0.5 / gnorm).min(1.0);
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = y.iter().zip(&grad).map(|(a, g)| a - alpha * g).collect();
            if let Ok(sol) = solve(&trial) {
                if sol.energy < best.energy {
                    let gain = best.energy - sol.energy;
                    y = trial;
                    best = sol;
                    history.push(best.energy);
                    accepted = true;
                    if gain < 1e-2 * tol {
                        converged = true;
                    }
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            // No descent at finite-difference resolution.
            converged = true;
        }
    }
    let fields = (0..n_det).map(|d| y[d * k..(d + 1) * k].to_vec()).collect();
    Ok(NociOptimization { fields, solution: best, converged, iterations, history })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_determinants_drop_a_direction() {
        let h = CMatrix::from_element(2, 2, C64::new(-1.5, 0.0));
        let s = CMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        let (c, e, dropped) = generalized_lowest(&h, &s).unwrap();
        assert_eq!(dropped, 1);
        assert!((e + 1.5).abs() < 1e-12);
        let norm: C64 = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| c[i].conj() * s[(i, j)] * c[j]).sum();
        assert!((norm.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_overlap_is_an_error() {
        let z = CMatrix::zeros(2, 2);
        assert!(matches!(generalized_lowest(&z, &z), Err(Error::DegenerateBasis)));
    }
}
