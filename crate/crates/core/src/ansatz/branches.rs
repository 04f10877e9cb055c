//! Branch decomposition of forged expectation values and distributions.
//!
//! `⟨Ψ|A⊗B|Ψ⟩ = Σ_I r_I ⟨A⟩_{u_I} ⟨B⟩_{v_I}` with diagonal branches
//! `r = |c_μ|²` on `(u_μ, v_μ)` and, for ordered pairs `μ ≠ ν` and
//! `p, r ∈ 0..4`, cross branches `r = c_μ* c_ν γ^p δ^r` on the normalized
//! superpositions `(u_μ + i^p u_ν)/U^p` and `(v_μ + i^r v_ν)/V^r`, with
//! `γ^p = (−i)^p (U^p)²/4` and `U^p = √(2 + 2 Re[i^p ⟨u_μ|u_ν⟩])`.

use super::sector::RegisterOperators;
use super::state::{EFState, RegisterStates};
use crate::error::{Error, Result};
use crate::fock::{superpose, SpinStatevector, INTERFERENCE_TOL};
use crate::hamiltonian::ActiveSpaceHamiltonian;
use crate::linalg::{i_pow, CMatrix, C64, ZERO};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    Diagonal(usize),
    Cross { mu: usize, nu: usize, p: u8, r: u8 },
}

#[derive(Clone, Debug)]
pub struct BranchWeights {
    pub branches: Vec<Branch>,
    /// Exact complex weights `r_I`.
    pub weights: Vec<C64>,
    /// `P_I = max(0, Re r_I) / Σ_J max(0, Re r_J)`.
    pub probabilities: Vec<f64>,
    pub u_overlaps: CMatrix,
    pub v_overlaps: CMatrix,
}

/// `√(2 + 2 Re[i^p s])`, clamped at zero.
pub fn superposition_norm(overlap: C64, p: u8) -> f64 {
    (2.0 + 2.0 * (i_pow(p as i64) * overlap).re).max(0.0).sqrt()
}

/// `(−i)^p U² / 4`, exactly zero below the interference threshold.
pub fn branch_factor(overlap: C64, p: u8) -> C64 {
    let u = superposition_norm(overlap, p);
    if u < INTERFERENCE_TOL {
        return ZERO;
    }
    i_pow(-(p as i64)) * (u * u / 4.0)
}

/// The compound-distribution rule `P_I ∝ max(0, Re r_I)`.
pub fn compound_probabilities(weights: &[C64]) -> Result<Vec<f64>> {
    let pos: Vec<f64> = weights.iter().map(|r| r.re.max(0.0)).collect();
    let total: f64 = pos.iter().sum();
    if total <= 0.0 {
        return Err(Error::NoPositiveWeights);
    }
    Ok(pos.iter().map(|x| x / total).collect())
}

/// Diagonal branches first, then cross branches in lexicographic `(μ, ν, p, r)`.
pub fn enumerate_branches(n_det: usize) -> Vec<Branch> {
    let mut out: Vec<Branch> = (0..n_det).map(Branch::Diagonal).collect();
    for mu in 0..n_det {
        for nu in 0..n_det {
            if mu == nu {
                continue;
            }
            for p in 0..4u8 {
                for r in 0..4u8 {
                    out.push(Branch::Cross { mu, nu, p, r });
                }
            }
        }
    }
    out
}

pub fn branch_weights(state: &EFState) -> Result<BranchWeights> {
    let states = state.register_states()?;
    branch_weights_from(state, &states)
}

pub fn branch_weights_from(state: &EFState, states: &RegisterStates) -> Result<BranchWeights> {
    let (su, sv) = EFState::overlaps(states);
    let c = &state.coefficients;
    let branches = enumerate_branches(state.n_det());
    let weights: Vec<C64> = branches
        .iter()
        .map(|b| match *b {
            Branch::Diagonal(mu) => C64::new(c[mu].norm_sqr(), 0.0),
            Branch::Cross { mu, nu, p, r } => {
                c[mu].conj() * c[nu] * branch_factor(su[(mu, nu)], p) * branch_factor(sv[(mu, nu)], r)
            }
        })
        .collect();
    let probabilities = compound_probabilities(&weights)?;
    Ok(BranchWeights { branches, weights, probabilities, u_overlaps: su, v_overlaps: sv })
}

/// Normalized register states of one branch by direct assembly; `None` for a
/// cross branch whose superposition vanishes.
pub fn branch_states(states: &RegisterStates, branch: Branch) -> Result<Option<(SpinStatevector, SpinStatevector)>> {
    match branch {
        Branch::Diagonal(mu) => Ok(Some((states.u[mu].clone(), states.v[mu].clone()))),
        Branch::Cross { mu, nu, p, r } => {
            let u = superpose(&states.u[mu], &states.u[nu], p as i64);
            let v = superpose(&states.v[mu], &states.v[nu], r as i64);
            match (u, v) {
                (Ok(u), Ok(v)) => Ok(Some((u, v))),
                (Err(Error::DestructiveInterference(_)), _) | (_, Err(Error::DestructiveInterference(_))) => Ok(None),
                (Err(e), _) | (_, Err(e)) => Err(e),
            }
        }
    }
}

/// `Σ_I r_I f(u_I, v_I)`, skipping zero-weight branches, summed in branch order.
fn branch_sum<F>(state: &EFState, f: F) -> Result<C64>
where
    F: Fn(&SpinStatevector, &SpinStatevector) -> C64 + Sync,
{
    let states = state.register_states()?;
    let (su, sv) = EFState::overlaps(&states);
    let c = &state.coefficients;
    let terms: Vec<C64> = enumerate_branches(state.n_det())
        .into_par_iter()
        .map(|b| -> Result<C64> {
            let r = match b {
                Branch::Diagonal(mu) => C64::new(c[mu].norm_sqr(), 0.0),
                Branch::Cross { mu, nu, p, r } => {
                    c[mu].conj() * c[nu] * branch_factor(su[(mu, nu)], p) * branch_factor(sv[(mu, nu)], r)
                }
            };
            if r == ZERO {
                return Ok(ZERO);
            }
            Ok(match branch_states(&states, b)? {
                Some((u, v)) => r * f(&u, &v),
                None => ZERO,
            })
        })
        .collect::<Result<_>>()?;
    Ok(terms.iter().fold(ZERO, |acc, t| acc + t))
}

fn expect(op: &CMatrix, s: &SpinStatevector) -> C64 {
    let a = s.amplitudes();
    let mut total = ZERO;
    for i in 0..a.len() {
        if a[i] == ZERO {
            continue;
        }
        let row: C64 = (0..a.len()).map(|j| op[(i, j)] * a[j]).sum();
        total += a[i].conj() * row;
    }
    total
}

/// `⟨Ψ|A⊗B|Ψ⟩` for dense one-register operators (2^M × 2^M), by the branch
/// algebra. Not divided by the norm.
pub fn ef_expectation(state: &EFState, a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let dim = 1usize << state.norb;
    if a.shape() != (dim, dim) || b.shape() != (dim, dim) {
        return Err(Error::Dimension(format!("observables must be {dim}x{dim}")));
    }
    Ok(branch_sum(state, |u, v| expect(a, u) * expect(b, v))?.re)
}

/// `⟨Ψ|H|Ψ⟩ / ⟨Ψ|Ψ⟩` by the branch algebra: per branch, the α-only and
/// β-only energies plus the opposite-spin Coulomb term contracted from the
/// two register one-particle density matrices.
pub fn ef_energy(state: &EFState, ham: &ActiveSpaceHamiltonian) -> Result<f64> {
    if ham.norb() != state.norb || ham.n_alpha() != state.n_alpha || ham.n_beta() != state.n_beta {
        return Err(Error::Dimension("Hamiltonian and state disagree on (M, N_alpha, N_beta)".into()));
    }
    let ops = RegisterOperators::new(ham)?;
    let m = ham.norb();
    let eri = ham.eri_slice();
    let core = ham.core_energy();
    let energy = branch_sum(state, |u, v| {
        let (ga, gb) = (u.one_rdm(), v.one_rdm());
        let mut coulomb = ZERO;
        for p in 0..m {
            for q in 0..m {
                if ga[p][q] == ZERO {
                    continue;
                }
                for r in 0..m {
                    for s in 0..m {
                        coulomb += eri[((p * m + q) * m + r) * m + s] * ga[p][q] * gb[r][s];
                    }
                }
            }
        }
        C64::new(ops.alpha_energy(u) + ops.beta_energy(v) + core, 0.0) + coulomb
    })?;
    let norm = branch_sum(state, |_, _| C64::new(1.0, 0.0))?;
    Ok(energy.re / norm.re)
}
