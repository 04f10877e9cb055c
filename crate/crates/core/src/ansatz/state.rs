//! The forged wavefunction `Σ_μ c_μ |u_μ⟩ ⊗ |v_μ⟩` with
//! `|u_μ⟩ = LUCJ_α |d_μα⟩` and `|v_μ⟩ = LUCJ_β |d_μβ⟩`.

use crate::error::{Error, Result};
use crate::fock::{lucj_circuit, prepare_slater, Circuit, LucjLayer, OrbitalRotationSpec, SpinStatevector};
use crate::hamiltonian::Spin;
use crate::linalg::{CMatrix, C64, ZERO};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// One determinant pair, each a rotation of the lowest-orbital reference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeterminantPair {
    pub alpha: OrbitalRotationSpec,
    pub beta: OrbitalRotationSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EFState {
    pub norb: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub coefficients: Vec<C64>,
    pub determinants: Vec<DeterminantPair>,
    pub lucj_alpha: Vec<LucjLayer>,
    pub lucj_beta: Vec<LucjLayer>,
    pub normalized: bool,
}

/// Per-register states of every determinant.
#[derive(Clone, Debug)]
pub struct RegisterStates {
    pub u: Vec<SpinStatevector>,
    pub v: Vec<SpinStatevector>,
}

impl EFState {
    pub fn new(
        norb: usize,
        n_alpha: usize,
        n_beta: usize,
        coefficients: Vec<C64>,
        determinants: Vec<DeterminantPair>,
        lucj_alpha: Vec<LucjLayer>,
        lucj_beta: Vec<LucjLayer>,
    ) -> Result<Self> {
        let state = Self { norb, n_alpha, n_beta, coefficients, determinants, lucj_alpha, lucj_beta, normalized: false };
        state.validate()?;
        Ok(state)
    }

    /// A single Hartree–Fock determinant with no LUCJ layers.
    pub fn hartree_fock(norb: usize, n_alpha: usize, n_beta: usize) -> Result<Self> {
        let id = OrbitalRotationSpec::identity(norb);
        let mut s = Self::new(
            norb,
            n_alpha,
            n_beta,
            vec![C64::new(1.0, 0.0)],
            vec![DeterminantPair { alpha: id.clone(), beta: id }],
            Vec::new(),
            Vec::new(),
        )?;
        s.normalized = true;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.norb == 0 || self.norb > crate::fock::MAX_ORBITALS {
            return Err(Error::Dimension(format!("{} orbitals", self.norb)));
        }
        if self.n_alpha > self.norb || self.n_beta > self.norb {
            return Err(Error::Invalid(format!("({}, {}) electrons in {} orbitals", self.n_alpha, self.n_beta, self.norb)));
        }
        if self.coefficients.is_empty() || self.coefficients.len() != self.determinants.len() {
            return Err(Error::Dimension(format!(
                "{} coefficients for {} determinants",
                self.coefficients.len(),
                self.determinants.len()
            )));
        }
        let bad_det = self.determinants.iter().any(|d| d.alpha.norb() != self.norb || d.beta.norb() != self.norb);
        let bad_layer = self.lucj_alpha.iter().chain(&self.lucj_beta).any(|l| l.norb() != self.norb);
        if bad_det || bad_layer {
            return Err(Error::Dimension(format!("component not on {} orbitals", self.norb)));
        }
        Ok(())
    }

    pub fn n_det(&self) -> usize {
        self.coefficients.len()
    }

    pub fn reference(&self, spin: Spin) -> u64 {
        let n = match spin {
            Spin::Alpha => self.n_alpha,
            Spin::Beta => self.n_beta,
        };
        crate::hamiltonian::low_bits(n)
    }

    pub fn lucj(&self, spin: Spin) -> &[LucjLayer] {
        match spin {
            Spin::Alpha => &self.lucj_alpha,
            Spin::Beta => &self.lucj_beta,
        }
    }

    pub fn lucj_circuit(&self, spin: Spin) -> Circuit {
        lucj_circuit(self.norb, self.lucj(spin))
    }

    pub fn rotation(&self, mu: usize, spin: Spin) -> &OrbitalRotationSpec {
        match spin {
            Spin::Alpha => &self.determinants[mu].alpha,
            Spin::Beta => &self.determinants[mu].beta,
        }
    }

    /// `|d_μσ⟩` before the LUCJ layers.
    pub fn determinant_state(&self, mu: usize, spin: Spin) -> Result<SpinStatevector> {
        prepare_slater(self.rotation(mu, spin), self.reference(spin))
    }

    /// `|u_μ⟩` (α) or `|v_μ⟩` (β).
    pub fn register_state(&self, mu: usize, spin: Spin) -> Result<SpinStatevector> {
        let mut s = self.determinant_state(mu, spin)?;
        self.lucj_circuit(spin).apply(&mut s)?;
        Ok(s)
    }

    pub fn register_states(&self) -> Result<RegisterStates> {
        let build = |spin: Spin| -> Result<Vec<SpinStatevector>> {
            (0..self.n_det()).into_par_iter().map(|mu| self.register_state(mu, spin)).collect()
        };
        Ok(RegisterStates { u: build(Spin::Alpha)?, v: build(Spin::Beta)? })
    }

    /// Overlap matrices `⟨u_μ|u_ν⟩` and `⟨v_μ|v_ν⟩`.
    pub fn overlaps(states: &RegisterStates) -> (CMatrix, CMatrix) {
        let n = states.u.len();
        let gram = |s: &[SpinStatevector]| CMatrix::from_fn(n, n, |i, j| s[i].overlap(&s[j]).expect("same norb"));
        (gram(&states.u), gram(&states.v))
    }

    /// `⟨Ψ|Ψ⟩`.
    pub fn norm_squared(&self) -> Result<f64> {
        let (su, sv) = Self::overlaps(&self.register_states()?);
        let c = &self.coefficients;
        let mut total = ZERO;
        for mu in 0..c.len() {
            for nu in 0..c.len() {
                total += c[mu].conj() * c[nu] * su[(mu, nu)] * sv[(mu, nu)];
            }
        }
        Ok(total.re)
    }

    /// Rescale to unit norm and make the largest coefficient real positive.
    pub fn normalize(&mut self) -> Result<()> {
        let n2 = self.norm_squared()?;
        if n2 <= 1e-300 {
            return Err(Error::Invalid("state has zero norm".into()));
        }
        let inv = 1.0 / n2.sqrt();
        fix_phase(&mut self.coefficients);
        self.coefficients.iter_mut().for_each(|c| *c *= inv);
        self.normalized = true;
        Ok(())
    }

    /// Amplitudes `⟨x, y|Ψ⟩` on the full 2M-qubit register, indexed `x | y << M`.
    pub fn full_statevector(&self) -> Result<Vec<C64>> {
        let m = self.norb;
        if 2 * m > 20 {
            return Err(Error::Dimension(format!("two-register state on {m} orbitals too large")));
        }
        let states = self.register_states()?;
        let mut out = vec![ZERO; 1 << (2 * m)];
        for (mu, c) in self.coefficients.iter().enumerate() {
            let (u, v) = (states.u[mu].amplitudes(), states.v[mu].amplitudes());
            for (y, vy) in v.iter().enumerate() {
                if vy.norm_sqr() == 0.0 {
                    continue;
                }
                for (x, ux) in u.iter().enumerate() {
                    out[x | y << m] += c * ux * vy;
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Multiply by a global phase so the largest-magnitude entry is real positive.
pub fn fix_phase(c: &mut [C64]) {
    let Some(big) = c.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) else {
        return;
    };
    if big.norm() == 0.0 {
        return;
    }
    let phase = big.conj() / big.norm();
    c.iter_mut().for_each(|z| *z *= phase);
}
