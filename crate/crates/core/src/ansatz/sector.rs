//! Fixed-particle-number sectors and the Hamiltonian restricted to them.

use crate::error::{Error, Result};
use crate::fock::SpinStatevector;
use crate::hamiltonian::{strings_with_popcount, ActiveSpaceHamiltonian, Configuration, LinearOperator, SubspaceOperator};
use crate::linalg::{C64, ZERO};

/// Largest full-sector dimension handled by dense two-register paths.
pub const MAX_SECTOR_DIM: usize = 1 << 20;

/// Hamiltonian pieces needed by the forged energy: the α-only and β-only
/// operators (core energy removed) on one register.
#[derive(Clone, Debug)]
pub struct RegisterOperators {
    alpha_strings: Vec<u64>,
    beta_strings: Vec<u64>,
    alpha: SubspaceOperator,
    beta: SubspaceOperator,
    core: f64,
}

impl RegisterOperators {
    pub fn new(ham: &ActiveSpaceHamiltonian) -> Result<Self> {
        let m = ham.norb();
        let alpha_strings = strings_with_popcount(m, ham.n_alpha());
        let beta_strings = strings_with_popcount(m, ham.n_beta());
        let alpha = SubspaceOperator::new(ham, alpha_strings.iter().map(|&x| Configuration::new(x, 0)).collect(), 0.0, 0.0)?;
        let beta = SubspaceOperator::new(ham, beta_strings.iter().map(|&y| Configuration::new(0, y)).collect(), 0.0, 0.0)?;
        Ok(Self { alpha_strings, beta_strings, alpha, beta, core: ham.core_energy() })
    }

    fn expectation(op: &SubspaceOperator, strings: &[u64], state: &SpinStatevector, core: f64) -> f64 {
        let re: Vec<f64> = strings.iter().map(|&x| state.amplitude(x).re).collect();
        let im: Vec<f64> = strings.iter().map(|&x| state.amplitude(x).im).collect();
        let (hr, hi) = op.apply_complex(&re, &im);
        let e: f64 = (0..strings.len()).map(|k| re[k] * hr[k] + im[k] * hi[k]).sum();
        let norm: f64 = (0..strings.len()).map(|k| re[k] * re[k] + im[k] * im[k]).sum();
        e - core * norm
    }

    /// `⟨u|H_αα|u⟩` for a state of the α register (one-body plus same-spin
    /// two-body part, no core energy).
    pub fn alpha_energy(&self, state: &SpinStatevector) -> f64 {
        Self::expectation(&self.alpha, &self.alpha_strings, state, self.core)
    }

    pub fn beta_energy(&self, state: &SpinStatevector) -> f64 {
        Self::expectation(&self.beta, &self.beta_strings, state, self.core)
    }
}

/// The full `(N_α, N_β)` sector as a configuration list, α-major.
pub fn sector_configurations(ham: &ActiveSpaceHamiltonian) -> Result<Vec<Configuration>> {
    let m = ham.norb();
    let a = strings_with_popcount(m, ham.n_alpha());
    let b = strings_with_popcount(m, ham.n_beta());
    let dim = a.len() * b.len();
    if dim > MAX_SECTOR_DIM {
        return Err(Error::SectorTooLarge(dim, MAX_SECTOR_DIM));
    }
    Ok(a.iter().flat_map(|&x| b.iter().map(move |&y| Configuration::new(x, y))).collect())
}

/// Product state `|u⟩ ⊗ |v⟩` restricted to `configs`.
pub fn product_vector(u: &SpinStatevector, v: &SpinStatevector, configs: &[Configuration]) -> Vec<C64> {
    configs.iter().map(|c| u.amplitude(c.alpha()) * v.amplitude(c.beta())).collect()
}

/// `⟨a|H|b⟩` for complex vectors over the operator's configurations.
pub fn matrix_element(op: &SubspaceOperator, a: &[C64], b: &[C64]) -> C64 {
    let re: Vec<f64> = b.iter().map(|z| z.re).collect();
    let im: Vec<f64> = b.iter().map(|z| z.im).collect();
    let mut hr = vec![0.0; op.dim()];
    let mut hi = vec![0.0; op.dim()];
    op.apply(&re, &mut hr);
    op.apply(&im, &mut hi);
    a.iter().zip(hr.iter().zip(&hi)).fold(ZERO, |acc, (x, (r, i))| acc + x.conj() * C64::new(*r, *i))
}
