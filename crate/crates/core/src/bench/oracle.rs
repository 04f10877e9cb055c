//! Exact references: full-sector diagonalization and the unforged
//! two-register expectation value.

use crate::ansatz::{sector_configurations, EFState};
use crate::error::{Error, Result};
use crate::hamiltonian::{ActiveSpaceHamiltonian, Configuration, SubspaceOperator};
use crate::linalg::C64;
use crate::sqd::diagonalize_subspace;

/// Largest sector handled by [`fci_ground_state`].
pub const FCI_LIMIT: usize = 1_000_000;
const DIRECT_EF_MAX_ORBITALS: usize = 8;

#[derive(Clone, Debug)]
pub struct FciSolution {
    pub energy: f64,
    pub vector: Vec<f64>,
    pub configurations: Vec<Configuration>,
}

pub fn fci_ground_state(ham: &ActiveSpaceHamiltonian) -> Result<FciSolution> {
    let configs = sector_configurations(ham)?;
    if configs.len() > FCI_LIMIT {
        return Err(Error::SectorTooLarge(configs.len(), FCI_LIMIT));
    }
    let op = SubspaceOperator::new(ham, configs, 0.0, 0.0)?;
    let eig = diagonalize_subspace(&op, 1e-10, 2000)?;
    if !eig.converged {
        return Err(Error::Convergence(format!("FCI residual {:.3e}", eig.residual)));
    }
    Ok(FciSolution { energy: eig.value, vector: eig.vector, configurations: op.configs().to_vec() })
}

/// `⟨Ψ|H|Ψ⟩ / ⟨Ψ|Ψ⟩` with `Ψ = Σ_μ c_μ |u_μ⟩|v_μ⟩` assembled on 2M qubits.
pub fn direct_ef_expectation(state: &EFState, ham: &ActiveSpaceHamiltonian) -> Result<f64> {
    if state.norb > DIRECT_EF_MAX_ORBITALS {
        return Err(Error::Dimension(format!(
            "direct expectation limited to {DIRECT_EF_MAX_ORBITALS} orbitals, got {}",
            state.norb
        )));
    }
    if (state.norb, state.n_alpha, state.n_beta) != (ham.norb(), ham.n_alpha(), ham.n_beta()) {
        return Err(Error::Dimension("state and Hamiltonian describe different sectors".into()));
    }
    let full = state.full_statevector()?;
    let m = state.norb;
    let configs = sector_configurations(ham)?;
    let psi: Vec<C64> = configs.iter().map(|c| full[(c.alpha() | c.beta() << m) as usize]).collect();
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if norm < 1e-300 {
        return Err(Error::NotNormalized(1.0));
    }
    let op = SubspaceOperator::new(ham, configs, 0.0, 0.0)?;
    let re: Vec<f64> = psi.iter().map(|z| z.re).collect();
    let im: Vec<f64> = psi.iter().map(|z| z.im).collect();
    let (hr, hi) = op.apply_complex(&re, &im);
    let e: f64 = (0..re.len()).map(|k| re[k] * hr[k] + im[k] * hi[k]).sum();
    Ok(e / norm)
}
