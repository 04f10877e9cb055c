//! Building forged wavefunctions from classical amplitudes, and evaluating
//! their branch weights and expectation values.

mod amplitudes;
mod branches;
mod factorize;
mod hs;
mod noci;
mod sector;
mod state;

pub use amplitudes::{AmplitudeData, Tensor4};
pub use branches::{
    branch_factor, branch_states, branch_weights, branch_weights_from, compound_probabilities, ef_energy, ef_expectation,
    enumerate_branches, superposition_norm, Branch, BranchWeights,
};
pub use factorize::{double_factorize_t2, layer_generator_tensor};
pub use hs::{build_hs_operators, sample_hs_determinants, HsDeterminant, HsOperator, HsOperatorSet};
pub use noci::{
    generalized_lowest, noci_coefficients, normalize_determinant, normalize_orbitals, optimize_noci_fields, NociContext,
    NociOptimization, NociSolution,
};
pub use sector::{product_vector, sector_configurations, RegisterOperators, MAX_SECTOR_DIM};
pub use state::{fix_phase, DeterminantPair, EFState, RegisterStates};

use crate::error::Result;
use crate::fock::Sparsity;
use crate::hamiltonian::ActiveSpaceHamiltonian;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnsatzConfig {
    pub n_det: usize,
    /// LUCJ layers per spin; 0 keeps all.
    pub layers: usize,
    pub sparsity: Sparsity,
    /// Use `y = 0` (Hartree–Fock) for the first determinant.
    pub include_hf: bool,
    /// Finite-difference optimization steps for the fields; 0 disables.
    pub optimize_iters: usize,
    pub optimize_tol: f64,
    pub seed: u64,
}

impl Default for AnsatzConfig {
    fn default() -> Self {
        Self {
            n_det: 2,
            layers: 0,
            sparsity: Sparsity::Dense,
            include_hf: true,
            optimize_iters: 20,
            optimize_tol: 1e-6,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AnsatzBuild {
    pub state: EFState,
    pub fields: Vec<Vec<f64>>,
    pub noci_energy: f64,
    pub noci_dropped: usize,
    pub optimizer_converged: bool,
}

/// HS determinants → (optional) field optimization → NOCI coefficients →
/// LUCJ layers from the same-spin doubles.
pub fn build_ef_state(ham: &ActiveSpaceHamiltonian, amps: &AmplitudeData, cfg: &AnsatzConfig) -> Result<AnsatzBuild> {
    use rand::Rng;
    use rand_distr::StandardNormal;
    amps.validate()?;
    let (m, na, nb) = (ham.norb(), ham.n_alpha(), ham.n_beta());
    if (amps.norb, amps.n_alpha, amps.n_beta) != (m, na, nb) {
        return Err(crate::Error::Dimension(format!(
            "amplitudes for ({}, {}, {}) but Hamiltonian has ({m}, {na}, {nb})",
            amps.norb, amps.n_alpha, amps.n_beta
        )));
    }
    if cfg.n_det == 0 {
        return Err(crate::Error::Invalid("n_det must be at least 1".into()));
    }
    let ops = build_hs_operators(&amps.t2_ab, m, na, nb)?;
    let mut rng = crate::rng::stream(cfg.seed, crate::rng::mix(&[0x4853, 0]));
    let fields: Vec<Vec<f64>> = (0..cfg.n_det)
        .map(|d| {
            (0..ops.len())
                .map(|_| if d == 0 && cfg.include_hf { 0.0 } else { rng.sample(StandardNormal) })
                .collect()
        })
        .collect();
    let (fields, solution, converged) = if cfg.optimize_iters > 0 && !ops.is_empty() {
        let opt = optimize_noci_fields(ham, &ops, fields, cfg.optimize_iters, cfg.optimize_tol)?;
        (opt.fields, opt.solution, opt.converged)
    } else {
        let dets = fields.iter().map(|y| ops.determinant(y)).collect::<Result<Vec<_>>>()?;
        (fields, noci_coefficients(ham, &dets)?, true)
    };
    let lucj_alpha = double_factorize_t2(&amps.t2_aa, m, na, cfg.layers, cfg.sparsity)?;
    let lucj_beta = double_factorize_t2(&amps.t2_bb, m, nb, cfg.layers, cfg.sparsity)?;
    let mut state = EFState::new(m, na, nb, solution.coefficients.clone(), solution.determinants.clone(), lucj_alpha, lucj_beta)?;
    state.normalize()?;
    Ok(AnsatzBuild {
        state,
        fields,
        noci_energy: solution.energy,
        noci_dropped: solution.dropped,
        optimizer_converged: converged,
    })
}
