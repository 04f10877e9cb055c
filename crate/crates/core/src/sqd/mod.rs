//! Sample-based quantum diagonalization with self-consistent configuration
//! recovery.

mod davidson;
mod recovery;

pub use davidson::{diagonalize_subspace, EigenResult, DENSE_LIMIT, RESTART_DIM};
pub use recovery::{
    cartesian_expansion, correct_string, postselect, recover_configurations, sample_batches, update_occupations,
    ConfigurationCounts, OccupationDistribution,
};

use crate::error::{Error, Result};
use crate::hamiltonian::{ActiveSpaceHamiltonian, Configuration, SubspaceOperator};
use crate::rng::{mix, stream};
use crate::sampler::SampleCounts;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RecoveryConfig {
    pub batches: usize,
    pub samples_per_batch: usize,
    pub max_recovery_iterations: usize,
    pub davidson_tol: f64,
    pub davidson_max_iter: usize,
    pub penalty: f64,
    /// Defaults to `|N_α − N_β| / 2` when absent.
    pub spin_target: Option<f64>,
    pub seed: u64,
    /// Use all α×β pairings of the sampled strings instead of the sampled pairs.
    pub cartesian: bool,
    pub energy_tol: f64,
    pub occupation_tol: f64,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        Self {
            batches: 5,
            samples_per_batch: 1000,
            max_recovery_iterations: 5,
            davidson_tol: 1e-8,
            davidson_max_iter: 1000,
            penalty: 0.0,
            spin_target: None,
            seed: 0,
            cartesian: false,
            energy_tol: 1e-8,
            occupation_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchRecord {
    /// `⟨ψ|H|ψ⟩` (the penalty term removed).
    pub energy: f64,
    pub dimension: usize,
    pub s2: f64,
    pub residual: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Distinct configurations in the (postselected or recovered) set.
    pub configurations: usize,
    pub batches: Vec<BatchRecord>,
    pub min_energy: f64,
    pub occupations: OccupationDistribution,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SQDResult {
    /// Minimum over all iterations and batches.
    pub energy: f64,
    pub best_iteration: usize,
    pub best_batch: usize,
    pub occupations: OccupationDistribution,
    pub iterations: Vec<IterationRecord>,
    pub converged: bool,
    /// `"joint"` or `"cartesian"`.
    pub subspace_mode: String,
    pub config: RecoveryConfig,
}

impl SQDResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Largest subspace dimension seen in any batch.
    pub fn max_dimension(&self) -> usize {
        self.iterations.iter().flat_map(|it| it.batches.iter().map(|b| b.dimension)).max().unwrap_or(0)
    }
}

/// A batch record with its eigenvector and basis.
pub type BatchSolution = (BatchRecord, Vec<f64>, Vec<Configuration>);

const RECOVERY_STREAM: u64 = 0x5EC0;
const BATCH_STREAM: u64 = 0xBA7C;

/// Solve one batch. Returns the record and the eigenvector.
pub fn solve_batch(
    ham: &ActiveSpaceHamiltonian,
    configs: Vec<Configuration>,
    penalty: f64,
    spin_target: f64,
    tol: f64,
    max_iter: usize,
) -> Result<BatchSolution> {
    let op = SubspaceOperator::new(ham, configs, penalty, spin_target)?;
    let eig = diagonalize_subspace(&op, tol, max_iter)?;
    let s2 = op.s2_expectation(&eig.vector);
    let energy = eig.value - penalty * (s2 - spin_target * (spin_target + 1.0));
    let record = BatchRecord { energy, dimension: op.configs().len(), s2, residual: eig.residual, converged: eig.converged };
    Ok((record, eig.vector, op.configs().to_vec()))
}

pub fn run_sqd(ham: &ActiveSpaceHamiltonian, samples: &SampleCounts, cfg: &RecoveryConfig) -> Result<SQDResult> {
    if samples.is_empty() {
        return Err(Error::Invalid("no samples".into()));
    }
    if samples.norb != ham.norb() {
        return Err(Error::Dimension(format!("samples on {} orbitals, Hamiltonian on {}", samples.norb, ham.norb())));
    }
    if cfg.batches == 0 || cfg.samples_per_batch == 0 {
        return Err(Error::Invalid("batches and samples_per_batch must be at least 1".into()));
    }
    let (na, nb) = (ham.n_alpha(), ham.n_beta());
    let spin_target = cfg.spin_target.unwrap_or(na.abs_diff(nb) as f64 / 2.0);
    let iterations_wanted = cfg.max_recovery_iterations.max(1);
    let mut trace: Vec<IterationRecord> = Vec::new();
    let mut occupations: Option<OccupationDistribution> = None;
    let mut converged = false;
    for iteration in 0..iterations_wanted {
        let chi = match &occupations {
            None => postselect(samples, na, nb)?,
            Some(occ) => {
                let mut rng = stream(cfg.seed, mix(&[RECOVERY_STREAM, iteration as u64]));
                recover_configurations(samples, occ, na, nb, &mut rng)?
            }
        };
        let mut rng = stream(cfg.seed, mix(&[BATCH_STREAM, iteration as u64]));
        let mut batches = sample_batches(&chi, cfg.batches, cfg.samples_per_batch, &mut rng)?;
        if cfg.cartesian {
            batches = batches.iter().map(|b| cartesian_expansion(b)).collect();
        }
        let solved: Vec<Result<BatchSolution>> = batches
            .into_par_iter()
            .map(|b| solve_batch(ham, b, cfg.penalty, spin_target, cfg.davidson_tol, cfg.davidson_max_iter))
            .collect();
        let mut records = Vec::new();
        let mut states = Vec::new();
        for s in solved {
            let (rec, vec, configs) = s?;
            if rec.converged {
                states.push((vec, configs));
            } else {
                log::warn!("batch eigensolver stopped at residual {:.3e}", rec.residual);
            }
            records.push(rec);
        }
        if states.is_empty() {
            return Err(Error::Convergence(format!("every batch eigensolve failed in iteration {iteration}")));
        }
        let views: Vec<(&[f64], &[Configuration])> = states.iter().map(|(v, c)| (v.as_slice(), c.as_slice())).collect();
        let occ = update_occupations(ham.norb(), &views);
        let min_energy = records.iter().filter(|r| r.converged).map(|r| r.energy).fold(f64::INFINITY, f64::min);
        if let (Some(prev), Some(prev_occ)) = (trace.last(), &occupations) {
            if (prev.min_energy - min_energy).abs() < cfg.energy_tol && prev_occ.max_difference(&occ) < cfg.occupation_tol {
                converged = true;
            }
        }
        trace.push(IterationRecord { iteration, configurations: chi.len(), batches: records, min_energy, occupations: occ.clone() });
        occupations = Some(occ);
        if converged {
            break;
        }
    }
    let mut best = (f64::INFINITY, 0, 0);
    for it in &trace {
        for (b, rec) in it.batches.iter().enumerate() {
            if rec.converged && rec.energy < best.0 {
                best = (rec.energy, it.iteration, b);
            }
        }
    }
    Ok(SQDResult {
        energy: best.0,
        best_iteration: best.1,
        best_batch: best.2,
        occupations: occupations.expect("at least one iteration"),
        iterations: trace,
        converged,
        subspace_mode: if cfg.cartesian { "cartesian" } else { "joint" }.to_owned(),
        config: cfg.clone(),
    })
}
