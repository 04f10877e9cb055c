//! Library-driven scenarios shared by several test targets.

use efsqd::bench::fci_ground_state;
use efsqd::hamiltonian::ActiveSpaceHamiltonian;
use efsqd::rng::stream;
use efsqd::sampler::{inject_bit_flips, sample_distribution, SampleCounts};
use efsqd::sqd::{run_sqd, RecoveryConfig, SQDResult};

/// Shots drawn from the exact ground state, then corrupted bit by bit.
pub fn corrupted_ground_state_samples(ham: &ActiveSpaceHamiltonian, shots: u64, eps: f64, seed: u64) -> SampleCounts {
    let fci = fci_ground_state(ham).unwrap();
    let probs: Vec<f64> = fci.vector.iter().map(|x| x * x).collect();
    let clean = sample_distribution(ham.norb(), &fci.configurations, &probs, shots, &mut stream(seed, 1)).unwrap();
    inject_bit_flips(&clean, eps, &mut stream(seed, 2)).unwrap()
}

pub struct RecoveryTrial {
    pub postselected: SQDResult,
    pub recovered: SQDResult,
}

/// Paired runs on the same samples: postselection only versus five rounds
/// of recovery. Each batch covers the whole multiset.
pub fn recovery_trial(ham: &ActiveSpaceHamiltonian, samples: &SampleCounts, seed: u64) -> RecoveryTrial {
    let base = RecoveryConfig { batches: 1, samples_per_batch: usize::MAX, max_recovery_iterations: 5, seed, ..Default::default() };
    let postselected = run_sqd(ham, samples, &RecoveryConfig { max_recovery_iterations: 1, ..base.clone() }).unwrap();
    let recovered = run_sqd(ham, samples, &base).unwrap();
    RecoveryTrial { postselected, recovered }
}
