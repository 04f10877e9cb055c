//! Computational-basis sampling of a spin register.

use super::SpinStatevector;
use crate::error::{Error, Result};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use std::collections::BTreeMap;

/// `shots` i.i.d. bitstrings from `|amplitude|²`, in draw order.
pub fn sample_bitstrings<R: Rng + ?Sized>(state: &SpinStatevector, shots: usize, rng: &mut R) -> Result<Vec<u64>> {
    state.check_normalized(1e-8)?;
    sample_from_probabilities(&state.probabilities(), shots, rng)
}

pub fn sample_from_probabilities<R: Rng + ?Sized>(probs: &[f64], shots: usize, rng: &mut R) -> Result<Vec<u64>> {
    if shots == 0 {
        return Ok(Vec::new());
    }
    let dist = WeightedIndex::new(probs).map_err(|e| Error::InvalidProbabilities(e.to_string()))?;
    Ok((0..shots).map(|_| dist.sample(rng) as u64).collect())
}

pub fn sample_counts<R: Rng + ?Sized>(state: &SpinStatevector, shots: usize, rng: &mut R) -> Result<BTreeMap<u64, usize>> {
    let mut counts = BTreeMap::new();
    for z in sample_bitstrings(state, shots, rng)? {
        *counts.entry(z).or_insert(0) += 1;
    }
    Ok(counts)
}
