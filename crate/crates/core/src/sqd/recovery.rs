//! Postselection, configuration recovery and batch subsampling.

use crate::error::{Error, Result};
use crate::hamiltonian::{Configuration, Spin};
use crate::sampler::SampleCounts;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Multiset of configurations.
pub type ConfigurationCounts = BTreeMap<Configuration, u64>;

/// Average occupation `n_pσ` of every spin-orbital.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OccupationDistribution {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl OccupationDistribution {
    pub fn norb(&self) -> usize {
        self.alpha.len()
    }

    pub fn spin(&self, spin: Spin) -> &[f64] {
        match spin {
            Spin::Alpha => &self.alpha,
            Spin::Beta => &self.beta,
        }
    }

    /// `max_pσ |n_pσ − m_pσ|`.
    pub fn max_difference(&self, other: &Self) -> f64 {
        self.alpha
            .iter()
            .zip(&other.alpha)
            .chain(self.beta.iter().zip(&other.beta))
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Configurations with the target popcounts, with multiplicities.
pub fn postselect(samples: &SampleCounts, n_alpha: usize, n_beta: usize) -> Result<ConfigurationCounts> {
    let kept: ConfigurationCounts = samples
        .counts
        .iter()
        .filter(|(c, _)| c.n_alpha() as usize == n_alpha && c.n_beta() as usize == n_beta)
        .map(|(c, n)| (*c, *n))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyPostselection);
    }
    Ok(kept)
}

/// Bring one spin string to `target` electrons: flip occupied bits to 0 (or
/// empty bits to 1) one at a time, choosing among candidates with
/// probability `∝ |x_p − n_p|`, uniformly when every weight is zero.
pub fn correct_string<R: Rng + ?Sized>(bits: u64, occupations: &[f64], target: usize, rng: &mut R) -> u64 {
    let m = occupations.len();
    let mut x = bits;
    while (x.count_ones() as usize) != target {
        let excess = x.count_ones() as usize > target;
        let candidates: Vec<usize> = (0..m).filter(|&p| (x >> p & 1 == 1) == excess).collect();
        let weights: Vec<f64> = candidates
            .iter()
            .map(|&p| {
                let xp = if excess { 1.0 } else { 0.0 };
                (xp - occupations[p]).abs()
            })
            .collect();
        let pick = match WeightedIndex::new(&weights) {
            Ok(dist) => candidates[dist.sample(rng)],
            Err(_) => candidates[rng.random_range(0..candidates.len())],
        };
        x ^= 1 << pick;
    }
    x
}

/// Correct every wrong-popcount shot (each occurrence separately, α and β
/// independently); correct shots pass through.
pub fn recover_configurations<R: Rng + ?Sized>(
    samples: &SampleCounts,
    occupations: &OccupationDistribution,
    n_alpha: usize,
    n_beta: usize,
    rng: &mut R,
) -> Result<ConfigurationCounts> {
    let m = samples.norb;
    if occupations.norb() != m {
        return Err(Error::Dimension(format!("{} occupations for {m} orbitals", occupations.norb())));
    }
    if n_alpha > m || n_beta > m {
        return Err(Error::Invalid(format!("targets ({n_alpha}, {n_beta}) exceed {m} orbitals")));
    }
    if occupations.alpha.iter().chain(&occupations.beta).any(|n| !(0.0..=1.0).contains(n)) {
        return Err(Error::Invalid("occupations must lie in [0, 1]".into()));
    }
    let mut out = ConfigurationCounts::new();
    for (c, &count) in &samples.counts {
        if c.n_alpha() as usize == n_alpha && c.n_beta() as usize == n_beta {
            *out.entry(*c).or_insert(0) += count;
            continue;
        }
        for _ in 0..count {
            let a = correct_string(c.alpha(), &occupations.alpha, n_alpha, rng);
            let b = correct_string(c.beta(), &occupations.beta, n_beta, rng);
            *out.entry(Configuration::new(a, b)).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// `k` batches, each `per_batch` occurrences drawn without replacement from
/// the multiset, then deduplicated and sorted.
pub fn sample_batches<R: Rng + ?Sized>(
    chi: &ConfigurationCounts,
    k: usize,
    per_batch: usize,
    rng: &mut R,
) -> Result<Vec<Vec<Configuration>>> {
    if chi.is_empty() {
        return Err(Error::EmptySubspace);
    }
    if k == 0 || per_batch == 0 {
        return Err(Error::Invalid("batch count and samples per batch must be positive".into()));
    }
    let configs: Vec<Configuration> = chi.keys().copied().collect();
    let mut cumulative = Vec::with_capacity(configs.len());
    let mut total = 0u64;
    for n in chi.values() {
        total += n;
        cumulative.push(total);
    }
    let mut batches = Vec::with_capacity(k);
    for _ in 0..k {
        if per_batch as u64 >= total {
            batches.push(configs.clone());
            continue;
        }
        let picks = rand::seq::index::sample(rng, total as usize, per_batch);
        let mut batch: Vec<Configuration> =
            picks.iter().map(|occ| configs[cumulative.partition_point(|&c| c <= occ as u64)]).collect();
        batch.sort_unstable();
        batch.dedup();
        batches.push(batch);
    }
    Ok(batches)
}

/// All pairings of the α and β strings present in `configs`.
pub fn cartesian_expansion(configs: &[Configuration]) -> Vec<Configuration> {
    let mut a: Vec<u64> = configs.iter().map(|c| c.alpha()).collect();
    let mut b: Vec<u64> = configs.iter().map(|c| c.beta()).collect();
    a.sort_unstable();
    a.dedup();
    b.sort_unstable();
    b.dedup();
    a.iter().flat_map(|&x| b.iter().map(move |&y| Configuration::new(x, y))).collect()
}

/// `n_pσ = (1/K) Σ_b Σ_x |ψ_b(x)|² x_pσ`.
pub fn update_occupations(norb: usize, states: &[(&[f64], &[Configuration])]) -> OccupationDistribution {
    let mut occ = OccupationDistribution { alpha: vec![0.0; norb], beta: vec![0.0; norb] };
    if states.is_empty() {
        return occ;
    }
    for (psi, configs) in states {
        for (amp, c) in psi.iter().zip(configs.iter()) {
            let w = amp * amp;
            for p in 0..norb {
                if c.alpha() >> p & 1 == 1 {
                    occ.alpha[p] += w;
                }
                if c.beta() >> p & 1 == 1 {
                    occ.beta[p] += w;
                }
            }
        }
    }
    let k = states.len() as f64;
    occ.alpha.iter_mut().chain(occ.beta.iter_mut()).for_each(|x| *x = (*x / k).clamp(0.0, 1.0));
    occ
}
