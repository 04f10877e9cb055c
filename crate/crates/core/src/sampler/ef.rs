//! Two-stage sampling of the compound distribution `Σ_I P_I p_I(x) q_I(y)`:
//! a multinomial split of the shots over branches, then independent draws
//! from the two registers of each branch, paired in draw order.

use super::counts::{SampleCounts, SampleMetadata};
use crate::ansatz::{branch_states, Branch, BranchWeights, EFState};
use crate::error::{Error, Result};
use crate::fock::{sample_bitstrings, AncillaRegister, SpinStatevector};
use crate::hamiltonian::{Configuration, Spin};
use crate::rng::{mix, stream};
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// Collapsed branch states are assembled directly.
    Direct,
    /// Cross branches go through the ancilla circuit and its X-basis readout.
    Ancilla,
}

impl std::str::FromStr for SamplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Self::Direct),
            "ancilla" => Ok(Self::Ancilla),
            _ => Err(Error::Invalid(format!("unknown sampling mode '{s}'"))),
        }
    }
}

impl SamplingMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Direct => "direct",
            Self::Ancilla => "ancilla",
        }
    }
}

pub fn branch_label(b: &Branch) -> String {
    match *b {
        Branch::Diagonal(mu) => format!("D{mu}"),
        Branch::Cross { mu, nu, p, r } => format!("C{mu}.{nu}.{p}.{r}"),
    }
}

/// Multinomial split of `shots` over `probs` by sequential binomials.
pub fn allocate_shots<R: Rng + ?Sized>(probs: &[f64], shots: u64, rng: &mut R) -> Result<Vec<u64>> {
    if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidProbabilities(format!("entry {bad} is negative or not finite")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidProbabilities(format!("entries sum to {total}")));
    }
    let mut out = vec![0u64; probs.len()];
    let mut left = shots;
    let mut mass = 1.0f64;
    for (k, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        let last_positive = probs[k + 1..].iter().all(|&q| q == 0.0);
        let n = if last_positive {
            left
        } else if p == 0.0 {
            0
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(left, q).map_err(|e| Error::InvalidProbabilities(e.to_string()))?.sample(rng)
        };
        out[k] = n;
        left -= n;
        mass -= p;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingOptions {
    pub shots: u64,
    pub seed: u64,
    pub mode: SamplingMode,
    /// Per-bit flip probability applied to every shot after sampling.
    pub noise: f64,
}

/// Paired α and β draws of one branch.
type RegisterDraws = (Vec<u64>, Vec<u64>);

const ALLOCATION_STREAM: u64 = 0xA110C;
const NOISE_STREAM: u64 = 0xF11B;

fn register_draws(state: &SpinStatevector, n: u64, seed: u64, tag: &[u64]) -> Result<Vec<u64>> {
    sample_bitstrings(state, n as usize, &mut stream(seed, mix(tag)))
}

pub fn run_ef_sampling(state: &EFState, weights: &BranchWeights, opts: &SamplingOptions) -> Result<SampleCounts> {
    if weights.branches.len() != weights.probabilities.len() || weights.branches.len() != state.n_det().pow(2) * 16 - 15 * state.n_det() {
        return Err(Error::Dimension("branch weights do not match the state".into()));
    }
    let mut rng = stream(opts.seed, ALLOCATION_STREAM);
    let alloc = allocate_shots(&weights.probabilities, opts.shots, &mut rng)?;
    let states = state.register_states()?;

    // Per-branch (x draws, y draws) in branch order.
    let mut draws: Vec<(Vec<u64>, Vec<u64>)> = vec![(Vec::new(), Vec::new()); alloc.len()];
    let direct: Vec<usize> = (0..alloc.len())
        .filter(|&k| alloc[k] > 0 && (opts.mode == SamplingMode::Direct || matches!(weights.branches[k], Branch::Diagonal(_))))
        .collect();
    let direct_draws: Vec<(usize, RegisterDraws)> = direct
        .par_iter()
        .map(|&k| {
            let (u, v) = branch_states(&states, weights.branches[k])?
                .ok_or(Error::DestructiveInterference(0.0))?;
            let x = register_draws(&u, alloc[k], opts.seed, &[1, k as u64, 0])?;
            let y = register_draws(&v, alloc[k], opts.seed, &[1, k as u64, 1])?;
            Ok((k, (x, y)))
        })
        .collect::<Result<_>>()?;
    for (k, d) in direct_draws {
        draws[k] = d;
    }
    if opts.mode == SamplingMode::Ancilla {
        ancilla_draws(state, weights, &alloc, opts.seed, &mut draws)?;
    }

    let mut counts = SampleCounts::new(state.norb);
    for (x, y) in &draws {
        for (&a, &b) in x.iter().zip(y) {
            counts.add(Configuration::new(a, b), 1);
        }
    }
    if opts.noise > 0.0 {
        counts = inject_bit_flips(&counts, opts.noise, &mut stream(opts.seed, NOISE_STREAM))?;
    }
    counts.metadata = SampleMetadata {
        seed: Some(opts.seed),
        mode: Some(opts.mode.as_str().to_owned()),
        noise: (opts.noise > 0.0).then_some(opts.noise),
        allocation: weights
            .branches
            .iter()
            .zip(&alloc)
            .filter(|(_, n)| **n > 0)
            .map(|(b, n)| (branch_label(b), *n))
            .collect(),
    };
    Ok(counts)
}

/// Cross branches through the ancilla circuit. For each ordered pair, each
/// register and each `p ∈ {0, 1}`, one circuit serves the sibling branches
/// `p` (ancilla +1) and `p + 2` (ancilla −1): the circuit is rerun until both
/// quotas are filled, so neither outcome is discarded unless over quota.
fn ancilla_draws(
    state: &EFState,
    weights: &BranchWeights,
    alloc: &[u64],
    seed: u64,
    draws: &mut [(Vec<u64>, Vec<u64>)],
) -> Result<()> {
    let index: BTreeMap<Branch, usize> = weights.branches.iter().enumerate().map(|(k, b)| (*b, k)).collect();
    let n = |mu: usize, nu: usize, p: u8, r: u8| alloc[index[&Branch::Cross { mu, nu, p, r }]];
    let mut jobs = Vec::new();
    for mu in 0..state.n_det() {
        for nu in 0..state.n_det() {
            if mu == nu {
                continue;
            }
            for spin in [Spin::Alpha, Spin::Beta] {
                for p0 in 0..2u8 {
                    // quota[s][o]: register label o ∈ {p0, p0+2}, other label s
                    let quota: [[u64; 4]; 2] = std::array::from_fn(|side| {
                        let own = p0 + 2 * side as u8;
                        std::array::from_fn(|other| match spin {
                            Spin::Alpha => n(mu, nu, own, other as u8),
                            Spin::Beta => n(mu, nu, other as u8, own),
                        })
                    });
                    if quota.iter().flatten().any(|&q| q > 0) {
                        jobs.push((mu, nu, spin, p0, quota));
                    }
                }
            }
        }
    }
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(mu, nu, spin, p0, quota)| -> Result<_> {
            let need = [quota[0].iter().sum::<u64>(), quota[1].iter().sum::<u64>()];
            let tag = [2, mu as u64, nu as u64, spin as u64, p0 as u64];
            let buckets = run_ancilla_circuit(state, mu, nu, spin, p0, need, seed, &tag)?;
            Ok((mu, nu, spin, p0, quota, buckets))
        })
        .collect::<Result<_>>()?;
    for (mu, nu, spin, p0, quota, buckets) in results {
        for side in 0..2 {
            let own = p0 + 2 * side as u8;
            let mut it = buckets[side].iter().copied();
            for other in 0..4u8 {
                let (p, r) = if spin == Spin::Alpha { (own, other) } else { (other, own) };
                let k = index[&Branch::Cross { mu, nu, p, r }];
                let take: Vec<u64> = it.by_ref().take(quota[side][other as usize] as usize).collect();
                match spin {
                    Spin::Alpha => draws[k].0 = take,
                    Spin::Beta => draws[k].1 = take,
                }
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_ancilla_circuit(
    state: &EFState,
    mu: usize,
    nu: usize,
    spin: Spin,
    p0: u8,
    need: [u64; 2],
    seed: u64,
    tag: &[u64],
) -> Result<[Vec<u64>; 2]> {
    let mut reg = AncillaRegister::prepare(state.rotation(mu, spin), state.rotation(nu, spin), state.reference(spin), p0 as i64)?;
    reg.apply_system(&state.lucj_circuit(spin))?;
    reg.rotate_ancilla_to_x();
    let probs: Vec<f64> = reg.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let total: f64 = probs.iter().sum();
    let probs: Vec<f64> = probs.iter().map(|p| p / total).collect();
    let anc = 1u64 << state.norb;
    let mask = anc - 1;
    let mut rng = stream(seed, mix(tag));
    let mut buckets: [Vec<u64>; 2] = [Vec::new(), Vec::new()];
    let budget = 1000 * (need[0] + need[1]) + 100_000;
    let mut runs = 0u64;
    while buckets[0].len() < need[0] as usize || buckets[1].len() < need[1] as usize {
        let chunk = (need[0] + need[1]).max(64) as usize;
        for z in crate::fock::sample_from_probabilities(&probs, chunk, &mut rng)? {
            let side = (z & anc != 0) as usize;
            if buckets[side].len() < need[side] as usize {
                buckets[side].push(z & mask);
            }
        }
        runs += chunk as u64;
        if runs > budget {
            return Err(Error::Invalid(format!(
                "ancilla outcome too rare to fill quota {need:?} after {runs} circuit runs"
            )));
        }
    }
    Ok(buckets)
}

/// Flip each of the 2M bits of every shot independently with probability `eps`.
pub fn inject_bit_flips<R: Rng + ?Sized>(samples: &SampleCounts, eps: f64, rng: &mut R) -> Result<SampleCounts> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Invalid(format!("flip rate {eps} outside [0, 1]")));
    }
    let m = samples.norb;
    let mut out = SampleCounts::new(m);
    out.metadata = samples.metadata.clone();
    out.metadata.noise = Some(eps);
    for (c, &n) in &samples.counts {
        for _ in 0..n {
            let (mut a, mut b) = (c.alpha(), c.beta());
            for p in 0..m {
                if rng.random::<f64>() < eps {
                    a ^= 1 << p;
                }
                if rng.random::<f64>() < eps {
                    b ^= 1 << p;
                }
            }
            out.add(Configuration::new(a, b), 1);
        }
    }
    Ok(out)
}

/// Draw `shots` configurations from an explicit distribution over `configs`.
pub fn sample_distribution<R: Rng + ?Sized>(
    norb: usize,
    configs: &[Configuration],
    probs: &[f64],
    shots: u64,
    rng: &mut R,
) -> Result<SampleCounts> {
    if configs.len() != probs.len() {
        return Err(Error::Dimension(format!("{} configurations, {} probabilities", configs.len(), probs.len())));
    }
    let mut out = SampleCounts::new(norb);
    for k in crate::fock::sample_from_probabilities(probs, shots as usize, rng)? {
        out.add(configs[k as usize], 1);
    }
    Ok(out)
}
