//! Collated measurement outcomes and their text interchange format.

use crate::error::{Error, Result};
use crate::hamiltonian::{bitstring, parse_bitstring, Configuration};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleMetadata {
    pub seed: Option<u64>,
    pub mode: Option<String>,
    pub noise: Option<f64>,
    /// `(branch label, N_I)` for every branch with at least one shot.
    pub allocation: Vec<(String, u64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleCounts {
    pub norb: usize,
    pub counts: BTreeMap<Configuration, u64>,
    pub metadata: SampleMetadata,
}

impl SampleCounts {
    pub fn new(norb: usize) -> Self {
        Self { norb, counts: BTreeMap::new(), metadata: SampleMetadata::default() }
    }

    pub fn add(&mut self, config: Configuration, count: u64) {
        if count > 0 {
            *self.counts.entry(config).or_insert(0) += count;
        }
    }

    pub fn merge(&mut self, other: &SampleCounts) {
        for (c, n) in &other.counts {
            self.add(*c, *n);
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Header lines `# key value`, then one `alpha_bits beta_bits count` line
    /// per configuration (orbital 0 rightmost), sorted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# norb {}", self.norb);
        let _ = writeln!(out, "# shots {}", self.total());
        if let Some(seed) = self.metadata.seed {
            let _ = writeln!(out, "# seed {seed}");
        }
        if let Some(mode) = &self.metadata.mode {
            let _ = writeln!(out, "# mode {mode}");
        }
        if let Some(noise) = self.metadata.noise {
            let _ = writeln!(out, "# noise {noise:e}");
        }
        for (label, n) in &self.metadata.allocation {
            let _ = writeln!(out, "# branch {label} {n}");
        }
        for (c, n) in &self.counts {
            let _ = writeln!(out, "{} {} {n}", bitstring(c.alpha(), self.norb), bitstring(c.beta(), self.norb));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::CountsFile { line, message };
        let mut norb: Option<usize> = None;
        let mut declared_shots: Option<(usize, u64)> = None;
        let mut metadata = SampleMetadata::default();
        let mut records = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let ln = k + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut f = rest.split_whitespace();
                let (Some(key), value) = (f.next(), f.next()) else { continue };
                let num = |v: Option<&str>| -> Result<u64> {
                    v.and_then(|v| v.parse().ok()).ok_or_else(|| err(ln, format!("bad value for '{key}'")))
                };
                match key {
                    "norb" => norb = Some(num(value)? as usize),
                    "shots" => declared_shots = Some((ln, num(value)?)),
                    "seed" => metadata.seed = Some(num(value)?),
                    "mode" => metadata.mode = value.map(str::to_owned),
                    "noise" => {
                        metadata.noise =
                            Some(value.and_then(|v| v.parse().ok()).ok_or_else(|| err(ln, "bad noise value".into()))?)
                    }
                    "branch" => {
                        let label = value.ok_or_else(|| err(ln, "missing branch label".into()))?;
                        metadata.allocation.push((label.to_owned(), num(f.next())?));
                    }
                    _ => {}
                }
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(err(ln, format!("expected 'alpha_bits beta_bits count', found {} fields", f.len())));
            }
            if f[0].len() != f[1].len() {
                return Err(err(ln, "alpha and beta strings differ in length".into()));
            }
            let a = parse_bitstring(f[0]).ok_or_else(|| err(ln, format!("bad bitstring '{}'", f[0])))?;
            let b = parse_bitstring(f[1]).ok_or_else(|| err(ln, format!("bad bitstring '{}'", f[1])))?;
            let n: u64 = f[2].parse().map_err(|_| err(ln, format!("bad count '{}'", f[2])))?;
            let width = f[0].len();
            match norb {
                None => norb = Some(width),
                Some(m) if m != width => return Err(err(ln, format!("bitstring width {width}, expected {m}"))),
                _ => {}
            }
            records.push((Configuration::new(a, b), n));
        }
        let norb = norb.ok_or_else(|| err(0, "no records and no norb header".into()))?;
        let mut out = SampleCounts { norb, counts: BTreeMap::new(), metadata };
        for (c, n) in records {
            out.add(c, n);
        }
        if let Some((ln, shots)) = declared_shots {
            if shots != out.total() {
                return Err(err(ln, format!("header declares {shots} shots, records sum to {}", out.total())));
            }
        }
        Ok(out)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Fraction of shots with the target per-spin popcounts (0 for no shots).
pub fn postselection_fraction(samples: &SampleCounts, n_alpha: usize, n_beta: usize) -> f64 {
    let total = samples.total();
    if total == 0 {
        return 0.0;
    }
    let good: u64 = samples
        .counts
        .iter()
        .filter(|(c, _)| c.n_alpha() as usize == n_alpha && c.n_beta() as usize == n_beta)
        .map(|(_, n)| n)
        .sum();
    good as f64 / total as f64
}
