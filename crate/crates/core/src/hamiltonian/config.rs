use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spin {
    Alpha,
    Beta,
}

/// A Slater determinant labelled by one occupation bitstring per spin.
///
/// Bit `p` of `alpha` (`beta`) is the occupation of spatial orbital `p`
/// with spin up (down). Popcounts are cached at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(u64, u64)", into = "(u64, u64)")]
pub struct Configuration {
    alpha: u64,
    beta: u64,
    n_alpha: u32,
    n_beta: u32,
}

impl Configuration {
    pub fn new(alpha: u64, beta: u64) -> Self {
        Self { alpha, beta, n_alpha: alpha.count_ones(), n_beta: beta.count_ones() }
    }

    /// Lowest `n_alpha` / `n_beta` orbitals occupied.
    pub fn hartree_fock(n_alpha: usize, n_beta: usize) -> Self {
        Self::new(low_bits(n_alpha), low_bits(n_beta))
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn bits(&self, spin: Spin) -> u64 {
        match spin {
            Spin::Alpha => self.alpha,
            Spin::Beta => self.beta,
        }
    }

    pub fn n_alpha(&self) -> u32 {
        self.n_alpha
    }

    pub fn n_beta(&self) -> u32 {
        self.n_beta
    }

    pub fn particle_numbers(&self) -> (u32, u32) {
        (self.n_alpha, self.n_beta)
    }

    /// Canonical integer encoding: `alpha | beta << norb`.
    pub fn encode(&self, norb: usize) -> u128 {
        (self.alpha as u128) | ((self.beta as u128) << norb)
    }

    pub fn decode(code: u128, norb: usize) -> Self {
        let mask = if norb >= 64 { u64::MAX } else { (1u64 << norb) - 1 };
        Self::new((code as u64) & mask, ((code >> norb) as u64) & mask)
    }

    pub fn occupied(&self, spin: Spin, orbital: usize) -> bool {
        self.bits(spin) >> orbital & 1 == 1
    }

    /// Text form used by count files: alpha string then beta string, each
    /// printed with orbital 0 as the rightmost character.
    pub fn display(&self, norb: usize) -> String {
        format!("{} {}", bitstring(self.alpha, norb), bitstring(self.beta, norb))
    }
}

impl From<(u64, u64)> for Configuration {
    fn from((alpha, beta): (u64, u64)) -> Self {
        Self::new(alpha, beta)
    }
}

impl From<Configuration> for (u64, u64) {
    fn from(c: Configuration) -> Self {
        (c.alpha, c.beta)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:#b}, {:#b})", self.alpha, self.beta)
    }
}

pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Orbital 0 is the rightmost character.
pub fn bitstring(bits: u64, norb: usize) -> String {
    (0..norb).rev().map(|p| if bits >> p & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bitstring(s: &str) -> Option<u64> {
    if s.is_empty() || s.len() > 64 {
        return None;
    }
    let mut bits = 0u64;
    for (p, ch) in s.chars().rev().enumerate() {
        match ch {
            '1' => bits |= 1 << p,
            '0' => {}
            _ => return None,
        }
    }
    Some(bits)
}

/// All `norb`-bit strings with exactly `n` bits set, ascending.
pub fn strings_with_popcount(norb: usize, n: usize) -> Vec<u64> {
    if n > norb {
        return Vec::new();
    }
    if n == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut s = low_bits(n);
    let limit = 1u64 << norb;
    while s < limit {
        out.push(s);
        // Gosper's hack
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn popcount_enumeration() {
        let s = strings_with_popcount(5, 2);
        assert_eq!(s.len(), 10);
        assert!(s.iter().all(|x| x.count_ones() == 2));
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(strings_with_popcount(3, 0), vec![0]);
        assert_eq!(strings_with_popcount(3, 3), vec![0b111]);
    }

    #[test]
    fn encoding_round_trip() {
        let c = Configuration::new(0b1011, 0b0110);
        assert_eq!(c.n_alpha(), 3);
        assert_eq!(c.n_beta(), 2);
        assert_eq!(Configuration::decode(c.encode(4), 4), c);
        assert_eq!(bitstring(0b0011, 4), "0011");
        assert_eq!(parse_bitstring("0011"), Some(0b0011));
        assert_eq!(parse_bitstring("01x"), None);
    }
}
