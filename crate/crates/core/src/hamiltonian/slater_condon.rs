//! Slater–Condon rules for spin-major determinants.

use super::config::Spin;
use super::{ActiveSpaceHamiltonian, Configuration};
use crate::error::{Error, Result};

#[inline]
fn bits_iter(mut s: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let p = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(p)
        }
    })
}

/// Sign of `a†_to a_from |s⟩` relative to the ascending-order determinant of
/// the resulting string. `from` must be occupied and `to` empty (or equal).
#[inline]
pub fn excitation_sign(s: u64, from: usize, to: usize) -> f64 {
    let (lo, hi) = if from < to { (from, to) } else { (to, from) };
    if hi - lo < 2 {
        return 1.0;
    }
    let between = (s >> (lo + 1)) & ((1u64 << (hi - lo - 1)) - 1);
    if between.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_sectors(m: &Configuration, n: &Configuration) -> Result<()> {
    if m.particle_numbers() != n.particle_numbers() {
        return Err(Error::ParticleMismatch(m.n_alpha(), m.n_beta(), n.n_alpha(), n.n_beta()));
    }
    Ok(())
}

impl ActiveSpaceHamiltonian {
    /// `⟨m|H|n⟩`, including the core energy on the diagonal.
    pub fn slater_condon_element(&self, m: &Configuration, n: &Configuration) -> Result<f64> {
        check_sectors(m, n)?;
        Ok(self.element_unchecked(m, n))
    }

    pub(crate) fn element_unchecked(&self, m: &Configuration, n: &Configuration) -> f64 {
        let da = m.alpha() ^ n.alpha();
        let db = m.beta() ^ n.beta();
        let degree = (da.count_ones() + db.count_ones()) / 2;
        match degree {
            0 => self.diagonal_element(n),
            1 => {
                let (spin, diff) = if da != 0 { (Spin::Alpha, da) } else { (Spin::Beta, db) };
                let from = (n.bits(spin) & diff).trailing_zeros() as usize;
                let to = (m.bits(spin) & diff).trailing_zeros() as usize;
                self.single_excitation(n, spin, from, to)
            }
            2 => {
                if da != 0 && db != 0 {
                    let i = (n.alpha() & da).trailing_zeros() as usize;
                    let a = (m.alpha() & da).trailing_zeros() as usize;
                    let j = (n.beta() & db).trailing_zeros() as usize;
                    let b = (m.beta() & db).trailing_zeros() as usize;
                    excitation_sign(n.alpha(), i, a) * excitation_sign(n.beta(), j, b) * self.eri(a, i, b, j)
                } else {
                    let spin = if da != 0 { Spin::Alpha } else { Spin::Beta };
                    let diff = da | db;
                    let s = n.bits(spin);
                    let mut removed = bits_iter(s & diff);
                    let mut added = bits_iter(m.bits(spin) & diff);
                    let (i, j) = (removed.next().unwrap(), removed.next().unwrap());
                    let (a, b) = (added.next().unwrap(), added.next().unwrap());
                    // a†_a a_i a†_b a_j |n⟩: apply the (j -> b) move first.
                    let sign1 = excitation_sign(s, j, b);
                    let s1 = (s & !(1 << j)) | (1 << b);
                    let sign2 = excitation_sign(s1, i, a);
                    sign1 * sign2 * (self.eri(a, i, b, j) - self.eri(a, j, b, i))
                }
            }
            _ => 0.0,
        }
    }

    pub fn diagonal_element(&self, n: &Configuration) -> f64 {
        let mut e = self.core_energy();
        let occ_a: Vec<usize> = bits_iter(n.alpha()).collect();
        let occ_b: Vec<usize> = bits_iter(n.beta()).collect();
        for &i in occ_a.iter().chain(&occ_b) {
            e += self.h1(i, i);
        }
        for same in [&occ_a, &occ_b] {
            for (x, &i) in same.iter().enumerate() {
                for &j in &same[..x] {
                    e += self.eri(i, i, j, j) - self.eri(i, j, j, i);
                }
            }
        }
        for &i in &occ_a {
            for &j in &occ_b {
                e += self.eri(i, i, j, j);
            }
        }
        e
    }

    fn single_excitation(&self, n: &Configuration, spin: Spin, i: usize, a: usize) -> f64 {
        let (own, other) = match spin {
            Spin::Alpha => (n.alpha(), n.beta()),
            Spin::Beta => (n.beta(), n.alpha()),
        };
        let mut v = self.h1(a, i);
        for j in bits_iter(own) {
            v += self.eri(a, i, j, j) - self.eri(a, j, j, i);
        }
        for j in bits_iter(other) {
            v += self.eri(a, i, j, j);
        }
        excitation_sign(own, i, a) * v
    }
}

/// Phase of a single fermionic operator on a spin-major determinant, or
/// `None` when the result vanishes.
fn apply_op(c: (u64, u64), spin: Spin, orbital: usize, create: bool) -> Option<((u64, u64), i32)> {
    let (alpha, beta) = c;
    let s = match spin {
        Spin::Alpha => alpha,
        Spin::Beta => beta,
    };
    let occupied = s >> orbital & 1 == 1;
    if occupied == create {
        return None;
    }
    let mut parity = (s & ((1u64 << orbital) - 1)).count_ones();
    if spin == Spin::Beta {
        parity += alpha.count_ones();
    }
    let flipped = s ^ (1 << orbital);
    let out = match spin {
        Spin::Alpha => (flipped, beta),
        Spin::Beta => (alpha, flipped),
    };
    Some((out, if parity.is_multiple_of(2) { 1 } else { -1 }))
}

/// `⟨m|S²|n⟩` with `S² = S₋S₊ + S_z(S_z + 1)`.
pub fn s2_matrix_element(m: &Configuration, n: &Configuration) -> Result<f64> {
    check_sectors(m, n)?;
    Ok(s2_unchecked(m, n))
}

pub(crate) fn s2_unchecked(m: &Configuration, n: &Configuration) -> f64 {
    if m == n {
        let na = n.n_alpha() as f64;
        let nb = n.n_beta() as f64;
        let paired = (n.alpha() & n.beta()).count_ones() as f64;
        return (na - nb).powi(2) / 4.0 + (na + nb) / 2.0 - paired;
    }
    let da = m.alpha() ^ n.alpha();
    let db = m.beta() ^ n.beta();
    // Only pair exchanges p(β)->p(α), q(α)->q(β) connect distinct determinants.
    if da != db || da.count_ones() != 2 {
        return 0.0;
    }
    let q = (n.alpha() & da).trailing_zeros() as usize;
    let p = (n.beta() & db).trailing_zeros() as usize;
    if m.alpha() >> p & 1 != 1 || m.beta() >> q & 1 != 1 {
        return 0.0;
    }
    // a†_{qβ} a_{qα} a†_{pα} a_{pβ} |n⟩
    let ops = [(Spin::Beta, p, false), (Spin::Alpha, p, true), (Spin::Alpha, q, false), (Spin::Beta, q, true)];
    let mut state = (n.alpha(), n.beta());
    let mut sign = 1;
    for (spin, orb, create) in ops {
        match apply_op(state, spin, orb, create) {
            Some((next, s)) => {
                state = next;
                sign *= s;
            }
            None => return 0.0,
        }
    }
    debug_assert_eq!(state, (m.alpha(), m.beta()));
    sign as f64
}
