use super::MAX_ORBITALS;
use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};

#[derive(Clone, Debug, PartialEq)]
pub struct SpinStatevector {
    norb: usize,
    amps: Vec<C64>,
}

impl SpinStatevector {
    pub fn zeros(norb: usize) -> Result<Self> {
        if norb == 0 || norb > MAX_ORBITALS {
            return Err(Error::Dimension(format!("{norb} orbitals outside 1..={MAX_ORBITALS}")));
        }
        Ok(Self { norb, amps: vec![ZERO; 1 << norb] })
    }

    pub fn basis(norb: usize, bits: u64) -> Result<Self> {
        let mut s = Self::zeros(norb)?;
        if bits >> norb != 0 {
            return Err(Error::Dimension(format!("bitstring {bits:#b} wider than {norb} orbitals")));
        }
        s.amps[bits as usize] = ONE;
        Ok(s)
    }

    pub fn from_amplitudes(norb: usize, amps: Vec<C64>) -> Result<Self> {
        if norb == 0 || norb > MAX_ORBITALS || amps.len() != 1 << norb {
            return Err(Error::Dimension(format!("{} amplitudes for {norb} orbitals", amps.len())));
        }
        Ok(Self { norb, amps })
    }

    pub fn norb(&self) -> usize {
        self.norb
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn amplitude(&self, bits: u64) -> C64 {
        self.amps[bits as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> f64 {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            self.amps.iter_mut().for_each(|a| *a *= inv);
        }
        n
    }

    pub fn scale(&mut self, factor: C64) {
        self.amps.iter_mut().for_each(|a| *a *= factor);
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub(crate) fn check_normalized(&self, tol: f64) -> Result<()> {
        let dev = (self.norm() - 1.0).abs();
        if dev > tol {
            return Err(Error::NotNormalized(dev));
        }
        Ok(())
    }

    /// Popcounts carrying non-negligible weight.
    pub fn support_popcounts(&self, tol: f64) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > tol)
            .map(|(z, _)| (z as u64).count_ones())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Result<C64> {
        if self.norb != other.norb {
            return Err(Error::Dimension(format!("{} vs {} orbitals", self.norb, other.norb)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// One-particle density matrix `γ[p][q] = ⟨a†_p a_q⟩`.
    pub fn one_rdm(&self) -> Vec<Vec<C64>> {
        let m = self.norb;
        let mut rdm = vec![vec![ZERO; m]; m];
        for (z, &amp) in self.amps.iter().enumerate() {
            if amp == ZERO {
                continue;
            }
            let z = z as u64;
            for q in 0..m {
                if z >> q & 1 == 0 {
                    continue;
                }
                for p in 0..m {
                    if p != q && z >> p & 1 == 1 {
                        continue;
                    }
                    let target = z ^ (1 << q) ^ (1 << p);
                    let sign = crate::hamiltonian::excitation_sign(z, q, p);
                    rdm[p][q] += self.amps[target as usize].conj() * amp * sign;
                }
            }
        }
        rdm
    }
}

/// `⟨a|b⟩`.
pub fn overlap(a: &SpinStatevector, b: &SpinStatevector) -> Result<C64> {
    a.overlap(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_overlaps() {
        let a = SpinStatevector::basis(3, 0b011).unwrap();
        let b = SpinStatevector::basis(3, 0b101).unwrap();
        assert_eq!(a.overlap(&a).unwrap(), ONE);
        assert_eq!(a.overlap(&b).unwrap(), ZERO);
        assert!(a.overlap(&SpinStatevector::basis(2, 1).unwrap()).is_err());
        assert!(SpinStatevector::basis(2, 0b100).is_err());
        assert!(SpinStatevector::zeros(17).is_err());
    }

    #[test]
    fn rdm_of_basis_state_is_occupation() {
        let a = SpinStatevector::basis(3, 0b101).unwrap();
        let g = a.one_rdm();
        for p in 0..3 {
            for q in 0..3 {
                let expect = if p == q && (0b101 >> p) & 1 == 1 { 1.0 } else { 0.0 };
                assert_eq!(g[p][q], C64::new(expect, 0.0));
            }
        }
    }
}
