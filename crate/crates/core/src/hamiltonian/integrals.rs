use crate::error::{Error, Result};
use crate::linalg::RMatrix;

/// Active-space Hamiltonian in chemists' notation:
///
/// `H = E_core + Σ_{pq,σ} h[p,q] a†_{pσ} a_{qσ}
///      + ½ Σ_{pqrs,στ} (pq|rs) a†_{pσ} a†_{rτ} a_{sτ} a_{qσ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ActiveSpaceHamiltonian {
    norb: usize,
    n_alpha: usize,
    n_beta: usize,
    core_energy: f64,
    h1: Vec<f64>,
    eri: Vec<f64>,
}

impl ActiveSpaceHamiltonian {
    /// Build from dense integrals. `eri` is indexed `((p*M + q)*M + r)*M + s`.
    pub fn new(
        norb: usize,
        n_alpha: usize,
        n_beta: usize,
        core_energy: f64,
        h1: Vec<f64>,
        eri: Vec<f64>,
    ) -> Result<Self> {
        if norb == 0 || norb > 64 {
            return Err(Error::Invalid(format!("orbital count {norb} outside 1..=64")));
        }
        if n_alpha > norb || n_beta > norb {
            return Err(Error::Invalid(format!(
                "electron counts ({n_alpha}, {n_beta}) exceed orbital count {norb}"
            )));
        }
        if h1.len() != norb * norb || eri.len() != norb.pow(4) {
            return Err(Error::Dimension("integral array sizes do not match norb".into()));
        }
        let ham = Self { norb, n_alpha, n_beta, core_energy, h1, eri };
        let asym = ham.h1_symmetry_deviation();
        if asym > 1e-12 {
            return Err(Error::NotSymmetric(asym));
        }
        let asym = ham.eri_symmetry_deviation();
        if asym > 1e-12 {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(ham)
    }

    pub fn norb(&self) -> usize {
        self.norb
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    pub fn n_beta(&self) -> usize {
        self.n_beta
    }

    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    #[inline]
    pub fn h1(&self, p: usize, q: usize) -> f64 {
        self.h1[p * self.norb + q]
    }

    /// `(pq|rs)`.
    #[inline]
    pub fn eri(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let m = self.norb;
        self.eri[((p * m + q) * m + r) * m + s]
    }

    pub fn h1_matrix(&self) -> RMatrix {
        RMatrix::from_row_slice(self.norb, self.norb, &self.h1)
    }

    pub fn eri_slice(&self) -> &[f64] {
        &self.eri
    }

    /// Same integrals, different electron counts.
    pub fn with_electrons(&self, n_alpha: usize, n_beta: usize) -> Result<Self> {
        Self::new(self.norb, n_alpha, n_beta, self.core_energy, self.h1.clone(), self.eri.clone())
    }

    pub(crate) fn h1_symmetry_deviation(&self) -> f64 {
        let m = self.norb;
        let mut dev = 0.0f64;
        for p in 0..m {
            for q in 0..p {
                dev = dev.max((self.h1(p, q) - self.h1(q, p)).abs());
            }
        }
        dev
    }

    pub(crate) fn eri_symmetry_deviation(&self) -> f64 {
        let m = self.norb;
        let mut dev = 0.0f64;
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    for s in 0..m {
                        let v = self.eri(p, q, r, s);
                        for (a, b, c, d) in symmetry_images(p, q, r, s) {
                            dev = dev.max((v - self.eri(a, b, c, d)).abs());
                        }
                    }
                }
            }
        }
        dev
    }

    /// Diagonal spin-orbital Fock energies of the reference with the lowest
    /// orbitals occupied: `f_p^σ = h_pp + Σ_{j∈occ σ} [(pp|jj) - (pj|jp)] + Σ_{j∈occ σ'} (pp|jj)`.
    pub fn orbital_energies(&self) -> (Vec<f64>, Vec<f64>) {
        let m = self.norb;
        let fock = |own: usize, other: usize| -> Vec<f64> {
            (0..m)
                .map(|p| {
                    let mut f = self.h1(p, p);
                    for j in 0..own {
                        f += self.eri(p, p, j, j) - self.eri(p, j, j, p);
                    }
                    for j in 0..other {
                        f += self.eri(p, p, j, j);
                    }
                    f
                })
                .collect()
        };
        (fock(self.n_alpha, self.n_beta), fock(self.n_beta, self.n_alpha))
    }
}

/// The 8 index permutations leaving real chemists'-notation integrals invariant.
pub(crate) fn symmetry_images(p: usize, q: usize, r: usize, s: usize) -> [(usize, usize, usize, usize); 8] {
    [
        (p, q, r, s),
        (q, p, r, s),
        (p, q, s, r),
        (q, p, s, r),
        (r, s, p, q),
        (s, r, p, q),
        (r, s, q, p),
        (s, r, q, p),
    ]
}
