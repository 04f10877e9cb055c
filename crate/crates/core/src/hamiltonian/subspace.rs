//! Projected Hamiltonian on a set of determinants, with an optional spin penalty.

use super::config::Spin;
use super::slater_condon::s2_unchecked;
use super::{ActiveSpaceHamiltonian, Configuration};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::collections::HashMap;

/// Nonzero `(column, value)` entries of one row.
type SparseRow = Vec<(u32, f64)>;

/// Matrix-free real symmetric operator.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[f64], out: &mut [f64]);
    fn diagonal(&self) -> Vec<f64>;
}

/// `H_sub + λ (S²_sub - s_t(s_t+1) 1)` on `span(configs)`, stored as sparse rows.
///
/// Connectivity is found by generating every single and double excitation of
/// each determinant and looking it up in the set, so rows only ever visit
/// determinants that can couple.
#[derive(Clone, Debug)]
pub struct SubspaceOperator {
    configs: Vec<Configuration>,
    penalty: f64,
    spin_target: f64,
    rows: Vec<SparseRow>,
    s2_rows: Vec<SparseRow>,
}

impl SubspaceOperator {
    pub fn new(
        ham: &ActiveSpaceHamiltonian,
        configs: Vec<Configuration>,
        penalty: f64,
        spin_target: f64,
    ) -> Result<Self> {
        if configs.is_empty() {
            return Err(Error::EmptySubspace);
        }
        if penalty < 0.0 || spin_target < 0.0 || (2.0 * spin_target).fract() != 0.0 {
            return Err(Error::Invalid(format!(
                "penalty {penalty} must be non-negative and spin target {spin_target} a non-negative half-integer"
            )));
        }
        let sector = configs[0].particle_numbers();
        let mut index: HashMap<Configuration, u32> = HashMap::with_capacity(configs.len());
        for (k, c) in configs.iter().enumerate() {
            if c.particle_numbers() != sector {
                let (a, b) = c.particle_numbers();
                return Err(Error::ParticleMismatch(a, b, sector.0, sector.1));
            }
            if index.insert(*c, k as u32).is_some() {
                return Err(Error::DuplicateConfiguration(k));
            }
        }
        let norb = ham.norb();
        let shift = spin_target * (spin_target + 1.0);
        let built: Vec<(SparseRow, SparseRow)> = configs
            .par_iter()
            .enumerate()
            .map(|(k, n)| {
                let mut row = Vec::new();
                let mut s2_row = Vec::new();
                let diag_s2 = s2_unchecked(n, n);
                s2_row.push((k as u32, diag_s2));
                row.push((k as u32, ham.diagonal_element(n) + penalty * (diag_s2 - shift)));
                for_each_excitation(n, norb, |m| {
                    if let Some(&j) = index.get(&m) {
                        let h = ham.element_unchecked(&m, n);
                        let s2 = s2_unchecked(&m, n);
                        if s2 != 0.0 {
                            s2_row.push((j, s2));
                        }
                        let v = h + penalty * s2;
                        if v != 0.0 {
                            row.push((j, v));
                        }
                    }
                });
                row.sort_by_key(|e| e.0);
                s2_row.sort_by_key(|e| e.0);
                (row, s2_row)
            })
            .collect();
        let (rows, s2_rows) = built.into_iter().unzip();
        Ok(Self { configs, penalty, spin_target, rows, s2_rows })
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    pub fn spin_target(&self) -> f64 {
        self.spin_target
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> crate::linalg::RMatrix {
        let d = self.configs.len();
        let mut m = crate::linalg::RMatrix::zeros(d, d);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j as usize)] = v;
            }
        }
        m
    }

    /// `⟨v|S²|v⟩` for a vector normalized over this subspace.
    pub fn s2_expectation(&self, v: &[f64]) -> f64 {
        self.s2_rows
            .iter()
            .enumerate()
            .map(|(i, row)| v[i] * row.iter().map(|&(j, s)| s * v[j as usize]).sum::<f64>())
            .sum()
    }

    /// Apply to a complex vector given as separate real and imaginary parts.
    pub fn apply_complex(&self, re: &[f64], im: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut out_re = vec![0.0; re.len()];
        let mut out_im = vec![0.0; im.len()];
        self.apply(re, &mut out_re);
        self.apply(im, &mut out_im);
        (out_re, out_im)
    }
}

impl LinearOperator for SubspaceOperator {
    fn dim(&self) -> usize {
        self.configs.len()
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        out.par_iter_mut().zip(self.rows.par_iter()).for_each(|(o, row)| {
            *o = row.iter().map(|&(j, h)| h * v[j as usize]).sum();
        });
    }

    fn diagonal(&self) -> Vec<f64> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().find(|e| e.0 as usize == i).map_or(0.0, |e| e.1))
            .collect()
    }
}

/// Call `f` on every determinant reachable from `n` by one or two
/// number-conserving excitations (each spin sector separately).
fn for_each_excitation(n: &Configuration, norb: usize, mut f: impl FnMut(Configuration)) {
    let full = super::config::low_bits(norb);
    let singles = |s: u64| -> Vec<u64> {
        let mut out = Vec::new();
        let mut occ = s;
        while occ != 0 {
            let i = occ.trailing_zeros();
            occ &= occ - 1;
            let mut virt = !s & full;
            while virt != 0 {
                let a = virt.trailing_zeros();
                virt &= virt - 1;
                out.push(s ^ (1 << i) ^ (1 << a));
            }
        }
        out
    };
    let doubles = |s: u64| -> Vec<u64> {
        let occ: Vec<u32> = (0..norb as u32).filter(|&p| s >> p & 1 == 1).collect();
        let virt: Vec<u32> = (0..norb as u32).filter(|&p| s >> p & 1 == 0).collect();
        let mut out = Vec::new();
        for (x, &i) in occ.iter().enumerate() {
            for &j in &occ[x + 1..] {
                for (y, &a) in virt.iter().enumerate() {
                    for &b in &virt[y + 1..] {
                        out.push(s ^ (1 << i) ^ (1 << j) ^ (1 << a) ^ (1 << b));
                    }
                }
            }
        }
        out
    };
    let sa = singles(n.bits(Spin::Alpha));
    let sb = singles(n.bits(Spin::Beta));
    for &a in &sa {
        f(Configuration::new(a, n.beta()));
    }
    for &b in &sb {
        f(Configuration::new(n.alpha(), b));
    }
    for a in doubles(n.alpha()) {
        f(Configuration::new(a, n.beta()));
    }
    for b in doubles(n.beta()) {
        f(Configuration::new(n.alpha(), b));
    }
    for &a in &sa {
        for &b in &sb {
            f(Configuration::new(a, b));
        }
    }
}
