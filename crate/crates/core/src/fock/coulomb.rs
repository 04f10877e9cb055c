//! Diagonal-Coulomb (density-density) phase layers.

use super::circuit::{Circuit, Gate};
use super::SpinStatevector;
use crate::error::{Error, Result};
use crate::linalg::{self, RMatrix};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sparsity {
    Dense,
    /// Keep `J[p][r]` with `|p - r| <= b`.
    Banded(usize),
    NearestNeighbor,
}

impl Sparsity {
    pub fn allows(&self, p: usize, r: usize) -> bool {
        match *self {
            Sparsity::Dense => true,
            Sparsity::Banded(b) => p.abs_diff(r) <= b,
            Sparsity::NearestNeighbor => p.abs_diff(r) <= 1,
        }
    }
}

/// `exp(i Σ_{p,r} J[p][r] n_p n_r)` with the sum over all ordered pairs, so an
/// off-diagonal entry contributes twice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoulombRepr", into = "CoulombRepr")]
pub struct DiagonalCoulombSpec {
    matrix: RMatrix,
    sparsity: Sparsity,
}

#[derive(Serialize, Deserialize)]
struct CoulombRepr {
    matrix: Vec<Vec<f64>>,
    sparsity: Sparsity,
}

impl From<DiagonalCoulombSpec> for CoulombRepr {
    fn from(spec: DiagonalCoulombSpec) -> Self {
        let j = &spec.matrix;
        let matrix = (0..j.nrows()).map(|p| (0..j.ncols()).map(|r| j[(p, r)]).collect()).collect();
        Self { matrix, sparsity: spec.sparsity }
    }
}

impl TryFrom<CoulombRepr> for DiagonalCoulombSpec {
    type Error = Error;

    fn try_from(repr: CoulombRepr) -> Result<Self> {
        let m = repr.matrix.len();
        if repr.matrix.iter().any(|row| row.len() != m) {
            return Err(Error::Dimension("Coulomb matrix must be square".into()));
        }
        Self::new(RMatrix::from_fn(m, m, |p, r| repr.matrix[p][r]), repr.sparsity)
    }
}

impl DiagonalCoulombSpec {
    /// Entries outside the sparsity pattern are dropped.
    pub fn new(matrix: RMatrix, sparsity: Sparsity) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!("{}x{} Coulomb matrix", matrix.nrows(), matrix.ncols())));
        }
        let dev = linalg::symmetry_deviation(&matrix);
        if dev > 1e-12 {
            return Err(Error::NotSymmetric(dev));
        }
        let matrix = RMatrix::from_fn(matrix.nrows(), matrix.ncols(), |p, r| {
            if sparsity.allows(p, r) {
                matrix[(p, r)]
            } else {
                0.0
            }
        });
        Ok(Self { matrix, sparsity })
    }

    pub fn zeros(norb: usize) -> Self {
        Self { matrix: RMatrix::zeros(norb, norb), sparsity: Sparsity::Dense }
    }

    pub fn norb(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn sparsity(&self) -> Sparsity {
        self.sparsity
    }

    pub fn with_sparsity(&self, sparsity: Sparsity) -> Self {
        Self::new(self.matrix.clone(), sparsity).expect("already symmetric")
    }

    /// Total phase angle for occupation bitstring `z`.
    pub fn angle(&self, z: u64) -> f64 {
        let m = self.norb();
        let mut angle = 0.0;
        for p in (0..m).filter(|&p| z >> p & 1 == 1) {
            for r in (0..m).filter(|&r| z >> r & 1 == 1) {
                angle += self.matrix[(p, r)];
            }
        }
        angle
    }

    /// Number gates for the diagonal and number-number gates for each
    /// retained off-diagonal pair.
    pub fn circuit(&self) -> Circuit {
        let m = self.norb();
        let mut circuit = Circuit::new(m);
        for p in 0..m {
            if self.matrix[(p, p)] != 0.0 {
                circuit.push(Gate::Number { mode: p, angle: self.matrix[(p, p)] });
            }
        }
        for p in 0..m {
            for r in p + 1..m {
                if self.sparsity.allows(p, r) && self.matrix[(p, r)] != 0.0 {
                    circuit.push(Gate::NumberNumber { modes: (p, r), angle: 2.0 * self.matrix[(p, r)] });
                }
            }
        }
        circuit
    }
}

pub fn apply_diagonal_coulomb(state: &SpinStatevector, spec: &DiagonalCoulombSpec) -> Result<SpinStatevector> {
    if state.norb() != spec.norb() {
        return Err(Error::Dimension(format!("{} vs {} orbitals", state.norb(), spec.norb())));
    }
    let mut out = state.clone();
    spec.circuit().apply(&mut out)?;
    Ok(out)
}
