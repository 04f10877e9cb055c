//! Orbital rotations and their compilation into Givens networks.

use super::circuit::{Circuit, Gate};
use super::SpinStatevector;
use crate::error::{Error, Result};
use crate::hamiltonian::low_bits;
use crate::linalg::{self, CMatrix, C64, ONE, ZERO};
use serde::{Deserialize, Serialize};

/// Unitary single-particle rotation `U`, lifted to Fock space as
/// `a†_j -> Σ_q U[q, j] a†_q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RotationRepr", into = "RotationRepr")]
pub struct OrbitalRotationSpec {
    unitary: CMatrix,
}

const UNITARY_TOL: f64 = 1e-8;

#[derive(Serialize, Deserialize)]
struct RotationRepr {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl From<OrbitalRotationSpec> for RotationRepr {
    fn from(spec: OrbitalRotationSpec) -> Self {
        let u = &spec.unitary;
        let rows = |f: fn(&C64) -> f64| (0..u.nrows()).map(|i| (0..u.ncols()).map(|j| f(&u[(i, j)])).collect()).collect();
        Self { re: rows(|z| z.re), im: rows(|z| z.im) }
    }
}

impl TryFrom<RotationRepr> for OrbitalRotationSpec {
    type Error = Error;

    fn try_from(repr: RotationRepr) -> Result<Self> {
        let m = repr.re.len();
        if repr.im.len() != m || repr.re.iter().chain(&repr.im).any(|row| row.len() != m) {
            return Err(Error::Dimension("rotation matrix must be square".into()));
        }
        Self::from_unitary(CMatrix::from_fn(m, m, |i, j| C64::new(repr.re[i][j], repr.im[i][j])))
    }
}

impl OrbitalRotationSpec {
    pub fn from_unitary(unitary: CMatrix) -> Result<Self> {
        let dev = linalg::unitarity_deviation(&unitary);
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { unitary })
    }

    /// `exp(X)` for anti-Hermitian `X`.
    pub fn from_generator(generator: &CMatrix) -> Result<Self> {
        let anti = generator + generator.adjoint();
        let dev = anti.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if dev > UNITARY_TOL {
            return Err(Error::Invalid(format!("generator is not anti-Hermitian (deviation {dev:.3e})")));
        }
        Self::from_unitary(linalg::expm_antihermitian(generator))
    }

    pub fn identity(norb: usize) -> Self {
        Self { unitary: CMatrix::identity(norb, norb) }
    }

    pub fn norb(&self) -> usize {
        self.unitary.nrows()
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn adjoint(&self) -> Self {
        Self { unitary: self.unitary.adjoint() }
    }

    /// Rotation equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &Self) -> Self {
        Self { unitary: &next.unitary * &self.unitary }
    }

    /// Full Givens network (Bogoliubov circuit) implementing the rotation on
    /// arbitrary states: a diagonal phase layer followed by adjacent-mode
    /// rotations. Uses `M(M-1)/2` two-mode gates.
    pub fn bogoliubov_circuit(&self) -> Circuit {
        let m = self.norb();
        let mut work = self.unitary.clone();
        let mut left_rotations: Vec<(usize, [[C64; 2]; 2])> = Vec::new();
        // Left-multiply by adjacent-row rotations until upper triangular (hence diagonal).
        for c in 0..m.saturating_sub(1) {
            for r in (c + 1..m).rev() {
                let x = work[(r - 1, c)];
                let y = work[(r, c)];
                let rho = (x.norm_sqr() + y.norm_sqr()).sqrt();
                let g = if y.norm() < 1e-300 || rho == 0.0 {
                    [[ONE, ZERO], [ZERO, ONE]]
                } else {
                    [[x.conj() / rho, y.conj() / rho], [-y / rho, x / rho]]
                };
                rotate_rows(&mut work, r - 1, g);
                left_rotations.push((r - 1, g));
            }
        }
        // U = G_1† G_2† ... G_K† D
        let mut circuit = Circuit::new(m);
        for p in 0..m {
            circuit.push(Gate::Phase { mode: p, phase: work[(p, p)] });
        }
        for &(mode, g) in left_rotations.iter().rev() {
            circuit.push(Gate::Givens { mode, matrix: adjoint2(g) });
        }
        circuit
    }

    /// Economical network preparing `lift(U)|reference⟩`: the occupied
    /// columns of `U` are reduced with `N(M-N)` adjacent-mode rotations.
    pub fn slater_circuit(&self, reference: u64) -> Result<Circuit> {
        let m = self.norb();
        if reference >> m != 0 {
            return Err(Error::Dimension(format!("reference {reference:#b} wider than {m} orbitals")));
        }
        let occ: Vec<usize> = (0..m).filter(|&p| reference >> p & 1 == 1).collect();
        let mut orbitals = CMatrix::zeros(m, occ.len());
        for (k, &p) in occ.iter().enumerate() {
            orbitals.set_column(k, &self.unitary.column(p));
        }
        Ok(slater_circuit_from_orbitals(&orbitals))
    }
}

fn adjoint2(g: [[C64; 2]; 2]) -> [[C64; 2]; 2] {
    [[g[0][0].conj(), g[1][0].conj()], [g[0][1].conj(), g[1][1].conj()]]
}

fn rotate_rows(m: &mut CMatrix, row: usize, g: [[C64; 2]; 2]) {
    for c in 0..m.ncols() {
        let a = m[(row, c)];
        let b = m[(row + 1, c)];
        m[(row, c)] = g[0][0] * a + g[0][1] * b;
        m[(row + 1, c)] = g[1][0] * a + g[1][1] * b;
    }
}

fn rotate_cols(m: &mut CMatrix, col: usize, g: [[C64; 2]; 2]) {
    for r in 0..m.nrows() {
        let a = m[(r, col)];
        let b = m[(r, col + 1)];
        m[(r, col)] = a * g[0][0] + b * g[1][0];
        m[(r, col + 1)] = a * g[0][1] + b * g[1][1];
    }
}

/// Network for the determinant whose orbitals are the (orthonormal) columns
/// of `orbitals` (M×N), acting on the vacuum-plus-reference `|1..1 0..0⟩`.
fn slater_circuit_from_orbitals(orbitals: &CMatrix) -> Circuit {
    let (m, n) = orbitals.shape();
    let mut circuit = Circuit::new(m);
    // q: one row per occupied orbital.
    let mut q = orbitals.transpose();
    // Row operations (determinant one) zero the upper-right staircase:
    // row i keeps support in columns 0..=M-N+i.
    for col in (m - n + 1..m).rev() {
        let last = col - (m - n);
        for i in 0..last {
            let x = q[(i, col)];
            let y = q[(i + 1, col)];
            let rho = (x.norm_sqr() + y.norm_sqr()).sqrt();
            if x.norm() < 1e-300 || rho == 0.0 {
                continue;
            }
            let g = [[y / rho, -x / rho], [x.conj() / rho, y.conj() / rho]];
            rotate_rows(&mut q, i, g);
        }
    }
    // Column rotations reduce each row to a single entry on the diagonal.
    let mut column_rotations: Vec<(usize, [[C64; 2]; 2])> = Vec::new();
    for i in 0..n {
        for k in (i + 1..=m - n + i).rev() {
            let x = q[(i, k - 1)];
            let y = q[(i, k)];
            let rho = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let g = if y.norm() < 1e-300 || rho == 0.0 {
                [[ONE, ZERO], [ZERO, ONE]]
            } else {
                [[x.conj() / rho, -y / rho], [y.conj() / rho, x / rho]]
            };
            rotate_cols(&mut q, k - 1, g);
            column_rotations.push((k - 1, g));
        }
    }
    // state(Q) = Π D_kk · lift(conj G_1) ... lift(conj G_K) |1^N 0⟩
    let global = (0..n).fold(ONE, |acc, k| acc * q[(k, k)]);
    circuit.push(Gate::Global(global));
    for &(mode, g) in column_rotations.iter().rev() {
        let conj = [[g[0][0].conj(), g[0][1].conj()], [g[1][0].conj(), g[1][1].conj()]];
        circuit.push(Gate::Givens { mode, matrix: conj });
    }
    circuit
}

/// `lift(U)|reference⟩` through the economical determinant network.
pub fn prepare_slater(rotation: &OrbitalRotationSpec, reference: u64) -> Result<SpinStatevector> {
    let circuit = rotation.slater_circuit(reference)?;
    let n = reference.count_ones() as usize;
    let mut state = SpinStatevector::basis(rotation.norb(), low_bits(n))?;
    circuit.apply(&mut state)?;
    Ok(state)
}

/// Unnormalized determinant with arbitrary (linearly independent) orbital
/// columns `orbitals` (M×N): amplitude on `z` is `det(orbitals[z, :])`.
pub fn prepare_slater_from_orbitals(orbitals: &CMatrix) -> Result<SpinStatevector> {
    let (m, n) = orbitals.shape();
    let Some((q, det_r)) = linalg::orthonormalize_columns(orbitals) else {
        return SpinStatevector::zeros(m);
    };
    let circuit = slater_circuit_from_orbitals(&q);
    let mut state = SpinStatevector::basis(m, low_bits(n))?;
    circuit.apply(&mut state)?;
    state.scale(det_r);
    Ok(state)
}

/// Apply the rotation to an arbitrary state through the Bogoliubov network.
pub fn apply_orbital_rotation(state: &SpinStatevector, rotation: &OrbitalRotationSpec) -> Result<SpinStatevector> {
    if state.norb() != rotation.norb() {
        return Err(Error::Dimension(format!("{} vs {} orbitals", state.norb(), rotation.norb())));
    }
    state.check_normalized(1e-8)?;
    let mut out = state.clone();
    rotation.bogoliubov_circuit().apply(&mut out)?;
    Ok(out)
}
