//! Entanglement forging (EF) combined with sample-based quantum
//! diagonalization (SQD), simulated exactly at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! * [`hamiltonian`]: FCIDUMP ingestion, Slater–Condon matrix elements,
//!   spin-penalised subspace operators.
//! * [`fock`]: per-spin statevector simulation of orbital rotations,
//!   diagonal-Coulomb layers, LUCJ circuits and the ancilla-based
//!   superposition circuit.
//! * [`ansatz`]: the generalised EF wavefunction built from classical
//!   amplitudes, its branch weights and expectation values.
//! * [`sampler`]: compound-distribution sampling of 2M-bit configurations.
//! * [`sqd`]: configuration recovery, batching and Davidson diagonalization.
//! * [`bench`]: resource formulas, exact oracles and the experiment driver.
//!
//! Conventions used throughout:
//!
//! * Orbital indices are 0-based. Bit `p` of a spin string is orbital `p`.
//! * Determinants are ordered spin-major: all alpha creators (ascending
//!   orbital index) to the left of all beta creators (ascending). This makes
//!   the alpha and beta registers tensor factors of the 2M-mode Fock space.
//! * An orbital rotation with matrix `U` maps `a†_j -> Σ_q U[q, j] a†_q`.

// Dense index loops read closer to the matrix algebra they implement.
#![allow(clippy::needless_range_loop)]

pub mod ansatz;
pub mod bench;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod linalg;
pub mod rng;
pub mod sampler;
pub mod sqd;

pub use error::{Error, Result};
pub use hamiltonian::{ActiveSpaceHamiltonian, Configuration, SubspaceOperator};

/// Hartree to kcal/mol.
pub const HARTREE_TO_KCAL_PER_MOL: f64 = 627.509_474_063_1;
