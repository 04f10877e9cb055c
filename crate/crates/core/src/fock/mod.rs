//! Exact per-spin statevector simulation of the M-qubit forging circuits.
//!
//! A [`SpinStatevector`] holds `2^M` complex amplitudes indexed by the
//! occupation bitstring of one spin species (Jordan–Wigner, orbital 0 is bit
//! 0, creators ordered ascending). Memory is `16 * 2^M` bytes, so `M` is
//! capped at [`MAX_ORBITALS`].

mod circuit;
mod coulomb;
mod lucj;
mod rotation;
mod sampling;
mod statevector;
mod superposition;

pub use circuit::{Circuit, Gate};
pub use coulomb::{apply_diagonal_coulomb, DiagonalCoulombSpec, Sparsity};
pub use lucj::{apply_lucj, lucj_circuit, LucjLayer};
pub use rotation::{apply_orbital_rotation, prepare_slater, prepare_slater_from_orbitals, OrbitalRotationSpec};
pub use sampling::{sample_bitstrings, sample_counts, sample_from_probabilities};
pub use statevector::{overlap, SpinStatevector};
pub use superposition::{prepare_superposition, superpose, AncillaRegister, SuperpositionOutcome, INTERFERENCE_TOL};

pub const MAX_ORBITALS: usize = 16;
