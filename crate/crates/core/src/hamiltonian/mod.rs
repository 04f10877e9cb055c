//! Active-space Hamiltonians, determinant matrix elements and subspace operators.

mod config;
mod fcidump;
mod integrals;
mod slater_condon;
mod subspace;

pub(crate) use config::low_bits;
pub use config::{bitstring, parse_bitstring, strings_with_popcount, Configuration, Spin};
pub use fcidump::{parse_fcidump, read_fcidump, write_fcidump};
pub use integrals::ActiveSpaceHamiltonian;
pub use slater_condon::{excitation_sign, s2_matrix_element};
pub use subspace::{LinearOperator, SubspaceOperator};
