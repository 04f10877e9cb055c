//! LUCJ layers `e^{K} e^{iJ} e^{-K}`.

use super::circuit::Circuit;
use super::coulomb::DiagonalCoulombSpec;
use super::rotation::OrbitalRotationSpec;
use super::SpinStatevector;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One factor: `rotation` is `e^{K}`, `coulomb` is `J`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LucjLayer {
    pub rotation: OrbitalRotationSpec,
    pub coulomb: DiagonalCoulombSpec,
}

impl LucjLayer {
    pub fn new(rotation: OrbitalRotationSpec, coulomb: DiagonalCoulombSpec) -> Result<Self> {
        if rotation.norb() != coulomb.norb() {
            return Err(Error::Dimension(format!(
                "rotation on {} orbitals, Coulomb on {}",
                rotation.norb(),
                coulomb.norb()
            )));
        }
        Ok(Self { rotation, coulomb })
    }

    pub fn norb(&self) -> usize {
        self.rotation.norb()
    }

    pub fn circuit(&self) -> Circuit {
        let mut c = self.rotation.adjoint().bogoliubov_circuit();
        c.extend(self.coulomb.circuit());
        c.extend(self.rotation.bogoliubov_circuit());
        c
    }
}

/// Gates of all layers, the first layer acting first.
pub fn lucj_circuit(norb: usize, layers: &[LucjLayer]) -> Circuit {
    let mut c = Circuit::new(norb);
    for layer in layers {
        c.extend(layer.circuit());
    }
    c
}

/// Applies the layers in list order (layer 0 acts first on the state).
pub fn apply_lucj(state: &SpinStatevector, layers: &[LucjLayer], n_layers: usize) -> Result<SpinStatevector> {
    if layers.len() != n_layers {
        return Err(Error::Dimension(format!("{} layers supplied, {n_layers} declared", layers.len())));
    }
    if let Some(bad) = layers.iter().find(|l| l.norb() != state.norb()) {
        return Err(Error::Dimension(format!("layer on {} orbitals, state on {}", bad.norb(), state.norb())));
    }
    let mut out = state.clone();
    lucj_circuit(state.norb(), layers).apply(&mut out)?;
    Ok(out)
}
