//! Gate lists in the abstract XX+YY / phase / number-number vocabulary.

use super::SpinStatevector;
use crate::error::{Error, Result};
use crate::linalg::C64;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// Multiply every amplitude by a constant.
    Global(C64),
    /// `a†_p -> phase · a†_p`.
    Phase { mode: usize, phase: C64 },
    /// Two-mode rotation of adjacent modes `(mode, mode + 1)`:
    /// `a†_mode -> m00 a†_mode + m10 a†_{mode+1}`,
    /// `a†_{mode+1} -> m01 a†_mode + m11 a†_{mode+1}`.
    Givens { mode: usize, matrix: [[C64; 2]; 2] },
    /// `exp(i θ n_p)`.
    Number { mode: usize, angle: f64 },
    /// `exp(i θ n_p n_r)`, `p != r`.
    NumberNumber { modes: (usize, usize), angle: f64 },
}

impl Gate {
    fn shifted(self, s: usize) -> Gate {
        match self {
            Gate::Global(z) => Gate::Global(z),
            Gate::Phase { mode, phase } => Gate::Phase { mode: mode + s, phase },
            Gate::Givens { mode, matrix } => Gate::Givens { mode: mode + s, matrix },
            Gate::Number { mode, angle } => Gate::Number { mode: mode + s, angle },
            Gate::NumberNumber { modes: (p, r), angle } => Gate::NumberNumber { modes: (p + s, r + s), angle },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    norb: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(norb: usize) -> Self {
        Self { norb, gates: Vec::new() }
    }

    pub fn norb(&self) -> usize {
        self.norb
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend(&mut self, other: Circuit) {
        self.gates.extend(other.gates);
    }

    /// Number of two-qubit XX+YY (Givens) gates.
    pub fn xxyy_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Givens { .. })).count()
    }

    pub fn number_number_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::NumberNumber { .. })).count()
    }

    pub fn apply(&self, state: &mut SpinStatevector) -> Result<()> {
        if state.norb() != self.norb {
            return Err(Error::Dimension(format!(
                "circuit on {} orbitals applied to {}-orbital state",
                self.norb,
                state.norb()
            )));
        }
        let amps = state.amplitudes_mut();
        for gate in &self.gates {
            apply_gate(amps, gate);
        }
        Ok(())
    }

    /// One gate per line: `global re im`, `phase p re im`,
    /// `givens p m00re m00im m01re m01im m10re m10im m11re m11im`,
    /// `number p theta`, `nn p r theta`.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# circuit norb={} gates={}", self.norb, self.gates.len());
        for g in &self.gates {
            let _ = match g {
                Gate::Global(z) => writeln!(out, "global {:e} {:e}", z.re, z.im),
                Gate::Phase { mode, phase } => writeln!(out, "phase {mode} {:e} {:e}", phase.re, phase.im),
                Gate::Givens { mode, matrix } => {
                    let m = matrix;
                    writeln!(
                        out,
                        "givens {mode} {:e} {:e} {:e} {:e} {:e} {:e} {:e} {:e}",
                        m[0][0].re, m[0][0].im, m[0][1].re, m[0][1].im, m[1][0].re, m[1][0].im, m[1][1].re, m[1][1].im
                    )
                }
                Gate::Number { mode, angle } => writeln!(out, "number {mode} {angle:e}"),
                Gate::NumberNumber { modes, angle } => writeln!(out, "nn {} {} {angle:e}", modes.0, modes.1),
            };
        }
        out
    }
}

pub(crate) fn apply_gate(amps: &mut [C64], gate: &Gate) {
    apply_gate_shifted(amps, gate, 0);
}

/// Apply `gate` with mode `q` stored at bit `q + shift` of a larger register.
pub(crate) fn apply_gate_shifted(amps: &mut [C64], gate: &Gate, shift: usize) {
    match gate.clone().shifted(shift) {
        Gate::Global(z) => amps.iter_mut().for_each(|a| *a *= z),
        Gate::Phase { mode, phase } => {
            for (z, a) in amps.iter_mut().enumerate() {
                if z >> mode & 1 == 1 {
                    *a *= phase;
                }
            }
        }
        Gate::Givens { mode, matrix } => {
            let lo = 1usize << mode;
            let hi = 1usize << (mode + 1);
            let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
            for base in 0..amps.len() {
                if base & (lo | hi) != 0 {
                    continue;
                }
                let a = amps[base | lo];
                let b = amps[base | hi];
                amps[base | lo] = matrix[0][0] * a + matrix[0][1] * b;
                amps[base | hi] = matrix[1][0] * a + matrix[1][1] * b;
                amps[base | lo | hi] *= det;
            }
        }
        Gate::Number { mode, angle } => {
            let phase = C64::from_polar(1.0, angle);
            for (z, a) in amps.iter_mut().enumerate() {
                if z >> mode & 1 == 1 {
                    *a *= phase;
                }
            }
        }
        Gate::NumberNumber { modes: (p, r), angle } => {
            let phase = C64::from_polar(1.0, angle);
            let mask = (1usize << p) | (1usize << r);
            for (z, a) in amps.iter_mut().enumerate() {
                if z & mask == mask {
                    *a *= phase;
                }
            }
        }
    }
}
