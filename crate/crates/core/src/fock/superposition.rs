//! Superpositions of two determinants, `(|d_μ⟩ + i^p |d_ν⟩) / U^p`, by the
//! ancilla-controlled rotation circuit or by direct assembly.
//!
//! Ancilla circuit on M+1 qubits: the controlled rotation `c[D_ν D_μ†]` is
//! diagonalized as `Q T Q†`; `Q†` is applied to the system, the ancilla is
//! swapped down the line applying one controlled phase per mode, and `Q` is
//! applied afterwards. The ancilla is then measured in the X basis.

use super::circuit::{apply_gate_shifted, Circuit};
use super::rotation::{prepare_slater, OrbitalRotationSpec};
use super::SpinStatevector;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, ZERO};

/// Below this norm a superposition branch is treated as absent.
pub const INTERFERENCE_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SuperpositionOutcome {
    /// Collapsed state for ancilla outcome +1, `None` when `U^p < 1e-8`.
    pub state_p: Option<SpinStatevector>,
    /// Collapsed state for outcome −1, i.e. the `p + 2` branch.
    pub state_p2: Option<SpinStatevector>,
    pub prob_plus: f64,
    pub prob_minus: f64,
}

/// `(|a⟩ + i^p |b⟩) / ‖·‖`.
pub fn superpose(a: &SpinStatevector, b: &SpinStatevector, p: i64) -> Result<SpinStatevector> {
    if a.norb() != b.norb() {
        return Err(Error::Dimension(format!("{} vs {} orbitals", a.norb(), b.norb())));
    }
    let phase = linalg::i_pow(p);
    let amps: Vec<C64> = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x + phase * y).collect();
    let mut out = SpinStatevector::from_amplitudes(a.norb(), amps)?;
    let norm = out.normalize();
    if norm < INTERFERENCE_TOL {
        return Err(Error::DestructiveInterference(norm));
    }
    Ok(out)
}

/// The (M+1)-qubit register of the ancilla circuit. System mode `q` sits at
/// bit `q` and the ancilla at bit `M` once the swap network has run.
#[derive(Clone, Debug)]
pub struct AncillaRegister {
    norb: usize,
    amps: Vec<C64>,
}

impl AncillaRegister {
    /// Runs the controlled-rotation circuit up to (not including) the ancilla
    /// measurement.
    pub fn prepare(
        d_mu: &OrbitalRotationSpec,
        d_nu: &OrbitalRotationSpec,
        reference: u64,
        p: i64,
    ) -> Result<Self> {
        let m = d_mu.norb();
        if d_nu.norb() != m {
            return Err(Error::Dimension(format!("{m} vs {} orbitals", d_nu.norb())));
        }
        let relative = d_nu.unitary() * d_mu.unitary().adjoint();
        let (q, t) = unitary_schur(&relative);
        let q_spec = OrbitalRotationSpec::from_unitary(q)?;
        let phases: Vec<C64> = (0..m).map(|k| t[(k, k)] / t[(k, k)].norm()).collect();

        // |d_μ⟩ on bits 1..=M, ancilla |0⟩ on bit 0.
        let d = prepare_slater(d_mu, reference)?;
        let mut amps = vec![ZERO; 1 << (m + 1)];
        for (z, a) in d.amplitudes().iter().enumerate() {
            amps[z << 1] = *a;
        }
        for gate in q_spec.adjoint().bogoliubov_circuit().gates() {
            apply_gate_shifted(&mut amps, gate, 1);
        }
        // Ancilla to (|0⟩ + i^p |1⟩)/√2.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phase = linalg::i_pow(p);
        for z in (0..amps.len()).step_by(2) {
            let a0 = amps[z];
            amps[z] = a0 * s;
            amps[z | 1] = a0 * phase * s;
        }
        // Controlled phases, moving the ancilla from bit 0 to bit M.
        for (k, &ph) in phases.iter().enumerate() {
            let anc = 1usize << k;
            let sys = 1usize << (k + 1);
            for z in 0..amps.len() {
                if z & anc != 0 && z & sys != 0 {
                    amps[z] *= ph;
                }
            }
            for z in 0..amps.len() {
                if z & anc != 0 && z & sys == 0 {
                    amps.swap(z, z ^ anc ^ sys);
                }
            }
        }
        for gate in q_spec.bogoliubov_circuit().gates() {
            apply_gate_shifted(&mut amps, gate, 0);
        }
        Ok(Self { norb: m, amps })
    }

    pub fn norb(&self) -> usize {
        self.norb
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Apply a system-only circuit (e.g. LUCJ layers) before measurement.
    pub fn apply_system(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.norb() != self.norb {
            return Err(Error::Dimension(format!("{} vs {} orbitals", circuit.norb(), self.norb)));
        }
        for gate in circuit.gates() {
            apply_gate_shifted(&mut self.amps, gate, 0);
        }
        Ok(())
    }

    /// Hadamard on the ancilla, so that a computational-basis readout of bit
    /// `M` is the X-basis outcome (0 ↔ +1).
    pub fn rotate_ancilla_to_x(&mut self) {
        let anc = 1usize << self.norb;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for z in 0..anc {
            let a = self.amps[z];
            let b = self.amps[z | anc];
            self.amps[z] = (a + b) * s;
            self.amps[z | anc] = (a - b) * s;
        }
    }

    /// Unnormalized system states for ancilla X outcomes +1 and −1.
    pub fn project_x(&self) -> (Vec<C64>, Vec<C64>) {
        let anc = 1usize << self.norb;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = (0..anc).map(|z| (self.amps[z] + self.amps[z | anc]) * s).collect();
        let minus = (0..anc).map(|z| (self.amps[z] - self.amps[z | anc]) * s).collect();
        (plus, minus)
    }
}

/// `U = Q T Q†` with `T` diagonal for unitary `U`.
fn unitary_schur(u: &CMatrix) -> (CMatrix, CMatrix) {
    let m = u.nrows();
    let off: f64 = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| u[(i, j)].norm()).sum();
    if off < 1e-14 {
        // Already diagonal; the iterative Schur solver can stall here.
        return (CMatrix::identity(m, m), u.clone());
    }
    u.clone().schur().unpack()
}

fn collapse(norb: usize, amps: Vec<C64>) -> Result<(Option<SpinStatevector>, f64)> {
    let mut state = SpinStatevector::from_amplitudes(norb, amps)?;
    let norm = state.normalize();
    let prob = norm * norm;
    // The branch norm is U/2, so U < tol means norm < tol/2.
    if 2.0 * norm < INTERFERENCE_TOL {
        Ok((None, prob))
    } else {
        Ok((Some(state), prob))
    }
}

/// Both collapsed states of the ancilla circuit and the probability of each
/// outcome. `prob_plus = (U^p)² / 4`.
pub fn prepare_superposition(
    d_mu: &OrbitalRotationSpec,
    d_nu: &OrbitalRotationSpec,
    reference: u64,
    p: i64,
) -> Result<SuperpositionOutcome> {
    let register = AncillaRegister::prepare(d_mu, d_nu, reference, p)?;
    let (plus, minus) = register.project_x();
    let m = register.norb();
    let (state_p, prob_plus) = collapse(m, plus)?;
    let (state_p2, prob_minus) = collapse(m, minus)?;
    Ok(SuperpositionOutcome { state_p, state_p2, prob_plus, prob_minus })
}
