//! Gate and qubit counts for LUCJ and forged circuits on linear / heavy-hex
//! connectivity.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CircuitKind {
    Lucj,
    EfInd,
    EfSuper,
}

impl CircuitKind {
    pub const ALL: [CircuitKind; 3] = [CircuitKind::Lucj, CircuitKind::EfInd, CircuitKind::EfSuper];

    pub fn as_str(&self) -> &'static str {
        match self {
            CircuitKind::Lucj => "lucj",
            CircuitKind::EfInd => "ef-ind",
            CircuitKind::EfSuper => "ef-super",
        }
    }
}

impl fmt::Display for CircuitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CircuitKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "lucj" => Ok(CircuitKind::Lucj),
            "ef-ind" | "ind" => Ok(CircuitKind::EfInd),
            "ef-super" | "super" => Ok(CircuitKind::EfSuper),
            other => Err(format!("unknown circuit kind '{other}' (expected lucj, ef-ind or ef-super)")),
        }
    }
}

/// Exact counts before rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCounts {
    pub qubits: Rational64,
    pub xxyy_gates: Rational64,
    pub nn_gates: Rational64,
    pub depth: Rational64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub kind: CircuitKind,
    pub norb: u64,
    pub n_alpha: u64,
    pub n_beta: u64,
    pub layers: u64,
    /// System qubits; the superposition circuit's ancilla is in `ancillas`.
    pub qubits: u64,
    pub ancillas: u64,
    pub xxyy_gates: u64,
    pub nn_gates: u64,
    pub depth: u64,
    pub raw: RawCounts,
}

fn ceil(r: Rational64) -> u64 {
    r.ceil().to_integer().max(0) as u64
}

/// Counts for one circuit. The forged rows describe a single register and
/// use `n_alpha` as its electron count; swap the arguments for the β register.
pub fn estimate_resources(kind: CircuitKind, norb: u64, n_alpha: u64, n_beta: u64, layers: u64) -> ResourceEstimate {
    let r = |x: u64| Rational64::from_integer(x as i64);
    let (m, l) = (r(norb), r(layers));
    let one = r(1);
    let prep = |n: u64| r(n) * (m - r(n));
    let lucj_nn = l * (r(2) * (m - one) + m / r(4));
    let (qubits, ancillas, xxyy, nn, depth) = match kind {
        CircuitKind::Lucj => (
            r(2) * m,
            0,
            prep(n_alpha) + prep(n_beta) + l * r(2) * m * (m - one),
            lucj_nn,
            (m - one) + l * (m + r(3)),
        ),
        CircuitKind::EfInd => (m, 0, prep(n_alpha) + l * m * (m - one), lucj_nn, (m - one) + l * (m + r(2))),
        CircuitKind::EfSuper => (
            m,
            1,
            prep(n_alpha) + (m + one) * (m - one) + l * m * (m - one),
            l * (m - one),
            r(3) * (m - one) + l * (m + r(2)),
        ),
    };
    let raw = RawCounts { qubits, xxyy_gates: xxyy, nn_gates: nn, depth };
    ResourceEstimate {
        kind,
        norb,
        n_alpha,
        n_beta,
        layers,
        qubits: ceil(qubits),
        ancillas,
        xxyy_gates: ceil(xxyy),
        nn_gates: ceil(nn),
        depth: ceil(depth),
        raw,
    }
}
