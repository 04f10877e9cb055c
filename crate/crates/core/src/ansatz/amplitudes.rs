//! Doubles amplitudes: same-spin `t2_σσ[i][a][j][b]` for
//! `Σ t a†_a a_i a†_b a_j` and opposite-spin `t2_αβ[i][a][j][b]` for
//! `Σ t a†_{aα} a_{iα} a†_{bβ} a_{jβ}`. Occupied indices run over the lowest
//! `N_σ` orbitals, virtual indices are offsets past them.

use crate::error::{Error, Result};
use crate::hamiltonian::ActiveSpaceHamiltonian;
use crate::linalg::RMatrix;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tensor4 {
    dims: [usize; 4],
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(dims: [usize; 4]) -> Self {
        Self { dims, data: vec![0.0; dims.iter().product()] }
    }

    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    fn offset(&self, i: usize, a: usize, j: usize, b: usize) -> usize {
        let [_, na, nj, nb] = self.dims;
        ((i * na + a) * nj + j) * nb + b
    }

    pub fn get(&self, i: usize, a: usize, j: usize, b: usize) -> f64 {
        self.data[self.offset(i, a, j, b)]
    }

    pub fn set(&mut self, i: usize, a: usize, j: usize, b: usize, value: f64) {
        let k = self.offset(i, a, j, b);
        self.data[k] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Rows `(i, a)`, columns `(j, b)`.
    pub fn matricize(&self) -> RMatrix {
        let [ni, na, nj, nb] = self.dims;
        RMatrix::from_row_slice(ni * na, nj * nb, &self.data)
    }

    /// Largest violation of `t[iajb] = t[jbia] = -t[jaib]`.
    pub fn antisymmetry_deviation(&self) -> f64 {
        let [ni, na, nj, nb] = self.dims;
        if ni != nj || na != nb {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for i in 0..ni {
            for a in 0..na {
                for j in 0..ni {
                    for b in 0..na {
                        let t = self.get(i, a, j, b);
                        dev = dev.max((t - self.get(j, b, i, a)).abs());
                        dev = dev.max((t + self.get(j, a, i, b)).abs());
                    }
                }
            }
        }
        dev
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeData {
    pub norb: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub t2_aa: Tensor4,
    pub t2_bb: Tensor4,
    pub t2_ab: Tensor4,
}

impl AmplitudeData {
    pub fn zeros(norb: usize, n_alpha: usize, n_beta: usize) -> Self {
        let (va, vb) = (norb - n_alpha, norb - n_beta);
        Self {
            norb,
            n_alpha,
            n_beta,
            t2_aa: Tensor4::zeros([n_alpha, va, n_alpha, va]),
            t2_bb: Tensor4::zeros([n_beta, vb, n_beta, vb]),
            t2_ab: Tensor4::zeros([n_alpha, va, n_beta, vb]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let expected = Self::zeros(self.norb, self.n_alpha, self.n_beta);
        for (name, t, e) in [
            ("aa", &self.t2_aa, &expected.t2_aa),
            ("bb", &self.t2_bb, &expected.t2_bb),
            ("ab", &self.t2_ab, &expected.t2_ab),
        ] {
            if t.dims != e.dims || t.data.len() != e.data.len() {
                return Err(Error::Dimension(format!("t2_{name} has dims {:?}, expected {:?}", t.dims, e.dims)));
            }
        }
        for t in [&self.t2_aa, &self.t2_bb] {
            let dev = t.antisymmetry_deviation();
            if dev > 1e-10 {
                return Err(Error::Invalid(format!("same-spin amplitudes violate antisymmetry by {dev:.3e}")));
            }
        }
        Ok(())
    }

    /// Closed-form MP2 amplitudes from the diagonal Fock energies of the
    /// lowest-orbital reference.
    pub fn mp2(ham: &ActiveSpaceHamiltonian) -> Self {
        let (m, na, nb) = (ham.norb(), ham.n_alpha(), ham.n_beta());
        let (fa, fb) = ham.orbital_energies();
        let mut out = Self::zeros(m, na, nb);
        let same = |n: usize, f: &[f64]| {
            let v = m - n;
            let mut t = Tensor4::zeros([n, v, n, v]);
            for i in 0..n {
                for j in 0..n {
                    for a in 0..v {
                        for b in 0..v {
                            let (pa, pb) = (n + a, n + b);
                            let num = ham.eri(pa, i, pb, j) - ham.eri(pa, j, pb, i);
                            let den = f[i] + f[j] - f[pa] - f[pb];
                            if num != 0.0 {
                                t.set(i, a, j, b, num / (4.0 * den));
                            }
                        }
                    }
                }
            }
            t
        };
        out.t2_aa = same(na, &fa);
        out.t2_bb = same(nb, &fb);
        for i in 0..na {
            for a in 0..m - na {
                for j in 0..nb {
                    for b in 0..m - nb {
                        let (pa, pb) = (na + a, nb + b);
                        let num = ham.eri(pa, i, pb, j);
                        if num != 0.0 {
                            out.t2_ab.set(i, a, j, b, num / (fa[i] + fb[j] - fa[pa] - fb[pb]));
                        }
                    }
                }
            }
        }
        out
    }

    /// Text format: a header line `M N_alpha N_beta`, then records
    /// `block i a j b value` with `block` one of `aa`, `bb`, `ab` and 1-based
    /// absolute orbital indices. `#` starts a comment. Unlisted entries are zero.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::AmplitudeFile { line, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| err(hline, format!("bad header field '{x}'"))))
            .collect::<Result<_>>()?;
        let [m, na, nb] = h[..] else {
            return Err(err(hline, "header must be 'M N_alpha N_beta'".into()));
        };
        if m == 0 || na > m || nb > m {
            return Err(err(hline, format!("inconsistent header ({m}, {na}, {nb})")));
        }
        let mut out = Self::zeros(m, na, nb);
        for (ln, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 6 {
                return Err(err(ln, format!("expected 6 fields, found {}", f.len())));
            }
            let idx: Vec<usize> = f[1..5]
                .iter()
                .map(|x| x.parse::<usize>().map_err(|_| err(ln, format!("bad index '{x}'"))))
                .collect::<Result<_>>()?;
            let value: f64 = f[5].parse().map_err(|_| err(ln, format!("bad value '{}'", f[5])))?;
            let (n1, n2, tensor) = match f[0] {
                "aa" => (na, na, &mut out.t2_aa),
                "bb" => (nb, nb, &mut out.t2_bb),
                "ab" => (na, nb, &mut out.t2_ab),
                other => return Err(err(ln, format!("unknown block '{other}'"))),
            };
            let (i, a, j, b) = (idx[0], idx[1], idx[2], idx[3]);
            let occ = |p: usize, n: usize| p >= 1 && p <= n;
            let vir = |p: usize, n: usize| p > n && p <= m;
            if !(occ(i, n1) && vir(a, n1) && occ(j, n2) && vir(b, n2)) {
                return Err(err(ln, format!("indices ({i}, {a}, {j}, {b}) outside occupied/virtual ranges")));
            }
            tensor.set(i - 1, a - 1 - n1, j - 1, b - 1 - n2, value);
        }
        out.validate().map_err(|e| err(0, e.to_string()))?;
        Ok(out)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.norb, self.n_alpha, self.n_beta);
        for (name, t, n1, n2) in [
            ("aa", &self.t2_aa, self.n_alpha, self.n_alpha),
            ("bb", &self.t2_bb, self.n_beta, self.n_beta),
            ("ab", &self.t2_ab, self.n_alpha, self.n_beta),
        ] {
            let [ni, na, nj, nb] = t.dims;
            for i in 0..ni {
                for a in 0..na {
                    for j in 0..nj {
                        for b in 0..nb {
                            let v = t.get(i, a, j, b);
                            if v != 0.0 {
                                let _ = writeln!(out, "{name} {} {} {} {} {v:e}", i + 1, a + n1 + 1, j + 1, b + n2 + 1);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}
