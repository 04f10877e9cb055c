//! Reference implementations for integration tests. Everything here works on
//! dense Fock-space matrices built from Jordan–Wigner operators and shares no
//! code with the library beyond its data types.
#![allow(dead_code)]

use efsqd::ansatz::{DeterminantPair, EFState};
use efsqd::fock::{DiagonalCoulombSpec, LucjLayer, OrbitalRotationSpec, Sparsity};
use efsqd::hamiltonian::ActiveSpaceHamiltonian;
use efsqd::linalg::{CMatrix, RMatrix, C64};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeMap;
use std::path::PathBuf;

pub type TestRng = ChaCha20Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn load(name: &str) -> ActiveSpaceHamiltonian {
    efsqd::hamiltonian::read_fcidump(data_path(&format!("{name}.fcidump"))).unwrap()
}

/// `(fci, hf)` from the independently generated reference file.
pub fn reference_energies(name: &str) -> (f64, f64) {
    let text = std::fs::read_to_string(data_path("reference_energies.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    (v[name]["fci"].as_f64().unwrap(), v[name]["hf"].as_f64().unwrap())
}

// ---------------------------------------------------------------------------
// Jordan–Wigner operators

/// `op_k |n⟩` for a creation (`create`) or annihilation operator on mode `k`;
/// the sign counts occupied modes below `k`.
pub fn apply_ladder(n: usize, k: usize, create: bool) -> Option<(usize, f64)> {
    let occupied = n >> k & 1 == 1;
    if occupied == create {
        return None;
    }
    let below = (n & ((1 << k) - 1)).count_ones();
    Some((n ^ (1 << k), if below.is_multiple_of(2) { 1.0 } else { -1.0 }))
}

/// Matrix of a product of ladder operators, rightmost applied first.
pub fn operator_string(n_modes: usize, ops: &[(usize, bool)]) -> CMatrix {
    let dim = 1 << n_modes;
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut state = Some((col, 1.0));
        for &(k, create) in ops.iter().rev() {
            state = state.and_then(|(n, s)| apply_ladder(n, k, create).map(|(n2, s2)| (n2, s * s2)));
        }
        if let Some((row, s)) = state {
            m[(row, col)] += c(s, 0.0);
        }
    }
    m
}

/// `Σ_pq k[p, q] a†_{p+offset} a_{q+offset}`.
pub fn one_body(n_modes: usize, k: &CMatrix, offset: usize) -> CMatrix {
    let dim = 1 << n_modes;
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        for q in 0..k.ncols() {
            let Some((mid, s1)) = apply_ladder(col, q + offset, false) else { continue };
            for p in 0..k.nrows() {
                if let Some((row, s2)) = apply_ladder(mid, p + offset, true) {
                    out[(row, col)] += k[(p, q)] * (s1 * s2);
                }
            }
        }
    }
    out
}

/// The full molecular Hamiltonian on 2M spin-orbital modes, α modes first.
pub fn fock_hamiltonian(ham: &ActiveSpaceHamiltonian) -> CMatrix {
    let m = ham.norb();
    let modes = 2 * m;
    let dim = 1 << modes;
    let mut h = CMatrix::identity(dim, dim) * c(ham.core_energy(), 0.0);
    for col in 0..dim {
        let mut add = |ops: &[(usize, bool)], coef: f64| {
            if coef == 0.0 {
                return;
            }
            let mut state = Some((col, 1.0));
            for &(k, create) in ops.iter().rev() {
                state = state.and_then(|(n, s)| apply_ladder(n, k, create).map(|(n2, s2)| (n2, s * s2)));
            }
            if let Some((row, s)) = state {
                h[(row, col)] += c(s * coef, 0.0);
            }
        };
        for sigma in [0, m] {
            for p in 0..m {
                for q in 0..m {
                    add(&[(p + sigma, true), (q + sigma, false)], ham.h1(p, q));
                }
            }
        }
        for sigma in [0, m] {
            for tau in [0, m] {
                for p in 0..m {
                    for q in 0..m {
                        for r in 0..m {
                            for s in 0..m {
                                add(
                                    &[(p + sigma, true), (r + tau, true), (s + tau, false), (q + sigma, false)],
                                    0.5 * ham.eri(p, q, r, s),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    h
}

/// `S²` on 2M modes.
pub fn fock_s2(m: usize) -> CMatrix {
    let modes = 2 * m;
    let mut sp = CMatrix::zeros(1 << modes, 1 << modes);
    let mut sz = CMatrix::zeros(1 << modes, 1 << modes);
    for p in 0..m {
        sp += operator_string(modes, &[(p, true), (p + m, false)]);
        sz += operator_string(modes, &[(p, true), (p, false)]) * c(0.5, 0.0);
        sz -= operator_string(modes, &[(p + m, true), (p + m, false)]) * c(0.5, 0.0);
    }
    let sm = sp.adjoint();
    &sm * &sp + &sz * &sz + &sz
}

/// Lowest eigenvalue of `h` restricted to basis indices with the given
/// per-spin particle numbers.
pub fn sector_ground_energy(h: &CMatrix, m: usize, na: usize, nb: usize) -> f64 {
    let low = (1usize << m) - 1;
    let idx: Vec<usize> = (0..h.nrows())
        .filter(|&n| (n & low).count_ones() as usize == na && (n >> m).count_ones() as usize == nb)
        .collect();
    let sub = CMatrix::from_fn(idx.len(), idx.len(), |i, j| h[(idx[i], idx[j])]);
    let eig = nalgebra::SymmetricEigen::new(sub);
    eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

// ---------------------------------------------------------------------------
// Dense matrix functions

/// `exp(a)` by scaling and squaring of a 30-term Taylor series.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = a.iter().map(|z| z.norm()).sum::<f64>().max(1e-300);
    let s = (norm / 0.25).log2().ceil().max(0.0) as i32;
    let scaled = a * c(0.5f64.powi(s), 0.0);
    let mut term = CMatrix::identity(n, n);
    let mut out = CMatrix::identity(n, n);
    for k in 1..30 {
        term = &term * &scaled * c(1.0 / k as f64, 0.0);
        out += &term;
    }
    for _ in 0..s {
        out = &out * &out;
    }
    out
}

/// `exp(a) v` by repeated Taylor steps on the vector.
pub fn expm_apply(a: &CMatrix, v: &DVector<C64>) -> DVector<C64> {
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let steps = (norm / 0.5).ceil().max(1.0) as usize;
    let h = c(1.0 / steps as f64, 0.0);
    let mut out = v.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..25 {
            term = a * &term * (h / k as f64);
            acc += &term;
        }
        out = acc;
    }
    out
}

pub fn random_antihermitian<R: Rng>(m: usize, scale: f64, rng: &mut R) -> CMatrix {
    let x = CMatrix::from_fn(m, m, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&x - x.adjoint()) * c(scale, 0.0)
}

pub fn random_symmetric<R: Rng>(m: usize, scale: f64, rng: &mut R) -> RMatrix {
    let x = RMatrix::from_fn(m, m, |_, _| rng.random_range(-1.0..1.0));
    (&x + x.transpose()) * scale
}

/// Orbital rotation with `U = exp(k)`; returns the generator for the oracle.
pub fn random_rotation<R: Rng>(m: usize, rng: &mut R) -> (OrbitalRotationSpec, CMatrix) {
    let k = random_antihermitian(m, 0.8, rng);
    (OrbitalRotationSpec::from_unitary(expm(&k)).unwrap(), k)
}

pub fn vec_of(state: &[C64]) -> DVector<C64> {
    DVector::from_column_slice(state)
}

pub fn basis(dim: usize, k: usize) -> DVector<C64> {
    let mut v = DVector::zeros(dim);
    v[k] = c(1.0, 0.0);
    v
}

/// `exp(i Σ_pr J_pr n_p n_r)` on M modes.
pub fn coulomb_operator(j: &RMatrix) -> CMatrix {
    let m = j.nrows();
    let dim = 1 << m;
    CMatrix::from_fn(dim, dim, |x, y| {
        if x != y {
            return c(0.0, 0.0);
        }
        let mut phase = 0.0;
        for p in 0..m {
            for r in 0..m {
                if x >> p & 1 == 1 && x >> r & 1 == 1 {
                    phase += j[(p, r)];
                }
            }
        }
        C64::from_polar(1.0, phase)
    })
}

/// A random EF state together with the Fock-space operators the oracle needs.
pub struct RandomForgedState {
    pub state: EFState,
    /// Per determinant: generators of the α and β orbital rotations.
    pub generators: Vec<(CMatrix, CMatrix)>,
    /// Per spin and layer: `(rotation generator, J)`.
    pub layers_alpha: Vec<(CMatrix, RMatrix)>,
    pub layers_beta: Vec<(CMatrix, RMatrix)>,
}

fn random_layers<R: Rng>(m: usize, n: usize, sparsity: Sparsity, rng: &mut R) -> (Vec<LucjLayer>, Vec<(CMatrix, RMatrix)>) {
    let mut lib = Vec::new();
    let mut raw = Vec::new();
    for _ in 0..n {
        let (rot, k) = random_rotation(m, rng);
        let j = random_symmetric(m, 0.6, rng);
        let spec = DiagonalCoulombSpec::new(j, sparsity).unwrap();
        raw.push((k, spec.matrix().clone()));
        lib.push(LucjLayer::new(rot, spec).unwrap());
    }
    (lib, raw)
}

pub fn random_ef_state<R: Rng>(m: usize, na: usize, nb: usize, n_det: usize, n_layers: usize, rng: &mut R) -> RandomForgedState {
    let mut dets = Vec::new();
    let mut generators = Vec::new();
    for _ in 0..n_det {
        let (a, ka) = random_rotation(m, rng);
        let (b, kb) = random_rotation(m, rng);
        dets.push(DeterminantPair { alpha: a, beta: b });
        generators.push((ka, kb));
    }
    let coefficients: Vec<C64> = (0..n_det).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let sparsity = if rng.random_bool(0.5) { Sparsity::Dense } else { Sparsity::NearestNeighbor };
    let (la, ra) = random_layers(m, n_layers, sparsity, rng);
    let (lb, rb) = random_layers(m, n_layers, sparsity, rng);
    let state = EFState::new(m, na, nb, coefficients, dets, la, lb).unwrap();
    RandomForgedState { state, generators, layers_alpha: ra, layers_beta: rb }
}

impl RandomForgedState {
    /// Register state `LUCJ · exp(k) |HF⟩` on M modes.
    fn register(&self, k: &CMatrix, layers: &[(CMatrix, RMatrix)], n: usize) -> DVector<C64> {
        let m = self.state.norb;
        let mut v = expm(&one_body(m, k, 0)) * basis(1 << m, (1 << n) - 1);
        for (g, j) in layers {
            let w = expm(&one_body(m, g, 0));
            v = &w * (coulomb_operator(j) * (w.adjoint() * v));
        }
        v
    }

    /// `Σ_μ c_μ |u_μ⟩ ⊗ |v_μ⟩` with index `x | y << M`, unnormalized.
    pub fn full_state(&self) -> DVector<C64> {
        let m = self.state.norb;
        let mut out = DVector::zeros(1 << (2 * m));
        for (mu, (ka, kb)) in self.generators.iter().enumerate() {
            let u = self.register(ka, &self.layers_alpha, self.state.n_alpha);
            let v = self.register(kb, &self.layers_beta, self.state.n_beta);
            for y in 0..(1 << m) {
                for x in 0..(1 << m) {
                    out[x | y << m] += self.state.coefficients[mu] * u[x] * v[y];
                }
            }
        }
        out
    }
}

/// `⟨ψ|A ⊗ B|ψ⟩` with `A` on the low M bits and `B` on the high M bits.
pub fn product_expectation(psi: &DVector<C64>, a: &CMatrix, b: &CMatrix) -> C64 {
    let m_dim = a.nrows();
    let mat = CMatrix::from_fn(m_dim, m_dim, |x, y| psi[x | (y * m_dim)]);
    let applied = a * &mat * b.transpose();
    mat.iter().zip(applied.iter()).map(|(p, q)| p.conj() * q).sum()
}

pub fn expectation(psi: &DVector<C64>, op: &CMatrix) -> C64 {
    psi.dotc(&(op * psi))
}

/// Random real Hamiltonian with the 8-fold integral symmetry.
pub fn random_hamiltonian<R: Rng>(m: usize, na: usize, nb: usize, rng: &mut R) -> ActiveSpaceHamiltonian {
    let h = random_symmetric(m, 0.5, rng);
    let mut eri = vec![0.0; m.pow(4)];
    let idx = |p: usize, q: usize, r: usize, s: usize| ((p * m + q) * m + r) * m + s;
    let mut seen = BTreeMap::new();
    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                for s in 0..m {
                    let pq = (p.max(q), p.min(q));
                    let rs = (r.max(s), r.min(s));
                    let key = (pq.max(rs), pq.min(rs));
                    let v = *seen.entry(key).or_insert_with(|| rng.random_range(-0.3..0.3));
                    eri[idx(p, q, r, s)] = v;
                }
            }
        }
    }
    let h1: Vec<f64> = (0..m * m).map(|k| h[(k / m, k % m)]).collect();
    ActiveSpaceHamiltonian::new(m, na, nb, rng.random_range(-1.0..1.0), h1, eri).unwrap()
}

/// Outcome of one acceptance criterion.
pub struct Verdict {
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn check(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

pub mod scenarios;
