mod common;

use common::*;
use efsqd::fock::*;
use efsqd::linalg::{CMatrix, C64};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::Rng;

fn random_state<R: Rng>(m: usize, rng: &mut R) -> SpinStatevector {
    let amps: Vec<C64> = (0..1 << m).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let mut s = SpinStatevector::from_amplitudes(m, amps).unwrap();
    s.normalize();
    s
}

fn distance(a: &[C64], b: &DVector<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `Π_j (Σ_q Q[q, j] a†_q) |0⟩`, leftmost column created last.
fn slater_oracle(q: &CMatrix) -> DVector<C64> {
    let m = q.nrows();
    let mut v = basis(1 << m, 0);
    for j in (0..q.ncols()).rev() {
        let k = CMatrix::from_fn(m, 1, |p, _| q[(p, j)]);
        let mut creator = CMatrix::zeros(1 << m, 1 << m);
        for p in 0..m {
            creator += operator_string(m, &[(p, true)]) * k[(p, 0)];
        }
        v = creator * v;
    }
    v
}

#[test]
fn orbital_rotation_matches_exponentiated_one_body_operator() {
    let mut r = rng(10);
    for m in 1..=5 {
        let (spec, k) = random_rotation(m, &mut r);
        let state = random_state(m, &mut r);
        let got = apply_orbital_rotation(&state, &spec).unwrap();
        let want = expm(&one_body(m, &k, 0)) * vec_of(state.amplitudes());
        assert!(distance(got.amplitudes(), &want) < 1e-10, "m = {m}");
    }
}

#[test]
fn slater_preparation_matches_creation_operator_products() {
    let mut r = rng(11);
    for (m, n) in [(3, 1), (4, 2), (5, 3), (5, 5), (4, 0)] {
        let (spec, _) = random_rotation(m, &mut r);
        let reference = (1u64 << n) - 1;
        let q = spec.unitary().columns(0, n).into_owned();
        let got = prepare_slater(&spec, reference).unwrap();
        assert!(distance(got.amplitudes(), &slater_oracle(&q)) < 1e-10);
        // Non-orthonormal orbitals keep their overall scale.
        let skew = CMatrix::from_fn(m, n, |_, _| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
        let got = prepare_slater_from_orbitals(&skew).unwrap();
        assert!(distance(got.amplitudes(), &slater_oracle(&skew)) < 1e-10);
    }
}

#[test]
fn slater_circuit_has_minimal_gate_count() {
    let mut r = rng(12);
    for (m, n) in [(4, 2), (6, 3), (7, 2)] {
        let (spec, _) = random_rotation(m, &mut r);
        assert_eq!(spec.slater_circuit((1 << n) - 1).unwrap().xxyy_count(), n * (m - n));
        assert_eq!(spec.bogoliubov_circuit().xxyy_count(), m * (m - 1) / 2);
    }
}

#[test]
fn diagonal_coulomb_matches_phase_oracle() {
    let mut r = rng(13);
    for sparsity in [Sparsity::Dense, Sparsity::Banded(1), Sparsity::Banded(2), Sparsity::NearestNeighbor] {
        let m = 5;
        let spec = DiagonalCoulombSpec::new(random_symmetric(m, 0.7, &mut r), sparsity).unwrap();
        for p in 0..m {
            for q in 0..m {
                if !sparsity.allows(p, q) {
                    assert_eq!(spec.matrix()[(p, q)], 0.0);
                }
            }
        }
        let state = random_state(m, &mut r);
        let got = apply_diagonal_coulomb(&state, &spec).unwrap();
        let want = coulomb_operator(spec.matrix()) * vec_of(state.amplitudes());
        assert!(distance(got.amplitudes(), &want) < 1e-12);
    }
}

#[test]
fn lucj_matches_layered_oracle() {
    let mut r = rng(14);
    let m = 4;
    let mut layers = Vec::new();
    let mut oracle = CMatrix::identity(1 << m, 1 << m);
    for _ in 0..3 {
        let (rot, k) = random_rotation(m, &mut r);
        let j = random_symmetric(m, 0.5, &mut r);
        let w = expm(&one_body(m, &k, 0));
        oracle = &w * coulomb_operator(&j) * w.adjoint() * oracle;
        layers.push(LucjLayer::new(rot, DiagonalCoulombSpec::new(j, Sparsity::Dense).unwrap()).unwrap());
    }
    let state = random_state(m, &mut r);
    let got = apply_lucj(&state, &layers, 3).unwrap();
    assert!(distance(got.amplitudes(), &(oracle * vec_of(state.amplitudes()))) < 1e-10);
    assert!(apply_lucj(&state, &layers, 2).is_err());
    let circuit = lucj_circuit(m, &layers);
    assert_eq!(circuit.xxyy_count(), 3 * m * (m - 1));
}

#[test]
fn ancilla_circuit_prepares_superpositions() {
    let mut r = rng(15);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let m = 2 + trial % 4;
        let n = 1 + trial % (m - 1);
        let reference = (1u64 << n) - 1;
        let (a, _) = random_rotation(m, &mut r);
        let (b, _) = random_rotation(m, &mut r);
        let da = prepare_slater(&a, reference).unwrap();
        let db = prepare_slater(&b, reference).unwrap();
        let s = da.overlap(&db).unwrap();
        for p in 0..4i64 {
            let out = prepare_superposition(&a, &b, reference, p).unwrap();
            let direct = superpose(&da, &db, p).unwrap();
            let fid = direct.overlap(out.state_p.as_ref().unwrap()).unwrap().norm_sqr();
            worst = worst.max(1.0 - fid);
            let u2 = 2.0 + 2.0 * (efsqd::linalg::i_pow(p) * s).re;
            assert!((out.prob_plus - u2 / 4.0).abs() < 1e-10);
            assert!((out.prob_plus + out.prob_minus - 1.0).abs() < 1e-10);
        }
    }
    assert!(worst < 1e-10, "worst infidelity {worst:e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rotations_preserve_norm_and_compose(seed in 0u64..10_000, m in 1usize..6) {
        let mut r = rng(seed);
        let (a, _) = random_rotation(m, &mut r);
        let (b, _) = random_rotation(m, &mut r);
        let state = random_state(m, &mut r);
        let ab = apply_orbital_rotation(&apply_orbital_rotation(&state, &a).unwrap(), &b).unwrap();
        prop_assert!((ab.norm() - 1.0).abs() < 1e-12);
        let composed = apply_orbital_rotation(&state, &a.then(&b)).unwrap();
        let diff = ab.amplitudes().iter().zip(composed.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-10);
        let back = apply_orbital_rotation(&apply_orbital_rotation(&state, &a).unwrap(), &a.adjoint()).unwrap();
        let diff = back.amplitudes().iter().zip(state.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-10);
    }

    #[test]
    fn rotations_conserve_particle_number(seed in 0u64..10_000, m in 2usize..6, n in 0usize..6) {
        let n = n.min(m);
        let mut r = rng(seed);
        let (a, _) = random_rotation(m, &mut r);
        let state = prepare_slater(&a, (1u64 << n) - 1).unwrap();
        prop_assert_eq!(state.support_popcounts(1e-12), vec![n as u32]);
    }
}
