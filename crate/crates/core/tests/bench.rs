mod common;

use common::*;
use efsqd::bench::*;
use efsqd::sqd::RecoveryConfig;
use proptest::prelude::*;

/// Table entries scaled by 4 so the `M/4` term stays integral:
/// `(qubits, ancillas, xxyy, 4·nn, depth)`.
fn table(kind: CircuitKind, m: i64, na: i64, nb: i64, l: i64) -> (i64, i64, i64, i64, i64) {
    let prep = |n: i64| n * (m - n);
    match kind {
        CircuitKind::Lucj => (2 * m, 0, prep(na) + prep(nb) + l * 2 * m * (m - 1), l * (8 * (m - 1) + m), (m - 1) + l * (m + 3)),
        CircuitKind::EfInd => (m, 0, prep(na) + l * m * (m - 1), l * (8 * (m - 1) + m), (m - 1) + l * (m + 2)),
        CircuitKind::EfSuper => {
            (m, 1, prep(na) + (m + 1) * (m - 1) + l * m * (m - 1), 4 * l * (m - 1), 3 * (m - 1) + l * (m + 2))
        }
    }
}

fn ratio_is(r: &num_rational::Rational64, scaled: i64, scale: i64) -> bool {
    r.numer() * scale == scaled * r.denom()
}

#[test]
fn resources_match_table_everywhere() {
    let mut checked = 0;
    for m in 4..=30i64 {
        for n in 1..=m {
            let nb = m - n / 2;
            for l in 0..=3i64 {
                for kind in CircuitKind::ALL {
                    let est = estimate_resources(kind, m as u64, n as u64, nb as u64, l as u64);
                    let (q, anc, xxyy, nn4, depth) = table(kind, m, n, nb, l);
                    assert_eq!(est.qubits as i64, q, "{kind:?} {m} {n} {l}");
                    assert_eq!(est.ancillas as i64, anc);
                    assert_eq!(est.xxyy_gates as i64, xxyy, "{kind:?} {m} {n} {l}");
                    assert_eq!(est.nn_gates as i64, (nn4 + 3) / 4, "{kind:?} {m} {n} {l}");
                    assert_eq!(est.depth as i64, depth, "{kind:?} {m} {n} {l}");
                    assert!(ratio_is(&est.raw.nn_gates, nn4, 4));
                    assert!(ratio_is(&est.raw.xxyy_gates, xxyy, 1));
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 3 * 4 * (4..=30).map(|m| m as usize).sum::<usize>());
}

#[test]
fn resource_spot_values() {
    let lucj = estimate_resources(CircuitKind::Lucj, 13, 7, 6, 1);
    assert_eq!((lucj.qubits, lucj.xxyy_gates, lucj.depth), (26, 396, 28));
    let sup = estimate_resources(CircuitKind::EfSuper, 13, 7, 7, 1);
    assert_eq!((sup.xxyy_gates, sup.depth), (366, 51));
    assert_eq!(estimate_resources(CircuitKind::EfInd, 23, 12, 11, 2).qubits, 23);
    assert_eq!(estimate_resources(CircuitKind::EfInd, 8, 3, 3, 0).xxyy_gates, 15);
}

proptest! {
    #[test]
    fn resources_grow_with_layers_and_orbitals(m in 2u64..40, n in 0u64..40, l in 0u64..6) {
        let n = n.min(m);
        for kind in CircuitKind::ALL {
            let a = estimate_resources(kind, m, n, n, l);
            let b = estimate_resources(kind, m, n, n, l + 1);
            let c = estimate_resources(kind, m + 1, n, n, l);
            prop_assert!(b.xxyy_gates > a.xxyy_gates && b.nn_gates > a.nn_gates && b.depth > a.depth);
            prop_assert!(c.xxyy_gates >= a.xxyy_gates && c.nn_gates >= a.nn_gates && c.depth > a.depth);
            prop_assert!(c.qubits > a.qubits);
        }
    }
}

#[test]
fn fci_oracle_agrees_with_references() {
    for name in ["h2_0.735", "h4_ts", "h6_chain"] {
        let sol = fci_ground_state(&load(name)).unwrap();
        assert!((sol.energy - reference_energies(name).0).abs() < 1e-8, "{name}");
        assert!((sol.vector.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-10);
    }
}

fn h2_experiment(seed: u64, labels: &[&str]) -> ExperimentConfig {
    let geometries = labels
        .iter()
        .map(|l| GeometryInput { label: l.to_string(), fcidump: data_path(&format!("{l}.fcidump")), amplitudes: None })
        .collect();
    serde_json::from_value::<ExperimentConfig>(serde_json::json!({ "geometries": [], "shots": 2000, "seed": seed }))
        .map(|mut c| {
            c.geometries = geometries;
            c.recovery = RecoveryConfig { batches: 2, samples_per_batch: 500, max_recovery_iterations: 3, ..Default::default() };
            c
        })
        .unwrap()
}

#[test]
fn identical_geometries_have_zero_differences() {
    let cfg = h2_experiment(4, &["h2_0.735", "h2_0.735", "h2_0.735"]);
    let rep = run_experiment(&cfg).unwrap();
    assert!(rep.complete());
    assert_eq!(rep.activation_energy.as_ref().unwrap().sqd_hartree, Some(0.0));
    assert_eq!(rep.reaction_energy.as_ref().unwrap().sqd_hartree, Some(0.0));
    assert_eq!(rep.reaction_energy.as_ref().unwrap().fci_hartree, Some(0.0));
}

#[test]
fn report_round_trips_and_repeats() {
    let cfg = h2_experiment(9, &["h2_0.735", "h2_2.5"]);
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    let text = a.to_json().unwrap();
    assert_eq!(text, b.to_json().unwrap());
    let back = ExperimentReport::from_json(&text).unwrap();
    assert_eq!(back.to_json().unwrap(), text);
    assert!(a.reaction_energy.is_none());
    let d = a.activation_energy.unwrap();
    let (f0, _) = reference_energies("h2_0.735");
    let (f1, _) = reference_energies("h2_2.5");
    assert!((d.fci_hartree.unwrap() - (f1 - f0)).abs() < 1e-8);
    assert!((d.fci_kcal_per_mol.unwrap() - (f1 - f0) * a.hartree_to_kcal_per_mol).abs() < 1e-6);
}

#[test]
fn trace_has_one_row_per_batch() {
    let cfg = h2_experiment(1, &["h2_0.735", "h2_2.5"]);
    let rep = run_experiment(&cfg).unwrap();
    let rows = experiment_trace_rows(&rep);
    let expected: usize = rep.geometries.iter().map(|g| g.sqd.as_ref().unwrap().iterations.iter().map(|i| i.batches.len()).sum::<usize>()).sum();
    assert_eq!(rows.len(), expected);
    let csv = trace_csv(&rows).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), TRACE_HEADER.join(","));
    assert_eq!(lines.count(), expected);
    for r in &rows {
        assert!(r.deviation.unwrap() >= -1e-8);
    }

    let dir = tempdir();
    let json = emit_report(&rep, ReportFormat::Json, &dir).unwrap();
    let csv_path = emit_report(&rep, ReportFormat::Csv, &dir).unwrap();
    assert_eq!(std::fs::read_to_string(json).unwrap().trim_end(), rep.to_json().unwrap());
    assert_eq!(std::fs::read_to_string(csv_path).unwrap(), csv);
    std::fs::remove_dir_all(dir).unwrap();
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("efsqd-bench-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn variational_ordering_on_h2() {
    for label in ["h2_0.735", "h2_2.5"] {
        let mut cfg = h2_experiment(2, &[label]);
        cfg.recovery.samples_per_batch = usize::MAX;
        let rep = run_experiment(&cfg).unwrap();
        let g = &rep.geometries[0];
        let (fci, sqd, ef) = (g.fci_energy.unwrap(), g.sqd_energy().unwrap(), g.ansatz.as_ref().unwrap().ef_energy.unwrap());
        assert!(fci <= sqd + 1e-8 && sqd <= ef + 1e-8, "{label}: {fci} {sqd} {ef}");
    }
}

#[test]
fn missing_inputs_are_rejected() {
    let mut cfg = h2_experiment(0, &["h2_0.735"]);
    cfg.geometries[0].fcidump = data_path("absent.fcidump");
    assert!(matches!(run_experiment(&cfg), Err(efsqd::Error::Invalid(_))));
    let mut cfg = h2_experiment(0, &[]);
    assert!(run_experiment(&cfg).is_err());
    cfg = h2_experiment(0, &["h2_0.735"]);
    cfg.shots = 0;
    assert!(run_experiment(&cfg).is_err());
}
