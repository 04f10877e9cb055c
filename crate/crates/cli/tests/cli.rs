use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

fn efsqd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_efsqd")).args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn parse_prints_summary() {
    let out = efsqd(&["parse", s(&data("h2_0.735.fcidump"))]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["norb"], 2);
    assert_eq!(v["sector_dimension"], 4);
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(efsqd(&["parse", "/nonexistent.fcidump"]).status.code(), Some(2));
    assert_eq!(efsqd(&["resources", "--kind", "qaoa", "--norb", "4", "--n-alpha", "2", "--n-beta", "2"]).status.code(), Some(2));
    assert_eq!(efsqd(&["bogus"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fcidump");
    std::fs::write(&bad, "&FCI NORB=2,NELEC=2,MS2=0,\n&END\nnot a number\n").unwrap();
    assert_eq!(efsqd(&["parse", s(&bad)]).status.code(), Some(2));
}

#[test]
fn convergence_failure_exits_with_three() {
    // Every determinant of the 400-dimensional H6 sector, so batches go
    // through the iterative solver, which is then starved of iterations.
    let mut text = String::from("# norb 6\n");
    for a in 0u32..64 {
        for b in 0u32..64 {
            if a.count_ones() == 3 && b.count_ones() == 3 {
                text += &format!("{a:06b} {b:06b} 1\n");
            }
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let counts = dir.path().join("counts.txt");
    std::fs::write(&counts, text).unwrap();
    let out = efsqd(&[
        "sqd",
        s(&data("h6_chain.fcidump")),
        s(&counts),
        "--samples-per-batch",
        "100000",
        "--davidson-max-iter",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn resources_spot_values() {
    let out = efsqd(&["resources", "--kind", "ef-super", "--norb", "13", "--n-alpha", "7", "--n-beta", "7"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["xxyy_gates"], 366);
    assert_eq!(v[0]["depth"], 51);
    assert_eq!(v[0]["ancillas"], 1);
}

#[test]
fn pipeline_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let fcidump = data("h4_reactant.fcidump");
    let run = |threads: &str, tag: &str| -> (Vec<u8>, Vec<u8>, Vec<u8>) {
        let state = dir.path().join(format!("state{tag}.json"));
        let counts = dir.path().join(format!("counts{tag}.txt"));
        let result = dir.path().join(format!("sqd{tag}.json"));
        let common = ["--seed", "11", "--threads", threads];
        let ok = |args: Vec<&str>| assert!(efsqd(&args).status.success(), "{args:?}");
        ok([&common[..], &["ansatz", s(&fcidump), "--optimize-iters", "2", "-o", s(&state)]].concat());
        ok([&common[..], &["sample", s(&state), "--shots", "3000", "--mode", "ancilla", "-o", s(&counts)]].concat());
        ok([&common[..], &["sqd", s(&fcidump), s(&counts), "--samples-per-batch", "50", "-o", s(&result)]].concat());
        (std::fs::read(state).unwrap(), std::fs::read(counts).unwrap(), std::fs::read(result).unwrap())
    };
    assert_eq!(run("1", "a"), run("4", "b"));
}

#[test]
fn experiment_writes_report_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    let geometry = |label: &str| serde_json::json!({ "label": label, "fcidump": s(&data("h2_0.735.fcidump")) });
    let cfg = serde_json::json!({
        "geometries": [geometry("r"), geometry("ts"), geometry("p")],
        "ansatz": { "n_det": 1, "layers": 0, "sparsity": "dense", "include_hf": true, "optimize_iters": 0, "optimize_tol": 1e-6, "seed": 0 },
        "shots": 2000,
        "recovery": { "batches": 2, "samples_per_batch": 100, "max_recovery_iterations": 2 }
    });
    std::fs::write(&config, serde_json::to_string(&cfg).unwrap()).unwrap();
    let out_dir = dir.path().join("out");
    let out = efsqd(&["--seed", "5", "experiment", s(&config), "-o", s(&out_dir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["activation_energy"]["sqd_hartree"], 0.0);
    assert_eq!(report["reaction_energy"]["sqd_hartree"], 0.0);
    let csv = std::fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    assert!(csv.starts_with("geometry,iteration,batch"));
}

#[test]
fn experiment_seed_comes_from_config_unless_given() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    let cfg = serde_json::json!({
        "geometries": [{ "label": "r", "fcidump": s(&data("h2_2.5.fcidump")) }],
        "shots": 500,
        "seed": 8,
        "recovery": { "batches": 1, "samples_per_batch": 50, "max_recovery_iterations": 1 }
    });
    std::fs::write(&config, serde_json::to_string(&cfg).unwrap()).unwrap();
    let run = |extra: &[&str]| {
        let mut args = extra.to_vec();
        args.extend(["experiment", s(&config)]);
        let out = efsqd(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap()
    };
    let from_config = run(&[]);
    assert_eq!(from_config["seed"], 8);
    assert_eq!(from_config, run(&["--seed", "8"]));
    assert_eq!(run(&["--seed", "9"])["seed"], 9);
}
