use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ces(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ces")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn construct_writes_subspace_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    for (dims, expected) in [("3,3", 4), ("2,2,2", 4)] {
        let path = dir.path().join(format!("{dims}.json"));
        let out = ces(&["construct", "--dims", dims, "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let file = read_json(&path);
        assert_eq!(file["vectors"].as_array().unwrap().len(), expected);
        let side = dir.path().join(format!("{dims}.json.lambdas.json"));
        assert_eq!(read_json(&side)["mode"]["kind"], "roots-of-unity");
    }
}

#[test]
fn construct_rejects_single_party() {
    let out = ces(&["construct", "--dims", "2"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("two subsystems"));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(code(&ces(&["construct"])), 1);
    assert_eq!(code(&ces(&["no-such-command"])), 1);
    assert_eq!(code(&ces(&["construct", "--dims", "a,b"])), 1);
    assert_eq!(code(&ces(&["--help"])), 0);
    assert_eq!(code(&ces(&["--version"])), 0);
}

#[test]
fn unwritable_output_exits_two() {
    let out = ces(&["construct", "--dims", "2,2", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn basis_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (n, count) in [("2", 1), ("5", 16)] {
        let path = dir.path().join(format!("basis{n}.json"));
        let out = ces(&["basis", "--n", n, "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        let file = read_json(&path);
        assert_eq!(file["vectors"].as_array().unwrap().len(), count);
        assert_eq!(file["labels"].as_array().unwrap().len(), count);
    }
    assert_eq!(code(&ces(&["basis", "--n", "1"])), 1);
}

#[test]
fn search_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let ces_path = dir.path().join("ces33.json");
    assert_eq!(code(&ces(&["construct", "--dims", "3,3", "--out", ces_path.to_str().unwrap()])), 0);
    let out = ces(&["search", ces_path.to_str().unwrap(), "--json", "--restarts", "20"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "none_found");
    assert!(v["best_overlap"].as_f64().unwrap() < 1.0 - 1e-6);

    // span{e₀ ⊗ e₀}
    let mut e0 = vec![[0.0, 0.0]; 9];
    e0[0] = [1.0, 0.0];
    let product_path = dir.path().join("e00.json");
    std::fs::write(&product_path, serde_json::json!({"dims": [3, 3], "vectors": [e0]}).to_string()).unwrap();
    let v = stdout_json(&ces(&["search", product_path.to_str().unwrap(), "--json"]));
    assert_eq!(v["verdict"], "product_found");
    assert!((v["best_overlap"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn search_finds_product_in_random_dimension_five() {
    use ces_core::random::{haar_subspace, seeded_rng};
    let dir = tempfile::tempdir().unwrap();
    let space = ces_core::MultipartiteSpace::new(vec![3, 3]).unwrap();
    let s = haar_subspace(&mut seeded_rng(12, 0), &space, 5).unwrap();
    let path = dir.path().join("five.json");
    ces_core::io::write_subspace(&path, &s, None).unwrap();
    let v = stdout_json(&ces(&["search", path.to_str().unwrap(), "--json", "--seed", "2"]));
    assert_eq!(v["verdict"], "product_found");
}

#[test]
fn search_malformed_file_exits_one_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"dims\": [2, 2],\n \"vectors\": [[[1, 0], oops]]}").unwrap();
    let out = ces(&["search", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&ces(&["search", dir.path().join("missing.json").to_str().unwrap()])), 2);
}

#[test]
fn search_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    assert_eq!(code(&ces(&["construct", "--dims", "2,3", "--out", path.to_str().unwrap()])), 0);
    let a = ces(&["search", path.to_str().unwrap(), "--json", "--seed", "4"]);
    let b = ces(&["search", path.to_str().unwrap(), "--json", "--seed", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn stabilizer_z2_exhaustive_passes() {
    let out = ces(&["stabilizer", "--group", "Z2", "--mode", "exhaustive", "--json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["overall"], true);
    assert_eq!(v["wall_time_ms"], 0);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["name"] == "perfect: E={0,1} pair residual"));
}

#[test]
fn stabilizer_z3_sampled_is_reproducible() {
    let a = ces(&["stabilizer", "--group", "Z3", "--mode", "sampled", "--seed", "7", "--json"]);
    let b = ces(&["stabilizer", "--group", "Z3", "--mode", "sampled", "--seed", "7", "--json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout_json(&a)["overall"], true);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn stabilizer_rejects_large_group() {
    let out = ces(&["stabilizer", "--group", "Z7"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dense limit"));
    assert_eq!(code(&ces(&["stabilizer", "--group", "Q8"])), 1);
}

#[test]
fn constructed_file_round_trips_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    assert_eq!(code(&ces(&["construct", "--dims", "2,2,3", "--out", path.to_str().unwrap()])), 0);
    let loaded = ces_core::io::read_subspace(&path).unwrap();
    assert!(!loaded.orthonormalized);
    let again = ces_core::io::subspace_to_json(&loaded.subspace, None);
    assert_eq!(again.trim_end(), std::fs::read_to_string(&path).unwrap().trim_end());
}

#[test]
fn report_bundle_writes_all_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("bundle");
    let out = ces(&["report-bundle", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read_json(&out_dir.join("summary.json"))["overall"], true);
    assert!(out_dir.join("ces_3x3x3.json").exists());
    assert!(out_dir.join("stabilizer_Z3.report.json").exists());
    assert_eq!(code(&ces(&["report-bundle"])), 1);
}
