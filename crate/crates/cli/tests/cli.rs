use std::fs;
use std::process::{Command, Output};

use hopf_qubit::state::{bring_to_front, permute_qubits, random_state};
use serde_json::Value;

fn hopfq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopfq"))
        .args(args)
        .output()
        .expect("run hopfq")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn analyze_ghz4() {
    let r = json(&hopfq(&["analyze", "--state", "(|0000>+|1111>)/sqrt(2)"]));
    assert_eq!(r["e_complement"], 1.0);
    assert_eq!(r["ball"], serde_json::json!([0.0, 0.0, 0.0]));
    assert_eq!(r["mes"], true);
}

#[test]
fn analyze_product_two_qubits() {
    let r = json(&hopfq(&["analyze", "--state", "|01>"]));
    assert_eq!(r["e_complement"], 0.0);
    assert_eq!(r["concurrence"], 0.0);
    assert_eq!(r["separable"], serde_json::json!([true, true]));
}

#[test]
fn analyze_csv() {
    let out = hopfq(&["analyze", "--state", "(|000>+|111>)/√2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("field,value\n"));
    let tangle = text.lines().find_map(|l| l.strip_prefix("three_tangle,")).unwrap();
    assert_eq!(tangle.len(), "9.9999999999999956e-1".len());
    assert!((tangle.parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    assert!(text.contains("\nclassification,entangled\n"));
}

#[test]
fn parse_errors_exit_1_with_position() {
    let out = hopfq(&["analyze", "--state", "|01> + |001>"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("1:6"), "{}", stderr(&out));
}

#[test]
fn invalid_states_exit_2() {
    assert_eq!(hopfq(&["analyze", "--state", "|0>+|1>"]).status.code(), Some(2));
    assert_eq!(hopfq(&["analyze", "--state", "0|00>"]).status.code(), Some(2));
    assert_eq!(hopfq(&["analyze", "--state", "|00>", "--qubit", "2"]).status.code(), Some(2));
    assert_eq!(hopfq(&["analyze"]).status.code(), Some(2));
    let ok = json(&hopfq(&["analyze", "--state", "|0>+|1>", "--normalize"]));
    assert_eq!(ok["delta"], 0.0);
}

#[test]
fn state_files() {
    let dir = tempfile::tempdir().unwrap();
    let s = random_state(3, 21).unwrap();
    let path = dir.path().join("s.json");
    fs::write(&path, s.to_json()).unwrap();
    let r = json(&hopfq(&["analyze", "--state", path.to_str().unwrap()]));
    let amps: Vec<[f64; 2]> = serde_json::from_value(r["amplitudes"].clone()).unwrap();
    let want: Vec<[f64; 2]> = s.amps().iter().map(|a| [a.re, a.im]).collect();
    assert_eq!(amps, want);

    let ket = dir.path().join("s.ket");
    fs::write(&ket, "(|00> + |11>)\n  / sqrt(2)\n").unwrap();
    assert_eq!(json(&hopfq(&["analyze", "--state", ket.to_str().unwrap()]))["e_complement"], 1.0);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"n": 1, "amplitudes": [[1, 0]], "extra": 0}"#).unwrap();
    assert_eq!(hopfq(&["analyze", "--state", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn qubit_flag_equals_permuted_state() {
    let dir = tempfile::tempdir().unwrap();
    let s = random_state(4, 3).unwrap();
    let p = permute_qubits(&s, &bring_to_front(4, 2).unwrap()).unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    fs::write(&a, s.to_json()).unwrap();
    fs::write(&b, p.to_json()).unwrap();
    let ra = hopfq(&["analyze", "--state", a.to_str().unwrap(), "--qubit", "2"]);
    let rb = hopfq(&["analyze", "--state", b.to_str().unwrap()]);
    assert!(ra.status.success());
    assert_eq!(ra.stdout, rb.stdout);
}

#[test]
fn encoding_flag_changes_four_qubit_products() {
    let dir = tempfile::tempdir().unwrap();
    let a = hopf_qubit::state::random_state_at(1, 4, 0).unwrap();
    let rest = hopf_qubit::state::random_state_at(3, 4, 1).unwrap();
    let path = dir.path().join("p.json");
    fs::write(&path, a.tensor(&rest).unwrap().to_json()).unwrap();
    let p = path.to_str().unwrap();
    let fixed = json(&hopfq(&["analyze", "--state", p]));
    let printed = json(&hopfq(&["analyze", "--state", p, "--encoding", "as-printed"]));
    assert!(fixed["e_complement"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(printed["scheme"], "as-printed");
    assert!(printed["e_complement"].as_f64().unwrap() > 1e-3);
}

#[test]
fn verify_paper_is_reproducible_and_strict_fails() {
    let a = hopfq(&["verify-paper"]);
    let b = hopfq(&["verify-paper"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("mismatches"));
    assert_eq!(hopfq(&["verify-paper", "--strict"]).status.code(), Some(4));
    let csv = hopfq(&["verify-paper", "--format", "csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("label,quantity,paper_value,"));
}

#[test]
fn sample_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let out = hopfq(&["sample", "-n", "2", "--count", "10", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 11);
}

fn columns(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn sample_three_qubits_matches_tangle() {
    let out = hopfq(&["sample", "-n", "3", "--count", "1000", "--seed", "1"]);
    let (header, rows) = columns(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header, ["index", "e_complement", "e_sum", "norm_defect", "tau_a"]);
    let worst = rows.iter().map(|r| (r[1] - r[4]).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn sample_four_qubits_defect_column() {
    let out = hopfq(&["sample", "-n", "4", "--count", "1000", "--seed", "2"]);
    let (header, rows) = columns(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header.last().unwrap(), "ball_radius_sq");
    for r in &rows {
        assert!((r[3] - (r[1] - r[2])).abs() < 1e-12);
        assert!((r[5] - (1.0 - r[1])).abs() < 1e-12);
    }
}

#[test]
fn sample_errors() {
    let out = hopfq(&["sample", "-n", "2", "--count", "3", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(hopfq(&["sample", "-n", "5", "--count", "3"]).status.code(), Some(2));
    assert_eq!(hopfq(&["sample", "-n", "2", "--count", "0"]).status.code(), Some(2));
}

#[test]
fn zero_divisor_listing() {
    let out = hopfq(&["zero-divisors"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("level 3: none\n"));
    assert!(text.contains("level 4: 336 pairs\n"));
    assert!(text.contains("(i3 + i10)·(i6 - i15) = 0"));
    let table = String::from_utf8(hopfq(&["zero-divisors", "--table"]).stdout).unwrap();
    assert!(table.starts_with("a,b,sign,index\n"));
    assert!(table.lines().any(|l| l == "1,2,+,3"));
    assert_eq!(table.lines().count(), 1 + 256);
    let z = json(&hopfq(&["zero-divisors", "--format", "json"]));
    assert_eq!(z["levels"][3]["count"], 336);
}
