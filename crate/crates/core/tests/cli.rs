//! End-to-end runs of the `foa` binary.

use std::path::Path;
use std::process::{Command, Output};

use foa::io::{InstanceFile, ReportFile};
use foa::validate::validate_for_angles;

fn foa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foa")).args(args).output().expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn error_kind(out: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).expect("stderr holds a JSON error");
    v["error"]["kind"].as_str().unwrap().to_string()
}

fn write_example(dir: &Path) -> String {
    let p = path(dir, "example.json");
    std::fs::write(&p, r#"{"version":1,"cameras":[0,1,2,3],"targets":[[1.5,4],[1.5,8]]}"#).unwrap();
    p
}

#[test]
fn generate_is_reproducible_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    for p in [&a, &b] {
        let out = foa(&["generate", "--n", "2", "--seed", "42", "--margin", "1.5", "--out", p]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let inst = InstanceFile::read(Path::new(&a)).unwrap().to_instance().unwrap();
    assert!(validate_for_angles(&inst).is_accept());
}

#[test]
fn pipeline_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let inst_path = path(dir.path(), "inst.json");
    assert!(foa(&["generate", "--n", "3", "--seed", "9", "--profile", "geometric", "--out", &inst_path])
        .status
        .success());
    let v = foa(&["validate", &inst_path, "--objective", "angles"]);
    assert_eq!(v.status.code(), Some(0));
    let inst = InstanceFile::read(Path::new(&inst_path)).unwrap().to_instance().unwrap();
    for objective in ["angles", "ratios"] {
        for algorithm in ["exact", "qptas", "heuristic"] {
            let mut payloads = Vec::new();
            for run in 0..2 {
                let out_path = path(dir.path(), &format!("{objective}-{algorithm}-{run}.json"));
                let out = foa(&[
                    "solve", &inst_path, "--objective", objective, "--algorithm", algorithm, "--epsilon", "0.7",
                    "--out", &out_path,
                ]);
                assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
                let report = ReportFile::from_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
                let decoded = report.payload.decode(&inst).unwrap();
                assert!((decoded.value - report.payload.value).abs() < 1e-9);
                assert_eq!(report.payload.config.seed, Some(9));
                payloads.push(report.payload.canonical_bytes());
            }
            assert_eq!(payloads[0], payloads[1], "{objective} {algorithm}");
        }
    }
}

#[test]
fn compare_ratio_example() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_example(dir.path());
    let out = foa(&["compare", &inst, "--epsilon", "0.5", "--objective", "ratios"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let value = |alg: &str| -> f64 {
        rows.iter().find(|r| &r[2] == alg).unwrap()[5].parse().unwrap()
    };
    assert!((value("exact") - 6.0).abs() < 1e-12);
    assert!(value("qptas") <= 9.0 + 1e-9);
    assert!((value("heuristic") - 6.0).abs() < 1e-12);
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = path(dir.path(), "bench.csv");
    let out = foa(&["bench", "--n-range", "1..2", "--seeds", "0..1", "--epsilon", "0.8", "--out", &out_path]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,seed,algorithm,objective,epsilon,value,ratio_to_exact,wall_ms,candidates,certified")
    );
    // 2 sizes x 2 seeds x 2 objectives x 3 algorithms.
    assert_eq!(lines.count(), 24);
}

#[test]
fn validation_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = path(dir.path(), "near.json");
    std::fs::write(&p, r#"{"version":1,"cameras":[0,2],"targets":[[1,0.5]]}"#).unwrap();
    let v = foa(&["validate", &p, "--objective", "angles"]);
    assert_eq!(v.status.code(), Some(1));
    let body: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(body["accept"], false);
    assert_eq!(body["offending_targets"], serde_json::json!([1]));
    let s = foa(&["solve", &p, "--objective", "angles", "--algorithm", "exact"]);
    assert_eq!(s.status.code(), Some(1));
    assert_eq!(error_kind(&s), "invalid_instance");
}

#[test]
fn malformed_files_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = path(dir.path(), "dup.json");
    std::fs::write(&p, r#"{"version":1,"cameras":[0,0,1,2],"targets":[[1,9],[1,9]]}"#).unwrap();
    let out = foa(&["validate", &p, "--objective", "ratios"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "malformed_instance");
}

#[test]
fn usage_errors_exit_two() {
    let out = foa(&["solve"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "usage");
    let dir = tempfile::tempdir().unwrap();
    let inst = write_example(dir.path());
    let bad_eps = foa(&["solve", &inst, "--objective", "ratios", "--epsilon", "1.5"]);
    assert_eq!(bad_eps.status.code(), Some(2));
    let missing = foa(&["solve", &path(dir.path(), "nope.json"), "--objective", "ratios", "--epsilon", "0.5"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(error_kind(&missing), "io");
}

#[test]
fn budget_exhaustion_exits_three_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_example(dir.path());
    let out_path = path(dir.path(), "r.json");
    let out = foa(&[
        "solve", &inst, "--objective", "ratios", "--epsilon", "0.5", "--max-candidates", "1", "--out", &out_path,
    ]);
    assert_eq!(out.status.code(), Some(3));
    let report = ReportFile::from_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(report.payload.budget_exceeded);
    assert!(!report.payload.certified);
}
