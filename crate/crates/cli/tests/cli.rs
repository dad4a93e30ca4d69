use std::path::Path;
use std::process::{Command, Output};

fn pap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pap"))
        .args(args)
        .output()
        .expect("running pap")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field(line: &str, key: &str) -> f64 {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {line}"))
        .parse()
        .unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn gen_then_solve_reports_beta() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "g4.json");
    let g = pap(&[
        "gen",
        "--family",
        "gaussian",
        "--m",
        "4",
        "--uset",
        "hypersphere",
        "--seed",
        "1",
        "--out",
        &inst,
    ]);
    assert!(g.status.success(), "{}", String::from_utf8_lossy(&g.stderr));
    let s = pap(&["solve", &inst, "--policy", "pap"]);
    assert_eq!(s.status.code(), Some(0));
    let out = stdout(&s);
    assert!(out.contains("status=optimal"), "{out}");
    assert!((field(&out, "beta") - 1.2247449).abs() < 1e-7, "{out}");
}

#[test]
fn affine_gap_instance_keeps_its_gap() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "gap9.json");
    assert!(
        pap(&["gen", "--family", "affine-gap", "--m", "9", "--out", &inst])
            .status
            .success()
    );
    let s = pap(&["solve", &inst, "--policy", "aff"]);
    let out = stdout(&s);
    assert_eq!(s.status.code(), Some(0), "{out}");
    assert!(field(&out, "objective") >= 2.0 - 1e-5, "{out}");
}

#[test]
fn domination_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "verify.csv");
    let v = pap(&["verify", "--suite", "domination", "--out", &csv]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    assert!(std::fs::read_to_string(&csv).unwrap().lines().count() > 1);
}

#[test]
fn exit_codes() {
    assert_eq!(
        pap(&["solve", "/nonexistent/instance.json"]).status.code(),
        Some(2)
    );
    assert_eq!(pap(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(pap(&["run", "--preset", "nope"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let broken = path(dir.path(), "broken.json");
    std::fs::write(&broken, "{ not json").unwrap();
    assert_eq!(pap(&["solve", &broken]).status.code(), Some(2));

    let inst = path(dir.path(), "g30.json");
    assert!(pap(&["gen", "--m", "30", "--out", &inst]).status.success());
    assert_eq!(
        pap(&["solve", &inst, "--policy", "aff", "--time-limit", "0.001"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        pap(&["solve", &inst, "--time-limit", "-1"]).status.code(),
        Some(2)
    );
}

fn rows_without_time(csv: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(csv).unwrap();
    let headers = r.headers().unwrap().clone();
    let t = headers.iter().position(|h| h == "time_ms").unwrap();
    r.records()
        .map(|rec| {
            rec.unwrap()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != t)
                .map(|(_, v)| v.to_string())
                .collect()
        })
        .collect()
}

#[test]
fn runs_are_deterministic_and_box_ratio_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, summary) = (
        path(dir.path(), "a.csv"),
        path(dir.path(), "b.csv"),
        path(dir.path(), "s.csv"),
    );
    let args = [
        "run",
        "--family",
        "gaussian",
        "--m",
        "4,6",
        "--alpha",
        "0,1",
        "--uset",
        "hypersphere,budgeted",
        "--policy",
        "box,pap,spap",
        "--seeds",
        "2",
    ];
    let first = pap(&[&args[..], &["--out", &a, "--summary", &summary]].concat());
    assert!(
        first.status.success(),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    assert!(pap(&[&args[..], &["--jobs", "2", "--out", &b]].concat())
        .status
        .success());
    let (ra, rb) = (rows_without_time(&a), rows_without_time(&b));
    assert_eq!(ra.len(), 2 * 2 * 2 * 3 * 2);
    assert_eq!(ra, rb);

    let mut r = csv::Reader::from_path(&a).unwrap();
    for rec in r.deserialize::<pap_cli::ResultRow>() {
        let row = rec.unwrap();
        assert_eq!(row.status, "optimal");
        if row.policy == "box" {
            assert!((row.ratio.unwrap() - 1.0).abs() < 1e-12);
        } else {
            assert!(row.ratio.unwrap() > 0.0);
        }
    }

    let rep = pap(&["report", &a]);
    assert!(rep.status.success());
    assert_eq!(stdout(&rep).trim_end().lines().count(), 1 + 2 * 2 * 2 * 3);
    assert!(Path::new(&summary).exists());
}
