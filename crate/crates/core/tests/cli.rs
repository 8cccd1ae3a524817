//! Exit codes and output of the `qhf` binary.

use std::process::{Command, Output};

fn qhf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhf")).args(args).output().expect("qhf runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_names_every_scenario() {
    let o = qhf(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for s in qhf::catalog::SCENARIOS {
        assert!(out.contains(s.name), "{} missing from list", s.name);
    }
}

#[test]
fn passing_run_exits_zero_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q3.json");
    let o = qhf(&["run", "quasiquaternion", "--param", "n=3", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("result PASS\n"));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["scenario"], "quasiquaternion");
    assert_eq!(v["computed"]["dim_B"], 9);
    assert!(v.get("timings").is_none());
}

#[test]
fn json_export_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        qhf(&["run", "zm2", "--json", p.to_str().unwrap()]);
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn failing_expectation_exits_one() {
    // The twisted coproduct of Q2 is cocommutative, against the stated value.
    let o = qhf(&["run", "kac_paljutkin"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).ends_with("result FAIL\n"));
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["run", "no_such_scenario"][..],
        &["run", "dihedral", "--param", "n=8", "--param", "p=3"],
        &["run", "quasiquaternion", "--param", "m=3"],
    ] {
        let o = qhf(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn f_basis_table_is_reproduced() {
    let o = qhf(&["table", "quasiquaternion", "--param", "n=3", "--basis", "paper-f"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("Δ̃(f12)"));
    assert!(out.contains("mismatched 0"));
}

#[test]
fn computed_table_prints_every_basis_element() {
    let o = qhf(&["table", "zm2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("Δ̃(e")).count(), 10);
}

#[test]
fn verify_group_accepts_tables_and_rejects_non_groups() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("z3.json");
    let g = qhf::group::build_family(qhf::group::Family::Cyclic(3)).unwrap();
    std::fs::write(&good, serde_json::to_string(&g.to_file()).unwrap()).unwrap();
    let report = dir.path().join("report.json");
    let o = qhf(&["verify-group", good.to_str().unwrap(), "--json", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(report.exists());

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"order":2,"mul":[[0,1],[1,1]]}"#).unwrap();
    let o = qhf(&["verify-group", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
