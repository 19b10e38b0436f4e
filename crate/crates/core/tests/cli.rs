use std::process::{Command, Output};

use serde_json::Value;
use supersplit::family::{records_from_csv, FamilyRecord};

fn supersplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supersplit"))
        .args(args)
        .env_remove("SUPERSPLIT_FACTOR_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn golden_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (&["genus", "--n", "2", "--d", "5"], "g = 2\n"),
        (&["genus", "--family-X", "--r", "2", "--s", "1"], "g = 1\n"),
        (&["genus", "--family-X", "--r", "19", "--s", "6"], "g = 64530\n"),
        (&["family", "solve", "--s", "6"], "s | m | r\n6 | 18 | 19\n"),
        (&["family", "admissible", "--bound", "25"], "1 2 4 6 12 18 20\n"),
        (&["seq", "A014945", "--bound", "250"], "1 3 9 21 27 63 81 147 171 189 243\n"),
        (&["seq", "A014957", "--bound", "120"], "1 3 5 9 15 21 25 27 39 45 55 63 75 81 105 117\n"),
        (&["factor", "262125"], "262125 = 3^2 * 5^3 * 233^1\n"),
        (
            &["family", "table", "--s-max", "50"],
            "s | m | r\n1 | 2 | 2\n2 | 2 | 1\n6 | 18 | 19\n18 | 27594 | 29125\n42 | 204560302842 | 209430786241\n",
        ),
    ];
    for (args, want) in cases {
        let o = supersplit(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o), *want, "{args:?}");
    }
}

#[test]
fn split_outputs() {
    let o = supersplit(&["split", "--n", "3", "--m", "3", "--delta", "1"]);
    assert!(stdout(&o).contains("splits=true"));
    let o = supersplit(&["split", "--n", "2", "--m", "3", "--delta", "4"]);
    assert!(stdout(&o).contains("splits=false"));
    let o = supersplit(&["split", "--enumerate", "--n-max", "5", "--m-max", "5", "--delta-max", "10", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let list = v.as_array().unwrap();
    assert!(!list.is_empty());
    assert!(list.iter().all(|c| c["splits"] == Value::Bool(true)));
}

#[test]
fn exit_codes() {
    assert_eq!(supersplit(&["genus", "--n", "2", "--d", "2"]).status.code(), Some(2));
    assert_eq!(supersplit(&["split", "--n", "1", "--m", "2", "--delta", "1"]).status.code(), Some(2));
    assert_eq!(supersplit(&["family", "solve"]).status.code(), Some(2));
    assert_eq!(supersplit(&["--format", "xml", "factor", "6"]).status.code(), Some(2));
    assert_eq!(supersplit(&["factor", "abc"]).status.code(), Some(2));
    assert_eq!(supersplit(&["accola", "--input", "/nonexistent/data.json"]).status.code(), Some(2));

    let o = supersplit(&["family", "solve", "--s", "126"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("unresolved"));
    let o = supersplit(&["family", "table", "--s-max", "130", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().last().unwrap()["status"], "unresolved-factoring");
}

#[test]
fn deterministic() {
    for args in [
        &["family", "table", "--s-max", "50", "--format", "json"][..],
        &["split", "--enumerate", "--n-max", "8", "--m-max", "8", "--delta-max", "20", "--format", "csv"],
        &["group", "candidates", "--n", "4", "--m", "4", "--reduced", "D2m", "--verify"],
        &["factor", "18446744073709551617"],
    ] {
        let a = supersplit(args);
        let b = supersplit(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn csv_json_roundtrip() {
    let csv = supersplit(&["family", "table", "--s-max", "50", "--format", "csv"]);
    let json = supersplit(&["family", "table", "--s-max", "50", "--format", "json"]);
    let from_csv = records_from_csv(&stdout(&csv)).unwrap();
    let from_json: Vec<FamilyRecord> = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(from_csv, from_json);
    assert_eq!(from_csv.len(), 5);
    let back: Value = serde_json::to_value(&from_csv).unwrap();
    let orig: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(back, orig);
}

#[test]
fn accola_and_kani_rosen_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let v4 = dir.path().join("v4.json");
    std::fs::write(&v4, r#"{"order": 4, "g": 2, "g0": 0, "subgroups": [{"order": 2, "genus": 0}, {"order": 2, "genus": 1}, {"order": 2, "genus": 1}]}"#).unwrap();
    let o = supersplit(&["accola", "--input", v4.to_str().unwrap()]);
    assert_eq!(stdout(&o), "residual = 0\nholds = true\n");

    let kr = dir.path().join("kr.json");
    std::fs::write(&kr, r#"{"gij": [[2, 1, 1], [1, 1, 0], [1, 0, 1]], "n": [1, -1, -1]}"#).unwrap();
    let o = supersplit(&["kani-rosen", "--input", kr.to_str().unwrap(), "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["decomposition"], "Jac 𝒳 ≅ Jac 𝒳₁ × Jac 𝒳₂");
}

#[test]
fn cache_through_env_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("factors.txt");
    let o = Command::new(env!("CARGO_BIN_EXE_supersplit"))
        .args(["family", "solve", "--s", "18,42"])
        .env("SUPERSPLIT_FACTOR_CACHE", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("58250 = 2^1 * 5^3 * 233^1"), "{text}");
    assert_eq!(text.lines().count(), 2);

    // a second run reads the entries back and appends nothing
    let again = supersplit(&["--cache", path.to_str().unwrap(), "family", "solve", "--s", "18,42"]);
    assert_eq!(again.stdout, o.stdout);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn group_outputs() {
    let o = supersplit(&["group", "candidates", "--n", "3", "--m", "2", "--reduced", "Cm"]);
    let out = stdout(&o);
    assert!(out.contains("Cmn"));
    assert!(out.contains("Metacyclic(l=2)"));
    let o = supersplit(&["group", "candidates", "--n", "2", "--m", "3", "--reduced", "D2m", "--gap"]);
    let out = stdout(&o);
    assert_eq!(out.matches("FreeGroup").count(), 2);
    assert!(out.contains("(sigma*tau)^3*(gamma)^-1"));
    let o = supersplit(&["group", "reduced", "--r", "3", "--lambda", "1", "--m", "4"]);
    assert_eq!(stdout(&o), "reduced group = C_4 (Cm)\n");
}
