use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use conic::{run_scenario, RunError, ScenarioError, BUNDLED};
use conic_core::num::{parse_rational, q};

fn conic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_file(dir: &Path, text: &str, extra: &[&str]) -> Output {
    let file = dir.join("scenario.json");
    fs::write(&file, text).unwrap();
    let out = dir.join("out");
    let mut args = vec![
        "--scenario",
        file.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    conic(&args)
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|x| x.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn bundled_scenarios_pass() {
    let dir = tempfile::tempdir().unwrap();
    for (name, _) in BUNDLED {
        let out = dir.path().join(name);
        let o = conic(&["--scenario", name, "--out", out.to_str().unwrap()]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&o.stdout)
        );
        assert!(String::from_utf8_lossy(&o.stdout).ends_with("PASS\n"));
        let json: serde_json::Value =
            serde_json::from_slice(&fs::read(out.join("report.json")).unwrap()).unwrap();
        assert_eq!(json["passed"], true);
    }
}

#[test]
fn dangling_chart_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let s = r#"{"fixture": "f0", "commands": [{"op": "build-h", "name": "h", "phi": "phi", "psi": "nope"}]}"#;
    let o = run_file(dir.path(), s, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`nope`"));
    match run_scenario(s, 0, dir.path()) {
        Err(RunError::Scenario(ScenarioError::UnknownReference { name, index, op })) => {
            assert_eq!((name.as_str(), index, op), ("nope", 0, "build-h"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn parse_errors_carry_a_position() {
    let s = "{\"fixture\": \"f0\",\n \"commands\": [\n  {\"op\": \"frobnicate\"}\n ]}";
    match run_scenario(s, 0, Path::new(".")) {
        Err(RunError::Scenario(ScenarioError::Parse { line, .. })) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn failed_verification_sets_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let s =
        r#"{"fixture": "f2", "commands": [{"op": "check-interlace", "phi": "phi", "psi": "psi", "k": 3}]}"#;
    let o = run_file(dir.path(), s, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).ends_with("FAIL\n"));
}

#[test]
fn identity_grid_maps_each_point_to_itself() {
    let dir = tempfile::tempdir().unwrap();
    let s = r#"{"ambient": {"kind": "square", "half": "8"}, "commands": [
        {"op": "sample", "map": "identity", "out": "id.csv",
         "grid": {"kind": "plane", "x": {"from": "-5", "to": "4", "step": "1"}, "y": {"from": "1/10", "to": "1", "step": "1/10"}}}]}"#;
    let o = run_file(dir.path(), s, &[]);
    assert_eq!(o.status.code(), Some(0));
    let rows = rows(&dir.path().join("out/id.csv"));
    assert_eq!(rows.len(), 100);
    for r in &rows {
        assert_eq!((&r[0], &r[1]), (&r[3], &r[4]));
    }
}

#[test]
fn f0_level_samples_cycle_through_regions() {
    let dir = tempfile::tempdir().unwrap();
    let o = conic(&["--scenario", "f0_lemma1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rows = rows(&dir.path().join("f0_h_levels.csv"));
    let v0: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == "v0").collect();
    let regions: Vec<&str> = v0.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(
        regions,
        ["Core", "Core", "Core", "Core", "B1", "B1", "A1", "A1", "B2", "B2", "A2", "A2", "B3"]
    );
    let image = |level: &str| v0.iter().find(|r| r[1] == level).map(|r| r[4].clone()).unwrap();
    assert_eq!(image("7/2"), "31/10");
    assert_eq!(image("11/2"), "51/10");
    assert_eq!(image("5/2"), "5/2");
}

#[test]
fn planar_samples_are_exact_rationals() {
    let dir = tempfile::tempdir().unwrap();
    let o = conic(&["--scenario", "f2_planar", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rows = rows(&dir.path().join("f2_h_plane.csv"));
    assert_eq!(rows.len(), 13 * 13);
    for r in &rows {
        for i in [0, 1, 3, 4] {
            assert!(!r[i].contains('.') && parse_rational(&r[i]).is_some(), "{r:?}");
        }
    }
    // The origin is φ's vertex and goes to ψ's vertex.
    let origin = rows.iter().find(|r| r[0] == "0" && r[1] == "0").unwrap();
    assert_eq!(origin[2], "P");
    assert_eq!(parse_rational(&origin[3]), Some(q(1, 8)));
    assert_eq!(origin[4], "0");
}

#[test]
fn suspension_pair_goes_to_the_poles() {
    let dir = tempfile::tempdir().unwrap();
    let o = conic(&[
        "--scenario",
        "suspension_corollary1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = rows(&dir.path().join("suspension_H.csv"));
    assert_eq!(rows[0][3], "north");
    assert_eq!(rows[1][3], "south");
}

#[test]
fn runs_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = conic(&[
            "--scenario",
            "f1_alternate",
            "--seed",
            "7",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    for f in ["report.json", "report.txt", "f1_g_levels.csv"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn verbose_lists_passing_checks() {
    let quiet = conic(&[
        "--scenario",
        "f0_lemma1",
        "--out",
        tempfile::tempdir().unwrap().path().to_str().unwrap(),
    ]);
    let loud = conic(&[
        "--scenario",
        "f0_lemma1",
        "--verbose",
        "--out",
        tempfile::tempdir().unwrap().path().to_str().unwrap(),
    ]);
    let count = |o: &Output| String::from_utf8_lossy(&o.stdout).matches("    ok ").count();
    assert_eq!(count(&quiet), 0);
    assert!(count(&loud) > 0);
}
