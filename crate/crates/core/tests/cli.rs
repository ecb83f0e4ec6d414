use std::fs;
use std::path::Path;

use cubepack::cli::{run, RunManifest};
use cubepack::Packing;

fn run_in(dir: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["cubepack"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--out", dir.to_str().unwrap()]);
    run(argv)
}

#[test]
fn enumerate_writes_nine_types_and_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["enumerate", "--n", "3"]), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("tilings.json")).unwrap()).unwrap();
    assert_eq!(v["count"], 9);
    assert_eq!(v["tilings"].as_array().unwrap().len(), 9);
    let m = RunManifest::from_json(&fs::read_to_string(dir.path().join("enumerate.manifest.json")).unwrap()).unwrap();
    assert_eq!(m.subcommand, "enumerate");
    assert!(m.verify(dir.path()).unwrap());
}

#[test]
fn capacity_and_usage_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["enumerate", "--n", "5"]), 3);
    assert_eq!(run_in(dir.path(), &["min-h", "--n", "5"]), 3);
    assert_eq!(run_in(dir.path(), &["keller", "--n", "7"]), 3);
    assert_eq!(run_in(dir.path(), &["enumerate"]), 2);
    assert_eq!(run_in(dir.path(), &["simulate", "--n", "2", "--seed", "seven"]), 2);
    assert_eq!(run_in(dir.path(), &["simulate", "--n", "2", "--trials", "0"]), 2);
    assert_eq!(run_in(dir.path(), &["flips", "--n", "2", "--bogus"]), 2);
    assert_eq!(run_in(dir.path(), &["of", "--n", "4"]), 2);
    assert!(!dir.path().join("tilings.json").exists());
}

#[test]
fn simulate_one_dimensional_runs_tile() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["simulate", "--n", "1", "--N", "2", "--trials", "10", "--seed", "7"]), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("simulate.json")).unwrap()).unwrap();
    let packings = v["packings"].as_array().unwrap();
    assert_eq!(packings.len(), 10);
    for p in packings {
        let p: Packing = serde_json::from_value(p.clone()).unwrap();
        assert!(p.is_tiling() && p.len() == 2);
    }
}

#[test]
fn identical_runs_give_identical_artifacts() {
    let runs: [&[&str]; 4] = [
        &["simulate", "--n", "3", "--trials", "300", "--seed", "42", "--workers", "1"],
        &["simulate", "--n", "3", "--trials", "300", "--seed", "42", "--workers", "1", "--format", "csv"],
        &["exact-dist", "--n", "2"],
        &["keller", "--n", "3", "--threads", "1"],
    ];
    for args in runs {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        assert_eq!(run_in(a.path(), args), 0);
        assert_eq!(run_in(b.path(), args), 0);
        let name = format!("{}.manifest.json", args[0]);
        let ma = RunManifest::from_json(&fs::read_to_string(a.path().join(&name)).unwrap()).unwrap();
        let mb = RunManifest::from_json(&fs::read_to_string(b.path().join(&name)).unwrap()).unwrap();
        assert_eq!(ma.result_digest, mb.result_digest);
        for artifact in &ma.artifacts {
            assert_eq!(fs::read(a.path().join(artifact)).unwrap(), fs::read(b.path().join(artifact)).unwrap());
        }
    }
}

#[test]
fn keller_export_and_import() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g2.dimacs");
    assert_eq!(run_in(dir.path(), &["keller", "--n", "2", "--export", file.to_str().unwrap()]), 0);
    assert!(fs::read_to_string(&file).unwrap().starts_with("p edge 16 "));
    let out = dir.path().join("again");
    assert_eq!(run_in(&out, &["keller", "--import", file.to_str().unwrap()]), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("keller.json")).unwrap()).unwrap();
    assert_eq!(v["clique_number"], 2);
    assert_eq!(v["complete"], true);

    fs::write(&file, "p edge 3 1\ne 1 9\n").unwrap();
    assert_eq!(run_in(dir.path(), &["keller", "--import", file.to_str().unwrap()]), 2);
}

#[test]
fn export_streams_g1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["export", "--n", "1"]), 0);
    let text = fs::read_to_string(dir.path().join("keller_1.dimacs")).unwrap();
    assert!(text.lines().any(|l| l == "p edge 4 0"));
    assert!(!text.lines().any(|l| l.starts_with('e')));
}

#[test]
fn remaining_subcommands_succeed() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["min-f", "--n", "3"][..],
        &["min-h", "--n", "3"],
        &["holes", "--n", "3"],
        &["flips", "--n", "3"],
        &["continuous", "--n", "3"],
        &["of", "--n", "5"],
    ] {
        assert_eq!(run_in(dir.path(), args), 0, "{args:?}");
        let m = RunManifest::from_json(&fs::read_to_string(dir.path().join(format!("{}.manifest.json", args[0]))).unwrap())
            .unwrap();
        assert!(m.verify(dir.path()).unwrap());
    }
}
