use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn toroidal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toroidal")).args(args).output().expect("binary runs")
}

fn bundled() -> Value {
    serde_json::from_str(toroidal_cli::BUNDLED[0].1).unwrap()
}

/// A cheap variant of the bundled scenario written into `dir`.
fn small_config(dir: &Path, edit: impl FnOnce(&mut Value)) -> String {
    let mut c = bundled();
    c["caps"]["degree"] = "1".into();
    c["checks"] = serde_json::json!(["delta_identity"]);
    edit(&mut c);
    let p = dir.join("scenario.json");
    std::fs::write(&p, serde_json::to_string_pretty(&c).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("diagnostic is JSON")
}

#[test]
fn unknown_check_is_rejected_before_building() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = toroidal(&["run", "sl2-twisted-default", "--checks", "delta_identity,bogus", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let d = stderr_json(&o);
    assert_eq!(d["error"], "validation");
    assert!(d["message"].as_str().unwrap().contains("bogus"));
    assert!(!out.exists());

    let cfg = small_config(dir.path(), |c| c["checks"] = serde_json::json!(["mode_table", "no_such_check"]));
    let o = toroidal(&["run", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn non_commuting_automorphisms_are_diagnosed() {
    let dir = tempfile::tempdir().unwrap();
    // Conjugation by [[1,1],[0,-1]], an involution that does not commute with the Chevalley one.
    let cfg = small_config(dir.path(), |c| c["automorphisms"][1]["matrix"] = serde_json::json!([[-1, 2, 1], [0, 1, 1], [0, 0, -1]]));
    let o = toroidal(&["run", &cfg, "--out", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_json(&o)["message"].as_str().unwrap().contains("automorphisms do not commute"));
}

#[test]
fn malformed_configs_are_validation_errors() {
    let dir = tempfile::tempdir().unwrap();
    for edit in [
        (|c: &mut Value| c["automorphisms"][0]["order"] = 0.into()) as fn(&mut Value),
        |c| c["caps"]["weight"] = 0.into(),
        |c| c["schema"] = "toroidal-scenario/0".into(),
        |c| c["extra"] = 1.into(),
        |c| c["automorphisms"][1]["order"] = 3.into(),
    ] {
        let cfg = small_config(dir.path(), edit);
        let o = toroidal(&["run", &cfg, "--out", dir.path().join("out").to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stderr_json(&o)["error"], "validation");
    }
    let o = toroidal(&["run", "sl2-twisted-default", "--caps", "weight=x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dump_basis_has_one_vector_in_degree_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = toroidal(&["dump", "basis", "sl2-twisted-default", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let d = read_json(&dir.path().join("dump-basis.json"));
    for module in ["twisted_vacuum", "vacuum"] {
        let g = &d[module]["graded_dimensions"][0];
        assert_eq!(g["degree"], "0");
        assert_eq!(g["dim"], 1);
    }
    // The twisted module is graded by (1/2)Z.
    assert_eq!(d["twisted_vacuum"]["graded_dimensions"][1]["degree"], "1/2");
}

#[test]
fn dump_closure_contains_identity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), |c| c["caps"]["closure_depth"] = 1.into());
    let o = toroidal(&["dump", "closure", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let d = read_json(&dir.path().join("dump-closure.json"));
    let labels: Vec<&str> = d["closure"]["members"].as_array().unwrap().iter().map(|m| m["label"].as_str().unwrap()).collect();
    assert!(labels.contains(&"1_W"));
}

#[test]
fn dump_of_central_element_is_level_times_identity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), |c| c["level"] = "3/2".into());
    let o = toroidal(&["dump", "operator", &cfg, "--element", "c", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let d = read_json(&dir.path().join("dump-operator.json"));
    let n = d["dimension"].as_u64().unwrap();
    let entries = d["entries"].as_array().unwrap();
    assert_eq!(entries.len() as u64, n);
    for (i, e) in entries.iter().enumerate() {
        assert_eq!(e[0], i);
        assert_eq!(e[1], i);
        assert_eq!(e[2], "3/2");
    }
    assert_eq!(d["entries_outside_box"], 0);
}

#[test]
fn dump_operator_rejects_modes_outside_the_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), |_| {});
    let out = dir.path().to_str().unwrap();
    // h has class 1 under the Chevalley involution, so its t0 exponents lie in 1/2 + Z.
    let o = toroidal(&["dump", "operator", &cfg, "--element", "h@0@0", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    let o = toroidal(&["dump", "operator", &cfg, "--element", "h@1/2@0", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = toroidal(&["dump", "operator", &cfg, "--element", "zz@1/2@0", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_status_follows_the_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pass");
    let o = toroidal(&["run", "sl2-twisted-default", "--checks", "delta_identity,mode_table", "--out", out.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = read_json(&out.join("summary.json"));
    assert_eq!(s["passed"], true);
    assert_eq!(s["seed"], 7);
    assert_eq!(s["checks"].as_array().unwrap().len(), 2);
    assert!(out.join("mode_table.json").exists());

    // Demanding more coefficients per pair than the window holds is recorded as a failure.
    let out = dir.path().join("fail");
    let o = toroidal(&["run", "sl2-twisted-default", "--checks", "delta_identity,twisted_jacobi", "--caps", "jacobi_min_per_pair=1000000", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let s = read_json(&out.join("summary.json"));
    assert_eq!(s["passed"], false);
    assert_eq!(s["checks"][0]["passed"], true);
    assert_eq!(s["checks"][1]["passed"], false);
}
