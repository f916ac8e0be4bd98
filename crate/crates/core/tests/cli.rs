mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::corpus;
use serde_json::Value;

fn toricaut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricaut")).args(args).output().expect("binary runs")
}

fn c(name: &str) -> String {
    corpus(name).display().to_string()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = toricaut(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn moduli_report_numbers() {
    let v = json(&["moduli-dim", &c("p5.fan"), &c("e24.bundle")]);
    assert_eq!(v["dim_cayley_forms"], 147);
    assert_eq!(v["dim_g"], 59);
    assert_eq!(v["dim_effective_group"], 57);
    assert_eq!(v["moduli_dim"], 90);
    assert_eq!(v["classical"]["projective_section_dims"], serde_json::json!([20, 125]));
    assert_eq!(v["classical"]["base_aut0_dim"], 35);
}

#[test]
fn aut_report_weighted() {
    let v = json(&["aut-report", &c("p1123.fan")]);
    assert_eq!(v["dim_unipotent_radical"], 9);
    assert_eq!(v["levi"], "GL2 x GL1 x GL1");
}

#[test]
fn projectivize_gives_hirzebruch() {
    let dir = tempfile::tempdir().unwrap();
    for n in 0..4i64 {
        let out = dir.path().join(format!("f{n}.pfan"));
        let o = toricaut(&["projectivize", &c("p1.fan"), &c(&format!("o0_o{n}.bundle")), "-o", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        let file: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        let rays: Vec<Vec<i64>> = serde_json::from_value(file["rays"].clone()).unwrap();
        assert_eq!(rays, vec![vec![1, n], vec![-1, 0], vec![0, -1], vec![0, 1]]);
        assert_eq!(file["labels"][0], serde_json::json!({"base": 0}));
        // emitted files feed back into fan commands
        let v = json(&["validate", out.to_str().unwrap()]);
        assert_eq!(v["valid"], true);
        assert_eq!(v["smooth"], true);
        let s = json(&["split-roots", out.to_str().unwrap()]);
        assert_eq!(s["base_count"], 2);
        assert_eq!(s["fiber_count"], if n == 0 { 2 } else { n + 1 });
    }
}

#[test]
fn pfan_files_reparse_identically() {
    let text = std::fs::read_to_string(corpus("p5_e24.pfan")).unwrap();
    let file = toricaut::io::FanFile::parse("p5_e24.pfan", &text).unwrap();
    assert_eq!(file.to_json(), text);
}

#[test]
fn cayley_act_moves_slot() {
    let v = json(&["cayley-act", &c("p1_o0_o2.pfan"), "--forms", &c("f2.forms"), "--root", "y1 -> y1 + x1*x2*y2"]);
    assert_eq!(v["shape"], "fiber_root");
    assert_eq!(v["changed_slots"], serde_json::json!([2]));
    assert_eq!(v["coefficients_after"][1], "x1^2 + x1*x2 - x2^2");
}

#[test]
fn ungraded_root_is_a_validation_failure() {
    let o = toricaut(&["cayley-act", &c("p1_o0_o2.pfan"), "--forms", &c("f2.forms"), "--root", "y1 -> y1 + x1*y2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not homogeneous"), "{}", stderr(&o));
}

#[test]
fn wrong_degree_form_names_slot() {
    let dir = tempfile::tempdir().unwrap();
    let forms = write(dir.path(), "bad.forms", "x1\nx1^2\n");
    let o = toricaut(&["cayley", &c("p1_o0_o2.pfan"), "--forms", &forms]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("polynomial 1 has degree 1, expected 0"), "{}", stderr(&o));
}

#[test]
fn malformed_files_get_addressed_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.fan",
        "{\n  \"rank\": 2,\n  \"rays\": [[1, 0], [0, 1]],\n  \"max_cones\": [[0, 1],]\n}\n",
    );
    let o = toricaut(&["validate", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.fan: line 4"), "{}", stderr(&o));

    let short = write(dir.path(), "short.bundle", "{\"divisors\": [[1, 0, 0, 0, 0, 0], [1, 0]]}");
    let o = toricaut(&["moduli-dim", &c("p5.fan"), &short]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("short.bundle: divisors[1]: expected 6 coefficients"), "{}", stderr(&o));

    let forms = write(dir.path(), "bad.forms", "# ok\nx1^2\nx1 + q\n");
    let o = toricaut(&["cayley", &c("p5_e24.pfan"), "--forms", &forms]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.forms: line 3"), "{}", stderr(&o));
}

#[test]
fn invalid_fan_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "overlap.fan",
        r#"{"rank": 2, "rays": [[1, 0], [0, 1], [1, 1]], "max_cones": [[0, 1], [0, 2]]}"#,
    );
    let o = toricaut(&["--json", "validate", &f]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["issues"][0]["kind"], "bad_intersection");
    let o = toricaut(&["roots", &f]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(toricaut(&["roots"]).status.code(), Some(2));
    assert_eq!(toricaut(&["sections", &c("p2.fan"), "--degree", "x"]).status.code(), Some(2));
    assert_eq!(toricaut(&["split-roots", &c("p2.fan")]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_toricaut"))
        .env("TORICAUT_MAX_ENUM", "lots")
        .args(["roots", &c("p2.fan")])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumeration_cap_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_toricaut"))
        .env("TORICAUT_MAX_ENUM", "10")
        .args(["moduli-dim", &c("p5.fan"), &c("e24.bundle")])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("limit of 10"), "{}", stderr(&o));
}

#[test]
fn table_output() {
    let o = toricaut(&["classgroup", &c("p1xp1.fan")]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("free_rank  2\ngroup      Z^2\n"), "{text}");
    assert!(text.contains("variable_degrees (4)\nDEGREE  VARIABLE\n"), "{text}");
}

#[test]
fn sections_and_ampleness() {
    let v = json(&["sections", &c("p1123.fan"), "--degree", "6"]);
    // a + b + 2c + 3d = 6
    assert_eq!(v["dimension"], 23);
    let v = json(&["ample", &c("f2.fan"), "--divisor", "0,0,0,1"]);
    assert_eq!(v["ample"], false);
    // polytope with vertices (0,0), (3,0), (2,-1), (3,-1)
    let v = json(&["ample", &c("f2.fan"), "--divisor", "0,3,0,1"]);
    assert_eq!(v["ample"], true);
    assert_eq!(v["cartier"], true);
}

#[test]
fn demazure_rejects_singular_fans() {
    let o = toricaut(&["demazure-check", &c("p1123.fan")]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&["demazure-check", &c("p2.fan")]);
    assert_eq!(v["bijective"], true);
    assert_eq!(v["lattice_pair_count"], 6);
}
