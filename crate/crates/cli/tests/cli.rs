use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halfflat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let out = run(&a);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), v)
}

fn statuses(v: &Value) -> Vec<(String, String)> {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["name"].as_str().unwrap().to_string(), c["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn algebra_check_exit_codes() {
    assert_eq!(run(&["algebra", "check", "(0,0,0,12,13,23)"]).status.code(), Some(0));
    let (code, v) = json(&["algebra", "check", "(0,0,0,12,34)"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["jacobiFailure"]["generator"], 5);
    assert_eq!(run(&["algebra", "check", "(0,0,12"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["torsion", "--algebra", "(0,0,0,12,13,23)"]).status.code(), Some(2));
}

#[test]
fn algebra_center_by_name() {
    let (code, v) = json(&["algebra", "center", "irreducible6"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["center"].as_array().unwrap().len(), 3);
}

#[test]
fn torsion_of_explicit_example_is_w2_minus() {
    let (code, v) = json(&["torsion", "--algebra", "(0,0,0,12,13,23)", "--structure", &data("eq11-u1.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["nonzero"], serde_json::json!(["W2-"]));
    assert_eq!(v["result"]["predicates"]["symplectic_half_flat"], true);
}

#[test]
fn reduce_then_lift_round_trip() {
    let dir = std::env::temp_dir().join(format!("halfflat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let red = dir.join("quotient.json");
    let (code, v) = json(&[
        "reduce",
        "--algebra",
        "(0,0,0,12,13,23)",
        "--structure",
        &data("eq11-u1.json"),
        "--vector",
        "0,0,0,1,0,0",
        "--normalize",
        "--out",
        red.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["t"], "1");
    let quotient = v["result"]["quotient"].as_str().unwrap().to_string();
    let (code, v) = json(&["lift", "--algebra", &quotient, "--structure", red.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["predicates"]["symplectic_half_flat"], true);
    let (code, _) = json(&["check-gcy", "--algebra", &quotient, "--structure", red.to_str().unwrap()]);
    assert_eq!(code, 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn listed_hypo_examples_lift_to_symplectic_half_flat() {
    for (name, alg) in [
        ("hypo-abelian.json", "(0,0,0,0,0)"),
        ("hypo-heisenberg-split.json", "(0,0,0,0,12)"),
        ("hypo-quotient-twisted.json", "(0,0,0,12,13)"),
        ("hypo-quotient-trivial.json", "(0,0,0,12,13)"),
    ] {
        let (code, v) = json(&["lift", "--algebra", alg, "--structure", &data(name)]);
        assert_eq!(code, 0, "{name}: {v}");
        let (code, _) = json(&["check-gcy", "--algebra", alg, "--structure", &data(name)]);
        assert_eq!(code, 0, "{name}");
    }
    // a φ that is not closed on the base is an input error
    let out = run(&["lift", "--algebra", "(0,0,0,12,13)", "--structure", &data("hypo-abelian.json"), "--phi", "45"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn structure_validation_and_predicates() {
    let (code, v) = json(&["structure", "--structure", &data("eq11-u1.json"), "--algebra", "irreducible6"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["exact"], true);
    assert_eq!(v["result"]["predicates"]["integrable"], false);
}

#[test]
fn integrable_lift_example_and_flow() {
    assert_eq!(run(&["thm53"]).status.code(), Some(0));
    let (code, v) = json(&["flow", "explicit", "--u-end", "0.9"]);
    assert_eq!(code, 0);
    assert!(v["result"]["maxAbsError"].as_f64().unwrap() < 1e-6);
}

#[test]
fn holonomy_is_g2() {
    let (code, v) = json(&["holonomy", "--samples", "1.0,1.2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dim"], 14);
}

#[test]
fn curvature_reports_the_quoted_discrepancy() {
    let (code, v) = json(&["curvature", "--samples", "1.0"]);
    // Ricci-flat, but the quoted closed form lacks one square
    assert_eq!(code, 1);
    for (name, status) in statuses(&v) {
        let expect = if name.contains("quoted curvature (unflagged") {
            "fail"
        } else if name.contains("flagged") || name.contains("added") {
            "info"
        } else {
            "pass"
        };
        assert_eq!(status, expect, "{name}");
    }
}

#[test]
fn search_is_deterministic() {
    let args = ["search", "--algebra", "(0,0,0,0,0,0)", "--restarts", "3", "--seed", "5"];
    let a = run(&[&["--json"], &args[..]].concat());
    let b = run(&[&["--json"], &args[..]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["result"]["verdict"], "found");
    assert_eq!(v["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn search_catalog_batch() {
    let dir = std::env::temp_dir().join(format!("halfflat-cat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("cat.json");
    std::fs::write(&f, r#"[{"name":"torus6","dim":6,"notation":"(0,0,0,0,0,0)"},{"name":"abelian5","dim":5,"notation":"(0,0,0,0,0)"}]"#).unwrap();
    let (code, v) = json(&["search", "catalog", "--file", f.to_str().unwrap(), "--restarts", "5"]);
    assert_eq!(code, 0, "{v}");
    let rows = v["result"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["result"]["kind"], "hypo_with_eq4");
    std::fs::remove_dir_all(&dir).unwrap();
}
