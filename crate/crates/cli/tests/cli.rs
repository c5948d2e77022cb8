use std::process::{Command, Output};

use serde_json::Value;

fn group(name: &str) -> String {
    format!("{}/../../groups/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilgenus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json", "--deterministic"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v: Value = serde_json::from_slice(&out.stdout).expect("report is JSON");
    (out.status.code().unwrap(), v)
}

#[test]
fn abel_higman_is_trivial() {
    let (code, v) = json(&["abel", &group("higman.grp")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["free_rank"], 0);
    assert_eq!(v["result"]["torsion"], serde_json::json!([]));
    assert_eq!(v["schema"], "nilgenus-report/1");
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn link_genus_check_through_class_4() {
    let (code, v) = json(&["genus-check", "--class", "4", &group("linkA2.grp"), "--hom", "z=1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["report"]["iso_up_to_class"], 4);
    assert_eq!(v["result"]["certification"], "Exact");
}

#[test]
fn nq_cap_exits_3() {
    let (code, v) = json(&["nq", "--class", "99999", &group("f2.grp")]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "capped");
    assert!(v["error"].as_str().unwrap().contains("Hirsch"));
}

#[test]
fn mismatch_exits_1() {
    // F2 onto Z^2 differs at class 2
    let (code, v) = json(&[
        "genus-check",
        "--class",
        "2",
        "--hom",
        "a=x,b=y",
        "--target",
        &group("torus.grp"),
        &group("f2.grp"),
    ]);
    // x, y have no counterpart in the torus presentation
    assert_eq!(code, 2, "{v}");
    let (code, v) = json(&[
        "genus-check",
        "--class",
        "2",
        "--hom",
        "x=a,y=b",
        "--target",
        &group("torus.grp"),
        &group("f2.grp"),
    ]);
    assert_eq!(code, 1, "{v}");
    assert_eq!(v["result"]["report"]["iso_up_to_class"], 1);
}

#[test]
fn bad_hom_and_kernel_errors_exit_1() {
    // a^2 = 1 in S3 but not in Z^2
    let (code, v) = json(&["genus-check", "--class", "1", "--hom", "", "--target", &group("torus.grp"), &group("s3.grp")]);
    assert_eq!(code, 1, "{v}");
    assert!(v["error"].as_str().unwrap().contains("not a homomorphism"));
    let (code, v) = json(&[
        "witness",
        "--retraction",
        "z=1,l=1",
        "--candidate",
        "u",
        &group("linkA2.grp"),
    ]);
    assert_eq!(code, 1);
    assert!(v["error"].as_str().unwrap().contains("kernel"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["nq", &group("f2.grp")]).status.code(), Some(2));
    assert_eq!(run(&["abel", "/nonexistent.grp"]).status.code(), Some(2));
    assert_eq!(run(&["fox-h2", "--p", "4", &group("linkA2.grp")]).status.code(), Some(2));
    assert_eq!(run(&["build", "klein"]).status.code(), Some(2));
    let (code, v) = json(&["nq"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "usage-error");
}

#[test]
fn l2_ratios_are_strings() {
    let (code, v) = json(&["l2", "--tower", "p-congruence", "--depth", "2", &group("f2.grp")]);
    assert_eq!(code, 0);
    let ratios: Vec<&str> = v["result"]["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["ratio"].as_str().unwrap())
        .collect();
    assert_eq!(ratios, ["5/4", "17/16"]);
}

#[test]
fn fox_h2_link() {
    for p in ["2", "3", "5"] {
        let (code, v) = json(&["fox-h2", "--p", p, &group("linkA2.grp")]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["h2"], 1);
    }
}

#[test]
fn build_matches_shipped_files() {
    for (name, file) in [
        ("higman", "higman.grp"),
        ("linkA2", "linkA2.grp"),
        ("surface:2", "surface2.grp"),
        ("acyclic:3", "acyclic3.grp"),
    ] {
        let out = run(&["build", name]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(String::from_utf8(out.stdout).unwrap(), std::fs::read_to_string(group(file)).unwrap());
    }
}

#[test]
fn rs_and_low_index() {
    let (code, v) = json(&["rs", "--subgroup", "b", &group("s3.grp")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["index"], 2);
    let (code, v) = json(&["low-index", "--max", "2", "--normal", &group("surface2.grp")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 16);
}

#[test]
fn reports_are_reproducible() {
    let args = ["--json", "--deterministic", "nq", "--class", "3", &group("linkA2.grp")];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}
