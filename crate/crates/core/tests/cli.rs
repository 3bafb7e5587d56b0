use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_virtbraid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn homs_counts_and_names() {
    let v = json(&["homs", "--family", "VB", "--n", "3", "--filter", "nonabelian"]);
    assert_eq!(v["results"]["count"], 8);
    let names: Vec<&str> = v["results"]["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"psi_7"));
}

#[test]
fn degree_cap_is_a_usage_error() {
    let out = run(&["homs", "--family", "VB", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn kernel_from_images_and_from_name_agree() {
    let by_name = json(&["kernel-ab", "--family", "VB", "--n", "3", "--hom", "pi_P"]);
    let by_images = json(&[
        "kernel-ab",
        "--family",
        "VB",
        "--n",
        "3",
        "--images",
        "(1,2);(2,3);(1,2);(2,3)",
        "--degree",
        "3",
    ]);
    assert_eq!(by_name["results"]["invariants"], "[ 0, 0, 0, 0, 0, 0 ]");
    assert_eq!(by_name["results"], by_images["results"]);
}

#[test]
fn dsl_input() {
    let mut f = tempfile();
    write!(f.1, "group S3\ngen a inv\ngen b\nrel b^3\nrel a b a b\n").unwrap();
    let v = json(&["homs", "--dsl", f.0.to_str().unwrap(), "--target", "3", "--filter", "surjective"]);
    assert_eq!(v["results"]["count"], 1);
    std::fs::remove_file(&f.0).unwrap();
}

fn tempfile() -> (std::path::PathBuf, std::fs::File) {
    let path = std::env::temp_dir().join(format!("virtbraid-cli-{}.dsl", std::process::id()));
    let file = std::fs::File::create(&path).unwrap();
    (path, file)
}

#[test]
fn certificate_offenders() {
    let v = json(&["characteristic", "--family", "VB", "--n", "3", "--hom", "psi_2"]);
    assert_eq!(v["results"]["verdict"], "NOT_CERTIFIED");
    let mut names: Vec<&str> = v["results"]["offenders"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["name"].as_str().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["psi_3", "psi_4"]);
}

#[test]
fn character_commands() {
    let v = json(&["character", "--n", "4", "decompose"]);
    assert_eq!(v["results"]["multiplicities"], serde_json::json!([1, 0, 1, 2, 1]));
    let v = json(&["isotypic", "--components", "1,3,4"]);
    assert_eq!(v["results"]["quotient_rank"], 3);
    assert_eq!(v["results"]["faithful"], true);
}

#[test]
fn crystal_commands() {
    let v = json(&["crystal", "--family", "VB", "--n", "3", "order", "v1 v2"]);
    assert_eq!(v["results"]["order"], "3");
    let v = json(&["crystal", "--family", "VB", "--n", "3", "conj", "v1 v2", "v2 v1"]);
    assert_eq!(v["results"]["conjugate"], true);
    let v = json(&["crystal", "--family", "VB", "--n", "3", "relcheck"]);
    assert_eq!(v["results"]["failing"], serde_json::json!([]));
}

#[test]
fn reidemeister_commands() {
    let v = json(&["reidemeister", "tower", "--family", "WALLPAPER_G", "--endo", "swap"]);
    assert_eq!(v["results"]["verdict"], "EVIDENCE_CONSISTENT");
    let v = json(&["--seed", "7", "reidemeister", "abelian-check", "--count", "20"]);
    assert_eq!(v["status"], "pass");
}

#[test]
fn output_is_deterministic_without_timing() {
    let args = ["--json", "characteristic", "--family", "VB", "--n", "4", "--hom", "delta_5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let timed = json(&["--timing", "character", "--n", "4", "perm-char"]);
    assert!(timed["elapsed_ms"].is_u64());
}

#[test]
fn verify_paper_exit_codes() {
    let ok = run(&["verify-paper", "--section", "4.2"]);
    assert_eq!(ok.status.code(), Some(0));
    // the section 3 reference list contains one entry the computation contradicts
    let out = run(&["--json", "verify-paper", "--section", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["failed"], 1);
    assert_eq!(run(&["verify-paper", "--section", "9"]).status.code(), Some(2));
}
