//! End-to-end runs of the `hyptri` binary.

use std::path::Path;
use std::process::{Command, Output};

use num_bigint::BigInt;
use serde_json::Value;

use hyptri::oracle::{enumerate_rooted, GluingSpec};
use hyptri::peeling::{rebuild, Algorithm, PeelingDiagram};
use hyptri::rooted_isomorphic;
use hyptri::TriangulationWithHoles;

fn hyptri(args: &[&str]) -> Output {
    hyptri_in(args, None)
}

fn hyptri_in(args: &[&str], cache: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hyptri"));
    c.args(args).env("SOURCE_DATE_EPOCH", "0").env_remove("HYPTRI_CACHE_DIR");
    if let Some(dir) = cache {
        c.env("HYPTRI_CACHE_DIR", dir);
    }
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).expect("JSON artifact")
}

/// Data lines of a CSV artifact, header comments dropped.
fn csv_body(o: &Output) -> Vec<String> {
    stdout(o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect()
}

#[test]
fn closed_count_row_matches_brute_force() {
    // τ(3, 1) has six triangles: within reach of the gluing oracle
    let o = hyptri(&["enumerate", "--gj", "--n", "3", "--g", "1"]);
    assert!(o.status.success());
    let brute = enumerate_rooted(&GluingSpec::closed(6, Some(1))).unwrap().len();
    assert_eq!(csv_body(&o), vec!["n,g,p,count,provenance".to_string(), format!("3,1,,{brute},recursion")]);
}

#[test]
fn high_genus_count_is_one_csv_row() {
    let o = hyptri(&["enumerate", "--gj", "--n", "10", "--g", "2"]);
    assert!(o.status.success());
    let body = csv_body(&o);
    assert_eq!(body.len(), 2);
    let cells: Vec<&str> = body[1].split(',').collect();
    assert_eq!(&cells[..3], &["10", "2", ""]);
    assert!(cells[3].parse::<BigInt>().unwrap() > BigInt::from(0));
    let header = stdout(&o).lines().next().unwrap().to_string();
    assert!(header.starts_with("# run: "));
    let run: Value = serde_json::from_str(&header["# run: ".len()..]).unwrap();
    assert_eq!(run["subcommand"], "enumerate");
    assert_eq!(run["parameters"]["n"], 10);
}

#[test]
fn samples_are_identical_across_runs_and_jobs() {
    let args = ["sample", "--variant", "hyperbolic", "--lambda-critical", "--radius", "2", "--count", "100", "--seed", "7"];
    let a = hyptri(&[&args[..], &["--jobs", "1"]].concat());
    let b = hyptri(&[&args[..], &["--jobs", "8"]].concat());
    let c = hyptri(&args);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a), stdout(&c));
    let v = json(&a);
    assert_eq!(v["result"]["samples"].as_array().unwrap().len(), 100);
}

#[test]
fn artifact_regenerates_from_its_embedded_config() {
    let o = hyptri(&["experiment", "inverse-degree", "--lambda", "0.03", "--samples", "500", "--seed", "4", "--jobs", "2"]);
    let v = json(&o);
    assert_eq!(v["run"]["seed"], 4);
    let argv: Vec<String> = v["run"]["argv"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
    assert!(!argv.iter().any(|a| a.starts_with("--jobs")));
    let refs: Vec<&str> = argv.iter().map(String::as_str).collect();
    assert_eq!(stdout(&hyptri(&refs)), stdout(&o));
}

#[test]
fn experiments_emit_json_and_csv() {
    let o = hyptri(&["experiment", "boundary-events", "--n", "1", "--perimeters", "1,1", "--format", "csv"]);
    assert!(o.status.success());
    let body = csv_body(&o);
    assert_eq!(body[0], "event,probability,value");
    assert!(body.iter().any(|l| l.starts_with("total,1,")));
    let v = json(&hyptri(&["experiment", "sandwich", "--max-n", "12", "--max-g", "3"]));
    assert_eq!(v["result"]["verdict"], "pass");
}

#[test]
fn peeling_diagram_rebuilds_the_oracle_map() {
    let v = json(&hyptri(&["peel", "--n", "2", "--g", "0", "--perimeters", "3", "--index", "3", "--algorithm", "left", "--emit", "diagram"]));
    let d = PeelingDiagram::from_json(&v["result"]["diagram"].to_string()).unwrap();
    let want = enumerate_rooted(&GluingSpec::for_size(2, 0, vec![3]).unwrap()).unwrap().maps[3].clone();
    let got = rebuild(&d, &Algorithm::Left).unwrap();
    assert!(rooted_isomorphic(want.map(), got.map()));
}

#[test]
fn peel_reads_a_map_from_a_file() {
    let o = hyptri(&["oracle", "--n", "1", "--g", "0", "--perimeters", "1,1", "--emit", "maps"]);
    let v = json(&o);
    let map = v["result"]["maps"][5]["map"].to_string();
    let t = TriangulationWithHoles::from_json(&map).unwrap();
    let dir = std::env::temp_dir().join(format!("hyptri-peel-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("map.json");
    std::fs::write(&path, &map).unwrap();
    let v = json(&hyptri(&["peel", "--input", path.to_str().unwrap(), "--algorithm", "random", "--seed", "3"]));
    assert_eq!(v["result"]["type_counts"]["ii"], t.num_internal_vertices());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn oracle_agrees_with_formula() {
    let v = json(&hyptri(&["oracle", "--planar", "--p", "2", "--internal", "3"]));
    assert_eq!(v["result"]["agrees"], true);
    assert_eq!(v["result"]["exact_source"], "formula");
}

#[test]
fn exit_codes() {
    assert_eq!(hyptri(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hyptri(&["sample", "--variant", "psht"]).status.code(), Some(2));
    assert_eq!(hyptri(&["sample", "--variant", "plane", "--lambda", "1.0"]).status.code(), Some(2));
    assert_eq!(hyptri(&["enumerate"]).status.code(), Some(2));
    assert_eq!(hyptri(&["oracle", "--n", "10", "--g", "0", "--perimeters", "3"]).status.code(), Some(3));
    let o = hyptri(&["sample", "--variant", "plane", "--radius", "6", "--budget", "200"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(hyptri(&["--help"]).status.code(), Some(0));
}

#[test]
fn cache_is_checked_and_extended() {
    let dir = std::env::temp_dir().join(format!("hyptri-cache-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let o = hyptri_in(&["enumerate", "--gj", "--n", "2", "--g", "0"], Some(&dir));
    assert!(o.status.success());
    let file = dir.join("counts.json");
    let cached = std::fs::read_to_string(&file).unwrap();
    assert!(cached.contains("\"schema_version\": 1"));
    let again = hyptri_in(&["enumerate", "--gj", "--n", "2", "--g", "0"], Some(&dir));
    assert_eq!(csv_body(&again), csv_body(&o));
    // a corrupted entry is an invariant failure
    let count = csv_body(&o)[1].split(',').nth(3).unwrap().to_string();
    std::fs::write(&file, cached.replace(&format!("\"{count}\""), "\"7\"")).unwrap();
    let bad = hyptri_in(&["enumerate", "--gj", "--n", "2", "--g", "0"], Some(&dir));
    assert_eq!(bad.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_passes() {
    let o = hyptri(&["verify"]);
    let v = json(&o);
    assert_eq!(v["result"]["passed"], v["result"]["total"]);
}
