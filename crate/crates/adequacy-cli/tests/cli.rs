//! End-to-end tests driving the compiled binary: exit codes, report shape,
//! determinism, and flag/scenario precedence.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adequacy"))
}

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn scenario(name: &str) -> String {
    scenario_dir().join(name).display().to_string()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn analyze_matrix_group_reports_failed_cohomology_but_full_span() {
    let out = run(&["analyze", "--scenario", &scenario("custom_sl23.json")]);
    let v = json_of(&out);
    assert_eq!(v["result"]["group_order"], 24);
    assert_eq!(v["result"]["verdict"], "not adequate");
    assert_eq!(v["result"]["conditions"]["c1"], false);
    assert_eq!(v["result"]["conditions"]["c2"], true);
    assert_eq!(v["result"]["conditions"]["c4"], true);
    assert_eq!(v["result"]["ranks"]["h1_trivial"], 1);
    assert_eq!(v["result"]["ranks"]["p_regular_span"], 4);
    assert_eq!(v["config"]["p"], 3);
    assert_eq!(v["tool"]["name"], "adequacy");
}

#[test]
fn analyze_induced_module_finds_both_failures() {
    let out = run(&["analyze", "--scenario", &scenario("example1_s3.json")]);
    let v = json_of(&out);
    assert_eq!(v["result"]["group_order"], 150);
    assert_eq!(v["result"]["dim"], 6);
    assert_eq!(v["result"]["conditions"]["c2"], false);
    assert_eq!(v["result"]["conditions"]["c4"], false);
    assert_eq!(v["result"]["verdict"], "not adequate");
}

#[test]
fn construct_induced_module_certifies_two_obstructed_cosets() {
    let out = run(&["construct", "--scenario", &scenario("example1_s3.json")]);
    let v = json_of(&out);
    let r = &v["result"];
    assert_eq!(r["family"], "induced_semidirect");
    assert_eq!(r["group_order"], 150);
    assert_eq!(r["module_dim"], 6);
    assert_eq!(r["base_size"], 25);
    let cosets = r["obstructed_cosets"].as_array().unwrap();
    assert_eq!(cosets.len(), 2);
    for coset in cosets {
        for order in coset["member_orders"].as_array().unwrap() {
            assert_eq!(order.as_u64().unwrap() % 3, 0, "member order divisible by p");
        }
    }
    assert_eq!(r["certificate"]["mode"], "explicit");
}

#[test]
fn construct_wreath_is_explicit_under_default_cap() {
    let out = run(&["construct", "--scenario", &scenario("wreath_c2_s3.json")]);
    let v = json_of(&out);
    let r = &v["result"];
    assert_eq!(r["family"], "wreath_explicit");
    assert_eq!(r["group_order"], 384);
    assert_eq!(r["module_dim"], 6);
    assert_eq!(r["copies"], 6);
    assert_eq!(r["faithful"], true);
    assert_eq!(r["absolutely_irreducible"], true);
    assert_eq!(r["full_span"], 36);
    assert!(r["p_regular_span"].as_u64().unwrap() < 36);
}

#[test]
fn construct_wreath_falls_back_to_implicit_when_capped() {
    let out = run(&[
        "construct",
        "--scenario",
        &scenario("wreath_c2_s3.json"),
        "--max-group-order",
        "100",
    ]);
    let v = json_of(&out);
    assert_eq!(v["result"]["family"], "wreath_implicit");
    assert_eq!(v["result"]["base_order"], 2);
    assert_eq!(v["result"]["copies"], 6);
    assert_eq!(v["result"]["top_order"], 6);
    assert_eq!(v["result"]["certificate"]["mode"], "quotient-lifted");
}

#[test]
fn analyze_implicit_wreath_is_a_resource_failure() {
    let out = run(&[
        "analyze",
        "--scenario",
        &scenario("wreath_c2_s3.json"),
        "--max-group-order",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn construct_taylor_scan_reports_exhaustion_with_every_q() {
    let out = run(&[
        "construct",
        "--scenario",
        &scenario("taylor_odd_p3.json"),
        "--q-max",
        "30",
    ]);
    let v = json_of(&out);
    assert_eq!(v["result"]["family"], "taylor");
    assert_eq!(v["result"]["status"], "exhausted");
    assert_eq!(v["result"]["scanned"], serde_json::json!([7, 13, 25]));
    assert_eq!(v["config"]["q_max"], 30);
}

#[test]
fn coset_search_reports_absence_for_transposition_subgroup() {
    let out = run(&[
        "coset-search",
        "--scenario",
        &scenario("coset_s3_transposition.json"),
    ]);
    let v = json_of(&out);
    assert_eq!(v["result"]["outcome"], "absent");
    assert_eq!(v["result"]["cosets_scanned"], 3);
}

#[test]
fn coset_search_finds_the_transposition_coset_at_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(
        &dir,
        "rot.json",
        r#"{"kind":"custom","p":2,"r":2,
            "H_gens":[[[0,1,0],[1,0,0],[0,0,1]],[[0,0,1],[1,0,0],[0,1,0]]],
            "sub_gens":[[[0,0,1],[1,0,0],[0,1,0]]]}"#,
    );
    let out = run(&["coset-search", "--scenario", &path]);
    let v = json_of(&out);
    assert_eq!(v["result"]["outcome"], "witness");
    assert_eq!(v["result"]["subgroup_order"], 3);
    let orders = v["result"]["member_orders"].as_array().unwrap();
    assert_eq!(orders.len(), 3);
    assert!(orders.iter().all(|o| o.as_u64() == Some(2)));
}

#[test]
fn coset_search_explains_when_p_misses_the_group_order() {
    let out = run(&[
        "coset-search",
        "--scenario",
        &scenario("coset_s3_transposition.json"),
        "--p",
        "5",
    ]);
    // The subgroup is given explicitly, so the scan runs and finds nothing:
    // with 5 coprime to 6, every element is 5-regular.
    let v = json_of(&out);
    assert_eq!(v["result"]["outcome"], "absent");
}

#[test]
fn coset_search_in_l2_43_over_its_dihedral_subgroup() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "odd.json", r#"{"kind":"taylor_odd","p":3,"q":43}"#);
    let out = run(&["coset-search", "--scenario", &path]);
    let v = json_of(&out);
    assert_eq!(v["result"]["outcome"], "witness");
    assert_eq!(v["result"]["group_order"], 39732);
    assert_eq!(v["result"]["subgroup_order"], 6);
    let orders = v["result"]["member_orders"].as_array().unwrap();
    assert_eq!(orders.len(), 6);
    assert!(orders.iter().all(|o| o.as_u64().unwrap() % 3 == 0));
}

#[test]
fn coset_search_when_p_misses_the_family_order_is_absent_with_explanation() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "scan.json", r#"{"kind":"psl2_scan","q":7}"#);
    let out = run(&["coset-search", "--scenario", &path, "--p", "5"]);
    let v = json_of(&out);
    assert_eq!(v["result"]["outcome"], "absent");
    assert_eq!(v["result"]["cosets_scanned"], 0);
    let explanation = v["result"]["explanation"].as_str().unwrap();
    assert!(explanation.contains("does not divide"), "{explanation}");
}

#[test]
fn h1_of_a_p_prime_group_vanishes() {
    let out = run(&["h1", "--scenario", &scenario("h1_c3.json"), "--p", "2"]);
    let v = json_of(&out);
    assert_eq!(v["result"]["group_order"], 3);
    assert_eq!(v["result"]["h1"], 0);
}

#[test]
fn p_flag_overrides_the_scenario_key() {
    let out = run(&[
        "analyze",
        "--scenario",
        &scenario("custom_sl23.json"),
        "--p",
        "5",
    ]);
    // The natural module lives over GF(3), so p = 5 is inconsistent.
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn h1_of_cyclic_three_in_characteristic_three_is_one() {
    let out = run(&["h1", "--scenario", &scenario("h1_c3.json")]);
    let v = json_of(&out);
    assert_eq!(v["result"]["group_order"], 3);
    assert_eq!(v["result"]["h1"], 1);
    assert_eq!(v["result"]["z1"], 1);
    assert_eq!(v["result"]["b1"], 0);
}

#[test]
fn h1_of_a_two_perfect_group_vanishes_in_characteristic_two() {
    let dir = tempfile::tempdir().unwrap();
    // A4 as 4x4 permutation matrices over GF(2): (01)(23) and (123).
    let path = write_temp(
        &dir,
        "a4.json",
        r#"{"kind":"custom","p":2,"r":2,
            "H_gens":[[[0,1,0,0],[1,0,0,0],[0,0,0,1],[0,0,1,0]],
                      [[1,0,0,0],[0,0,0,1],[0,1,0,0],[0,0,1,0]]]}"#,
    );
    let out = run(&["h1", "--scenario", &path]);
    let v = json_of(&out);
    assert_eq!(v["result"]["group_order"], 12);
    assert_eq!(v["result"]["h1"], 0);
}

#[test]
fn census_literal_screen_flags_the_large_pair() {
    let out = run(&["census", "--literal", "3290625,2048"]);
    let v = json_of(&out);
    assert_eq!(v["result"]["flagged"], true);
    let out = run(&["census", "--literal", "4194304,2048"]);
    let v = json_of(&out);
    assert_eq!(v["result"]["flagged"], false);
}

#[test]
fn census_catalog_counts_p_regular_elements() {
    let out = run(&["census", "--p", "3"]);
    let v = json_of(&out);
    let rows = v["result"]["rows"].as_array().unwrap();
    let s3 = rows.iter().find(|r| r["name"] == "S3").unwrap();
    assert_eq!(s3["p_regular_count"], 4);
    let c3 = rows.iter().find(|r| r["name"] == "C3").unwrap();
    assert_eq!(c3["p_regular_count"], 1);
    assert_eq!(c3["min_flagged_dim"], 2);
}

#[test]
fn scan_psl2_small_family_has_no_witnesses_at_two() {
    let out = run(&["scan-psl2", "--q-max", "13"]);
    let v = json_of(&out);
    assert_eq!(v["result"]["p"], 2);
    let records = v["result"]["records"].as_array().unwrap();
    assert_eq!(records.len(), 6); // q = 3, 5, 7, 9, 11, 13
    assert!(records.iter().all(|r| r["outcome"] == "absent"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["analyze", "--scenario", &scenario("example1_s3.json")];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn text_format_flattens_the_report() {
    let out = run(&[
        "h1",
        "--scenario",
        &scenario("h1_c3.json"),
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("result.h1: 1"), "{text}");
    assert!(text.contains("tool.name: adequacy"), "{text}");
    assert!(!text.contains('{'), "text output is not JSON: {text}");
}

#[test]
fn unknown_scenario_keys_are_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "bad.json", r#"{"kind":"custom","qmax":50}"#);
    let out = run(&["analyze", "--scenario", &path]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("qmax"), "{stderr}");
}

#[test]
fn malformed_json_reports_the_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "broken.json", "{\n  \"kind\": \"custom\",\n  !!\n}");
    let out = run(&["analyze", "--scenario", &path]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 3"), "{stderr}");
}

#[test]
fn missing_scenario_is_an_input_error() {
    let out = run(&["analyze"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("--scenario"), "{stderr}");
}

#[test]
fn group_cap_maps_to_the_resource_exit_code() {
    let out = run(&[
        "analyze",
        "--scenario",
        &scenario("custom_sl23.json"),
        "--max-group-order",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("cap"), "{stderr}");
}

#[test]
fn cache_dir_flag_persists_enumerations_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().display().to_string();
    let args = [
        "analyze",
        "--scenario",
        &scenario("custom_sl23.json"),
        "--cache-dir",
        &cache,
    ];
    let first = run(&args);
    assert!(first.status.success());
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(entries > 0, "cache directory was populated");
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn cache_dir_env_var_is_a_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["analyze", "--scenario", &scenario("custom_sl23.json")])
        .env("ADEQUACY_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        v["config"]["cache_dir"],
        dir.path().display().to_string().as_str()
    );
}
