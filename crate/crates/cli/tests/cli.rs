use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn grl(args: &[&str]) -> Output {
    grl_env(args, &[])
}

fn grl_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_grl"));
    cmd.args(args).env_remove("GRL_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn construct_json(family: &str, q: &str, m: &str, k: &str) -> String {
    let o = grl(&[
        "construct",
        "--family",
        family,
        "--q",
        q,
        "--m",
        m,
        "--k",
        k,
        "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    stdout(&o)
}

#[test]
fn examples_replay_all_six() {
    let o = grl(&["examples"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|l| l.starts_with("PASS")));
    assert!(out.contains("[20,4,16]_25 hermitian_so=true nmds=true"));
    assert!(out.contains("[62,6,56]_81 hermitian_so=true nmds=true"));
}

#[test]
fn construct_reports_the_ten_three_seven_code() {
    let text = construct_json("2", "5", "2", "3");
    let v: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .take(4)
        .collect();
    assert_eq!(keys, ["family", "q", "m", "k"]);
    assert_eq!(v["code"]["n"], 10);
    assert_eq!(v["code"]["k"], 3);
    assert_eq!(v["code"]["d"], 7);
    assert_eq!(v["code"]["label"], "NMDS");
    assert_eq!(v["code"]["hermitian_self_orthogonal"], true);
    assert_eq!(v["quantum"]["label"], "[[10,4,3]]_5");
    assert_eq!(v["trace"]["mu"], 16);
    assert_eq!(v["field"]["modulus"], serde_json::json!([2, 0, 1]));
}

#[test]
fn construct_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    for (f, q, m, k) in [
        ("1", "4", "2", "3"),
        ("2", "5", "2", "3"),
        ("3", "5", "2", "4"),
        ("4", "7", "2", "4"),
    ] {
        let path = write(
            dir.path(),
            &format!("f{f}.json"),
            &construct_json(f, q, m, k),
        );
        let o = grl(&["verify", "--spec", &path]);
        assert_eq!(code(&o), 0, "family {f}: {}{}", stdout(&o), stderr(&o));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["pass"], true);
        assert_eq!(v["hso"]["gram_zero"], true);
    }
    let path = write(
        dir.path(),
        "small.json",
        &construct_json("1", "4", "2", "3"),
    );
    let o = grl(&["verify", "--spec", &path, "--distance"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["distance"]["d"], 9);
    assert_eq!(v["distance"]["d_evidence"], "exact");
}

#[test]
fn tampered_spec_is_an_invariant_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: Value = serde_json::from_str(&construct_json("2", "5", "2", "3")).unwrap();
    v["spec"]["v"][0] = 0.into();
    let path = write(dir.path(), "bad.json", &v.to_string());
    let o = grl(&["verify", "--spec", &path]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("v[0] is zero"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn false_claims_are_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: Value = serde_json::from_str(&construct_json("2", "5", "2", "3")).unwrap();
    v["code"]["d"] = 6.into();
    v["code"]["d_evidence"] = "exact".into();
    let path = write(dir.path(), "claim.json", &v.to_string());
    let o = grl(&["verify", "--spec", &path, "--distance"]);
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["pass"], false);
    assert!(report["mismatches"][0]
        .as_str()
        .unwrap()
        .contains("claimed d = 6"));

    // Changing one block entry leaves a valid input that is no longer self-orthogonal.
    let mut v: Value = serde_json::from_str(&construct_json("2", "5", "2", "3")).unwrap();
    v["spec"]["A"][0][0] = 1.into();
    let path = write(dir.path(), "block.json", &v.to_string());
    let o = grl(&["verify", "--spec", &path, "--hso"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("claimed hermitian_self_orthogonal=true, computed false"));
}

#[test]
fn gfmat_round_trip_through_classify() {
    let dir = tempfile::tempdir().unwrap();
    let o = grl(&[
        "construct",
        "--family",
        "1",
        "--q",
        "4",
        "--m",
        "2",
        "--k",
        "3",
        "--gfmat",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("GFMAT v1\n"));
    let path = write(dir.path(), "g.gfmat", &stdout(&o));
    let o = grl(&["classify", "--gfmat", &path, "--hso"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        (
            v["n"].as_u64(),
            v["k"].as_u64(),
            v["d"].as_u64(),
            v["d_dual"].as_u64()
        ),
        (Some(12), Some(3), Some(9), Some(3))
    );
    assert_eq!(v["label"], "NMDS");
    assert_eq!(v["hermitian_self_orthogonal"], true);
}

#[test]
fn small_budget_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let o = grl(&[
        "construct",
        "--family",
        "1",
        "--q",
        "5",
        "--m",
        "3",
        "--k",
        "4",
        "--gfmat",
    ]);
    let path = write(dir.path(), "g.gfmat", &stdout(&o));
    let o = grl_env(&["classify", "--gfmat", &path], &[("GRL_BUDGET", "100")]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("infeasible"));
    let o = grl_env(&["classify", "--gfmat", &path], &[("GRL_BUDGET", "lots")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&grl(&["construct", "--q", "5"])), 2);
    assert_eq!(code(&grl(&["examples", "--bogus"])), 2);
    assert_eq!(code(&grl(&["field-info", "--q", "6"])), 2);
    assert_eq!(
        code(&grl(&[
            "construct",
            "--family",
            "1",
            "--q",
            "5",
            "--m",
            "9",
            "--k",
            "3"
        ])),
        2
    );
    assert_eq!(code(&grl(&["--threads", "0", "examples"])), 2);
}

#[test]
fn field_info_lists_the_extension() {
    let o = grl(&["field-info", "--q", "9"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["field"]["modulus"], serde_json::json!([1, 0, 1]));
    assert_eq!(v["extension"]["order"], 81);
    assert_eq!(v["extension"]["subfield"].as_array().unwrap().len(), 9);
    assert_eq!(
        v["extension"]["unit_coset_representatives"]
            .as_array()
            .unwrap()
            .len(),
        10
    );
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let runs: Vec<Vec<u8>> = ["1", "2", "4"]
        .iter()
        .map(|t| {
            let o = grl(&["--threads", t, "sweep", "--q", "5,7"]);
            assert_eq!(code(&o), 0, "{}", stderr(&o));
            o.stdout
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let a = grl(&[
        "--threads",
        "1",
        "construct",
        "--family",
        "3",
        "--q",
        "7",
        "--m",
        "3",
        "--k",
        "4",
    ]);
    let b = grl(&[
        "--threads",
        "3",
        "construct",
        "--family",
        "3",
        "--q",
        "7",
        "--m",
        "3",
        "--k",
        "4",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table2_matches_reference_rows() {
    let o = grl(&["table2", "--reference-rows"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("OK")).count(),
        72
    );
    let o = grl(&["table2", "--q", "9", "--families", "1"]);
    let out = stdout(&o);
    let row = out
        .lines()
        .find(|l| l.contains("[[22,16,3]]_9"))
        .expect("row present");
    assert!(row.split_whitespace().any(|c| c == "1"));
    assert!(out.contains("[[62,50,6]]_9"));
}

#[test]
fn table2_with_empty_known_codes_has_blank_competitors() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "known.csv", "n,k,d,d_is_bound,q,source\n");
    let o = grl(&["table2", "--q", "13", "--known", &path, "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("family,q,m,k,code,defect,qnmds,competitor,competitor_defect,improvement,competitor_source")
    );
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.ends_with(",,,,")));
    assert!(rows.iter().any(|r| r.contains("[[26,20,3]]_13")));
}

#[test]
fn malformed_known_rows_are_skipped_with_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "known.csv",
        "n,k,d,d_is_bound,q,source\n22,14,3,false,9,x\nnot,a,row,at,all,\n",
    );
    let o = grl(&[
        "table2",
        "--q",
        "9",
        "--families",
        "1",
        "--known",
        &path,
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("known codes"), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = v
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["code"] == "[[22,16,3]]_9")
        .unwrap();
    assert_eq!(row["competitor"], "[[22,14,3]]_9");
}
