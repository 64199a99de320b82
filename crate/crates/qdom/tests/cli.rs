//! End-to-end tests of the `qdom` binary: subcommands, exit codes, output
//! shapes, and the deterministic report contract.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qdom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdom"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn json_of(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| {
        panic!("expected JSON, got error {e} in {:?}", String::from_utf8_lossy(bytes))
    })
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn fixture(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).expect("fixtures write");
    path
}

const SPACE_B: &str = "# a two-point quasimetric\n\
                       name space-b\n\
                       point p\n\
                       point q\n\
                       dist p q 1\n\
                       dist q p 2\n";

const CHAIN3: &str = "name chain\n\
                      point a\n\
                      point b\n\
                      point c\n\
                      dist a b 0\n\
                      dist a c 0\n\
                      dist b c 0\n";

const ZERO2: &str = "name zero\n\
                     point a\n\
                     point b\n\
                     dist a b 0\n\
                     dist b a 0\n";

const POINT1: &str = "name dot\npoint a\n";

#[test]
fn derive_hemimetrics_collapse_on_a_quasimetric() {
    let dir = TempDir::new().unwrap();
    let file = fixture(&dir, "b.space", SPACE_B);
    let out = qdom(&["derive", file.to_str().unwrap(), "--what", "hemimetrics"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let body = json_of(&out.stdout);
    let d = &body["distance"];
    assert_eq!(d, &serde_json::json!([["0", "1"], ["2", "0"]]));
    assert_eq!(&body["upper"], d);
    assert_eq!(&body["lower"], d);
}

#[test]
fn derive_orders_lists_the_chain_pairs() {
    let dir = TempDir::new().unwrap();
    let file = fixture(&dir, "chain.space", CHAIN3);
    let out = qdom(&["derive", file.to_str().unwrap(), "--what", "orders"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let body = json_of(&out.stdout);
    assert_eq!(
        body["leq"],
        serde_json::json!([
            ["a", "a"],
            ["a", "b"],
            ["a", "c"],
            ["b", "b"],
            ["b", "c"],
            ["c", "c"]
        ])
    );
    // The neighbourhood-strict order coincides with the plain order on a
    // chain of zero distances: every minimal lower neighbourhood is reached.
    assert_eq!(body["strict"], body["leq"]);
}

#[test]
fn derive_topologies_on_the_zero_space_are_indiscrete() {
    let dir = TempDir::new().unwrap();
    let file = fixture(&dir, "zero.space", ZERO2);
    let out = qdom(&["derive", file.to_str().unwrap(), "--what", "topologies"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let body = json_of(&out.stdout);
    let indiscrete = serde_json::json!([[], ["a", "b"]]);
    for key in ["ball", "lower", "smyth", "upper", "yoneda", "symmetric-ball"] {
        assert_eq!(body["topologies"][key], indiscrete, "{key}");
    }
}

#[test]
fn derive_way_below_reports_its_flavor() {
    let dir = TempDir::new().unwrap();
    let file = fixture(&dir, "b.space", SPACE_B);
    let out = qdom(&[
        "derive",
        file.to_str().unwrap(),
        "--what",
        "way-below",
        "--kind",
        "max-rel",
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let body = json_of(&out.stdout);
    assert_eq!(body["kind"], "max-rel");
    assert_eq!(body["way_below"], serde_json::json!([["0", "1"], ["2", "0"]]));
}

#[test]
fn complete_relational_chain_yields_principal_ideals() {
    let dir = TempDir::new().unwrap();
    let file = fixture(&dir, "chain.space", CHAIN3);
    let out = qdom(&["complete", file.to_str().unwrap(), "--mode", "relational"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let body = json_of(&out.stdout);
    assert_eq!(
        body["ideals"],
        serde_json::json!([["a"], ["a", "b"], ["a", "b", "c"]])
    );
    assert_eq!(
        body["matrix"],
        serde_json::json!([
            ["0", "0", "0"],
            ["inf", "0", "0"],
            ["inf", "inf", "0"]
        ])
    );
    assert_eq!(body["embedding"]["a"], "{a}");
    assert_eq!(body["embedding"]["b"], "{a,b}");
    assert_eq!(body["embedding"]["c"], "{a,b,c}");
}

#[test]
fn complete_smyth_space_b_keeps_the_distance() {
    let dir = TempDir::new().unwrap();
    let file = fixture(&dir, "b.space", SPACE_B);
    let out = qdom(&["complete", file.to_str().unwrap(), "--mode", "smyth"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let body = json_of(&out.stdout);
    assert_eq!(body["ideals"].as_array().unwrap().len(), 2);
    assert_eq!(body["matrix"], serde_json::json!([["0", "1"], ["2", "0"]]));
}

#[test]
fn complete_one_point_space_is_a_singleton_in_every_mode() {
    let dir = TempDir::new().unwrap();
    let file = fixture(&dir, "dot.space", POINT1);
    for mode in ["relational", "smyth", "yoneda"] {
        let out = qdom(&["complete", file.to_str().unwrap(), "--mode", mode]);
        assert!(out.status.success(), "{mode}: {}", stderr_of(&out));
        let body = json_of(&out.stdout);
        assert_eq!(body["labels"].as_array().unwrap().len(), 1, "{mode}");
        assert_eq!(body["matrix"], serde_json::json!([["0"]]), "{mode}");
    }
}

#[test]
fn complete_dot_flag_appends_the_specialization_digraph() {
    let dir = TempDir::new().unwrap();
    let file = fixture(&dir, "chain.space", CHAIN3);
    let out = qdom(&[
        "complete",
        file.to_str().unwrap(),
        "--mode",
        "relational",
        "--dot",
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("digraph specialization {"), "{text}");
    assert!(text.contains("\"{a}\" -> \"{a,b}\""), "{text}");
}

#[test]
fn check_named_suite_passes_and_reports_json() {
    let out = qdom(&["check", "--named"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let report = json_of(&out.stdout);
    let rows = report.as_array().expect("the report is an array");
    assert!(rows.len() > 100);
    for row in rows {
        assert!(row["check_id"].is_string(), "{row}");
        assert_ne!(row["verdict"], "fail", "{row}");
    }
}

#[test]
fn check_random_reports_are_deterministic_across_jobs() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let base = [
        "check", "--random", "8", "--sizes", "2..4", "--seed", "9",
    ];
    let mut one = base.to_vec();
    one.extend(["--jobs", "1", "--out", first.to_str().unwrap()]);
    let mut three = base.to_vec();
    three.extend(["--jobs", "3", "--out", second.to_str().unwrap()]);
    let out1 = qdom(&one);
    let out3 = qdom(&three);
    assert!(out1.status.success(), "{}", stderr_of(&out1));
    assert!(out3.status.success(), "{}", stderr_of(&out3));
    assert!(out1.stdout.is_empty());
    let a = std::fs::read_to_string(&first).unwrap();
    let b = std::fs::read_to_string(&second).unwrap();
    // Timings vary run to run; everything else must merge deterministically.
    let strip = |text: &str| -> Value {
        let mut report = json_of(text.as_bytes());
        for row in report.as_array_mut().expect("the report is an array") {
            row.as_object_mut().unwrap().remove("millis");
        }
        report
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn check_requires_exactly_one_scope() {
    let missing = qdom(&["check"]);
    assert_eq!(missing.status.code(), Some(2), "{}", stderr_of(&missing));
    let both = qdom(&["check", "--named", "--random", "3"]);
    assert_eq!(both.status.code(), Some(2), "{}", stderr_of(&both));
}

#[test]
fn check_rejects_an_empty_size_range() {
    let out = qdom(&["check", "--random", "2", "--sizes", "5..2"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr_of(&out));
    assert!(stderr_of(&out).contains("error"), "{}", stderr_of(&out));
}

#[test]
fn catalog_lists_every_entry() {
    let out = qdom(&["catalog"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let list = json_of(&out.stdout);
    let names: Vec<&str> = list
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"space-b"), "{names:?}");
    assert!(names.contains(&"n-chain"), "{names:?}");
}

#[test]
fn catalog_entries_round_trip_through_derive() {
    let out = qdom(&["catalog", "space-b"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let body = json_of(&out.stdout);
    assert_eq!(body["name"], "space-b");
    assert!(body["matrix"].is_array());
    let dir = TempDir::new().unwrap();
    let file = fixture(&dir, "b.json", &String::from_utf8(out.stdout.clone()).unwrap());
    let derived = qdom(&["derive", file.to_str().unwrap(), "--what", "hemimetrics"]);
    assert!(derived.status.success(), "{}", stderr_of(&derived));
    assert_eq!(json_of(&derived.stdout)["distance"], body["matrix"]);
}

#[test]
fn catalog_unknown_name_is_a_usage_error() {
    let out = qdom(&["catalog", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("unknown catalog name"),
        "{}",
        stderr_of(&out)
    );
}

#[test]
fn parse_errors_carry_line_context() {
    let dir = TempDir::new().unwrap();
    let file = fixture(&dir, "bad.space", "point a\ndist a b nope\n");
    let out = qdom(&["derive", file.to_str().unwrap(), "--what", "orders"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("line 2"), "{}", stderr_of(&out));
}

#[test]
fn triangle_violations_fail_validation_with_the_triple() {
    let dir = TempDir::new().unwrap();
    let text = "point a\npoint b\npoint c\ndist a b 5\ndist a c 1\ndist c b 1\n";
    let file = fixture(&dir, "broken.space", text);
    let out = qdom(&["derive", file.to_str().unwrap(), "--what", "orders"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("triangle inequality fails"),
        "{}",
        stderr_of(&out)
    );
}
