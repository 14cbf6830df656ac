use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn routeway(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_routeway"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn dist_on_group_fixture() {
    let f = fixture("group.rwy");
    let o = routeway(&[
        "dist",
        &f,
        "--in",
        "B1",
        "--from",
        "W_order",
        "--to",
        "W_solvable",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "3");

    let o = routeway(&[
        "dist",
        &f,
        "--from",
        "W_solvable",
        "--to",
        "W_order",
        "--json",
    ]);
    let v = json(&o);
    assert_eq!(v["distance"], "inf");
    assert_eq!(v["basefield"], "B1");
}

#[test]
fn geodesic_follows_the_only_route() {
    let o = routeway(&[
        "geodesic",
        &fixture("group.rwy"),
        "--from",
        "W_order",
        "--to",
        "W_solvable",
        "--json",
    ]);
    let v = json(&o);
    let units = v["routeway"]["units"].as_array().unwrap();
    let trails: Vec<&str> = units.iter().map(|u| u["trail"].as_str().unwrap()).collect();
    assert_eq!(trails, ["P1", "P2", "P3"]);
}

#[test]
fn lint_exit_codes() {
    let o = routeway(&["lint", &fixture("defective.rwy"), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let codes: Vec<&str> = v["diagnostics"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["code"].as_str().unwrap())
        .collect();
    assert_eq!(codes, ["DEFECTIVE_UNIT"]);

    let o = routeway(&["lint", &fixture("inequality.rwy")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 error(s), 0 warning(s)"));
}

#[test]
fn lint_reports_each_rule() {
    let o = routeway(&["lint", &fixture("reducible.rwy")]);
    let out = stdout(&o);
    assert!(out.contains("error[TEMPLATE_MISMATCH]"), "{out}");
    assert!(out.contains("error[REDUCIBLE_UNIT]"), "{out}");
    let o = routeway(&["lint", &fixture("broken.rwy")]);
    let out = stdout(&o);
    assert!(out.contains("error[BROKEN_CHAIN]"), "{out}");
    assert!(out.contains("warning[UNUSED_TRAIL]"), "{out}");
}

#[test]
fn closure_from_a_landmark_reaches_school() {
    let o = routeway(&[
        "closure",
        &fixture("school.rwy"),
        "--anchors",
        "F",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let got: Vec<(&str, u64)> = v["closure"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["id"].as_str().unwrap(),
                e["anchor_distance"].as_u64().unwrap(),
            )
        })
        .collect();
    assert!(got.contains(&("School", 2)), "{got:?}");
    assert!(!got.iter().any(|(id, _)| *id == "Home"));
}

#[test]
fn parse_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.rwy");
    std::fs::write(&path, "waypoint A: \"a\"\nroutway x\n").unwrap();
    let o = routeway(&["lint", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("error[syntax-error]:"), "{err}");
    assert!(err.contains(":2:1:"), "{err}");

    let o = routeway(&["lint", dir.path().join("missing.rwy").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[io-error]"));
}

#[test]
fn query_errors_exit_three() {
    let o = routeway(&[
        "dist",
        &fixture("group.rwy"),
        "--from",
        "W_order",
        "--to",
        "Nope",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error[unknown-waypoint]"));

    let o = routeway(&["closure", &fixture("school.rwy")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(
        stderr(&o).starts_with("error[empty-anchor-set]"),
        "{}",
        stderr(&o)
    );

    let o = routeway(&[
        "dist",
        &fixture("group.rwy"),
        "--in",
        "Nowhere",
        "--from",
        "W_order",
        "--to",
        "W_iso",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn filtration_distances_shrink() {
    let o = routeway(&[
        "filtration",
        &fixture("inequality.rwy"),
        "--pair",
        "W_ab:W_2ab",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let d: Vec<&Value> = v["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| &s["distances"][0])
        .collect();
    assert_eq!(d, [&Value::from(2), &Value::from(1)]);
    assert_eq!(v["monotone"], true);
}

#[test]
fn simulate_scaling_instance() {
    let f = fixture("inequality.rwy");
    let o = routeway(&[
        "simulate",
        &f,
        "--template",
        "general",
        "--bind",
        "k=2",
        "--holds",
        "c>0",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["verdict"], "valid");
    assert_eq!(v["routeway"]["length"], 2);
    assert_eq!(v["hypotheses"][0]["hypotheses"][0]["holds"], true);

    let o = routeway(&[
        "simulate",
        &f,
        "--template",
        "general",
        "--bind",
        "k=2",
        "--fails",
        "c>0",
        "--json",
    ]);
    assert_eq!(json(&o)["verdict"], "inconclusive");

    let o = routeway(&["simulate", &f, "--template", "general", "--bind", "k=2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error[missing-hypothesis-declaration]"));

    let o = routeway(&[
        "simulate",
        &f,
        "--template",
        "general",
        "--bind",
        "j=2",
        "--holds",
        "c>0",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn refines_and_coverage() {
    let f = fixture("school.rwy");
    let o = routeway(&[
        "refines",
        &f,
        "--gamma",
        "turn_by_turn",
        "--eta",
        "turn_by_turn",
        "--json",
    ]);
    let v = json(&o);
    assert_eq!(v["refines"], true);
    assert_eq!(v["presentation_equivalent"], true);

    let o = routeway(&["coverage", &f, "--json"]);
    let v = json(&o);
    assert_eq!(v["covering"], true);
    assert_eq!(v["targets"][0]["witness"]["routeway"], "turn_by_turn");
    assert_eq!(v["targets"][1]["witness"]["routeway"], "familiar");
}

#[test]
fn export_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("school.dot");
    let o = routeway(&[
        "export",
        &fixture("school.rwy"),
        "--anchors",
        "F",
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph {"));
    assert!(
        text.contains("\"F\" [label=\"Father's Office\", shape=doublecircle];"),
        "{text}"
    );

    let o = routeway(&["export", &fixture("school.rwy"), "--json"]);
    let v = json(&o);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 7);
    assert_eq!(v["edges"].as_array().unwrap().len(), 7);
}

#[test]
fn matrix_is_square() {
    let o = routeway(&["matrix", &fixture("group.rwy"), "--json"]);
    let v = json(&o);
    let n = v["vertices"].as_array().unwrap().len();
    assert_eq!(n, 4);
    assert_eq!(v["distances"][0][3], 3);
    assert_eq!(v["distances"][3][0], "inf");
}
