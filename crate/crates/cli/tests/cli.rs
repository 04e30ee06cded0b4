use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const A3: &str = r#"{"dim":2,"rays":[[0,1],[4,-3]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nash-toric")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn polygons(svg: &Path) -> usize {
    let text = std::fs::read_to_string(svg).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed SVG");
    doc.descendants().filter(|n| n.has_tag_name("polygon")).count()
}

#[test]
fn toh_yama_reports_the_index_two_cone() {
    let v = json(&run(&["toh-yama", "--n", "4"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["rays"], serde_json::json!([[2, -1], [8, -3]]));
    assert_eq!(v["index"], 2);
    assert_eq!(v["matches_computed"], true);
}

#[test]
fn hilbert_and_smoothness() {
    let v = json(&run(&["hilbert", "--cone", A3]));
    assert_eq!(v["hilbert_basis"], serde_json::json!([[1, 0], [1, 1], [3, 4]]));
    let v = json(&run(&["smooth-check", "--cone", A3]));
    assert_eq!(v["smooth"], false);
    assert_eq!(v["index"], 4);
    let v = json(&run(&["smooth-check", "--cone", r#"{"dim":2,"rays":[[1,0],[0,1]]}"#]));
    assert_eq!(v["smooth"], true);
}

#[test]
fn nash_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let out = run(&["nash", "--cone", A3, "--n", "2", "--output", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let v: Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(v["is_isomorphism"], false);
    assert_eq!(v["order_n"], 2);
}

#[test]
fn svg_has_one_polygon_per_maximal_cone() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fan.svg");
    let v = json(&run(&["nash", "--cone", A3, "--svg", svg.to_str().unwrap()]));
    assert_eq!(polygons(&svg), v["fan"]["maximal_cones"].as_array().unwrap().len());
    assert_eq!(polygons(&svg), 2);
}

#[test]
fn input_file_and_iteration() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("cone.json");
    std::fs::write(&input, A3).unwrap();
    let v = json(&run(&["iterate", "--input", input.to_str().unwrap()]));
    assert_eq!(v["terminated"], true);
    assert_eq!(v["steps"], 2);
}

#[test]
fn curve_and_characteristic() {
    let v = json(&run(&["curve", "--generators", "2,5", "--up-to", "5"]));
    assert_eq!(v["good_orders"], serde_json::json!([2, 3, 4, 5]));
    assert_eq!(v["conductor"], 4);
    assert_eq!(v["stable_threshold"], 2);
    assert_eq!(run(&["curve", "--generators", "2,3", "--field", "prime:3"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["hilbert"]).status.code(), Some(1));
    let bad = run(&["hilbert", "--cone", "{\"dim\":2,\n\"rays\":[[0,1],"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 2"));
    assert_eq!(run(&["hilbert", "--cone", r#"{"dim":2,"rays":[[0,1]],"extra":1}"#]).status.code(), Some(1));
    assert_eq!(run(&["nash", "--cone", A3, "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["toh-yama", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["curve", "--generators", "2,4"]).status.code(), Some(2));
    assert_eq!(run(&["nash", "--cone", r#"{"dim":3,"rays":[[1,0,0],[0,1,0],[0,0,1]]}"#]).status.code(), Some(2));
}

#[test]
fn groebner_and_gfan() {
    let ideal = r#"{"cone":{"dim":2,"rays":[[1,0],[0,1]]},"generators":[{"terms":[{"exp":[1,0],"coeff":1},{"exp":[0,1],"coeff":-1}]}]}"#;
    let v = json(&run(&["groebner", "--ideal", ideal, "--order", "lex"]));
    assert_eq!(v["basis"][0]["leading"], serde_json::json!([1, 0]));
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("g.svg");
    let v = json(&run(&["gfan", "--ideal", ideal, "--svg", svg.to_str().unwrap()]));
    assert_eq!(v["schema"], 1);
    assert_eq!(polygons(&svg), 2);
}

#[test]
fn calibration_selects_the_default_rule() {
    let v = json(&run(&["calibrate", "--orders", "2,3"]));
    assert_eq!(v["selected"], "power(n+1)");
}
