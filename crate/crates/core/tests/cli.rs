//! End-to-end runs of the `berkline` binary.

use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

const PADIC3: &str = r#"{"field":"padic","p":3}"#;

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn berkline(args: &[&str], input: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_berkline"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn berkline");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap_or(-1),
    }
}

fn json_ok(cmd: &str, input: Value) -> Value {
    let r = berkline(&["--field", PADIC3, cmd], &input.to_string());
    assert_eq!(r.code, 0, "{cmd} failed: {}", r.stderr);
    serde_json::from_str(&r.stdout).expect("json output")
}

fn disc(center: &str, e: &str) -> Value {
    json!({ "center": center, "radius": { "e": e } })
}

#[test]
fn gauss_eval_at_the_gauss_point() {
    let out = json_ok("gauss-eval", json!({ "point": disc("0", "0/1"), "poly": [9, 3, 1] }));
    assert_eq!(out, json!({ "e": "0/1" }));
}

#[test]
fn skeleton_of_the_identity_is_the_whole_line() {
    let input = json!({
        "zeros": [{ "point": { "center": "0", "radius": "zero" }, "mult": 1 }],
        "poles": [{ "point": { "inf": true }, "mult": 1 }],
    });
    let r = berkline(&["--field", PADIC3, "--format", "dot", "skeleton"], &input.to_string());
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("graph"), "{}", r.stdout);
    assert!(r.stdout.contains("inf"), "{}", r.stdout);
    assert!(r.stdout.contains("slope=1"), "{}", r.stdout);
    assert_eq!(r.stdout.matches("--").count(), 1, "{}", r.stdout);
}

#[test]
fn malformed_radius_exits_two() {
    let r = berkline(&["gauss-eval"], r#"{"point":{"center":"0","radius":"abc"},"poly":[1]}"#);
    assert_eq!(r.code, 2);
    let err: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(err["code"], "malformed_input");
    assert_eq!(err["location"], "/point/radius");
}

#[test]
fn invalid_json_exits_two() {
    assert_eq!(berkline(&["join"], "{not json").code, 2);
}

#[test]
fn module_errors_exit_one_with_structure() {
    let input = json!({ "zeros": [{ "point": { "center": "0", "radius": "zero" }, "mult": 2 }], "poles": [] });
    let r = berkline(&["skeleton"], &input.to_string());
    assert_eq!(r.code, 1);
    let err: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(err["code"], "unbalanced");
    assert!(err["message"].is_string() && err["location"].is_string());

    let r = berkline(&["--field", r#"{"field":"padic","p":4}"#, "join"], "{}");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("not_prime"), "{}", r.stderr);
}

#[test]
fn wrong_format_for_a_command_exits_two() {
    let r = berkline(
        &["--format", "tsv", "join"],
        &json!({ "x": disc("0", "1/1"), "y": disc("3", "1/1") }).to_string(),
    );
    assert_eq!(r.code, 2);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let tree = json!({
        "vertices": [disc("0", "0/1"), disc("0", "2/1"), { "center": "0", "radius": "zero" }],
        "edges": [{ "center": "0", "rlo": "e=2/1", "rhi": "e=0/1" }, { "center": "0", "rlo": "zero", "rhi": "e=2/1" }],
    });
    let input = json!({ "tree": tree, "t": "e=1/2", "x": disc("9", "3/1") }).to_string();
    for seed in ["0", "17"] {
        let a = berkline(&["--seed", seed, "--budget", "32", "retract"], &input);
        let b = berkline(&["--seed", seed, "--budget", "32", "retract"], &input);
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!((a.stdout, a.stderr), (b.stdout, b.stderr));
    }
}

#[test]
fn join_and_dist() {
    let j = json_ok("join", json!({ "x": disc("0", "2/1"), "y": disc("3", "3/1") }));
    assert_eq!(j, disc("0/1", "1/1"));
    let d = json_ok("dist", json!({ "x": disc("0", "2/1"), "y": disc("3", "3/1") }));
    assert_eq!(d, json!({ "dist": "3/1" }));
    let d = json_ok(
        "dist",
        json!({ "x": { "center": "0", "radius": "zero" }, "y": disc("3", "3/1") }),
    );
    assert_eq!(d, json!({ "dist": "inf" }));
}

#[test]
fn printed_points_parse_back_to_equal_points() {
    let j = json_ok("join", json!({ "x": disc("1/3", "0/1"), "y": { "inf": true } }));
    let eq = json_ok("point-eq", json!({ "x": j, "y": { "inf": true } }));
    assert_eq!(eq, json!({ "equal": true }));
    let inv = json_ok("invert", json!({ "x": disc("3", "2/1") }));
    let back = json_ok("invert", json!({ "x": inv }));
    assert_eq!(
        json_ok("point-eq", json!({ "x": back, "y": disc("3", "2/1") })),
        json!({ "equal": true })
    );
}

#[test]
fn printed_hull_is_a_valid_tree_input() {
    let hull = json_ok(
        "hull",
        json!({ "points": [{ "center": "0", "radius": "zero" }, { "center": "1", "radius": "zero" }], "gauss": true }),
    );
    let x = disc("0", "1/2");
    let retracted = json_ok("retract", json!({ "tree": hull, "t": "e=0/1", "x": x.clone() }));
    assert_eq!(
        json_ok("point-eq", json!({ "x": retracted, "y": x })),
        json!({ "equal": true })
    );
    // η_{9,|3|³} grows until its ball reaches 0, at radius |9|
    let entry = json_ok("entry-time", json!({ "tree": hull, "x": disc("9", "3/1") }));
    assert_eq!(entry, json!({ "time": { "e": "2/1" } }));
}

#[test]
fn contraction_to_the_gauss_point() {
    let out = json_ok("contract", json!({ "t": "e=0/1", "x": disc("1/9", "4/1") }));
    assert_eq!(
        json_ok("point-eq", json!({ "x": out, "y": disc("0", "0/1") })),
        json!({ "equal": true })
    );
}

#[test]
fn newton_polygon() {
    let out = json_ok("newton", json!({ "poly": [3, -4, 1] }));
    assert_eq!(
        out,
        json!({ "breakpoints": [
            { "slope": "1/1", "multiplicity": 1 },
            { "slope": "0/1", "multiplicity": 1 },
        ] })
    );
}

#[test]
fn decompose_emits_tsv_with_header() {
    let input = json!({
        "expr": { "max": [{ "mono": { "coeff": "e=0/1", "exp": "1/1" } }, { "mono": { "coeff": "e=1/1", "exp": "0/1" } }] },
        "domain": { "lo": "zero", "hi": "e=-2/1" },
    });
    let r = berkline(&["--format", "tsv", "decompose"], &input.to_string());
    assert_eq!(r.code, 0, "{}", r.stderr);
    let mut lines = r.stdout.lines();
    assert_eq!(
        lines.next(),
        Some("x_exponent\tvalue_exponent\tvalue_exponent_decimal_derived")
    );
    assert!(lines.all(|l| l.split('\t').count() == 3));
}

#[test]
fn polyhedron_commands() {
    let bound = |cmp: &str, e: &str| json!({ "atom": { "lhs": { "coeff": "e=0/1", "exps": [1] }, "cmp": cmp, "rhs": { "coeff": { "e": e }, "exps": [0] } } });
    let closed = json!({ "arity": 1, "formula": { "and": [bound(">=", "2/1"), bound("<=", "0/1")] } });
    let open = json!({ "arity": 1, "formula": bound("<", "0/1") });
    assert_eq!(
        json_ok("compactness", json!({ "polyhedron": closed })),
        json!({ "compact": true })
    );
    assert_eq!(
        json_ok("compactness", json!({ "polyhedron": open })),
        json!({ "compact": false })
    );
    assert_eq!(
        json_ok("poly-member", json!({ "polyhedron": closed, "point": ["e=1/1"] })),
        json!({ "member": true })
    );
    assert_eq!(
        json_ok("poly-member", json!({ "polyhedron": closed, "point": ["zero"] })),
        json!({ "member": false })
    );
    assert_eq!(
        json_ok("dimension", json!({ "polyhedron": closed })),
        json!({ "dimension": 1, "certified": true })
    );
}

#[test]
fn table_field_and_validation() {
    let table = r#"{"field":"table","labels":["0","a","b"],"dist":[["zero","e=0/1","e=0/1"],["e=0/1","zero","e=1/1"],["e=0/1","e=1/1","zero"]]}"#;
    let x = json!({ "center": "a", "radius": "e=2/1" });
    let y = json!({ "center": "b", "radius": "e=2/1" });
    let r = berkline(&["--field", table, "join"], &json!({ "x": x, "y": y }).to_string());
    assert_eq!(r.code, 0, "{}", r.stderr);
    let j: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(j["radius"], json!({ "e": "1/1" }));

    let r = berkline(
        &["--field", table, "gauss-eval"],
        r#"{"point":{"center":"a","radius":"zero"},"poly":[1]}"#,
    );
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("unsupported_field"));

    let bad = json!({ "labels": ["x", "y", "z"], "dist": [["zero", "e=0/1", "e=2/1"], ["e=0/1", "zero", "e=1/1"], ["e=2/1", "e=1/1", "zero"]] });
    let report = json_ok("validate-table", bad);
    assert_eq!(report["valid"], false);
}

#[test]
fn collapse_command() {
    let out = json_ok(
        "collapse",
        json!({ "segments": [["e=0/1", "e=-1/1"], ["e=2/1", "e=1/1"]], "points": [{ "piece": 1, "value": "e=1/1" }] }),
    );
    assert_eq!(out["images"], json!([{ "e": "-2/1" }]));
    let r = berkline(&["collapse"], &json!({ "segments": [["zero", "e=0/1"]] }).to_string());
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("not_collapsible"), "{}", r.stderr);
}

#[test]
fn local_constancy_and_immersion() {
    let div = json!({
        "zeros": [{ "point": { "center": "1", "radius": "zero" } }],
        "poles": [{ "point": { "center": "0", "radius": "zero" } }],
    });
    let mut with_x = div.clone();
    with_x["x"] = disc("1", "1/1");
    assert_eq!(json_ok("local-constancy", with_x), json!({ "slope": 1 }));
    let imm = json_ok("immersion-check", div);
    assert_eq!(imm, json!({ "immersion": true, "hull_immersion": true }));
}

#[test]
fn trop_eval_of_terms() {
    let out = json_ok(
        "trop-eval",
        json!({ "terms": [{ "coeff": "e=0/1", "exps": [2] }, { "coeff": "e=1/1", "exps": [0] }], "r": ["e=1/1"] }),
    );
    assert_eq!(out, json!({ "e": "1/1" }));
}
