use std::io::Write;
use std::process::{Command, Output, Stdio};

use modspace_cli::problem::{parse_problem, ProblemDescription};
use serde_json::{json, Value};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_modspace"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn modspace");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok_json(args: &[&str], input: &Value) -> Value {
    let out = run(args, &input.to_string());
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn delta(n: usize, i: usize) -> Value {
    json!((0..n)
        .map(|k| [if k == i { 1.0 } else { 0.0 }, 0.0])
        .collect::<Vec<_>>())
}

fn z4(extra: Value) -> Value {
    let mut base = json!({
        "group": {"factors": [4]},
        "lambda_generators": [[2]],
        "signals": {"d0": delta(4, 0), "d1": delta(4, 1), "d2": delta(4, 2), "d3": delta(4, 3)}
    });
    for (k, v) in extra.as_object().unwrap() {
        base[k] = v.clone();
    }
    base
}

#[test]
fn metric_of_delta_pair_is_one() {
    let out = run(
        &["metric"],
        &z4(json!({"generators": ["d0"], "other_generators": ["d1"]})).to_string(),
    );
    assert_eq!(out.status.code(), Some(0));
    let raw = String::from_utf8(out.stdout).unwrap();
    let r: Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(r["theta"], json!(1.0));
    assert_eq!(r["argmax_x"], json!([0]));
    assert_eq!(r["per_fiber"].as_array().unwrap().len(), 2);
    // fields appear in schema order
    let pos: Vec<usize> = ["\"theta\"", "\"per_fiber\"", "\"argmax_x\""]
        .iter()
        .map(|k| raw.find(k).unwrap())
        .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{raw}");
}

#[test]
fn metric_requires_other_generators() {
    let out = run(&["metric"], &z4(json!({"generators": ["d0"]})).to_string());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("other_generators"));
}

#[test]
fn frame_bounds_of_delta_zero() {
    let input = z4(json!({"generators": ["d0"]}));
    let r = ok_json(&["frame-bounds"], &input);
    let sys = &r["system"];
    assert!((sys["A"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((sys["B"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(sys["parseval"], json!(true));
    assert_eq!(sys["riesz"], json!(false));
    assert_eq!(r["measure"], json!("normalized"));
    assert_eq!(r["per_fiber"][0]["x"], json!([0]));
    assert_eq!(r["per_fiber"].as_array().unwrap().len(), 1);

    let c = ok_json(&["frame-bounds", "--measure", "counting"], &input);
    assert!((c["system"]["A"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(c["system"]["parseval"], json!(false));
    assert_eq!(c["measure"], json!("counting"));
}

#[test]
fn frame_bounds_reject_empty_generators() {
    let out = run(&["frame-bounds"], &z4(json!({})).to_string());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn analyze_empty_generators_gives_zero_space() {
    let r = ok_json(&["analyze"], &z4(json!({})));
    assert_eq!(r["dims"], json!([0, 0]));
    assert_eq!(r["dimension"], json!(0));
    assert_eq!(r["lambda"]["elements"], json!([[0], [2]]));
    assert_eq!(r["lambda_star"]["elements"], json!([[0], [2]]));
    assert_eq!(r["pi"], json!([[0], [1]]));
}

#[test]
fn analyze_support_on_full_dual() {
    let input = json!({"group": {"factors": [4]}, "lambda_generators": [[1]], "support": [[0], [3]]});
    let r = ok_json(&["analyze"], &input);
    assert_eq!(r["dims"], json!([1, 0, 0, 1]));
    let bad = json!({"group": {"factors": [4]}, "lambda_generators": [[2]], "support": [[0]]});
    assert_eq!(run(&["analyze"], &bad.to_string()).status.code(), Some(1));
}

#[test]
fn membership_reports_each_candidate() {
    let input = z4(json!({
        "generators": ["d0"],
        "candidates": ["d2", "d0", [[-2.0, 1.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]]
    }));
    let r = ok_json(&["membership"], &input);
    let c = r["candidates"].as_array().unwrap();
    assert_eq!(c[0]["name"], json!("d2"));
    assert_eq!(c[0]["member"], json!(false));
    assert_eq!(c[1]["member"], json!(true));
    assert_eq!(c[2]["name"], json!("candidates[2]"));
    assert_eq!(c[2]["member"], json!(true));
}

#[test]
fn decompose_full_space() {
    let r = ok_json(&["decompose"], &z4(json!({"generators": ["d0", "d1", "d2", "d3"]})));
    assert_eq!(r["generators"].as_array().unwrap().len(), 2);
    assert_eq!(r["dims"], json!([2, 2]));
    assert_eq!(r["verification"]["passed"], json!(true));
    assert_eq!(r["verification"]["dimension"], json!(4));
}

#[test]
fn invariance_check_decisions() {
    let full = json!({"group": {"factors": [4]}, "lambda_generators": [[1]],
        "generators": [[[1.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]]});
    assert_eq!(ok_json(&["invariance-check"], &full)["invariant"], json!(false));
    let r = ok_json(&["invariance-check"], &z4(json!({"generators": ["d0", "d2"]})));
    assert_eq!(r["invariant"], json!(true));
    assert_eq!(r["span_dimension"], json!(2));
}

fn line(t: f64) -> Value {
    // principal space whose single generator has fiber (cos t, sin t) at x = 0
    let (c, s) = (t.cos(), t.sin());
    let r = std::f64::consts::FRAC_1_SQRT_2;
    json!({
        "group": {"factors": [4]},
        "lambda_generators": [[2]],
        "generators": [[[r * (c + s), 0.0], [0.0, 0.0], [r * (c - s), 0.0], [0.0, 0.0]]]
    })
}

#[test]
fn limit_of_rotating_lines() {
    let seq: Vec<Value> = (1..=30).map(|n| line(0.4 + 0.5f64.powi(n))).collect();
    let r = ok_json(&["limit", "--tolerance", "1e-4"], &json!(seq));
    assert_eq!(r["dims"], json!([1, 0]));
    assert!(r["tail_distances"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d.as_f64().unwrap() < 1e-4));
    assert_eq!(r["limit"]["group"], json!({"factors": [4]}));
}

#[test]
fn limit_rejects_non_cauchy_sequence() {
    let seq = json!([line(0.0), line(1.0)]);
    let out = run(&["limit"], &seq.to_string());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not Cauchy"));
}

#[test]
fn malformed_input_reports_path() {
    let mut input = z4(json!({"generators": ["d0"]}));
    input["signals"]["d1"][2] = json!("oops");
    let out = run(&["analyze"], &input.to_string());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("signals.d1[2]"), "{err}");

    let out = run(&["analyze"], r#"{"group": {"factors": [4]}, "bogus": 1}"#);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    let out = run(&["analyze"], "{not json");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn inconsistent_input_is_a_validation_error() {
    for bad in [
        z4(json!({"generators": ["missing"]})),
        z4(json!({"generators": [[[1.0, 0.0]]]})),
        json!({"group": {"factors": [1]}}),
        json!({"group": {"factors": [4]}, "lambda_generators": [[7]]}),
        z4(json!({"generators": ["d0"], "tolerance": -1.0})),
    ] {
        assert_eq!(run(&["analyze"], &bad.to_string()).status.code(), Some(1), "{bad}");
    }
    let out = run(
        &["membership", "--tolerance", "0"],
        &z4(json!({"generators": ["d0"]})).to_string(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn size_guard_exits_two() {
    let n = 4099;
    let input = json!({"group": {"factors": [n]}, "generators": [delta(n, 0)]});
    let out = run(&["decompose"], &input.to_string());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("4096"));
}

#[test]
fn output_flag_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let input_path = dir.path().join("in.json");
    let input = z4(json!({"generators": ["d0", [[0.1, 0.2], [0.3, -0.4], [0.5, 0.6], [0.7, 0.8]]]}));
    std::fs::write(&input_path, input.to_string()).unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out_path = dir.path().join(format!("out{k}.json"));
        let out = run(
            &[
                "decompose",
                "--input",
                input_path.to_str().unwrap(),
                "--output",
                out_path.to_str().unwrap(),
            ],
            "",
        );
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        outputs.push(std::fs::read(out_path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn signals_round_trip_bit_identically() {
    let values = [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, f64::MIN_POSITIVE, 2.0f64.sqrt()];
    let sig: Vec<[f64; 2]> = values.iter().map(|&v| [v, -v]).collect();
    let text = json!({"group": {"factors": [6]}, "signals": {"s": sig}}).to_string();
    let parsed: ProblemDescription = parse_problem(&text).unwrap();
    let again: ProblemDescription = parse_problem(&serde_json::to_string(&parsed).unwrap()).unwrap();
    for (a, b) in again.signals["s"].iter().zip(&sig) {
        assert_eq!(a[0].to_bits(), b[0].to_bits());
        assert_eq!(a[1].to_bits(), b[1].to_bits());
    }
}

#[test]
fn demo_passes() {
    let out = run(&["demo"], "");
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["passed"], json!(true));
    assert!(r["scenarios"].as_array().unwrap().len() > 30);
}
