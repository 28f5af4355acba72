use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn polysel(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polysel"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn table(header: &str, rows: &[[f64; 3]]) -> String {
    let mut s = format!("{header}\n");
    for r in rows {
        s += &format!("{},{},{}\n", r[0], r[1], r[2]);
    }
    s
}

const CROSSING: &str = "x,f,g\n0,0,0\n0.5,0.25,0.5\n1,1,0.5\n";

fn square_tube() -> String {
    let rows: Vec<[f64; 3]> = (0..9)
        .map(|i| {
            let x = -1.0 + 0.25 * i as f64;
            [x, x * x - 1.0, x * x + 1.0]
        })
        .collect();
    table("x,lo,hi", &rows)
}

#[test]
fn crossing_pair_is_not_separable() {
    let out = polysel(&["separate", "--degree", "1"], CROSSING);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["verdict"], "not_separable");
    assert_eq!(r["certificate"]["kind"], "pointwise");
    assert_eq!(r["certificate"]["x"], 1.0);
    assert_eq!(r["certificate"]["gap"], 0.5);
    assert!(r["witness"].is_null());
}

#[test]
fn square_tube_yields_a_quadratic() {
    let input = square_tube();
    let out = polysel(&["solve-selection", "--degree", "2"], &input);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "feasible");
    let w = &r["witness"];
    assert!(w["max_violation"].as_f64().unwrap() <= 1e-6);

    // Re-check membership from the reported coefficients alone.
    let c: Vec<f64> = w["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(c.len(), 3);
    for line in input.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let y = c[0] + c[1] * v[0] + c[2] * v[0] * v[0];
        assert!(
            v[1] - 1e-6 <= y && y <= v[2] + 1e-6,
            "{y} outside [{}, {}]",
            v[1],
            v[2]
        );
    }
}

#[test]
fn abs_tube_certificate() {
    let input = "x,lo,hi\n-1,0.75,1.25\n0,-0.25,0.25\n1,0.75,1.25\n";
    let out = polysel(&["check-selection", "--degree", "1"], input);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["certificate"]["kind"], "tuple");
    assert_eq!(r["certificate"]["indices"], serde_json::json!([0, 1, 2]));
    assert!((r["certificate"]["gap"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn stabilize_abs_with_given_epsilon() {
    let input = "x,f\n-1,1\n0,0\n1,1\n";
    let out = polysel(&["stabilize", "--degree", "1", "--epsilon", "2"], input);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "stabilized");
    assert!(r["sup_error"].as_f64().unwrap() <= 1.0 + 1e-9);

    let out = polysel(&["stabilize", "--degree", "1", "--epsilon", "1"], input);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "epsilon_too_small");

    let out = polysel(&["epsilon", "--degree", "1"], input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["epsilon"], 2.0);
}

#[test]
fn convexity_commands() {
    let input = "x,f\n0,0\n1,1\n2,4\n3,9\n";
    let out = polysel(&["check-nconvex", "--degree", "1"], input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "holds");
    let out = polysel(&["check-nconcave", "--degree", "1"], input);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["certificate"]["kind"], "convexity");
}

#[test]
fn invalid_rows_are_reported_with_their_number() {
    let out = polysel(
        &["check-selection", "--degree", "1"],
        "x,lo,hi\n0,0,1\n1,2,1\n2,0,1\n",
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("row 2"), "{err}");

    let out = polysel(
        &["check-selection", "--degree", "1"],
        "x,lo,hi\n0,0,1\n0,0,1\n2,0,1\n",
    );
    assert_eq!(out.status.code(), Some(2));

    let out = polysel(&["check-selection", "--degree", "1"], "x,f,g\n0,0,1\n");
    assert_eq!(out.status.code(), Some(2));

    let out = polysel(
        &["check-selection", "--degree", "3"],
        "x,lo,hi\n0,0,1\n1,0,1\n2,0,1\n",
    );
    assert_eq!(out.status.code(), Some(2));

    let out = polysel(&["check-selection"], "");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let input = square_tube();
    let a = polysel(&["solve-selection", "--degree", "1"], &input);
    let b = polysel(&["solve-selection", "--degree", "1"], &input);
    let c = polysel(
        &["solve-selection", "--degree", "1", "--parallel", "true"],
        &input,
    );
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(a.status.code(), c.status.code());
}

#[test]
fn input_file_and_text_format() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(CROSSING.as_bytes()).unwrap();
    let path = file.path().to_str().unwrap();
    let out = polysel(
        &[
            "check-separation",
            "--degree",
            "1",
            "--input",
            path,
            "--format",
            "text",
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("check-separation: not_separable (degree 1)"),
        "{text}"
    );
    assert!(text.contains("f > g at index 2"), "{text}");
}

#[test]
fn help_exits_cleanly() {
    let out = polysel(&["--help"], "");
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("solve-selection"));
}
