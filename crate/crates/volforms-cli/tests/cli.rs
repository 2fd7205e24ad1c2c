//! End-to-end tests of the `volforms` binary: exit codes, frozen
//! outputs, format-version headers, determinism and round-trips.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn volforms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volforms"))
        .args(args)
        .output()
        .expect("spawn volforms")
}

fn volforms_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_volforms"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn volforms");
    child
        .stdin
        .take()
        .expect("stdin")
        .write_all(stdin.as_bytes())
        .expect("write stdin");
    child.wait_with_output().expect("wait volforms")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

/// Strips the format-version header and returns the payload lines.
fn payload(out: &Output) -> String {
    let text = stdout_of(out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# format-version 1"), "missing header");
    lines.collect::<Vec<_>>().join("\n")
}

#[test]
fn cartan_evaluates_frozen_examples() {
    let cases = [
        ("bracket(x1 dx3, x2 dx3) @ poly n=3", "-1 dx3"),
        ("lich(dx1^dx2; e[0,0,1] e1; e[0,0,-1] e2) @ trig n=3", "1"),
        ("d(dx1)", "0"),
        ("d(x1 x2) @ poly n=2", "1 x2 dx1 + 1 x1 dx2"),
        ("delta(e1^e2) @ poly n=2", "0"),
    ];
    for (expr, expected) in cases {
        let out = volforms(&["cartan", expr]);
        assert_eq!(payload(&out), expected, "for {expr}");
    }
}

#[test]
fn cartan_reads_stdin_and_respects_context_flags() {
    let out = volforms_stdin(&["cartan", "--n", "2", "--ring", "trig"], "e[1,0]\n");
    assert_eq!(payload(&out), "1 e[1,0]");
    // The flag context only fills in what the expression left unsaid.
    let out = volforms_stdin(&["cartan", "--n", "2"], "x1 x3 @ poly n=4");
    assert_eq!(payload(&out), "1 x1 x3");
}

#[test]
fn cartan_output_reparses_to_the_same_value() {
    let exprs = [
        "d(x1^2 x2 dx3 + x3 dx1) @ poly n=3",
        "bracket(x1 x4 dx3^dx4, x2^2 dx1^dx2) @ poly n=4",
        "sharp(flat(x1 e2 + x2^2 e3)) @ poly n=3",
        "iota(e[0,1,-1] e2; dx1^dx2^dx3) @ trig n=3",
    ];
    for expr in exprs {
        let first = payload(&volforms(&["cartan", "--n", "9", expr]));
        // Re-evaluating the printed text (with the original context) must
        // print the identical text: the grammar round-trips exactly.
        let n = expr.rsplit("n=").next().unwrap().trim();
        let ring = if expr.contains("trig") { "trig" } else { "poly" };
        let second = payload(&volforms_stdin(&["cartan", "--n", n, "--ring", ring], &first));
        assert_eq!(first, second, "round-trip of {expr}");
    }
}

#[test]
fn cartan_json_carries_format_version() {
    let out = volforms(&["cartan", "--format", "json", "x1 + 1/2 x2^2 @ poly n=2"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(doc["format_version"], "1");
    assert_eq!(doc["kind"], "scalar");
    assert_eq!(doc["ring"], "poly");
}

#[test]
fn malformed_input_exits_2_with_stderr_diagnostic() {
    let out = volforms(&["cartan", "d(dx1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error:"), "stderr was {err:?}");
    assert!(err.contains("parse error at byte"), "stderr was {err:?}");

    let out = volforms(&["cartan", "--n", "99", "d(dx1)"]);
    assert_eq!(out.status.code(), Some(2));

    let out = volforms(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));

    let out = volforms(&["verify", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = volforms(&["coho", "--algebra", "so(3)"]);
    assert_eq!(out.status.code(), Some(2));

    let out = volforms_stdin(&["ophom", "factor"], "{\"n\": 2}");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompose_brackets_emits_verified_witness() {
    let out = volforms_stdin(&["decompose", "brackets", "--n", "3"], "x1 e2^e3");
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(doc["format_version"], "1");
    assert_eq!(doc["kind"], "bracket-witness");
    assert_eq!(doc["verified"], true);
    let count = doc["count"].as_u64().expect("count");
    let bound = doc["bound"].as_u64().expect("bound");
    assert!(count <= bound, "{count} > {bound}");
    assert!(!doc["pairs"].as_array().expect("pairs").is_empty());
}

#[test]
fn decompose_squares_emits_verified_witness() {
    let out = volforms_stdin(&["decompose", "squares", "--n", "4"], "x1 dx4 @ poly n=4");
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(doc["kind"], "square-witness");
    assert_eq!(doc["verified"], true);
    assert!(doc["count"].as_u64().expect("count") <= doc["bound"].as_u64().expect("bound"));
    assert_eq!(
        doc["potentials"].as_array().expect("potentials").len(),
        doc["factors"].as_array().expect("factors").len()
    );

    // Scalars are (n-3)-forms when n = 3.
    let out = volforms_stdin(&["decompose", "squares", "--n", "3"], "x1 + x2^2");
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(doc["verified"], true);
}

#[test]
fn decompose_rejects_wrong_shapes() {
    // A 1-vector is not a bivector.
    let out = volforms_stdin(&["decompose", "brackets", "--n", "3"], "x1 e2");
    assert_eq!(out.status.code(), Some(2));
    // A multivector is not a form.
    let out = volforms_stdin(&["decompose", "squares", "--n", "4"], "e1^e2");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rep_table_matches_known_dimensions() {
    let out = volforms(&["rep", "table", "--n", "3", "--kmax", "3"]);
    let body = payload(&out);
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("k\tdim\tdim-formula\tintertwiner\tendo"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(
        rows,
        [
            "0\t3\t3\t1\t1",
            "1\t8\t8\t0\t2",
            "2\t15\t15\t0\t2",
            "3\t24\t24\t0\t2",
        ]
    );
}

#[test]
fn coho_reports_ranks() {
    let out = volforms(&["coho", "--algebra", "sl(2)", "--module", "trivial", "--q", "2"]);
    assert!(payload(&out).ends_with("sl(2)\ttrivial\t2\t0"));

    let out = volforms(&[
        "coho",
        "--algebra",
        "sl(3)",
        "--module",
        "natural(3)",
        "--q",
        "1",
    ]);
    assert!(payload(&out).ends_with("sl(3)\tnatural(3)\t1\t0"));

    let out = volforms(&[
        "coho", "--algebra", "divfree(3,1)", "--q", "1", "--format", "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(doc["window"], 1);
    assert!(doc["dim"].is_u64());
}

#[test]
fn torus_cocycle_evaluates_and_validates() {
    let out = volforms(&[
        "torus", "cocycle", "--sigma", "dx1^dx2", "--X", "e[0,0,1] e1", "--Y", "e[0,0,-1] e2",
        "--n", "3",
    ]);
    assert_eq!(payload(&out), "1");

    // A non-closed 2-form is a configuration error.
    let out = volforms(&[
        "torus", "cocycle", "--sigma", "e[1,0,0] dx2^dx3", "--X", "e1", "--Y", "e2", "--n", "3",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // A field with non-zero divergence is a configuration error.
    let out = volforms(&[
        "torus", "cocycle", "--sigma", "dx1^dx2", "--X", "e[1,0,0] e1", "--Y", "e2", "--n", "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn torus_pairing_prints_full_rank_matrix() {
    let out = volforms(&["torus", "pairing", "--n", "3"]);
    let body = payload(&out);
    assert!(body.ends_with("# rank 3"), "payload was {body:?}");
    let rows: Vec<&str> = body
        .lines()
        .filter(|l| !l.starts_with('#'))
        .collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert_eq!(row.split('\t').count(), 3);
    }

    let out = volforms(&["torus", "pairing", "--n", "3", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(doc["rank"], 3);
    assert_eq!(doc["matrix"].as_array().expect("matrix").len(), 3);
}

#[test]
fn ophom_factor_emits_stage_transcript() {
    let op = r#"{"format_version":"1","n":2,"k":1,"width":1,
        "terms":[{"I":[1],"sigma":[0,1],"value":["1"]},
                 {"I":[2],"sigma":[1,0],"value":["-1"]}]}"#;
    let file = tempfile::NamedTempFile::new().expect("tempfile");
    std::fs::write(file.path(), op).expect("write op");
    let out = volforms(&["ophom", "factor", "--input", file.path().to_str().expect("path")]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(doc["kind"], "factorization");
    assert_eq!(doc["verified"], true);
    for stage in doc["stages"].as_array().expect("stages") {
        assert_eq!(stage["property1"], true);
        assert_eq!(stage["property2"], true);
    }
    // The quotient of the curl-like operator is minus the identity on
    // top-degree forms.
    assert_eq!(doc["q"]["k"], 2);

    // Same document over stdin gives the same transcript.
    let via_stdin = volforms_stdin(&["ophom", "factor"], op);
    assert_eq!(stdout_of(&out), stdout_of(&via_stdin));
}

#[test]
fn verify_is_deterministic_and_honors_selection() {
    let args = [
        "verify",
        "--seed",
        "5",
        "--n",
        "3",
        "--instances",
        "3",
        "--suite",
        "cartan",
        "--suite",
        "scalar",
    ];
    let first = volforms(&args);
    let second = volforms(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "reports must be byte-identical");
    let body = stdout_of(&first);
    assert!(body.starts_with("# format-version 1\n"));
    assert!(body.contains("# config seed=5 dims=3 deg-cap=3 freq-cap=2 instances=3"));
    // Canonical suite order regardless of flag order.
    let scalar_at = body.find("\nscalar\t").expect("scalar row");
    let cartan_at = body.find("\ncartan\t").expect("cartan row");
    assert!(scalar_at < cartan_at);
    assert!(!body.contains("\ntorus\t"));

    // A different seed still passes but is a different report only in
    // the config line (all identities hold for every seed).
    let other = volforms(&[
        "verify", "--seed", "6", "--n", "3", "--instances", "3", "--suite", "scalar",
    ]);
    assert_eq!(other.status.code(), Some(0));
}

#[test]
fn verify_json_report_is_structured() {
    let out = volforms(&[
        "verify", "--seed", "2", "--n", "3", "--instances", "2", "--suite", "leibniz", "--format",
        "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(doc["format_version"], "1");
    assert_eq!(doc["kind"], "verify-report");
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["config"]["seed"], 2);
    let suites = doc["suites"].as_array().expect("suites");
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["name"], "leibniz");
    assert_eq!(suites[0]["passed"], true);
}

#[test]
fn timings_go_to_stderr_not_stdout() {
    let out = volforms(&[
        "verify", "--seed", "1", "--n", "3", "--instances", "1", "--suite", "scalar",
    ]);
    let body = stdout_of(&out);
    assert!(
        !body.lines().any(|l| l.starts_with("# scalar:")),
        "timing lines leaked into stdout: {body:?}"
    );
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("# scalar: 1 instances"), "stderr was {err:?}");
}
