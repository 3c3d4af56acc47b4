//! End-to-end tests of the `cremona` binary: output contents, JSON shape,
//! determinism, and exit codes.

use std::process::{Command, Output};

fn cremona(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cremona"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn json(args: &[&str]) -> (serde_json::Value, i32) {
    let out = cremona(args);
    let code = out.status.code().expect("no signal");
    let text = String::from_utf8(out.stdout).expect("utf-8 output");
    let value = serde_json::from_str(&text)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {text}"));
    (value, code)
}

const GI_ZERO: [&str; 4] = ["(-x, y)", "(1/x, y)", "(x, -y)", "(x, (x^2 + x^-2)/y)"];

#[test]
fn classify_order16_family_reports_canonical_set() {
    let (v, code) = json(&[
        "classify", "--json", "--field", "QQ", "--p", "2",
        GI_ZERO[0], GI_ZERO[1], GI_ZERO[2], GI_ZERO[3],
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["outcome"]["kind"], "type_c1");
    assert_eq!(v["outcome"]["rank"], 4);
    assert_eq!(v["outcome"]["canonical"], serde_json::json!(["-6"]));
    assert_eq!(v["outcome"]["orbit"].as_array().unwrap().len(), 3);
    assert_eq!(v["outcome"]["genus"], 1);
}

#[test]
fn classify_diagonal_torus_over_cyclotomic_field() {
    let (v, code) = json(&[
        "classify", "--json", "--field", "cyclo:3", "--p", "3",
        "(zeta*x, y)", "(x, zeta*y)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"]["kind"], "type_a");
    assert_eq!(v["outcome"]["p"], 3);
    assert_eq!(v["outcome"]["rank"], 2);
    assert_eq!(v["outcome"]["normalized"], false);
}

#[test]
fn classify_noncommuting_generators_are_not_elementary() {
    let (v, code) = json(&["classify", "--json", "--p", "2", "(-x, y)", "(x, x/y)"]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"]["kind"], "not_elementary");
    let reason = v["outcome"]["reason"].as_str().unwrap();
    assert!(reason.contains("commute"), "{reason}");
}

#[test]
fn classify_rejects_swapped_coordinates() {
    let out = cremona(&["classify", "--p", "2", "(y, x)"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("x-image"), "{err}");
}

#[test]
fn classify_flags_parameters_outside_the_field() {
    // branch x^8 + 1 has parameter set {sqrt(2), -sqrt(2)}, not rational
    let out = cremona(&[
        "classify", "--p", "2",
        "(-x, y)", "(1/x, y)", "(x, -y)", "(x, (x^8 + 1)/(x^4*y))",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("field extension"), "{err}");
}

#[test]
fn classify_normalizes_conjugated_coordinates_first() {
    // the standard group conjugated by x -> 2x
    let (v, code) = json(&[
        "classify", "--json", "--p", "2",
        "(-x, y)", "(4/x, y)", "(x, -y)", "(x, ((x/2)^2 + (x/2)^-2)/y)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"]["kind"], "type_c1");
    assert_eq!(v["outcome"]["canonical"], serde_json::json!(["-6"]));
    let notes = v["diagnostics"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("standard coordinates")));
}

#[test]
fn classify_normalizes_rank2_odd_groups() {
    let (v, code) = json(&[
        "classify", "--json", "--field", "Fp:7", "--p", "3",
        "(2*z - 1, t)", "(z, 2*t)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"]["kind"], "type_a");
    assert_eq!(v["outcome"]["rank"], 2);
    assert_eq!(v["outcome"]["normalized"], true);
}

#[test]
fn classify_diagonalizes_rank1_fiber_actions() {
    let (v, code) = json(&["classify", "--json", "--field", "Fp:7", "--p", "3", "(x, 2*y - 1)"]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"]["kind"], "type_a");
    assert_eq!(v["outcome"]["rank"], 1);
    assert_eq!(v["outcome"]["normalized"], true);
}

#[test]
fn conjugate_compares_parameter_sets() {
    let (v, code) = json(&["conjugate", "--json", "--set-a", "0", "--set-b", "-6"]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"]["equivalent"], true);
    assert_eq!(v["outcome"]["canonical_a"], v["outcome"]["canonical_b"]);

    let (v, _) = json(&["conjugate", "--json", "--set-a", "0", "--set-b", "1"]);
    assert_eq!(v["outcome"]["equivalent"], false);
}

#[test]
fn conjugate_compares_generator_lists() {
    let (v, code) = json(&[
        "conjugate", "--json",
        "--gens-a", "(-x, y); (1/x, y); (x, -y); (x, (x^2 + x^-2)/y)",
        "--gens-b", "(-x, y); (1/x, y); (x, -y); (x, (x^2 + x^-2 + 6)/y)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"]["equivalent"], true);
    assert_eq!(v["outcome"]["canonical_a"], serde_json::json!(["-6"]));
}

#[test]
fn conjugate_requires_a_consistent_input_mode() {
    let out = cremona(&["conjugate", "--set-a", "0", "--gens-b", "(-x, y)"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invariant_reports_branch_data() {
    let (v, code) = json(&["invariant", "--json", "(x, (x^2 + x^-2 - 3)/y)"]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"]["kind"], "fixed_curve");
    assert_eq!(v["outcome"]["class"], "hyperelliptic");
    assert_eq!(v["outcome"]["genus"], 1);
    assert_eq!(v["outcome"]["branch"], "x^4 - 3*x^2 + 1");
    assert_eq!(v["outcome"]["infinity_branched"], false);

    let (v, _) = json(&["invariant", "--json", "(x, -y)"]);
    assert_eq!(v["outcome"]["class"], "empty");
    assert_eq!(v["outcome"]["genus"], 0);
}

#[test]
fn invariant_rejects_noninvolutions() {
    let out = cremona(&["invariant", "(x, 2*y)"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn delpezzo_reports_the_standard_surface() {
    let (v, code) = json(&["delpezzo", "--json", "--lambdas", "0,1,2,3,4"]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"]["kind"], "type_c2");
    assert_eq!(v["outcome"]["group_order"], 16);
    assert_eq!(v["outcome"]["hyperplane_fixers"], 5);
    assert_eq!(v["outcome"]["mixed_split"], 10);
    assert_eq!(v["outcome"]["quadrics_preserved"], true);
    assert_eq!(
        v["outcome"]["singular_parameters"],
        serde_json::json!(["0", "1", "2", "3", "4"])
    );
    assert_eq!(v["outcome"]["jbar"].as_array().unwrap().len(), 5);
}

#[test]
fn delpezzo_fiber_statistics_find_singletons() {
    let (v, code) = json(&["delpezzo", "--json", "--lambdas", "0,1,2,3,4", "--fiber", "31"]);
    assert_eq!(code, 0);
    let fiber = &v["outcome"]["fiber"];
    assert_eq!(fiber["q"], 31);
    assert!(fiber["singletons"].as_u64().unwrap() >= 1);
    assert!(fiber["first_singleton"].is_string());
}

#[test]
fn delpezzo_rejects_repeated_parameters() {
    let out = cremona(&["delpezzo", "--lambdas", "0,1,2,3,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn delpezzo_fiber_needs_a_sixth_root_of_unity() {
    let out = cremona(&["delpezzo", "--lambdas", "0,1,2,3,4", "--fiber", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn jtable_lists_orders_and_answers_queries() {
    let (v, code) = json(&["jtable", "--json", "--ell", "8", "--p", "5", "--rank", "2"]);
    assert_eq!(code, 0);
    let orders: Vec<u64> = v["outcome"]["weyl"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["order"].as_u64().unwrap())
        .collect();
    assert_eq!(orders, vec![120, 1920, 51840, 2903040, 696729600]);
    assert_eq!(v["outcome"]["query"]["admissible"], true);

    let (v, _) = json(&["jtable", "--json", "--ell", "7", "--p", "5", "--rank", "2"]);
    assert_eq!(v["outcome"]["query"]["admissible"], false);

    let out = cremona(&["jtable", "--ell", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_field_descriptions_exit_with_input_error() {
    let out = cremona(&["classify", "--field", "Fp:6", "--p", "2", "(-x, y)"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = [
        "classify", "--json", "--p", "2",
        GI_ZERO[0], GI_ZERO[1], GI_ZERO[2], GI_ZERO[3],
    ];
    let a = cremona(&args);
    let b = cremona(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());

    let args = ["delpezzo", "--lambdas", "0,1,2,3,4"];
    let a = cremona(&args);
    let b = cremona(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn a_closed_stdout_pipe_is_not_an_error() {
    use std::process::Stdio;
    // the fiber scan computes for a while before printing, so closing the
    // read end right after spawning reliably breaks the pipe
    let mut child = Command::new(env!("CARGO_BIN_EXE_cremona"))
        .args(["delpezzo", "--lambdas", "0,1,2,3,4", "--fiber", "31"])
        .stdout(Stdio::piped())
        .spawn()
        .expect("the binary runs");
    drop(child.stdout.take());
    let status = child.wait().expect("the child exits");
    assert_eq!(status.code(), Some(0));
}

#[test]
fn selftest_passes_and_prints_one_line_per_check() {
    let out = cremona(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 10);
    assert!(text.contains("10 passed, 0 failed"), "{text}");
}
