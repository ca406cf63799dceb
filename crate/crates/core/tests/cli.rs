use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_hhcert");
/// `|f''|` is convex at every corner triple but not near x = 0.625.
const BUMP: &str = "x^4 - 4*exp(-((x-0.625)/0.03)^2)";

fn hhcert(args: &[&str], env_seed: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("HHCERT_SEED");
    if let Some(s) = env_seed {
        cmd.env("HHCERT_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn schema() -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(v: &Value) {
    let validator = schema();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "schema errors: {errors:?}\n{v}");
}

fn report<'a>(reports: &'a Value, id: &str) -> &'a Value {
    reports.as_array().unwrap().iter().find(|r| r["theorem_id"] == id).unwrap()
}

#[test]
fn bounds_square_exits_zero() {
    let out = hhcert(&["bounds", "--expr", "x^2", "--a", "0", "--b", "1", "--phi", "0", "--q", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid(&v);
    let r = report(&v, "phi_q1");
    assert!((r["bound"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-15);
    assert!((r["defect"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-12);
    assert_eq!(r["status"], "Holds");
    assert_eq!(v.as_array().unwrap().len(), 8);
}

#[test]
fn bounds_syntax_error_exits_one() {
    let out = hhcert(&["bounds", "--expr", "2*", "--a", "0", "--b", "1"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("offset 2"), "{err}");
}

#[test]
fn bounds_sine_separates_classes() {
    let out = hhcert(&["bounds", "--expr", "sin(x)", "--a", "0", "--b", "3.14159265"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid(&v);
    for id in ["phi_q1", "phi_holder", "sconvex"] {
        assert_eq!(report(&v, id)["status"], "HypothesisFalsified", "{id}");
    }
    for id in ["quasi_q1", "quasi_holder", "quasi_powermean"] {
        let r = report(&v, id);
        assert!(r["bound"].is_number(), "{id}");
        // |sin| peaks inside the interval, so it is not quasi-convex there
        assert_eq!(r["status"], "HypothesisFalsified", "{id}");
    }
}

#[test]
fn bounds_missed_hypothesis_exits_two() {
    let out = hhcert(&["bounds", "--expr", BUMP, "--a", "0", "--b", "1", "--samples", "1", "--seed", "1"], None);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_valid(&v);
    let r = report(&v, "phi_q1");
    assert_eq!(r["status"], "Violated");
    assert!(r["margin"].as_f64().unwrap() < -1e-9);
    // with the default sample the hypothesis is refuted instead
    let out = hhcert(&["bounds", "--expr", BUMP, "--a", "0", "--b", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&json(&out), "phi_q1")["status"], "HypothesisFalsified");
}

#[test]
fn bracket_exp() {
    let out = hhcert(&["bracket", "--expr", "exp(x)", "--a", "0", "--b", "1", "--tol", "1e-8"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid(&v);
    let (lo, hi) = (v["lo"].as_f64().unwrap(), v["hi"].as_f64().unwrap());
    let exact = std::f64::consts::E - 1.0;
    assert!(lo <= exact && exact <= hi && hi - lo <= 1e-8);
}

#[test]
fn bracket_square_width() {
    let out = hhcert(&["bracket", "--expr", "x^2", "--a", "0", "--b", "1", "--tol", "1e-6"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let (lo, hi) = (v["lo"].as_f64().unwrap(), v["hi"].as_f64().unwrap());
    assert!(lo <= 1.0 / 3.0 && 1.0 / 3.0 <= hi && hi - lo <= 1e-6);
}

#[test]
fn bracket_concave_exits_three() {
    let out = hhcert(&["bracket", "--expr", "0-x^2", "--a", "0", "--b", "1", "--tol", "1e-6"], None);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_valid(&v);
    assert_eq!(v["status"], "HypothesisFalsified");
    assert!(v["witness"]["gap"].as_f64().unwrap() > 0.0);
    assert!(!out.stderr.is_empty());
}

#[test]
fn classify_exp() {
    let out = hhcert(&["classify", "--expr", "exp(x)", "--a", "0", "--b", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid(&v);
    let results = v["results"].as_array().unwrap();
    for class in ["phi_convex", "log_phi_convex", "quasi_phi_convex"] {
        let r = results.iter().find(|r| r["class"] == class).unwrap();
        assert_eq!(r["verdict"]["verdict"], "NotFalsified", "{class}");
    }
}

#[test]
fn classify_second_derivative() {
    let out = hhcert(&["classify", "--expr", "sin(x)", "--a", "0", "--b", "3", "--second-derivative"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid(&v);
    assert_eq!(v["target"], "abs_second_derivative");
    assert_eq!(v["results"][0]["verdict"]["verdict"], "Falsified");
}

#[test]
fn verify_cubic() {
    let out = hhcert(&["verify", "--expr", "x^3", "--a", "0", "--b", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid(&v);
    assert_eq!(v["status"], "ok");
    assert!(v["identity"]["residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn seed_is_deterministic() {
    let args = ["classify", "--expr", BUMP, "--a", "0", "--b", "1", "--seed", "42"];
    let first = hhcert(&args, None);
    let second = hhcert(&args, None);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_valid(&json(&first));
    let other = hhcert(&["classify", "--expr", BUMP, "--a", "0", "--b", "1", "--seed", "43"], None);
    assert_ne!(first.stdout, other.stdout, "witness should depend on the seed");
}

#[test]
fn env_seed_only_without_flag() {
    let base = ["classify", "--expr", BUMP, "--a", "0", "--b", "1"];
    let flag42 = hhcert(&[&base[..], &["--seed", "42"]].concat(), None);
    let env42 = hhcert(&base, Some("42"));
    assert_eq!(flag42.stdout, env42.stdout);
    let flag7 = hhcert(&[&base[..], &["--seed", "7"]].concat(), None);
    let both = hhcert(&[&base[..], &["--seed", "7"]].concat(), Some("42"));
    assert_eq!(flag7.stdout, both.stdout);
    let bad = hhcert(&base, Some("not-a-seed"));
    assert_eq!(bad.status.code(), Some(1));
    // a bad environment value does not matter once --seed is given
    let ignored = hhcert(&[&base[..], &["--seed", "7"]].concat(), Some("not-a-seed"));
    assert_eq!(ignored.stdout, flag7.stdout);
}

#[test]
fn input_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &["bounds", "--expr", "x^2", "--a", "1", "--b", "0"],
        &["bounds", "--expr", "x^2", "--a", "0", "--b", "1", "--phi", "1.5707963267948966"],
        &["bounds", "--expr", "x^2", "--a", "0", "--b", "1", "--eta", "0"],
        &["bounds", "--expr", "x^2", "--a", "0", "--b", "1", "--p", "1"],
        &["bounds", "--expr", "x^2", "--a", "0", "--b", "1", "--q", "0.5"],
        &["bounds", "--expr", "x^2", "--a", "0", "--b", "1", "--s", "0"],
        &["bounds", "--expr", "x^2", "--a", "0", "--b", "1", "--tol", "0"],
        &["bounds", "--expr", "x^2", "--a", "0", "--b", "1", "--samples", "0"],
        &["bounds", "--expr", "tan(x)", "--a", "0", "--b", "1"],
        &["bounds", "--expr", "x^2", "--a", "0"],
        &["frobnicate"],
        &["verify", "--expr", "log(x)", "--a", "0", "--b", "1"],
        &["bracket", "--expr", "x^2", "--a", "0", "--b", "1", "--format", "yaml"],
    ];
    for args in cases {
        let out = hhcert(args, None);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn eta_overrides_phi() {
    let out = hhcert(&["bounds", "--expr", "x^2", "--a", "0", "--b", "1", "--phi", "1.0", "--eta", "1"], None);
    assert_eq!(json(&out).as_array().unwrap().len(), 8);
    let out = hhcert(&["bounds", "--expr", "x^2", "--a", "0", "--b", "1", "--phi", "1.0"], None);
    let v = json(&out);
    assert_valid(&v);
    assert_eq!(v.as_array().unwrap().len(), 7);
    let h = 1f64.cos();
    let bound = report(&v, "phi_q1")["bound"].as_f64().unwrap();
    assert!((bound - h * h / 6.0).abs() < 1e-15);
}

#[test]
fn negative_endpoints_parse() {
    let out = hhcert(&["verify", "--expr", "x^2", "--a", "-2", "--b", "-0.5"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_valid(&json(&out));
}

#[test]
fn text_format_keeps_exit_codes() {
    let ok = hhcert(&["bounds", "--expr", "x^2", "--a", "0", "--b", "1", "--format", "text"], None);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("phi_q1") && l.contains("Holds")), "{text}");
    let viol = hhcert(&["bounds", "--expr", BUMP, "--a", "0", "--b", "1", "--samples", "1", "--seed", "1", "--format", "text"], None);
    assert_eq!(viol.status.code(), Some(2));
    let fals = hhcert(&["bracket", "--expr", "0-x^2", "--a", "0", "--b", "1", "--format", "text"], None);
    assert_eq!(fals.status.code(), Some(3));
}

#[test]
fn help_exits_zero() {
    let out = hhcert(&["--help"], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("bracket"));
}

#[test]
fn floats_carry_seventeen_digits() {
    let out = hhcert(&["bracket", "--expr", "x^2", "--a", "0", "--b", "1", "--tol", "1e-6"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    let lo = text.split("\"lo\":").nth(1).unwrap().split(',').next().unwrap();
    let mantissa = lo.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{lo}");
}

#[test]
fn schema_rejects_malformed_output() {
    let out = hhcert(&["bounds", "--expr", "x^2", "--a", "0", "--b", "1"], None);
    let mut v = json(&out);
    v[0]["status"] = Value::from("Fine");
    assert!(!schema().is_valid(&v));
    let mut v = json(&out);
    v[0].as_object_mut().unwrap().remove("margin");
    assert!(!schema().is_valid(&v));
    assert!(!schema().is_valid(&serde_json::json!({"lo": 1.0})));
}
