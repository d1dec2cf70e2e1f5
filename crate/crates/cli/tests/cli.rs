use std::path::PathBuf;

use convdual_cli::run;
use serde_json::Value;

fn spec(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("convdual").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn dual_check_inside_the_pencil_dual() {
    let (code, out, _) = call(&["dual-check", "--family", &spec("pencil1.spec"), "--kernel", "1+0.5z"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["certificate"]["status"], "Verified");
}

#[test]
fn check_exit_codes_follow_the_certificate() {
    let fam = spec("pencil1.spec");
    assert_eq!(call(&["dual-check", "--family", &fam, "--kernel", "1+1.5z"]).0, 1);
    assert_eq!(call(&["t-check", "--family", &fam, "--kernel", "1+0.5z"]).0, 0);
    assert_eq!(call(&["t-check", "--family", &fam, "--kernel", "1-z"]).0, 1);
    assert_eq!(call(&["perp-check", "--family", &fam, "--kernel", "1+0.5z"]).0, 0);
    assert_eq!(call(&["hull-check", "--family", &fam, "--kernel", "1+(0.6+0.6i)z"]).0, 0);
    assert_eq!(call(&["hull-check", "--family", &fam, "--kernel", "1+1.2z"]).0, 1);
}

#[test]
fn zeros_counts_the_root_at_one_half() {
    let (code, out, _) = call(&["zeros", "--series", "[1,-2]", "--radius", "0.9"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["winding"], 1);
}

#[test]
fn convolve_multiplies_coefficients() {
    let (code, out, _) = call(&["convolve", "--series", "1+2z+3z^2", "--kernel", "1-z+0.5z^2"]);
    assert_eq!(code, 0);
    let coeffs = &json(&out)["series"]["coeffs"];
    assert_eq!(coeffs[1][0], -2.0);
    assert_eq!(coeffs[2][0], 1.5);
}

#[test]
fn counterexample_verifier_reports_the_origin() {
    let (code, out, _) = call(&["verify", "--theorem", "CE", "--family", &spec("counterexample.spec")]);
    assert_eq!(code, 0);
    let report = json(&out);
    assert_eq!(report["report"]["summary"], "pass");
    assert!(out.contains("w = 0+0i"));
}

#[test]
fn image_exports_csv_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cloud.csv");
    let args = [
        "image",
        "--family",
        &spec("pencil1.spec"),
        "--kernel",
        "1+z",
        "--format",
        "csv",
        "--grid",
        "2x8",
        "--out",
        path.to_str().unwrap(),
    ];
    let (code, out, _) = call(&args);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let csv = std::fs::read_to_string(path).unwrap();
    assert!(csv.starts_with("re,im,tag,flag\n"));
    assert_eq!(csv.lines().count(), 1 + 1 + 2 * 8);
    assert_eq!(csv.lines().filter(|l| l.ends_with(",boundary")).count(), 8);
}

#[test]
fn border_lists_the_rim_family() {
    let (code, out, _) = call(&["border", "--family", &spec("pencil1.spec")]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["family"]["generators"][0]["domains"][0]["shape"], "circle");
}

#[test]
fn usage_errors_exit_three() {
    let fam = spec("pencil1.spec");
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["frobnicate"],
        vec!["dual-check", "--family", &fam],
        vec!["dual-check", "--kernel", "1+z"],
        vec!["dual-check", "--family", "/no/such/file", "--kernel", "1+z"],
        vec!["dual-check", "--family", &fam, "--kernel", "2+z"],
        vec!["dual-check", "--family", &fam, "--kernel", "1+"],
        vec!["dual-check", "--family", &fam, "--kernel", "1+z", "--trunc", "4"],
        vec!["dual-check", "--family", &fam, "--kernel", "1+z", "--mesh-depth", "30"],
        vec!["dual-check", "--family", &fam, "--kernel", "1+z", "--grid", "0x8"],
        vec!["dual-check", "--family", &fam, "--kernel", "1+z", "--tol", "-1"],
        vec!["dual-check", "--family", &fam, "--kernel", "1+z", "--format", "csv"],
        vec!["verify", "--theorem", "T9", "--family", &fam],
        vec!["zeros", "--series", "ones", "--radius", "1.5"],
    ];
    for args in cases {
        let (code, _, err) = call(&args);
        assert_eq!(code, 3, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("dual-check"));
}

#[test]
fn malformed_spec_reports_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.spec");
    std::fs::write(&path, "{\"generators\": [{\"kind\": \"pencil\", \"exponents\": [1]}]}").unwrap();
    let (code, _, err) = call(&["dual-check", "--family", path.to_str().unwrap(), "--kernel", "1+z"]);
    assert_eq!(code, 3);
    assert!(err.contains("domains"), "{err}");
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--theorem", "T1", "--family", &spec("counterexample.spec")];
    let first = call(&args);
    assert_eq!(first, call(&args));
}
