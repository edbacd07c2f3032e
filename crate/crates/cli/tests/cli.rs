use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use multimod::parser::parse;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn multimod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multimod")).args(args).output().unwrap()
}

fn run_text(name: &str, text: &str) -> (i32, Value) {
    let path = scratch(name, text);
    let out = multimod(&["--quiet", "run", path.to_str().unwrap()]);
    let json = serde_json::from_slice(&out.stdout).unwrap();
    (out.status.code().unwrap(), json)
}

#[test]
fn empty_document_gives_an_empty_report() {
    let (code, json) = run_text("empty.mm", "# nothing here\n");
    assert_eq!(code, 0);
    assert_eq!(json["schema"], 1);
    assert_eq!(json["results"], Value::Array(vec![]));
    assert_eq!(json["status"], "pass");
}

#[test]
fn semiadjunction_on_the_regular_bimodule_over_z5() {
    let (code, json) = run_text(
        "z5.mm",
        "base zmod 5; algebra A = scalars; multimodule M = regular A as L R;
         verify semiadjunction M I=[L] J=[R];",
    );
    assert_eq!(code, 0);
    assert_eq!(json["results"][0]["semiadjunction"], "holds");
}

#[test]
fn broken_multimodule_fails_with_a_witness() {
    let src = "base zmod 3;
        algebra D = dual_numbers;
        multimodule M {
          carrier rank 2;
          left D as L { e0.g0 = g0; e0.g1 = g1; e1.g0 = g1; e1.g1 = g0; }
        }
        check M;";
    let (code, json) = run_text("broken.mm", src);
    assert_eq!(code, 1);
    let r = &json["results"][0];
    assert_eq!(r["verdict"], "fail");
    let v = &r["violations"][0];
    let gens = v["witness"]["generators"].as_array().unwrap();
    assert!(!gens.is_empty());
    assert_ne!(v["witness"]["lhs"], v["witness"]["rhs"]);
}

#[test]
fn parse_errors_exit_with_code_two() {
    let (code, json) = run_text("bad.mm", "base zmod 5;\nalgebra A { rank 1; mul e0*e0 = e0; }");
    assert_eq!(code, 2);
    assert_eq!(json["status"], "error");
    let d = &json["diagnostics"][0];
    assert_eq!((d["line"].as_u64(), d["col"].as_u64()), (Some(2), Some(1)));
    assert!(d["message"].as_str().unwrap().contains("unit"));
}

#[test]
fn forward_references_are_resolution_errors() {
    let (code, json) = run_text("forward.mm", "base zmod 5;\nmultimodule M = regular A as L R;\nalgebra A = scalars;");
    assert_eq!(code, 2);
    let d = &json["diagnostics"][0];
    assert_eq!(d["line"], 2);
    assert!(d["message"].as_str().unwrap().contains("not declared"));
}

#[test]
fn unknown_labels_are_resolution_errors() {
    let (code, json) = run_text(
        "labels.mm",
        "base zmod 5; algebra A = scalars; multimodule M = regular A as L R; dual M I=[R];",
    );
    assert_eq!(code, 2);
    assert!(json["diagnostics"][0]["message"].as_str().unwrap().contains("no left action"));
}

#[test]
fn reduced_literals_are_reported_as_warnings() {
    let (code, json) = run_text("warn.mm", "base zmod 5; algebra A { rank 1; unit [6]; mul e0*e0 = e0; } check A;");
    assert_eq!(code, 0);
    assert_eq!(json["warnings"][0]["severity"], "warning");
    assert_eq!(json["warnings"][0]["line"], 1);
}

#[test]
fn fixture_matches_the_golden_report() {
    let out = multimod(&["--seed", "7", "--quiet", "run", fixture("all_commands.mm").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let golden = fs::read(fixture("all_commands.golden.json")).unwrap();
    assert!(out.stdout == golden, "report differs from the golden file");
}

#[test]
fn json_flag_writes_the_report_to_a_file() {
    let src = scratch("to_file.mm", "base zmod 2; algebra A = scalars; check A;");
    let dest = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("report.json");
    let out = multimod(&["--quiet", "--json", dest.to_str().unwrap(), "run", src.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let json: Value = serde_json::from_slice(&fs::read(dest).unwrap()).unwrap();
    assert_eq!(json["results"][0]["kind"], "algebra");
}

#[test]
fn enumeration_threshold_switches_to_sampling() {
    let src = scratch("threshold.mm", "base zmod 3; algebra D = dual_numbers; multimodule M = regular D as L R; hom M M;");
    let path = src.to_str().unwrap();
    let method = |args: &[&str]| -> Value {
        let mut all = args.to_vec();
        all.extend(["--quiet", "run", path]);
        let out = multimod(&all);
        let json: Value = serde_json::from_slice(&out.stdout).unwrap();
        json["results"][0]["oracle"]["method"].clone()
    };
    assert_eq!(method(&[]), "exhaustive");
    assert_eq!(method(&["--enum-threshold", "10"]), "sampled");
}

#[test]
fn formatting_the_fixture_preserves_its_meaning() {
    let path = fixture("all_commands.mm");
    let out = multimod(&["--quiet", "fmt", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let printed = String::from_utf8(out.stdout).unwrap();
    let original = parse(&fs::read_to_string(path).unwrap()).unwrap().document;
    assert_eq!(parse(&printed).unwrap().document, original);
}

#[test]
fn missing_files_are_usage_errors() {
    let out = multimod(&["run", "/nonexistent/file.mm"]);
    assert_eq!(out.status.code(), Some(2));
    let out = multimod(&["--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}
