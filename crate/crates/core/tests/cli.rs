//! End-to-end runs of the `sidonlab` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn sidonlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sidonlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = sidonlab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_reports_the_relation() {
    let v = report(&["check", "--set", r#"{"spec":{"free_rank":1,"moduli":[]},"elems":[1,2,3]}"#, "--degree", "1"]);
    assert_eq!(v["independent"], false);
    assert_eq!(v["count"], 3);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["seed"], 0);
    assert!(v["anchor"].is_string());
    let first = &v["sample_relations"][0]["terms"];
    assert_eq!(first.as_array().unwrap().len(), 3);
}

#[test]
fn length_check_and_count_with_lambda() {
    let v = report(&["check", "--set", "[1,2,3]", "--degree", "2", "--length"]);
    assert_eq!(v["independent"], true);
    let v = report(&["count", "--set", "[1,2,3]", "--degree", "1", "--lambda", "0.1"]);
    assert_eq!(v["expected_after_thinning"]["exact"], "4001/4000");
}

#[test]
fn secbound_p3() {
    let v = report(&["secbound", "--p", "3"]);
    assert!(v["value"].as_f64().unwrap() >= 1.154700);
    assert!((v["bound"].as_f64().unwrap() - 1.1547005).abs() < 1e-7);
}

#[test]
fn lacunary_demo() {
    let v = report(&["demo", "lacunary", "--seed", "4"]);
    assert_eq!(v["dissociate"], true);
    assert_eq!(v["all_nonneg_certified"], true);
    assert!(v["worst_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["family"]["implied_sidon_bound"], 2.0);
    assert_eq!(v["config"]["seed"], 4);
}

#[test]
fn interpolate_both_routes() {
    let phi = r#"[{"elem":3,"re":0.5},{"elem":9,"re":0,"im":-0.5}]"#;
    let v = report(&["interpolate", "--set", "[3,9]", "--phi", phi, "--classic"]);
    assert_eq!(v["certificate"]["residual"], 0.0);
    let phi = r#"[{"elem":5,"re":0.6},{"elem":25,"re":-0.6}]"#;
    let v = report(&["interpolate", "--set", "[5,25]", "--phi", phi, "--epsilon", "0.5"]);
    assert_eq!(v["certificate"]["mass_at_identity"][0], 1.0);
    let out = sidonlab(&["interpolate", "--set", "[5,25]", "--phi", phi]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn constant_bounds() {
    let v = report(&["constant", "--set", "[1,2,3]", "--lower", "--trials", "16"]);
    assert!(v["lower_bound"]["lower"].as_f64().unwrap() > 1.001);
    let v = report(&["constant", "--set", "[5,25,125,625]", "--upper", "--epsilon", "0.5", "--random-patterns", "0"]);
    assert!((v["upper_bound"]["upper"].as_f64().unwrap() - 1.5).abs() < 1e-9);
    assert_eq!(v["upper_bound"]["upper_unconditional"], true);
}

#[test]
fn extraction_commands() {
    let set = serde_json::to_string(&(1..=30).collect::<Vec<i64>>()).unwrap();
    let v = report(&["extract", "--set", &set, "--degree", "1", "--seed", "3"]);
    assert_eq!(v["independent"], true);
    let v = report(&["extract-sidon", "--set", &set, "--epsilon", "1"]);
    assert_eq!(v["sidon_bound"], 2.0);
}

#[test]
fn gatecheck_holds() {
    let v = report(&["gatecheck"]);
    assert_eq!(v["all_hold"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 32 * 9);
}

#[test]
fn exit_codes() {
    assert_eq!(sidonlab(&["check", "--set", "[1,2]", "--degree", "0"]).status.code(), Some(2));
    let big = serde_json::to_string(&(1..=60).map(|k| k * 7919).collect::<Vec<i64>>()).unwrap();
    let out = sidonlab(&["check", "--set", &big, "--degree", "4", "--workcap", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "resource");
    assert_eq!(sidonlab(&["check", "--set", "/no/such/file.json", "--degree", "1"]).status.code(), Some(4));
    assert_eq!(sidonlab(&["check", "--set", "{not json", "--degree", "1"]).status.code(), Some(4));
    assert_eq!(sidonlab(&["secbound", "--p", "1"]).status.code(), Some(2));
    assert_eq!(sidonlab(&["constant", "--set", "[1,2]", "--grid-mult", "3"]).status.code(), Some(2));
}

#[test]
fn out_file_and_thread_count_do_not_change_bytes() {
    let dir = std::env::temp_dir().join(format!("sidonlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let set = serde_json::to_string(&(1..=40).collect::<Vec<i64>>()).unwrap();
    let args = ["extract", "--set", &set, "--degree", "1", "--lambda", "0.25", "--seed", "17"];
    let stdout = sidonlab(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(sidonlab(&with_out).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    let single = Command::new(env!("CARGO_BIN_EXE_sidonlab"))
        .args(args)
        .env("SIDONLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(single.stdout, stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn set_from_file() {
    let dir = std::env::temp_dir().join(format!("sidonlab-set-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("set.json");
    std::fs::write(&path, r#"{"spec":{"free_rank":0,"moduli":[7]},"elems":[{"torsion":[1]},{"free":[],"torsion":[3]}]}"#).unwrap();
    let v = report(&["check", "--set", path.to_str().unwrap(), "--degree", "3"]);
    assert_eq!(v["independent"], false);
    std::fs::remove_dir_all(&dir).unwrap();
}
