use std::path::PathBuf;

use clap::Parser;
use kpos_cli::{run, Cli, EXIT_DOMAIN, EXIT_NEGATIVE, EXIT_OK, EXIT_PARSE};

fn doc(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kpos-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["kpos"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(cli, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const K111: &str = r#"{"n":3,"entries":[["1","1","0"],["1","1","1"],["0","1","1"]]}"#;

#[test]
fn check_exit_codes() {
    let id = doc("id.json", r#"{"n":3,"entries":[["1","0","0"],["0","1","0"],["0","0","1"]]}"#);
    assert_eq!(call(&["check", id.to_str().unwrap(), "--k", "3"]).0, EXIT_OK);

    let k = doc("k.json", K111);
    let (code, out, _) = call(&["check", k.to_str().unwrap(), "--k", "3"]);
    assert_eq!(code, EXIT_NEGATIVE);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["witness"]["I"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["witness"]["J"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["witness"]["value"], "-1");

    let sing = doc("sing.json", r#"{"n":2,"entries":[["1","1"],["1","1"]]}"#);
    let (code, _, err) = call(&["check", sing.to_str().unwrap(), "--k", "2", "--fast"]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("invertible"));

    let bad = doc("bad.json", "{not json");
    assert_eq!(call(&["check", bad.to_str().unwrap(), "--k", "1"]).0, EXIT_PARSE);
}

#[test]
fn factor_and_classify() {
    let k = doc("k2.json", K111);
    let (code, out, _) = call(&["factor", "--mode", "n-1", k.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let pw = kpos::words::ParamWord::from_json(&out).unwrap();
    assert_eq!(pw.evaluate(), kpos::exact::parse_matrix(K111).unwrap());

    let (code, out, _) = call(&["classify", "--mode", "n-1", k.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["word"], serde_json::json!(["h2", "h3", "K"]));

    let (code, _, _) = call(&["classify", "--mode", "n-2u", k.to_str().unwrap()]);
    assert_eq!(code, EXIT_DOMAIN);
}

#[test]
fn sample_is_seeded() {
    let a = call(&["sample", "--n", "4", "--mode", "n-2u", "--word", "e2 T", "--seed", "9"]);
    let b = call(&["sample", "--n", "4", "--mode", "n-2u", "--word", "e2 T", "--seed", "9"]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a, b);
    let fixed = call(&["sample", "--n", "3", "--mode", "n-1", "--word", "h2 h3 K", "--params", "1,1,1,1,1"]);
    assert_eq!(fixed.0, EXIT_OK);
    let wrong = call(&["sample", "--n", "3", "--mode", "n-1", "--word", "h2 h3 K", "--params", "1,1"]);
    assert_eq!(wrong.0, EXIT_DOMAIN);
    let not_canonical = call(&["sample", "--n", "3", "--mode", "n-1", "--word", "K e2"]);
    assert_eq!(not_canonical.0, EXIT_DOMAIN);
    let garbage = call(&["sample", "--n", "3", "--mode", "n-1", "--word", "q7"]);
    assert_eq!(garbage.0, EXIT_PARSE);
}

#[test]
fn poset_export() {
    let (code, out, _) = call(&["poset", "--n", "4", "--mode", "n-2u", "--granularity", "fine", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["elements"].as_array().unwrap().len(), 32);
    let (code, dot, _) = call(&["poset", "--n", "4", "--mode", "n-2u", "--format", "dot"]);
    assert_eq!(code, EXIT_OK);
    assert!(dot.starts_with("digraph"));
    assert_eq!(call(&["poset", "--n", "9", "--mode", "n-2u"]).0, EXIT_DOMAIN);
}

#[test]
fn verify_relations_reports_corrections() {
    let (code, out, _) = call(&["verify-relations", "--n", "3", "--samples", "100", "--seed", "1"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let k4 = v["reports"].as_array().unwrap().iter().find(|r| r["rule"] == "K4").unwrap();
    assert_eq!(k4["forward"]["passed"], 100);
    assert!(k4["printed_forward"]["passed"].as_u64().unwrap() < 100);
    let again = call(&["verify-relations", "--n", "3", "--samples", "100", "--seed", "1"]);
    assert_eq!(again.1, out);
}
