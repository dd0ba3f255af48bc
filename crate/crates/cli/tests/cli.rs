use std::process::{Command, Output};

use serde_json::Value;

fn fillperm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fillperm")).args(args).env_remove("FILLPERM_GUARD").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn enumerate_genus_two_counts_only() {
    let out = fillperm(&["enumerate", "--genus", "2", "--count-only"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["root_count"], 48);
    assert_eq!(v["filling_count"], 0);
    assert_eq!(v["class_count"], 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "enumerate");
    assert!(v["timing"]["elapsed_ms"].is_number());
    assert!(v.get("representatives").is_none());
}

#[test]
fn enumerate_genus_one() {
    let v = json(&fillperm(&["enumerate", "--genus", "1"]));
    assert_eq!(v["class_count"], 1);
    assert_eq!(v["filling_count"], 2);
    assert_eq!(v["representatives"], serde_json::json!(["[2,3,4,1]"]));
}

#[test]
fn enumerate_classes_cover_every_solution() {
    let v = json(&fillperm(&["enumerate", "--genus", "3", "--classes"]));
    let sizes: u64 = v["classes"].as_array().unwrap().iter().map(|c| c["size"].as_u64().unwrap()).sum();
    assert_eq!(sizes, 600);
    let limited = json(&fillperm(&["enumerate", "--genus", "3", "--limit", "2"]));
    assert_eq!(limited["representatives"].as_array().unwrap().len(), 2);
    assert_eq!(limited["truncated"], true);
    assert_eq!(limited["class_count"], 5);
}

#[test]
fn guard_refusal() {
    let out = fillperm(&["enumerate", "--genus", "6"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("FILLPERM_GUARD"));
    let lowered = Command::new(env!("CARGO_BIN_EXE_fillperm"))
        .args(["enumerate", "--genus", "1"])
        .env("FILLPERM_GUARD", "0")
        .output()
        .unwrap();
    assert_eq!(code(&lowered), 2);
    let forced = Command::new(env!("CARGO_BIN_EXE_fillperm"))
        .args(["enumerate", "--genus", "1", "--force"])
        .env("FILLPERM_GUARD", "0")
        .output()
        .unwrap();
    assert_eq!(code(&forced), 0);
}

#[test]
fn bad_flags() {
    for args in [
        &["enumerate", "--genus", "0"][..],
        &["enumerate", "--genus", "3", "--jobs", "0"],
        &["enumerate", "--genus", "3", "--count-only", "--classes"],
        &["enumerate"],
        &["bogus"],
        &["hyp", "--genus", "1"],
        &["extend", "[2,3,4,1]", "--genus", "1", "--vertex", "2"],
    ] {
        let out = fillperm(args);
        assert_eq!(code(&out), 64, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(code(&fillperm(&["--help"])), 0);
}

#[test]
fn verify() {
    let ok = fillperm(&["verify", "[2,3,4,1]", "--genus", "1"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["pass"], true);
    let cycles = fillperm(&["verify", "(1 2 3 4)", "--genus", "1"]);
    assert_eq!(json(&cycles)["pass"], true);

    let fail = fillperm(&["verify", "[2,1,4,3]", "--genus", "1"]);
    assert_eq!(code(&fail), 1);
    let v = json(&fail);
    assert_eq!(v["pass"], false);
    assert_eq!(v["failed_condition"], "not_n_cycle");
    assert!(!fail.stderr.is_empty());

    let parity = json(&fillperm(&["verify", "[3,1,4,2]", "--genus", "1"]));
    assert_eq!(parity["failed_condition"], "not_parity_respecting");
    assert_eq!(json(&fillperm(&["verify", "[4,1,2,3]", "--genus", "1"]))["pass"], true);
    let long_cycle: Vec<String> = (2..=20).chain([1]).map(|x: u32| x.to_string()).collect();
    let long_cycle = format!("[{}]", long_cycle.join(","));
    let equation = json(&fillperm(&["verify", &long_cycle, "--genus", "3"]));
    assert_eq!(equation["failed_condition"], "equation_fails");
    let degree = fillperm(&["verify", "[2,3,4,5,6,7,8,9,10,11,12,1]", "--genus", "1"]);
    assert_eq!(code(&degree), 1);
}

#[test]
fn parse_errors() {
    for p in ["[2,3,4", "[1,1,2,3]", "(1 2"] {
        let out = fillperm(&["verify", p, "--genus", "1"]);
        assert_eq!(code(&out), 65, "{p}");
        assert!(out.stdout.is_empty());
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, "{\"i\": 1").unwrap();
    assert_eq!(code(&fillperm(&["t1", path.to_str().unwrap()])), 65);
}

#[test]
fn io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&fillperm(&["genus", missing.to_str().unwrap()])), 74);
    let target = dir.path().join("no/such/dir/out.svg");
    assert_eq!(code(&fillperm(&["diagram", "[2,3,4,1]", "--genus", "1", "-o", target.to_str().unwrap()])), 74);
}

#[test]
fn reconstruct() {
    let v = json(&fillperm(&["reconstruct", "[2,3,4,1]", "--genus", "1"]));
    assert_eq!(v["genus"], 1);
    assert_eq!(v["vertex_classes"], serde_json::json!([[1, 2, 3, 4]]));
    assert_eq!(v["pattern"], serde_json::json!({"i": 1, "polygons": [[1, 2, -1, -2]]}));
    assert_eq!(code(&fillperm(&["reconstruct", "[2,1,4,3]", "--genus", "1"])), 1);
}

#[test]
fn extend_torus() {
    let out = fillperm(&["extend", "[2,3,4,1]", "--genus", "1", "--vertex", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["genus_out"], 3);
    assert_eq!(v["verified"], true);
    assert_eq!(v["template"]["beta_word"], serde_json::json!([4, 5, 3, 1, 2]));
    assert_eq!(v["zpieces"].as_array().unwrap().len(), 1);
    let perm = v["perm"].as_str().unwrap().to_string();
    assert_eq!(json(&fillperm(&["verify", &perm, "--genus", "3"]))["pass"], true);

    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let first = json(&fillperm(&["extend", "[2,3,4,1]", "--genus", "1", "-k", "1", "--template-cache", cache]));
    let second = json(&fillperm(&["extend", "[2,3,4,1]", "--genus", "1", "-k", "1", "--template-cache", cache]));
    assert_eq!(first["perm"], v["perm"]);
    assert_eq!(second["perm"], v["perm"]);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn pattern_commands() {
    let dir = tempfile::tempdir().unwrap();
    let torus = dir.path().join("torus.json");
    std::fs::write(&torus, r#"{"i":1,"polygons":[[1,2,-1,-2]]}"#).unwrap();
    let t = json(&fillperm(&["t1", torus.to_str().unwrap()]));
    assert_eq!(t["t1"], 2);
    assert_eq!(t["t1_bound"], 2);
    let g = json(&fillperm(&["genus", torus.to_str().unwrap()]));
    assert_eq!(g["genus"], 1);
    assert_eq!(g["euler_characteristic"], 0);
    assert_eq!(g["minimal"], true);

    let sphere = dir.path().join("sphere.json");
    std::fs::write(&sphere, r#"{"i":1,"polygons":[[1,-1,2,-2]]}"#).unwrap();
    let out = fillperm(&["t1", sphere.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["valid"], false);
}

#[test]
fn bounds() {
    let v = json(&fillperm(&["bounds", "--genus", "4"]));
    assert_eq!(v["upper_bound"], 84480);
    assert_eq!(v["root_count"], 645120);
    let odd = json(&fillperm(&["bounds", "--genus", "3"]));
    assert_eq!(odd["upper_bound"], 672);
    assert_eq!(odd["excluded"], 480);
    assert_eq!(odd["lg"], 1);
    assert_eq!(odd["lower_bound"], "1/100");
    let big = json(&fillperm(&["bounds", "--genus", "40"]));
    assert!(big["root_count"].is_string());
}

#[test]
fn hyp() {
    let v = json(&fillperm(&["hyp", "--genus", "3"]));
    assert_eq!(v["max_coincident"], 168);
    assert!((v["lambda_g"].as_f64().unwrap() - 0.33560).abs() < 1e-4);
    assert!(json(&fillperm(&["hyp", "--genus", "2"]))["lambda_g"].is_null());
}

fn count_class(doc: &roxmltree::Document, class: &str) -> usize {
    doc.descendants().filter(|n| n.attribute("class") == Some(class)).count()
}

#[test]
fn diagram() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("torus.svg");
    let out = fillperm(&["diagram", "[2,3,4,1]", "--genus", "1", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!((v["edges"].as_u64(), v["chords"].as_u64()), (Some(4), Some(2)));
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.tag_name().namespace(), Some("http://www.w3.org/2000/svg"));
    assert_eq!(root.attribute("version"), Some("1.1"));
    assert_eq!(count_class(&doc, "edge"), 4);
    assert_eq!(count_class(&doc, "chord"), 2);

    let g3 = "[2,7,8,1,12,13,10,17,14,11,6,3,20,15,16,19,4,5,18,9]";
    let stdout = fillperm(&["diagram", g3, "--genus", "3"]);
    let text = String::from_utf8(stdout.stdout).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(count_class(&doc, "edge"), 20);
    assert_eq!(count_class(&doc, "chord"), 10);
    assert_eq!(code(&fillperm(&["diagram", "[2,1,4,3]", "--genus", "1"])), 1);
}

#[test]
fn identical_runs_differ_only_in_timing() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    for args in [&["bounds", "--genus", "5"][..], &["hyp", "--genus", "7"], &["reconstruct", "[2,3,4,1]", "-g", "1"]] {
        assert_eq!(strip(json(&fillperm(args))), strip(json(&fillperm(args))));
    }
}
