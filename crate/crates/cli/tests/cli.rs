use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn floerlab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floerlab"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn parse_q(s: &str) -> f64 {
    match s.split_once('/') {
        Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

#[test]
fn build_writes_two_complexes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let o = floerlab(&["build", "--out", "a", "--seed", "7"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let mut files: Vec<String> = fs::read_dir(dir.path().join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files, ["hf_eps1-10.json", "manifest.json", "pfh_eps1-10.json"]);
    let o = floerlab(&["build", "--out", "b", "--seed", "7"], dir.path());
    assert!(o.status.success());
    for f in &files {
        assert_eq!(fs::read(dir.path().join("a").join(f)).unwrap(), fs::read(dir.path().join("b").join(f)).unwrap(), "{f}");
    }
}

#[test]
fn k_one_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = floerlab(&["build", "--k", "1", "--out", "x"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("k>1 required"), "{}", stderr(&o));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.toml"),
        "schema = 1\ngenus = 0\nk = 3\nepsilons = [\"1/10\", \"1/50\"]\nwindow = 1\nout = \"from-file\"\n",
    )
    .unwrap();
    let o = floerlab(&["build", "--config", "run.toml", "--out", "from-flag"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!dir.path().join("from-file").exists());
    let m: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("from-flag/manifest.json")).unwrap()).unwrap();
    assert_eq!(m["model"]["k"], json!(3));
    assert_eq!(m["epsilons"], json!(["1/10", "1/50"]));
    assert_eq!(m["files"].as_array().unwrap().len(), 4);

    fs::write(dir.path().join("bad.toml"), "schema = 9\n").unwrap();
    let o = floerlab(&["build", "--config", "bad.toml"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("schema"));
}

#[test]
fn report_requires_a_build() {
    let dir = tempfile::tempdir().unwrap();
    let o = floerlab(&["report", "--out", "empty"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("floerlab build"), "{}", stderr(&o));
}

#[test]
fn report_tables_and_plot_flag() {
    let dir = tempfile::tempdir().unwrap();
    assert!(floerlab(&["build", "--out", "o"], dir.path()).status.success());
    let o = floerlab(&["report", "--out", "o"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("o/spectral_table.csv")).unwrap();
    assert!(!csv.contains('\r') && !csv.contains('"'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "g,k,d,eps,basepoint,c_hf,c_pfh,integral,holds");
    // empty basepoint list: only y_+
    assert_eq!(lines[1..], ["0,2,2,1/10,++,1/5,0,1/5,true"]);
    let ranks = fs::read_to_string(dir.path().join("o/rank_table.csv")).unwrap();
    let got: Vec<&str> = ranks.lines().skip(1).map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(got, ["2", "4", "8"]);
    assert!(dir.path().join("o/spectral_vs_eps.svg").exists());
    let json: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("o/spectral_table.json")).unwrap()).unwrap();
    assert_eq!(json["rows"][0]["c_hf"], json!("1/5"));

    assert!(floerlab(&["build", "--out", "p"], dir.path()).status.success());
    let o = floerlab(&["report", "--out", "p", "--no-plots", "--formats", "csv"], dir.path());
    assert!(o.status.success());
    assert!(!dir.path().join("p/spectral_vs_eps.svg").exists());
    assert!(!dir.path().join("p/spectral_table.json").exists());
}

#[test]
fn report_lists_requested_basepoints() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "schema = 1\nepsilons = [\"1/10\", \"1/100\"]\nbasepoints = [\"++\", \"-m\"]\n";
    fs::write(dir.path().join("c.toml"), cfg).unwrap();
    assert!(floerlab(&["build", "--config", "c.toml", "--out", "o"], dir.path()).status.success());
    let o = floerlab(&["report", "--config", "c.toml", "--out", "o"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("o/spectral_table.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        // trivial references: c_hf = c_pfh + integral = eps d
        let eps = parse_q(r[3]);
        assert!((parse_q(r[5]) - 2.0 * eps).abs() < 1e-12);
        assert!((parse_q(r[6]) + parse_q(r[7]) - 2.0 * eps).abs() < 1e-12);
        assert_eq!(r[8], "true");
    }
}

#[test]
fn report_detects_stale_build() {
    let dir = tempfile::tempdir().unwrap();
    assert!(floerlab(&["build", "--out", "o"], dir.path()).status.success());
    let o = floerlab(&["report", "--out", "o", "--k", "3"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("rerun `floerlab build`"), "{}", stderr(&o));
}

#[test]
fn verify_default_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = floerlab(&["verify", "--out", "v"], dir.path());
    assert!(o.status.success(), "{}\n{}", stdout(&o), stderr(&o));
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("v/verify.json")).unwrap()).unwrap();
    assert_eq!(doc["pass"], json!(true));
    let names: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for want in ["boundary_square", "chain_map", "monotonicity", "index_comparison", "winding", "spectral_table"] {
        assert!(names.contains(&want), "{want} missing");
    }
}

/// Adds `x -> y` where `y` has a nonzero boundary, so `∂²x = ∂y ≠ 0`.
fn corrupt(doc: &mut Value) -> (String, String) {
    let gens = doc["generators"].as_array().unwrap().clone();
    let entries = doc["differential"].as_array().unwrap().clone();
    let action = |i: usize| parse_q(gens[i]["action"].as_str().unwrap());
    let has = |a: usize, b: usize| entries.iter().any(|e| e[0] == json!(a) && e[1] == json!(b) && e[2] == json!(0));
    for e in &entries {
        let (y, t) = (e[0].as_u64().unwrap() as usize, e[2].as_i64().unwrap());
        if t != 0 {
            continue;
        }
        for x in 0..gens.len() {
            if action(x) > action(y) && !has(x, y) {
                doc["differential"].as_array_mut().unwrap().push(json!([x, y, 0]));
                return (gens[x]["label"].as_str().unwrap().to_string(), gens[y]["label"].as_str().unwrap().to_string());
            }
        }
    }
    panic!("no corruptible entry");
}

#[test]
fn verify_flags_corrupted_fixture_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    assert!(floerlab(&["build", "--out", "o"], dir.path()).status.success());
    let path = dir.path().join("o/pfh_eps1-10.json");
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let (x, _) = corrupt(&mut doc);
    fs::write(dir.path().join("bad.json"), serde_json::to_string(&doc).unwrap()).unwrap();
    let o = floerlab(&["verify", "--out", "v", "--complex", "bad.json"], dir.path());
    assert!(!o.status.success());
    let out = stdout(&o);
    assert!(out.contains("[FAIL] complex_fixture"), "{out}");
    assert!(out.contains(&format!("witness: {x}")), "{out}");
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("v/verify.json")).unwrap()).unwrap();
    let fixture = &report["checks"][0];
    assert_eq!(fixture["pass"], json!(false));
    assert_eq!(fixture["witnesses"][0].as_array().unwrap().len(), 2);

    let o = floerlab(&["verify", "--out", "w", "--complex", "o/pfh_eps1-10.json"], dir.path());
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn symprod_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = floerlab(&["symprod", "--out", "s", "--samples", "2048"], dir.path());
    assert!(o.status.success(), "{}", stdout(&o));
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("s/symprod.json")).unwrap()).unwrap();
    let winding = doc["checks"].as_array().unwrap().iter().find(|c| c["name"] == "winding").unwrap();
    assert!(winding["max_deviation"].as_f64().unwrap() < 1e-6);
    let o = floerlab(&["symprod", "--out", "s", "--samples", "10"], dir.path());
    assert!(!o.status.success());
}
