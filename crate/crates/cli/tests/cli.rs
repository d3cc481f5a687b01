use std::path::Path;
use std::process::{Command, Output};

fn ordlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordlat")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn export(name: &str, dir: &Path) -> String {
    let p = dir.join(name.replace('/', "_") + ".json");
    let path = p.to_str().unwrap().to_string();
    assert!(ordlat(&["catalog", "export", name, "-o", &path]).status.success());
    path
}

#[test]
fn dinv_values() {
    for (o, d) in [("eisenstein", "3/4"), ("gaussian", "1"), ("hurwitz", "1/4"), ("j", "9/16")] {
        let out = ordlat(&["dinv", "--order", o]);
        assert!(out.status.success());
        assert_eq!(stdout(&out).trim(), d);
    }
}

#[test]
fn catalog_verify_lambda16() {
    let out = ordlat(&["catalog", "verify", "Λ16/hurwitz", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["kissing_checked"], true);
    let ascii = ordlat(&["catalog", "verify", "L16/hurwitz", "--format", "json"]);
    assert_eq!(json(&ascii), v);
}

#[test]
fn catalog_list_has_the_required_entries() {
    let v = json(&ordlat(&["catalog", "list", "--format", "json"]));
    assert_eq!(v.as_array().unwrap().len(), 12);
    let csv = stdout(&ordlat(&["catalog", "list", "--format", "csv"]));
    assert!(csv.starts_with("name,order,det,min_norm,gamma\n"));
    assert!(csv.contains("Λ24/hurwitz,hurwitz,1,4,4\n"));
}

#[test]
fn hurwitz_table_markdown() {
    let out = ordlat(&["mordell", "table", "--order", "hurwitz", "--max-dim", "28", "--format", "md"]);
    assert!(out.status.success());
    let md = stdout(&out);
    assert!(md.starts_with("| Dimension | Best Known | Mordell Bound | Conjectured Mordell Bound |"));
    assert!(md.contains("| 12 | 2^(7/6) ≈ 2.24492 | 2^(3/2) ≈ 2.82843 |  |"));
    assert!(md.contains("| 24 | 4 | 4.42139 [1] | 4 |"));
    assert!(md.contains("4.21390"));
}

#[test]
fn explicit_bounds_file() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/bounds");
    let b = root.join("eisenstein.json");
    let c = root.join("eisenstein-densest.json");
    let out = ordlat(&[
        "mordell", "table", "--order", "eisenstein", "--max-dim", "26",
        "--bounds", b.to_str().unwrap(), "--conjectured", c.to_str().unwrap(), "--format", "json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    let shipped = json(&ordlat(&["mordell", "table", "--order", "eisenstein", "--max-dim", "26", "--format", "json"]));
    assert_eq!(v, shipped);
}

#[test]
fn mordell_step_iterate_obstruct() {
    let v = json(&ordlat(&["mordell", "step", "--order", "gaussian", "--m", "4", "--gamma", "2^(2/3)", "--format", "json"]));
    assert_eq!(v["exact"], "2");
    let v = json(&ordlat(&["mordell", "iterate", "--order", "hurwitz", "--m", "6", "--s", "7", "--gamma", "4", "--format", "json"]));
    assert_eq!(v["exact"], "2^(23/10)");
    let v = json(&ordlat(&[
        "mordell", "obstruct", "--order", "hurwitz", "--m", "4", "--known", "2^(3/2)", "--candidate", "2^(7/6)", "--format", "json",
    ]));
    assert_eq!(v["verdict"], "inconclusive");
    assert!(v["caveat"].as_str().unwrap().contains("optimal"));
}

#[test]
fn lattice_info_and_dual_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let e8 = export("E8/hurwitz", dir.path());
    let v = json(&ordlat(&["lattice", "info", &e8, "--format", "json", "--list-minvecs"]));
    assert_eq!(v["det"], "1");
    assert_eq!(v["min_norm"], "2");
    assert_eq!(v["gamma_nth"], "256");
    assert_eq!(v["kissing"], 240);
    assert_eq!(v["minimal_vectors"].as_array().unwrap().len(), 240);

    let d = dir.path().join("d.json");
    let dd = dir.path().join("dd.json");
    assert!(ordlat(&["lattice", "dual", &e8, "-o", d.to_str().unwrap()]).status.success());
    assert!(ordlat(&["lattice", "dual", d.to_str().unwrap(), "-o", dd.to_str().unwrap()]).status.success());
    let a: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&e8).unwrap()).unwrap();
    let b: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&dd).unwrap()).unwrap();
    assert_eq!(a["generators"], b["generators"]);
    let dv = json(&ordlat(&["lattice", "info", d.to_str().unwrap(), "--format", "json"]));
    assert_eq!(dv["det"], "1/256");
}

#[test]
fn export_to_stdout_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = export("K12/j", dir.path());
    let out = ordlat(&["catalog", "export", "K12/j"]);
    assert_eq!(stdout(&out), std::fs::read_to_string(f).unwrap());
}

#[test]
fn verify_identities_on_file_and_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let k12 = export("K12/eisenstein", dir.path());
    let out = ordlat(&["verify", "identities", &k12, "--trials", "5", "--random", "--order", "j", "--count", "12", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["results"].as_array().unwrap().iter().any(|r| r["order"] == "j"));
}

#[test]
fn audit_on_lambda16() {
    let dir = tempfile::tempdir().unwrap();
    let l16 = export("Λ16/hurwitz", dir.path());
    let out = ordlat(&["audit", "equality", &l16, "--reference", "2^(7/6)", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["all_conditions_hold"], true);
    assert_eq!(v["lattice_norm"], "4");
    assert!(v["orbits"].as_array().unwrap().iter().all(|o| o["section_norm"] == "4"));
    let wrong = ordlat(&["audit", "equality", &l16, "--reference", "2", "--format", "json"]);
    assert_eq!(wrong.status.code(), Some(1));
}

#[test]
fn output_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let e6 = export("E6/eisenstein", dir.path());
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_ordlat"))
            .args(["verify", "identities", &e6, "--random", "--count", "8", "--format", "json"])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn exit_codes_and_json_errors() {
    let out = ordlat(&["dinv", "--order", "octonion", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "unknown_order");
    assert_eq!(String::from_utf8(out.stderr).unwrap().lines().count(), 1);

    let out = ordlat(&["mordell", "step", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "usage");

    let out = ordlat(&["catalog", "verify", "Λ99/hurwitz"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error: "));

    let out = ordlat(&["lattice", "info", "/nonexistent.json", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = ordlat(&["dinv", "--order", "j", "--delta", "1/8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn node_budget_flag_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let e8 = export("E8/hurwitz", dir.path());
    let out = ordlat(&["lattice", "info", &e8, "--node-budget", "10", "--format", "json"]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "node_budget");
    let out = Command::new(env!("CARGO_BIN_EXE_ordlat"))
        .args(["lattice", "info", &e8])
        .env("ORDLAT_NODE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unparseable_lattice_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"order":"hurwitz","m":1,"generators":[[["1/0","0","0","0"]]]}"#).unwrap();
    let out = ordlat(&["lattice", "info", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
}
