use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehresmann")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn gen(dir: &Path, flag: &str, n: &str, name: &str) -> PathBuf {
    let p = dir.join(name);
    let out = run(&["relgen", flag, n, "-o", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    p
}

fn e2(dir: &Path) -> PathBuf {
    write(
        dir,
        "e2.json",
        &json!({"version": 1, "kind": "semigroup", "elements": ["e", "f"],
                "mult": [[0, 1], [1, 1]], "plus": [0, 1], "star": [0, 1]}),
    )
}

#[test]
fn verify_full_algebras() {
    let dir = tempfile::tempdir().unwrap();
    let b2 = gen(dir.path(), "--full-B", "2", "b2.json");
    assert_eq!(code(&run(&["verify", b2.to_str().unwrap()])), 0);
    let pt2 = gen(dir.path(), "--full-PT", "2", "pt2.json");
    assert_eq!(code(&run(&["verify", pt2.to_str().unwrap(), "--restriction", "left"])), 0);
    let out = run(&["--json", "verify", pt2.to_str().unwrap(), "--restriction", "both"]);
    assert_eq!(code(&out), 1);
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(rep.to_string().contains("witness"));
}

#[test]
fn verify_relgen_document() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "rg.json",
        &json!({"version": 1, "kind": "relgen", "ground_size": 2, "generators": [[[0, 1]], [[1, 0], [1, 1]]]}),
    );
    assert_eq!(code(&run(&["verify", p.to_str().unwrap()])), 0);
}

#[test]
fn planted_bad_star_fails() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "bad.json",
        &json!({"version": 1, "kind": "semigroup", "elements": ["e", "f"],
                "mult": [[0, 1], [1, 1]], "plus": [0, 1], "star": [1, 1]}),
    );
    let out = run(&["verify", p.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "v.json", &json!({"version": 7, "kind": "semigroup"}));
    assert_eq!(code(&run(&["verify", p.to_str().unwrap()])), 2);
    let q = write(
        dir.path(),
        "na.json",
        &json!({"version": 1, "kind": "semigroup", "elements": ["a", "b"],
                "mult": [[0, 0], [0, 0]], "plus": [0, 5], "star": [0, 0]}),
    );
    assert_eq!(code(&run(&["verify", q.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["verify", dir.path().join("missing.json").to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["relgen", "--full-B", "5"])), 2);
}

#[test]
fn cover_commands_on_e2() {
    let dir = tempfile::tempdir().unwrap();
    let p = e2(dir.path());
    let f = p.to_str().unwrap();
    assert_eq!(code(&run(&["cover", "verify", f, "--gens", "0,1", "--len", "3"])), 0);
    let out = run(&["--json", "preimage", f, "--gens", "0,1", "--element", "1"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["phi"], 1);
    assert_eq!(v["verified"], true);
    let g = dir.path().join("cover.json");
    assert_eq!(code(&run(&["cover", "build", f, "--gens", "0,1", "-o", g.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["verify", g.to_str().unwrap()])), 0);
    // A non-generating set is an input error.
    assert_eq!(code(&run(&["cover", "verify", f, "--gens", "0", "--len", "2"])), 2);
}

#[test]
fn product_and_iso_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.json");
    assert_eq!(code(&run(&["corpus-run", "--write", corpus.to_str().unwrap()])), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&corpus).unwrap()).unwrap();
    let entry = doc["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["name"] == "premorphism:e2-t2")
        .expect("e2-t2 premorphism in corpus");
    let mut payload = entry["payload"].clone();
    payload["version"] = json!(1);
    let g = write(dir.path(), "e2t2.json", &payload);
    let gs = g.to_str().unwrap();
    assert_eq!(code(&run(&["verify", gs])), 0);
    assert_eq!(code(&run(&["product", "check", gs])), 0);
    assert_eq!(code(&run(&["actions", gs])), 0);
    let s = dir.path().join("s.json");
    assert_eq!(code(&run(&["product", "build", gs, "-o", s.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["iso", s.to_str().unwrap()])), 0);
    // A proper subset for Y is not decided.
    assert_eq!(code(&run(&["iso", s.to_str().unwrap(), "--ideal", "0"])), 3);
}

#[test]
fn corpus_runs_clean() {
    let out = run(&["corpus-run"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn analyze_and_sigma_json() {
    let dir = tempfile::tempdir().unwrap();
    let pt2 = gen(dir.path(), "--full-PT", "2", "pt2.json");
    let out = run(&["--json", "analyze", pt2.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["size"], 9);
    assert_eq!(v["left_restriction"], true);
    assert_eq!(v["right_restriction"], false);
    assert_eq!(v["projections"].as_array().unwrap().len(), 4);

    let q = dir.path().join("q.json");
    assert_eq!(code(&run(&["sigma", pt2.to_str().unwrap(), "-o", q.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["verify", q.to_str().unwrap()])), 0);

    let out = run(&["--json", "factorize", pt2.to_str().unwrap(), "--seq", "1,2,3"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["matching"].as_array().unwrap().len(), 3);
}

#[test]
fn fes_witness_and_search() {
    assert_eq!(code(&run(&["fes-witness"])), 0);
    assert_eq!(code(&run(&["sigma-search", "--seed", "3", "--trials", "200"])), 0);
}
