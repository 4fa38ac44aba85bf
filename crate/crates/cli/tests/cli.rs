use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use plumbhf_cli::parse_graph;
use plumbhf_core::families::{sigma_2_3, CertificateBundle};
use serde_json::Value;

fn plumbhf(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plumbhf"))
        .current_dir(dir)
        .args(args)
        .env_remove("PLUMBHF_JOBS")
        .env_remove("PLUMBHF_SLACK")
        .env_remove("PLUMBHF_MAX_LEVEL")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn setup(files: &[(&str, &str)]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in files {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

const S237: &str = "vertices: -1 -2 -3 -7\nedges:\n1 2\n1 3\n1 4\n";

#[test]
fn check_sigma237() {
    let dir = setup(&[("g.graph", S237)]);
    let out = plumbhf(dir.path(), &["--json", "check", "g.graph"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["graph"]["det"], "1");
    assert_eq!(v["graph"]["negative_definite"], true);
    assert_eq!(v["graph"]["bad_vertices"], serde_json::json!([1]));
    assert_eq!(v["result"]["hypotheses_ok"], true);
}

#[test]
fn check_positive_weight_fails() {
    let dir = setup(&[("p.graph", "vertices: -2 3\nedges:\n1 2\n")]);
    let out = plumbhf(dir.path(), &["check", "p.graph"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not negative definite"));
    let forced = plumbhf(dir.path(), &["--force", "check", "p.graph"]);
    assert_eq!(forced.status.code(), Some(0));
}

#[test]
fn check_two_bad_vertices() {
    // two trivalent -2 vertices: definite, but both are bad
    let dir = setup(&[("b.graph", "vertices: -2 -2 -2 -2 -2 -3\nedges:\n1 2\n2 3\n2 4\n4 5\n4 6\n")]);
    let out = plumbhf(dir.path(), &["check", "b.graph"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bad vertices"), "{}", stderr(&out));
}

#[test]
fn parse_errors_exit_2_with_line() {
    let dir = setup(&[("x.graph", "vertices: -1 -2\nedges:\n1 two\n")]);
    let out = plumbhf(dir.path(), &["check", "x.graph"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
    let missing = plumbhf(dir.path(), &["check", "nope.graph"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn basics_counts() {
    let dir = setup(&[("g.graph", S237), ("a2.graph", "vertices: -2 -2\nedges:\n1 2\n")]);
    let v = json(&plumbhf(dir.path(), &["--json", "basics", "g.graph"]));
    assert_eq!(v["result"]["count"], 2);
    assert_eq!(v["result"]["candidates"], 42);
    assert_eq!(v["result"]["basics"][0]["renormalized_length"], "0");
    let v = json(&plumbhf(dir.path(), &["--json", "basics", "a2.graph"]));
    let vectors: Vec<_> = v["result"]["basics"].as_array().unwrap().iter().map(|b| b["vector"].clone()).collect();
    assert!(!vectors.contains(&Value::from("(2,2)")));
}

#[test]
fn hf_text_and_det_error() {
    let dir = setup(&[("g.graph", S237), ("a1.graph", "vertices: -2\nedges:\n")]);
    let out = plumbhf(dir.path(), &["hf", "g.graph"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("HF+ = T+_0 (+) Z^1_(0)"));
    let out = plumbhf(dir.path(), &["hf", "a1.graph"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("determinant is -2"), "{}", stderr(&out));
}

#[test]
fn hf_resource_cap_exit_3() {
    let dir = setup(&[("g.graph", S237)]);
    let out = plumbhf(dir.path(), &["--max-level", "0", "hf", "g.graph"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("--max-level"));
    let out = plumbhf(dir.path(), &["--state-cap", "5", "hf", "g.graph"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn env_fallback_for_tunables() {
    let dir = setup(&[("g.graph", S237)]);
    let out = Command::new(env!("CARGO_BIN_EXE_plumbhf"))
        .current_dir(dir.path())
        .args(["--json", "hf", "g.graph"])
        .env("PLUMBHF_SLACK", "5")
        .env("PLUMBHF_MAX_LEVEL", "20")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["params"]["slack"], 5);
    assert_eq!(v["params"]["level_cap"], 20);
}

#[test]
fn path_good_trace() {
    let dir = setup(&[("g.graph", S237)]);
    let out = plumbhf(dir.path(), &["--json", "path", "g.graph", "--vector", "(1,0,-1,-5)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["verdict"], "good");
    assert_eq!(v["result"]["pushes"], serde_json::json!([1, 2, 1, 3, 1, 2, 1]));
    assert_eq!(v["result"]["trace"].as_array().unwrap().len(), 7);

    let dir = setup(&[("t.graph", "vertices: -4 -6\nedges:\n1 2\n")]);
    let out = plumbhf(dir.path(), &["--json", "path", "t.graph", "--vector", "(0,-2)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["verdict"], "good");
    assert_eq!(json(&out)["result"]["pushes"], serde_json::json!([]));
}

#[test]
fn path_certificate_replay() {
    let graph = sigma_2_3(2).unwrap().graph.to_string();
    let dir = setup(&[
        ("g.graph", &graph),
        ("claim.cert", "start: (1,0,-1,-3,2)\npushes: 1 2 1 3 1 2 1 5 4 1 2 1\n"),
        ("illegal.cert", "pushes: 2 1\n"),
    ]);
    let v = json(&plumbhf(dir.path(), &["--json", "path", "g.graph", "--certificate", "claim.cert"]));
    assert_eq!(v["result"]["verdict"], "bad");
    assert_eq!(v["result"]["violation"]["vertex"], 3);

    let out = plumbhf(
        dir.path(),
        &["path", "g.graph", "--vector", "(1,0,-1,-5,0)", "--certificate", "illegal.cert"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("illegal push of vertex 2 at step 1"));

    let out = plumbhf(dir.path(), &["path", "g.graph", "--vector", "(1,0,-1,-5,0)", "--certificate", "claim.cert"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn path_rejects_vectors_outside_box() {
    let dir = setup(&[("g.graph", S237)]);
    let out = plumbhf(dir.path(), &["path", "g.graph", "--vector", "(0,0,-1,-5)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not characteristic"));
    let out = plumbhf(dir.path(), &["path", "g.graph", "--vector", "(1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn family_round_trip_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = plumbhf(dir.path(), &["--json", "family", "--n", "4", "--verify", "--out", "fam"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["verification"]["failed"], 0);
    assert_eq!(v["result"]["verification"]["passed"], 10);

    let fam = dir.path().join("fam");
    let expected = sigma_2_3(4).unwrap().graph;
    let text = fs::read_to_string(fam.join("sigma_2_3_n4.graph")).unwrap();
    assert_eq!(parse_graph(&text).unwrap(), expected);
    let json_text = fs::read_to_string(fam.join("sigma_2_3_n4.json")).unwrap();
    assert_eq!(parse_graph(&json_text).unwrap(), expected);
    let certs: CertificateBundle = fs::read_to_string(fam.join("sigma_2_3_n4.certs")).unwrap().parse().unwrap();
    assert_eq!(certs, CertificateBundle::for_family(4).unwrap());

    // the printed K_2 to L chain has 58 moves
    let k2 = certs.entries.iter().find(|e| e.index == 2 && e.target.is_some()).unwrap();
    assert_eq!(k2.moves.len(), 58);

    // graph files written by `family` feed back into the other commands
    let out = plumbhf(&fam, &["hf", "sigma_2_3_n4.json"]);
    assert!(stdout(&out).contains("HF+ = T+_0 (+) Z^4_(0)"));
}

#[test]
fn family_n1_and_invalid_n() {
    let dir = tempfile::tempdir().unwrap();
    let out = plumbhf(dir.path(), &["family", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("2 good certificates, 2 U-chains"));
    let graph = fs::read_to_string(dir.path().join("sigma_2_3_n1.graph")).unwrap();
    assert_eq!(graph, S237);
    assert!(!dir.path().join("sigma_2_3_n1.json").exists());

    let out = plumbhf(dir.path(), &["family", "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("n = 0"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(plumbhf(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(plumbhf(dir.path(), &["--stability-check", "maybe", "hf", "x"]).status.code(), Some(2));
}
