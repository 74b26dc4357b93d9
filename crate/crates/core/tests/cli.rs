use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn divkit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divkit"))
        .args(args)
        .current_dir(dir)
        .env_remove("DIVKIT_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.lines().next().expect("a report line")).expect("json report")
}

fn workspace() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("p.json"),
        r#"{"atoms":[{"label":0,"p":0.3},{"label":1,"p":0.7}]}"#,
    )
    .unwrap();
    fs::write(
        dir.path().join("q.json"),
        r#"{"atoms":[{"label":1,"p":0.5},{"label":2,"p":0.5}]}"#,
    )
    .unwrap();
    assert_eq!(divkit(dir.path(), &["examples", "--out", "b.json"]).status.code(), Some(0));
    dir
}

#[test]
fn identical_inputs_have_zero_divergence() {
    let dir = workspace();
    for f in ["kl", "kl-star", "tv", "hellinger", "pearson", "neyman", "lecam", "js", "alpha:0.5"] {
        let out = divkit(dir.path(), &["div", "--p", "p.json", "--q", "p.json", "--f", f]);
        assert_eq!(out.status.code(), Some(0), "{f}");
        assert_eq!(json(&out)["value"], 0.0, "{f}");
    }
}

#[test]
fn support_mismatch_reports_singular_mass() {
    let dir = workspace();
    let out = divkit(dir.path(), &["div", "--p", "p.json", "--q", "q.json", "--f", "kl"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["value"], "inf");
    assert_eq!(r["singular_mass"], 0.3);
    let out = divkit(dir.path(), &["div", "--p", "p.json", "--q", "q.json", "--f", "tv"]);
    assert!((json(&out)["value"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn bernoulli_example_index() {
    let dir = workspace();
    let out = divkit(dir.path(), &["csiszar", "--joint", "b.json", "--f", "pearson"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out)["value"].as_f64().unwrap();
    assert!((v - 1.0 / 15.0).abs() < 1e-15);

    let out = divkit(dir.path(), &["copula", "--joint", "b.json", "--f", "pearson", "--grid-csv", "g.csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"].as_f64().unwrap(), v);
    let csv = fs::read_to_string(dir.path().join("g.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("i,j,u_lo,u_hi,v_lo,v_hi,mass,density"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn several_generators_give_a_table() {
    let dir = workspace();
    let out = divkit(dir.path(), &["csiszar", "--joint", "b.json", "--f", "kl", "--f", "kl-star"]);
    let r = json(&out);
    let rows = r["results"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let mi = r["mutual_information"].as_f64().unwrap();
    assert!((rows[1]["value"].as_f64().unwrap() - mi).abs() < 1e-15);
}

#[test]
fn samples_are_reproducible() {
    let dir = workspace();
    let args = ["--seed", "7", "copula", "--joint", "b.json", "--f", "kl", "--sample", "200"];
    let a = divkit(dir.path(), &args);
    let b = divkit(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = divkit(dir.path(), &["--seed", "8", "copula", "--joint", "b.json", "--f", "kl", "--sample", "200"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn seed_comes_from_environment() {
    let dir = workspace();
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_divkit"));
        cmd.args(args).current_dir(dir.path()).env_remove("DIVKIT_SEED");
        if let Some(s) = env {
            cmd.env("DIVKIT_SEED", s);
        }
        json(&cmd.output().unwrap())["seed"].as_u64().unwrap()
    };
    let base = ["check", "--suite", "sup", "--trials", "2"];
    assert_eq!(run(None, &base), 1729);
    assert_eq!(run(Some("5"), &base), 5);
    let flagged = ["--seed", "9", "check", "--suite", "sup", "--trials", "2"];
    assert_eq!(run(Some("5"), &flagged), 9);
}

#[test]
fn suite_passes_and_zero_tolerance_fails() {
    let dir = workspace();
    let out = divkit(dir.path(), &["check", "--suite", "duality", "--trials", "500"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["failed"], 0);
    assert!(r["counterexample"].is_null());

    let out = divkit(dir.path(), &["check", "--suite", "duality", "--trials", "200", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    fs::write(dir.path().join("r.json"), &out.stdout).unwrap();
    let r = json(&out);
    assert!(r["failed"].as_u64().unwrap() > 0);

    let replay = divkit(dir.path(), &["check", "--replay", "r.json"]);
    assert_eq!(replay.status.code(), Some(1));
    let detail = json(&replay)["detail"].clone();
    assert_eq!(detail, r["counterexample"]["detail"]);

    let relaxed = divkit(dir.path(), &["check", "--replay", "r.json", "--tol", "1e-12"]);
    assert_eq!(relaxed.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical() {
    let dir = workspace();
    let args = ["--seed", "3", "check", "--suite", "all", "--trials", "20"];
    let a = divkit(dir.path(), &args);
    let b = divkit(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = workspace();
    let code = |args: &[&str]| divkit(dir.path(), args).status.code();
    assert_eq!(code(&["div", "--p", "p.json"]), Some(2));
    assert_eq!(code(&["div", "--p", "p.json", "--q", "p.json", "--f", "nope"]), Some(2));
    assert_eq!(code(&["check", "--suite", "nope"]), Some(2));
    assert_eq!(code(&["fgm", "--theta", "1.5", "--f", "kl"]), Some(2));
    assert_eq!(code(&["div", "--p", "p.json", "--q", "missing.json", "--f", "kl"]), Some(3));
    fs::write(dir.path().join("bad.json"), r#"{"atoms":[{"label":0,"p":0.5}]}"#).unwrap();
    assert_eq!(code(&["div", "--p", "bad.json", "--q", "p.json", "--f", "kl"]), Some(3));
    assert_eq!(code(&["--format", "csv", "check", "--suite", "sup"]), Some(2));
    assert_eq!(code(&["fgm", "--theta", "-0.5", "--f", "pearson"]), Some(0));
}

#[test]
fn fgm_reports_closed_form() {
    let dir = workspace();
    let out = divkit(dir.path(), &["fgm", "--theta", "1", "--f", "pearson"]);
    let r = json(&out);
    let q = r["value"].as_f64().unwrap();
    let c = r["closed_form"].as_f64().unwrap();
    assert!((q - c).abs() < 1e-6);
}

#[test]
fn csv_format() {
    let dir = workspace();
    let out = divkit(dir.path(), &["--format", "csv", "renyi", "--p", "p.json", "--q", "p.json", "--alpha", "0.5", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
}
