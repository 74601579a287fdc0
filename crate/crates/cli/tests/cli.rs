use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl From<Output> for Run {
    fn from(out: Output) -> Self {
        Run {
            code: out.status.code().expect("terminated by signal"),
            stdout: String::from_utf8(out.stdout).unwrap(),
            stderr: String::from_utf8(out.stderr).unwrap(),
        }
    }
}

fn mdfy(args: &[&str]) -> Run {
    Command::new(env!("CARGO_BIN_EXE_mdfy"))
        .args(args)
        .output()
        .unwrap()
        .into()
}

fn program(dir: &TempDir, text: &str) -> String {
    let path: PathBuf = dir.path().join(format!("p{}.mdfy", text.len()));
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn run_prints_outcomes() {
    let dir = TempDir::new().unwrap();
    let r = mdfy(&["run", &program(&dir, "var x := 0 in x := 3")]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "Success value=3 ctx={}\n"));

    let r = mdfy(&["run", &program(&dir, "x := 3")]);
    assert_eq!((r.code, r.stdout.as_str()), (1, "Failure undefined variable: x\n"));

    let r = mdfy(&[
        "run",
        &program(&dir, "y := x + 1; y * 2"),
        "--ctx",
        r#"{"x": 2, "y": 0}"#,
    ]);
    assert_eq!(
        (r.code, r.stdout.as_str()),
        (0, "Success value=6 ctx={\"x\":2,\"y\":3}\n")
    );
}

#[test]
fn run_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let r = mdfy(&["run", &program(&dir, "x := ")]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains(":1:6:"), "{}", r.stderr);
    assert!(r.stdout.is_empty());

    let r = mdfy(&["run", &program(&dir, "1"), "--ctx", "[1]"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--ctx"));

    let r = mdfy(&["run", &program(&dir, "1"), "--ctx", r#"{"var": 1}"#]);
    assert_eq!(r.code, 2);

    let r = mdfy(&["run", "/nonexistent/prog.mdfy"]);
    assert_eq!(r.code, 2);
}

#[test]
fn check_reports_analyses() {
    let dir = TempDir::new().unwrap();
    let assign = program(&dir, "x := 3");
    let r = mdfy(&["check", &assign, "--analysis", "pure"]);
    assert_eq!((r.code, r.stdout.as_str()), (1, "false\n"));
    let r = mdfy(&["check", &assign, "--analysis", "pure", "--locals", "x"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "true\n"));
    let r = mdfy(&["check", &assign, "--analysis", "pure", "--locals", "y,x"]);
    assert_eq!(r.code, 0);

    let r = mdfy(&[
        "check",
        &program(&dir, "x := 1"),
        "--analysis",
        "unchanged",
        "--var",
        "y",
    ]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "true\n"));
    let r = mdfy(&[
        "check",
        &program(&dir, "var y := 0 in y := 1"),
        "--analysis",
        "unchanged",
        "--var",
        "y",
    ]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "true\n"));
    let r = mdfy(&[
        "check",
        &program(&dir, "y := 1"),
        "--analysis",
        "unchanged",
        "--var",
        "y",
    ]);
    assert_eq!((r.code, r.stdout.as_str()), (1, "false\n"));
}

#[test]
fn check_usage_errors() {
    let dir = TempDir::new().unwrap();
    let p = program(&dir, "x := 1");
    let r = mdfy(&["check", &p, "--analysis", "unchanged"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--var"));
    assert_eq!(mdfy(&["check", &p, "--analysis", "bogus"]).code, 2);
    assert_eq!(mdfy(&["check", &p, "--analysis", "pure", "--locals", "in"]).code, 2);
}

#[test]
fn opt_rewrites() {
    let dir = TempDir::new().unwrap();
    for (src, want) in [
        ("0 * y", "0\n"),
        ("0 * (x := 1)", "0 * (x := 1)\n"),
        ("y * 0; 1", "0; 1\n"),
        ("var x := 0 * x in x * 0", "var x := 0 in 0\n"),
    ] {
        let r = mdfy(&["opt", &program(&dir, src)]);
        assert_eq!((r.code, r.stdout.as_str()), (0, want), "{src}");
    }
    assert_eq!(mdfy(&["opt", &program(&dir, "0 * ")]).code, 2);
}

#[test]
fn enumerate_lists_and_counts() {
    let r = mdfy(&["enumerate", "--depth", "0"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "0\n1\n3\nx\ny\n"));
    let r = mdfy(&["enumerate", "--depth", "0", "--count"]);
    assert_eq!(r.stdout, "5\n");
    let r = mdfy(&["enumerate", "--depth", "1", "--count"]);
    assert_eq!(r.stdout, "266\n");
    let r = mdfy(&["enumerate", "--depth", "1"]);
    assert_eq!(r.stdout.lines().count(), 266);
    let r = mdfy(&["enumerate", "--depth", "2", "--count"]);
    assert_eq!(r.stdout, "19175414\n");
    let r = mdfy(&["enumerate", "--depth", "3", "--count", "--budget", "200000"]);
    assert_eq!(r.stdout, "200000\n");
    let r = mdfy(&["enumerate", "--depth", "2", "--budget", "300"]);
    assert_eq!(r.stdout.lines().count(), 300);
    assert_eq!(mdfy(&["enumerate"]).code, 2);
}

#[test]
fn verify_small_runs() {
    let r = mdfy(&["verify", "--instance", "list-assoc", "--depth", "4"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("ConsCase checked="));
    assert!(r.stdout.ends_with("ok=true\n"));

    let r = mdfy(&["verify", "--instance", "list-assoc", "--mutant", "app-snoc"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("ok=false"));

    let r = mdfy(&["verify", "--instance", "is-pure", "--depth", "1", "--format", "json"]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["ok"], true);
    assert_eq!(v["obligations"].as_array().unwrap().len(), 13);
    assert_eq!(v["assembled"]["name"], "Induct");
}

#[test]
fn verify_writes_report_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let r = mdfy(&[
        "verify",
        "--instance",
        "mul-zero",
        "--depth",
        "1",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["instance"], "mul-zero");
    assert_eq!(v["corpus"]["depth"], 1);
}

#[test]
fn verify_names_are_checked() {
    let r = mdfy(&["verify", "--instance", "nope"]);
    assert_eq!(r.code, 2);
    for name in ["is-pure", "unchanged-var", "mul-zero", "list-assoc"] {
        assert!(r.stderr.contains(name), "{}", r.stderr);
    }
    let r = mdfy(&["verify", "--instance", "is-pure", "--mutant", "nope"]);
    assert_eq!(r.code, 2);
    for name in ["no-scope-reset", "drop-locals-check", "rewrite-impure", "app-snoc"] {
        assert!(r.stderr.contains(name), "{}", r.stderr);
    }
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_mdfy"))
        .args(["verify", "--instance", "list-assoc"])
        .env("MDFY_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
