use mdfy_web::{optimize, run, verify};
use serde_json::Value;

fn decode(reply: String) -> (bool, String) {
    let v: Value = serde_json::from_str(&reply).unwrap();
    (v["ok"].as_bool().unwrap(), v["text"].as_str().unwrap().to_string())
}

#[test]
fn run_reports_success_and_failure() {
    assert_eq!(
        decode(run("var x := 0 in x := 3", "")),
        (true, "Success value=3 ctx={}".into())
    );
    assert_eq!(
        decode(run("x + 1", r#"{"x": 4}"#)),
        (true, "Success value=5 ctx={\"x\":4}".into())
    );
    assert_eq!(
        decode(run("x := 3", "{}")),
        (false, "Failure undefined variable: x".into())
    );
    let (ok, text) = decode(run("x := ", "{}"));
    assert!(!ok && text.starts_with("1:6:"), "{text}");
    assert!(!decode(run("1", "nope")).0);
}

#[test]
fn optimize_shows_rewrite_and_purity() {
    assert_eq!(decode(optimize("y * 0; 1")), (true, "0; 1\n// pure: true".into()));
    assert_eq!(
        decode(optimize("0 * (x := 1)")),
        (true, "0 * (x := 1)\n// pure: false".into())
    );
}

#[test]
fn verify_runs_and_localizes() {
    let (ok, text) = decode(verify("list-assoc", 3, "none"));
    assert!(ok, "{text}");
    let (ok, text) = decode(verify("is-pure", 2, "no-scope-reset"));
    assert!(!ok);
    assert!(
        text.lines()
            .any(|l| l.starts_with("BindStep ") && !l.ends_with("failures=0")),
        "{text}"
    );
    assert!(
        text.lines()
            .any(|l| l == "ConstCase checked=108 vacuous=false failures=0"),
        "{text}"
    );
    let (ok, text) = decode(verify("bogus", 2, ""));
    assert!(!ok && text.contains("is-pure"));
}
