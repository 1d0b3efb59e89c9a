use std::path::PathBuf;
use std::process::{Command, Output};

fn thetacat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetacat")).args(args).output().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn homclasses_on_fixtures() {
    let o = thetacat(&["homclasses", "arrow", "arrow"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["class_count"], 3, "{v}");
    assert_eq!(v["oracle_comparison"]["agree"], true);
}

#[test]
fn check_reports_a_category() {
    let v = json(&thetacat(&["check", "fixtures/arrow.json"]));
    assert_eq!(v["n-category"], true, "{v}");
}

#[test]
fn output_is_deterministic() {
    let (a, b) = (scratch("det-a.json"), scratch("det-b.json"));
    for p in [&a, &b] {
        let o = thetacat(&["--out", p.to_str().unwrap(), "resolve", "iso"]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let seeded = |seed: &str| thetacat(&["--seed", seed, "report", "--suite", "properties"]).stdout;
    assert_eq!(seeded("4"), seeded("4"));
}

#[test]
fn exit_codes() {
    assert_eq!(thetacat(&["--pass-limit", "1", "resolve", "arrow"]).status.code(), Some(2));
    assert_eq!(thetacat(&["resolve", "no-such-input"]).status.code(), Some(3));
    assert_eq!(thetacat(&["--n", "5", "theta", "shapes"]).status.code(), Some(3));
    assert_eq!(thetacat(&["frobnicate"]).status.code(), Some(3));
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"v\": \"v1\", \"kind\": \"precat\"").unwrap();
    assert_eq!(thetacat(&["check", bad.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn theta_commands() {
    let v = json(&thetacat(&["--n", "2", "theta", "hom", "[1]", "[1,1]"]));
    assert_eq!(v["count"], 4, "{v}");
    let o = thetacat(&["--n", "2", "boundary", "[1,1]"]);
    assert!(o.status.success());
}
