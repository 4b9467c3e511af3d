use std::path::PathBuf;
use std::process::{Command, Output};

use valext::cli::dump_artifacts;
use valext::cli::fuzz::{fuzz, Profile, Violation};
use valext::tower::PrecisionConfig;

fn valext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valext")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const TAME: &str = r#"
name = "tame"
base = "laurent"
primes = [3, 5]

[[element]]
name = "b"
value = "root(2, t) + t^(3/4)"

[[check]]
kind = "invariants"
x = "b"
expect-deg = 4
expect-e = 4
expect-f = 1
expect-defect = 1

[[check]]
kind = "chain"
b = "b"
expect = "certified"
"#;

#[test]
fn list_names_the_builtins() {
    let o = valext(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in ["example-cdc", "example-not-key", "example-stability"] {
        assert!(out.contains(name), "{out}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(valext(&["run", "example-stability"]).status.code(), Some(0));
    let o = valext(&["run", "example-not-key"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL initial-forms-equal"));
    assert_eq!(valext(&["run", "no-such-scenario"]).status.code(), Some(2));

    let dir = scratch("exit-codes");
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "name = \"bad\"\nbase = \"laurent\"\nprimes = [4]\n").unwrap();
    let o = valext(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::write(&bad, TAME.replace("root(2, t)", "root(2, t")).unwrap();
    assert_eq!(valext(&["run", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(valext(&["fuzz", "no-such-profile"]).status.code(), Some(2));
}

#[test]
fn custom_scenario_file() {
    let dir = scratch("custom");
    let path = dir.join("tame.toml");
    std::fs::write(&path, TAME).unwrap();
    let json = dir.join("report.json");
    let o = valext(&["run", path.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(r["schema"], "valext-report/1");
    assert_eq!(r["reports"][0]["runs"].as_array().unwrap().len(), 2);
}

#[test]
fn json_reports_are_reproducible_and_tagged() {
    let dir = scratch("json");
    let mut bodies = Vec::new();
    for i in 0..2 {
        let path = dir.join(format!("r{i}.json"));
        let o = valext(&["run", "example-cdc", "example-stability", "--seed", "7", "--json", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        bodies.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    let r: serde_json::Value = serde_json::from_slice(&bodies[0]).unwrap();
    let mut claims = 0;
    for sc in r["reports"].as_array().unwrap() {
        assert_eq!(sc["config"]["seed"], 7);
        for run in sc["runs"].as_array().unwrap() {
            for c in run["claims"].as_array().unwrap() {
                let st = c["status"].as_str().unwrap();
                assert!(["certified", "family-checked", "asserted"].contains(&st), "{c}");
                claims += 1;
            }
        }
    }
    assert!(claims > 40);
}

#[test]
fn strict_flag_is_reported() {
    let o = valext(&["run", "example-cdc", "--strict"]);
    assert!(stdout(&o).contains(", strict)"));
}

#[test]
fn empty_fuzz_run() {
    let dir = scratch("fuzz-empty");
    let json = dir.join("s.json");
    let o = valext(&["fuzz", "ratio-law", "--count", "0", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(s["schema"], "valext-fuzz/1");
    assert_eq!(s["checked"], 0);
    assert!(s["violations"].as_array().unwrap().is_empty());
}

#[test]
fn fuzz_summaries_are_reproducible() {
    let a = valext(&["fuzz", "index-identities", "--count", "8", "--seed", "5"]);
    let b = valext(&["fuzz", "index-identities", "--count", "8", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn violations_become_runnable_reproducers() {
    let dir = scratch("artifacts");
    let mut s = fuzz(3, 0, Profile::IndexIdentities, PrecisionConfig::default());
    s.violations.push(Violation {
        instance: 4,
        detail: "synthetic".into(),
        scenario: TAME.replace("expect-deg = 4", "expect-deg = 2"),
        artifact: None,
    });
    dump_artifacts(&mut s, &dir).unwrap();
    let path = s.violations[0].artifact.clone().unwrap();
    assert!(path.ends_with("index-identities-seed3-instance4.toml"), "{path}");
    assert!(s.to_text().contains(&path));
    let o = valext(&["run", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL invariants"));
}
