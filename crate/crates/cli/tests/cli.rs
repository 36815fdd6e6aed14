use std::path::PathBuf;
use std::process::{Command, Output};

fn delannoy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delannoy"))
        .args(args)
        .env_remove("DELANNOY_FIELD")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("delannoy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn hom_dim_and_profile() {
    let o = delannoy(&["hom-dim", "--cat", "1", "2", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "13");
    let o = delannoy(&["profile", "--ambient", "mu1", "sum(R,1)"]);
    assert_eq!(stdout(&o).trim(), "type 2, dim 0, gamma (-1, 0)");
    let o = delannoy(&["profile", "--ambient", "mu1", "sum(R,R)"]);
    assert!(stdout(&o).contains("type NOT_DELANNIC"));
}

#[test]
fn measure_table_text_and_json() {
    let o = delannoy(&["measure-table"]);
    assert!(stdout(&o).contains("mu2    0  -1   0"), "{}", stdout(&o));
    let o = delannoy(&["--json", "measure-table"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["p11_p21_p22"][3], serde_json::json!([1, 0, 0]));
}

#[test]
fn invalid_input_exits_with_two() {
    let o = delannoy(&["profile", "--ambient", "mu1", "sum(R,"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error at"));
    assert_eq!(delannoy(&["hom-dim", "--cat", "5", "1", "1"]).status.code(), Some(2));
    assert_eq!(delannoy(&["scenario", "nope"]).status.code(), Some(2));
    assert_eq!(delannoy(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(delannoy(&["--field", "F4", "measure-table"]).status.code(), Some(2));
}

#[test]
fn compose_files() {
    let id = r#"{"version":1,"kind":"morphism","data":{"measure":{"factors":[1],"field":"Q"},
        "source":{"shape":1,"orbits":[[1]]},"target":{"shape":1,"orbits":[[1]]},"coeffs":{"0,0:B":"-3/7"}}}"#;
    let a = scratch("a.json", id);
    let o = delannoy(&["--json", "compose", "--cat", "1", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["data"]["coeffs"]["0,0:B"], "9/49");
    // Wrong category.
    let o = delannoy(&["compose", "--cat", "2", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let bad = scratch("bad.json", &id.replace("0,0:B", "0,0:LX"));
    let o = delannoy(&["compose", "--cat", "1", bad.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("data.coeffs"));
}

#[test]
fn functor_build_apply_check() {
    let o = delannoy(&["functor", "build", "--source", "2", "--target", "mu1", "sum(R,1)"]);
    assert_eq!(o.status.code(), Some(0));
    let f = scratch("phi0.json", &stdout(&o));
    let o = delannoy(&["functor", "apply", f.to_str().unwrap(), "--object", "2"]);
    assert_eq!(stdout(&o).trim(), "[(2), (1)]");
    let o = delannoy(&["functor", "check", f.to_str().unwrap(), "--bound", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("faithful: PASS"));
    let o = delannoy(&["functor", "build", "--source", "1", "--target", "mu1", "sum(R,1)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn order_eval() {
    let o = delannoy(&["order", "eval", "tup(R,2)"]);
    assert!(stdout(&o).contains("orbits 1"));
    let o = delannoy(&["--json", "order", "eval", "sum(R@1,R@2)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["data"]["carrier"]["shape"], 2);
}

#[test]
fn field_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_delannoy"))
        .args(["profile", "--ambient", "mu1", "tup(R,2)"])
        .env("DELANNOY_FIELD", "F2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dim 1"), "{}", stdout(&o));
}

#[test]
fn scenarios_pass() {
    for name in ["two-envelopes", "dim0-square", "delannoy-dims", "measure-table"] {
        let o = delannoy(&["scenario", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(!stdout(&o).contains("[FAIL]"));
    }
}

#[test]
fn selftest_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_delannoy"))
            .args(["selftest", "--depth", "1"])
            .env("RAYON_NUM_THREADS", threads)
            .env_remove("DELANNOY_FIELD")
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("4");
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn selftest_reports_the_literal_power_rule() {
    let o = delannoy(&["selftest", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let fails: Vec<String> = stdout(&o).lines().filter(|l| l.starts_with("[FAIL]")).map(String::from).collect();
    assert_eq!(fails.len(), 1, "{fails:?}");
    assert!(fails[0].starts_with("[FAIL] lambda:"));
}
