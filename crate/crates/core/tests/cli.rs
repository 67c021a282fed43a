use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewhh")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("skewhh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn group_command_reports_geometry() {
    let o = run(&["group", &fixture("reflect3_group.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("order 4\n"), "{text}");
    assert!(text.contains("omega d1^d3"), "{text}");
    let o = run(&["--json", "group", &fixture("diag5_group.json")]);
    let js: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let codims: Vec<u64> = js["elements"].as_array().unwrap().iter().map(|e| e["codim"].as_u64().unwrap()).collect();
    let mut sorted = codims.clone();
    sorted.sort();
    assert_eq!(sorted, vec![0, 2, 2, 4]);
}

#[test]
fn cohomology_command_counts_trivial_group() {
    let o = run(&["--json", "cohomology", &fixture("trivial_k2.json"), "--p", "1", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let js: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // C(3, 1) * C(2, 1)
    assert_eq!(js["classes"].as_array().unwrap().len(), 6);
    assert_eq!(js["directCount"], 6);
}

#[test]
fn bracket_command_on_diagonal_pair() {
    let o = run(&["bracket", &fixture("diag5_group.json"), &fixture("diag5_x.json"), &fixture("diag5_y.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("d1^d2^d4^d5"), "{text}");
    assert!(text.contains("D[2] x D[2] -> D[4]"), "{text}");
}

#[test]
fn bracket_command_rejects_non_invariant_input() {
    let o = run(&["bracket", &fixture("reflect3_group.json"), &fixture("reflect3_x.json"), &fixture("reflect3_y.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--reynolds"));
    // averaging kills both inputs, leaving the zero bracket
    let o = run(&["bracket", &fixture("reflect3_group.json"), &fixture("reflect3_x.json"), &fixture("reflect3_y.json"), "--reynolds"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_suites_succeed() {
    for args in [
        vec!["verify", "appendix", "--max", "4"],
        vec!["verify", "homotopy", "--dim", "2", "--t", "2"],
        vec!["verify", "schouten", "--dim", "2", "--pairs", "10"],
        vec!["verify", "examples"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["group", "/nonexistent/file.json"]).status.code(), Some(2));
    let bad = scratch("bad_group.json", r#"{"dimension": 2, "generators": [[["1", "x"], ["0", "1"]]]}"#);
    assert_eq!(run(&["group", &bad]).status.code(), Some(2));
    let singular = scratch("singular.json", r#"{"dimension": 2, "generators": [[["1", "1"], ["1", "1"]]]}"#);
    assert_eq!(run(&["group", &singular]).status.code(), Some(2));
    let infinite = scratch("infinite.json", r#"{"dimension": 2, "generators": [[["1", "1"], ["0", "1"]]], "bound": 50}"#);
    assert_eq!(run(&["group", &infinite]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_skewhh")).args(["verify", "examples"]).env("SKEWHH_THREADS", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["--json", "cohomology", &fixture("rot4_k3.json"), "--p", "2", "--m", "2"];
    let one = Command::new(env!("CARGO_BIN_EXE_skewhh")).args(args).env("SKEWHH_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_skewhh")).args(args).env("SKEWHH_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn help_exits_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
