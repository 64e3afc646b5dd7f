use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use safegen::arena::{read_trace, Verdict};
use safegen::cli::{main_with_args, trace_path, verdict_path, EXIT_ERROR, EXIT_MISMATCH};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with_args(
        std::iter::once("safegen").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn scenario(name: &str) -> String {
    scenarios().join(name).display().to_string()
}

fn write_scenario(dir: &Path, body: &str) -> String {
    let p = dir.join("s.toml");
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

const KM_SMALL: &str = r#"
version = 1
name = "small"
game = "sg"
horizon = 60
window = 10

[true_collection]
languages = ["I", "O"]

[pair]
k = "O"
h = "Fin{}"

[adversary]
kind = "enumerator"

[learner]
kind = "km"
"#;

#[test]
fn run_writes_trace_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let (code, stdout, _) = run(&[
        "run",
        &scenario("km.toml"),
        "--out",
        &out,
        "--expect",
        "converged",
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("km"));
    let trace = fs::File::open(trace_path(dir.path(), "km")).unwrap();
    let records = read_trace(std::io::BufReader::new(trace)).unwrap();
    assert_eq!(records.len(), 300);
    let v: Verdict =
        serde_json::from_str(&fs::read_to_string(verdict_path(dir.path(), "km")).unwrap()).unwrap();
    assert!(v.converged);
    assert_eq!(v.horizon, 300);
}

#[test]
fn expectation_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let (code, _, _) = run(&["run", "builtin:km", "--out", &out, "--expect", "failed"]);
    assert_eq!(code, EXIT_MISMATCH);
}

#[test]
fn battery_runs_every_member() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let (code, stdout, _) = run(&["run", &scenario("naive_vs_reduction.toml"), "--out", &out]);
    assert_eq!(code, 0);
    assert!(stdout.contains("naive_li") && stdout.contains("reduction_li"));
    for name in ["naive_li", "reduction_li"] {
        assert!(trace_path(dir.path(), name).exists(), "{name}");
        assert!(verdict_path(dir.path(), name).exists(), "{name}");
    }
}

#[test]
fn overrides_change_the_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let (code, _, err) = run(&[
        "run",
        "builtin:km",
        "--out",
        &out,
        "--horizon-override",
        "80",
        "--window-override",
        "20",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: Verdict =
        serde_json::from_str(&fs::read_to_string(verdict_path(dir.path(), "km")).unwrap()).unwrap();
    assert_eq!((v.horizon, v.window), (80, 20));
    let (code, _, _) = run(&[
        "run",
        "builtin:km",
        "--out",
        &out,
        "--horizon-override",
        "10",
        "--window-override",
        "20",
    ]);
    assert_eq!(code, EXIT_ERROR);
}

#[test]
fn malformed_scenarios_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out").display().to_string();
    let cases = [
        KM_SMALL.replace(r#"["I", "O"]"#, r#"["I", "Y("]"#),
        KM_SMALL.replace("version = 1", "version = 9"),
        KM_SMALL.replace("window = 10", "window = 10\nbogus = 1"),
        KM_SMALL.replace("window = 10", "window = 60"),
        KM_SMALL.replace("kind = \"km\"", "kind = \"oracle\""),
        KM_SMALL.replace("game = \"sg\"", "game = \"si\""),
        KM_SMALL.replace("kind = \"enumerator\"", "kind = \"phased_id\""),
    ];
    for body in &cases {
        let path = write_scenario(dir.path(), body);
        let (code, stdout, err) = run(&["run", &path, "--out", &out]);
        assert_eq!(code, EXIT_ERROR, "{body}\n{stdout}");
        assert!(err.starts_with("error:"), "{err}");
    }
    let (code, _, _) = run(&["run", "builtin:nope", "--out", &out]);
    assert_eq!(code, EXIT_ERROR);
    let (code, _, _) = run(&["run", "/no/such/file.toml", "--out", &out]);
    assert_eq!(code, EXIT_ERROR);
}

#[test]
fn replay_reproduces_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), KM_SMALL);
    let out = dir.path().join("out");
    let (code, _, _) = run(&["run", &path, "--out", &out.display().to_string()]);
    assert_eq!(code, 0);
    let trace = trace_path(&out, "small").display().to_string();
    let verdict = verdict_path(&out, "small").display().to_string();
    let (code, stdout, err) = run(&["replay", &path, &trace, "--verdict", &verdict]);
    assert_eq!(code, 0, "{err}");
    assert!(stdout.contains("matches"));

    // Flip the correctness of the last step by rewriting its output.
    let text = fs::read_to_string(&trace).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let mut last: serde_json::Value = serde_json::from_str(lines.last().unwrap()).unwrap();
    last["output"] = serde_json::json!("bottom");
    last["value"] = serde_json::Value::Null;
    *lines.last_mut().unwrap() = last.to_string();
    fs::write(&trace, lines.join("\n") + "\n").unwrap();
    let (code, stdout, _) = run(&["replay", &path, &trace, "--verdict", &verdict]);
    assert_eq!(code, EXIT_MISMATCH, "{stdout}");

    fs::write(&trace, "{not json\n").unwrap();
    let (code, _, _) = run(&["replay", &path, &trace]);
    assert_eq!(code, EXIT_ERROR);
}

#[test]
fn check_algebra_reports_and_catches_bugs() {
    let (code, stdout, _) = run(&["check-algebra", "--count", "0"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("ok: 0 cases"));
    let (code, stdout, _) = run(&["check-algebra", "--seed", "5", "--count", "50"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("50 cases"));
    for bug in ["union", "difference", "cardinality"] {
        let (code, stdout, _) = run(&["check-algebra", "--count", "200", "--inject-bug", bug]);
        assert_eq!(code, EXIT_MISMATCH, "{bug}");
        assert!(stdout.starts_with("counterexample"));
    }
    let (code, _, _) = run(&["check-algebra", "--inject-bug", "nothing"]);
    assert_eq!(code, EXIT_ERROR);
}

#[test]
fn demos_list_and_run() {
    let (code, stdout, _) = run(&["demo", "--list"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), safegen::demos::DEMOS.len());
    let (code, stdout, _) = run(&["demo", "km"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("demo km\n"));
    let (code, _, err) = run(&["demo", "nope"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("unknown demo"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).0, EXIT_ERROR);
    assert_eq!(run(&["frobnicate"]).0, EXIT_ERROR);
    assert_eq!(run(&["run"]).0, EXIT_ERROR);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn binary_forwards_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_safegen");
    let ok = Command::new(bin)
        .args(["check-algebra", "--count", "3"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("3 cases"));
    let bad = Command::new(bin).args(["demo", "nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_ERROR));
    assert!(!bad.stderr.is_empty());
}
