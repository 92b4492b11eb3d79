use std::io::Write;
use std::process::{Command, Output};

use revpi_cli::state::{StateFile, TransitionView};
use revpi::verification::CheckReport;

fn revpi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revpi")).args(args).output().unwrap()
}

fn file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn steps_lists_the_three_first_steps() {
    let p = file("b<a>.0 | b(x).x<c>");
    let out = revpi(&["steps", "--semantics", "rpi", "--state", path(&p), "--dir", "fwd"]);
    assert!(out.status.success());
    let ts: Vec<TransitionView> = serde_json::from_slice(&out.stdout).unwrap();
    let texts: Vec<&str> = ts.iter().map(|t| t.text.as_str()).collect();
    assert_eq!(texts, ["fwd (1,*,*):b<a>", "fwd (1,*,*):b(x)", "fwd (1,*,*):tau"]);
    let again = revpi(&["steps", "--semantics", "rpi", "--state", path(&p), "--dir", "fwd"]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn step_chains_through_state_files() {
    let p = file("b<a>.0 | b(x).x<c>");
    let out = revpi(&["step", "--state", path(&p), "--dir", "fwd", "--id", "2"]);
    assert!(out.status.success());
    let s: StateFile = serde_json::from_slice(&out.stdout).unwrap();
    let next = file(std::str::from_utf8(&out.stdout).unwrap());
    let back = revpi(&["step", "--state", path(&next), "--dir", "bwd", "--id", "0"]);
    assert!(back.status.success());
    let s0: StateFile = serde_json::from_slice(&back.stdout).unwrap();
    assert_ne!(s, s0);
    assert_eq!(s0.state.to_string(), "b<a> | b(x).x<c>");
}

#[test]
fn out_of_range_step_exits_2() {
    let p = file("b<a>");
    let out = revpi(&["step", "--state", path(&p), "--id", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("index 5"));
}

#[test]
fn parse_errors_exit_nonzero() {
    let p = file("b<a.");
    let out = revpi(&["parse", path(&p)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 4"));
}

#[test]
fn trace_script_runs_and_reports_failures() {
    let s = file("semantics bs\nstart new a.(b<a> | c<a> | a(z))\nexpect fwd 2\nfwd 0\nfwd 0\nexpect bwd 1\n");
    let out = revpi(&["trace", "--script", path(&s), "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["trace"].as_array().unwrap().len(), 2);
    let bad = file("start b<a>\nfwd 3\n");
    let out = revpi(&["trace", "--script", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_loop_on_a_corpus_directory() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.pi"), "# depth: 3\nnew a.(b<a> | a(z))\n").unwrap();
    std::fs::write(dir.path().join("b.pi"), "b<a>.0 | b(x).x<c>\n").unwrap();
    let out = revpi(&["check", "loop", "--corpus", dir.path().to_str().unwrap(), "--depth", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: Vec<CheckReport> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r.entries == 2 && r.violations == 0 && r.passed()));
}
