use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonassoc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn dim_examples() {
    let o = run(&["dim", "binary-perm", "1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dimension 5"));
    assert!(stdout(&run(&["dim", "magma", "1,1,1"])).contains("dimension 12"));
    assert!(stdout(&run(&["dim", "perm", "4", "--multilinear"])).contains("dimension 4"));
}

#[test]
fn dim_basis_lists_one_line_per_element() {
    let o = run(&["dim", "binary-perm", "2,1", "--basis"]);
    let lines: Vec<_> = stdout(&o).lines().skip(1).map(str::to_string).collect();
    assert_eq!(lines.len(), 2);
}

#[test]
fn degree_guard_and_usage_errors() {
    assert_eq!(
        run(&["dim", "binary-perm", "7", "--multilinear"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["dim", "nosuch", "1,1"]).status.code(), Some(2));
    assert_eq!(run(&["dim", "perm", "x,y"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let o = run(&["dim", "perm", "2", "--multilinear", "--max-degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_verdicts_and_exit_codes() {
    let o = run(&["check", "binary-perm", "((a*b)*c)*d = ((a*d)*b)*c"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["check", "magma", "a*b = b*a"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("residue: (a*b) - (b*a)"));
    let o = run(&["check", "perm", "(a*b"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error at"));
}

#[test]
fn check_linearizes_repeated_variables() {
    let o = run(&["check", "alternative", "(a*a)*b = a*(a*b)", "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let last = stdout(&o).lines().last().unwrap().to_string();
    let v: serde_json::Value = serde_json::from_str(&last).unwrap();
    assert_eq!(v["linearized"], true);
    assert_eq!(v["holds"], true);
}

#[test]
fn derived_examples() {
    let o = run(&[
        "derived",
        "perm",
        "minus",
        "4",
        "--candidates",
        "anticom,metabelian",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("generates: true"));
    let o = run(&["derived", "binary-perm", "minus", "3"]);
    assert!(stdout(&o).contains("kernel dimension 9"));
    let o = run(&["derived", "nap", "plus", "4", "--candidates", "comm"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["derived", "magma", "minus", "3", "--candidates", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn derived_candidates_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cands.txt");
    fs::write(&path, "# anticommutativity only\nanticom\n").unwrap();
    let o = run(&[
        "derived",
        "binary-perm",
        "minus",
        "4",
        "--candidates",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("generates: false"));
    fs::write(
        &path,
        "[a,b] = -[b,a]\nsquare-expansion\nleft-triple\nmetabelian-square\n",
    )
    .unwrap();
    let o = run(&[
        "derived",
        "binary-perm",
        "minus",
        "4",
        "--candidates",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = [
        "dim",
        "binary-perm",
        "4",
        "--alphabet",
        "2",
        "--basis",
        "--cache",
        cache,
    ];
    let first = run(&args);
    assert!(fs::read_dir(dir.path()).unwrap().count() >= 4);
    let second = run(&args);
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn threads_do_not_change_output() {
    let a = run(&[
        "derived",
        "binary-perm",
        "minus",
        "4",
        "--threads",
        "1",
        "--json",
        "-",
    ]);
    let b = run(&[
        "derived",
        "binary-perm",
        "minus",
        "4",
        "--threads",
        "4",
        "--json",
        "-",
    ]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn registry_file_adds_varieties() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.var");
    fs::write(&path, "variety flexible { (a,b,a) = 0; }").unwrap();
    let o = run(&[
        "dim",
        "flexible",
        "1,1,1",
        "--registry",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dimension 9"));
    fs::write(&path, "variety perm { free }").unwrap();
    let o = run(&["dim", "perm", "1,1", "--registry", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn repro_errors_and_json() {
    let o = run(&["repro", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("binary-perm-derived"));
    assert_eq!(run(&["repro"]).status.code(), Some(2));
}

#[test]
fn list_names_everything() {
    let s = stdout(&run(&["list"]));
    assert!(s.contains("binary-perm"));
    assert!(s.contains("square-expansion"));
    assert!(s.contains("nap-derived"));
}

#[test]
fn repro_suite_writes_one_record_per_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.jsonl");
    let o = run(&["repro", "nap-derived", "--json", path.to_str().unwrap()]);
    let text = fs::read_to_string(&path).unwrap();
    let records: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let summary = stdout(&o);
    assert_eq!(records.len() + 1, summary.lines().count());
    let all_pass = records.iter().all(|r| r["status"] == "pass");
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 1 }));
    for r in &records {
        let tag = if r["status"] == "pass" {
            "PASS"
        } else {
            "FAIL"
        };
        let name = format!("{tag}  nap-derived/{} ", r["name"].as_str().unwrap());
        assert!(summary.contains(&name), "{name}");
    }
}
