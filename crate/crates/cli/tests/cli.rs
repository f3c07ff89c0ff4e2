use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubesolve"))
}

fn problem(f: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(f)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn inversion_prints_agda() {
    let p = problem("inversion.cube");
    let o = run(&["solve", p.to_str().unwrap(), "--goal", "inv", "--theory", "demorgan"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("λ j → p (~ j)"), "{}", stdout(&o));
}

#[test]
fn missing_file_is_an_input_error() {
    let o = run(&["solve", "nonexistent.cube"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn syntax_errors_carry_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.cube");
    std::fs::write(&p, "p [i]\ngoal g [j] { j=0 -> p(1)\n").unwrap();
    let o = run(&["solve", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("3:1"), "{err}");
}

#[test]
fn json_report() {
    let p = problem("sq_to_comp.cube");
    let o = run(&["solve", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "solved");
    assert_eq!(v["depth"], 3);
    assert_eq!(v["open_sides"], serde_json::json!(["i=0", "i=1"]));
    let agda = v["agda"].as_str().unwrap();
    assert!(agda.contains("hfill") && agda.contains("inS"));
}

#[test]
fn eckmann_hilton_cube_has_six_faces() {
    let p = problem("eckmann_hilton.cube");
    let o = run(&["solve", p.to_str().unwrap(), "--goal", "eh_cube"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("eh_cube = λ i j k → hcomp"), "{out}");
    assert_eq!(out.matches(" = i").count(), 6);
    assert!(out.trim_end().ends_with("(q i k)"));
}

#[test]
fn output_is_reproducible() {
    let p = problem("associativity.cube");
    let a = run(&["solve", p.to_str().unwrap()]);
    let b = run(&["solve", p.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn all_lists_contortions() {
    let p = problem("diagonal.cube");
    let o = run(&["solve", p.to_str().unwrap(), "--all"]);
    assert!(stdout(&o).contains("1 contortion(s)\n  s(k, k)"));
}

#[test]
fn check_verifies_inline_solutions() {
    let p = problem("or_connection.cube");
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("or_square: ok"));

    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("wrong.cube");
    std::fs::write(&q, "p [i]\ngoal g [j] { j=0 -> p(1), j=1 -> p(0) }\n  := p(j)\n").unwrap();
    let o = run(&["check", q.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unsolved_goals_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("u.cube");
    std::fs::write(&p, "p [i]\nq [i]\ngoal g [j] theory=cartesian { j=0 -> p(0), j=1 -> q(1) }\n").unwrap();
    let o = run(&["solve", p.to_str().unwrap(), "--depth", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "unsolved");
}

#[test]
fn bench_prints_a_table() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["diagonal.cube", "inversion.cube", "or_connection.cube"] {
        std::fs::copy(problem(f), dir.path().join(f)).unwrap();
    }
    let o = run(&["bench", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().starts_with("file"));
    assert_eq!(out.lines().filter(|l| l.ends_with("yes")).count(), 5);
}

#[test]
fn gen_group_reads_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = bin()
        .args(["gen-group", "-", "--goal", "a a' = 1"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"generators: a, a', e\nrelations: a a' e, a' a e, e e e\ninverses: a a', e e\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("goal eq0 [i, k]"), "{out}");

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.cube");
    std::fs::write(&p, &out).unwrap();
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}
