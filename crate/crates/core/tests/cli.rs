//! End-to-end runs of the `splitgame` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splitgame")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("one.str"), "structure one { universe 2; rel P/1 { (0) } }").unwrap();
    fs::write(dir.path().join("two.str"), "structure two { universe 2; rel P/1 { (0) (1) } }").unwrap();
    fs::write(dir.path().join("twin.str"), "structure twin { universe 2; rel P/1 { (1) } }").unwrap();
    fs::write(dir.path().join("some.fml"), "exists x. P(x)").unwrap();
    fs::write(dir.path().join("all.fml"), "all x. P(x)").unwrap();
    dir
}

#[test]
fn check_exit_codes() {
    let d = setup();
    assert_eq!(code(&run(d.path(), &["check", "--structure", "one.str", "--formula", "some.fml"])), 0);
    assert_eq!(code(&run(d.path(), &["check", "--structure", "one.str", "--formula", "all.fml"])), 1);
    assert_eq!(code(&run(d.path(), &["check", "--structure", "missing.str", "--formula", "all.fml"])), 2);
}

#[test]
fn solve_reports_rank_and_winner() {
    let d = setup();
    let out = run(d.path(), &["solve", "--left", "one.str", "--right", "two.str", "--theta", "1", "--clock", "0"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("winner: DUPLICATOR"), "{text}");
    assert!(text.contains("rank: 1"), "{text}");
    let out = run(d.path(), &["solve", "--game", "dg", "--left", "one.str", "--right", "twin.str", "--theta", "1"]);
    assert!(stdout(&out).contains("rank: inf"), "{}", stdout(&out));
}

#[test]
fn distinguish_writes_a_separating_sentence() {
    let d = setup();
    let out = run(d.path(), &["distinguish", "--left", "two.str", "--right", "one.str", "--theta", "1", "--out", "sep.fml"]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&run(d.path(), &["check", "--structure", "two.str", "--formula", "sep.fml"])), 0);
    assert_eq!(code(&run(d.path(), &["check", "--structure", "one.str", "--formula", "sep.fml"])), 1);
    assert_eq!(code(&run(d.path(), &["distinguish", "--left", "one.str", "--right", "twin.str", "--theta", "2"])), 3);
}

#[test]
fn gen_then_classify() {
    let d = setup();
    let out = run(d.path(), &["gen", "--family", "unary", "--nmax", "2", "--out", "corpus"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(d.path(), &["classify", "--corpus", "corpus", "--theta", "1", "--clock", "1"]);
    assert_eq!(code(&out), 0);
    // sizes 1 and 2: the four classes are "all P", "no P" and the mixed 2-element one,
    // with the singletons merged into the matching uniform class
    assert_eq!(stdout(&out).lines().count(), 3, "{}", stdout(&out));
}

#[test]
fn verify_writes_json_lines() {
    let d = setup();
    let out = run(d.path(), &["verify", "--suite", "duality", "--jsonl", "dual.jsonl"]);
    assert_eq!(code(&out), 0);
    let json = fs::read_to_string(d.path().join("dual.jsonl")).unwrap();
    assert!(json.lines().next().unwrap().contains("\"passed\":true"));
    assert_eq!(code(&run(d.path(), &["verify", "--suite", "nonsense"])), 2);
}

#[test]
fn skolem_writes_a_substructure() {
    let d = setup();
    let out = run(d.path(), &["skolem", "--structure", "two.str", "--fragment", "some.fml", "--seed-elems", "0", "--out", "hull.str"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let hull = fs::read_to_string(d.path().join("hull.str")).unwrap();
    assert!(hull.contains("universe 1"), "{hull}");
}
