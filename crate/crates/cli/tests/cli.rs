use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn nzflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nzflow")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn named(dir: &Path, name: &str) -> PathBuf {
    let p = dir.join(format!("{}.sg", name.replace(['(', ')'], "")));
    let o = nzflow(&["generate", "--named", name, "-o", p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn prism_synthesize_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = named(dir.path(), "prism-neg");
    let f = dir.path().join("f.txt");
    let c = dir.path().join("c.txt");
    let o = nzflow(&["synthesize", s(&g), "-o", s(&f), "--cert", s(&c), "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("route construction"));
    let o = nzflow(&["verify", s(&g), s(&f), "--k", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "accept");
    let o = nzflow(&["replay", s(&g), s(&c)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("replay ok"));
}

#[test]
fn zero_flow_is_rejected_by_edge() {
    let dir = tempfile::tempdir().unwrap();
    let g = named(dir.path(), "prism-neg");
    let f = dir.path().join("f.txt");
    assert!(nzflow(&["synthesize", s(&g), "-o", s(&f)]).status.success());
    let text = fs::read_to_string(&f).unwrap();
    // every boundary vanishes, so the zero-value clause reports
    let zeros: String = text.lines().map(|l| format!("{} 0\n", l.split(' ').next().unwrap())).collect();
    fs::write(&f, zeros).unwrap();
    let o = nzflow(&["verify", s(&g), s(&f), "--k", "8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("reject: edge 0 carries zero"), "{}", stderr(&o));
}

#[test]
fn fish_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let g = named(dir.path(), "fish(0)");
    let o = nzflow(&["analyze", s(&g)]);
    assert!(o.status.success());
    let out = stdout(&o);
    for line in ["balance unbalanced", "fragile yes", "fish recognized"] {
        assert!(out.contains(line), "missing `{line}` in\n{out}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let fish = named(dir.path(), "fish(1)");
    // not 3-edge-connected
    assert_eq!(nzflow(&["synthesize", s(&fish)]).status.code(), Some(3));
    let k4 = named(dir.path(), "k4");
    assert_eq!(nzflow(&["synthesize", s(&k4), "--no-fallback"]).status.code(), Some(3));
    let o = nzflow(&["synthesize", s(&k4)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("route oracle-k6"));
    let bad = dir.path().join("bad.sg");
    fs::write(&bad, "sg 1\nv 2\ne 0 0 5 +\n").unwrap();
    assert_eq!(nzflow(&["analyze", s(&bad)]).status.code(), Some(2));
    assert_eq!(nzflow(&["analyze", "/nonexistent.sg"]).status.code(), Some(2));
    assert_eq!(nzflow(&["verify", s(&k4)]).status.code(), Some(2));
}

#[test]
fn oracle_answers() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = named(dir.path(), "k4");
    let o = nzflow(&["oracle", s(&k4), "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("yes"));
    // K4 has no nowhere-zero 3-flow
    let o = nzflow(&["oracle", s(&k4), "--k", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "no");
}

#[test]
fn generate_is_seeded() {
    let a = nzflow(&["generate", "--n", "10", "--seed", "4", "--require-2-neg"]);
    let b = nzflow(&["generate", "--n", "10", "--seed", "4", "--require-2-neg"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("sg 1\nv 10\n"));
    assert_eq!(nzflow(&["generate", "--n", "10"]).status.code(), Some(2));
}

#[test]
fn tampered_certificate_fails_replay() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.sg");
    assert!(nzflow(&["generate", "--n", "10", "--seed", "2", "--require-2-neg", "-o", s(&g)]).status.success());
    let c = dir.path().join("c.txt");
    assert!(nzflow(&["synthesize", s(&g), "--cert", s(&c)]).status.success());
    let text = fs::read_to_string(&c).unwrap();
    let line = text.lines().find(|l| l.starts_with("final ")).unwrap().to_string();
    let v: i64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    let head = line.rsplit_once(' ').unwrap().0;
    fs::write(&c, text.replacen(&line, &format!("{head} {}", -v), 1)).unwrap();
    let o = nzflow(&["replay", s(&g), s(&c)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn selftest_small() {
    let o = nzflow(&["selftest", "--max-n", "6", "--samples", "6", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains(" pass ")).count(), 3);
}
