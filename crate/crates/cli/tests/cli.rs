use std::process::Command;

fn posgame() -> Command {
    Command::new(env!("CARGO_BIN_EXE_posgame"))
}

#[test]
fn invariants_of_k4() {
    let out = posgame().args(["invariants", "k4"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("m            3/2"), "{text}");
    assert!(text.contains("m2           5/2"), "{text}");
}

#[test]
fn solve_prints_value_and_transcript() {
    let out = posgame().args(["solve", "--board", "k4", "--pattern", "k3", "--b", "1"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("value = 0\n# posgame transcript v1\n"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with('R')).count(), 3);
}

#[test]
fn play_writes_a_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    let out = posgame()
        .args(["play", "--waiter", "random", "--client", "greedy-client", "--board", "k6", "--pattern", "k3", "--b", "2"])
        .arg("--transcript")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("board=complete:6"));
}

#[test]
fn sweep_is_byte_identical_under_the_same_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.txt");
    std::fs::write(&cfg, "pattern = p3\nboard = complete\nn = 10, 12\nb = 1, 2\nseeds = 0, 1\nwaiter = random\nclient = potential-client\n")
        .unwrap();
    let run = |seed: &str| posgame().env("POSGAME_SEED", seed).arg("sweep").arg("--config").arg(&cfg).output().unwrap();
    let a = run("5");
    let b = run("5");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 9);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.txt");
    std::fs::write(&cfg, "pattern = p3\nboard = complete\nn =\nb = 1\nwaiter = random\nclient = random\n").unwrap();
    assert_eq!(posgame().arg("sweep").arg("--config").arg(&cfg).status().unwrap().code(), Some(2));
    assert_eq!(posgame().args(["invariants", "zz"]).status().unwrap().code(), Some(2));
    let status = posgame()
        .args(["play", "--waiter", "min-degree-waiter", "--client", "random", "--board", "k4", "--pattern", "k3"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // the clique Waiter checks the board shape on its first offer
    let status = posgame()
        .args(["play", "--waiter", "clique:4,1", "--client", "random", "--board", "blowup:k3:3", "--pattern", "k3", "--canonical"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn randlab_rows() {
    let out = posgame().args(["randlab", "--pattern", "k3", "--n", "5", "--p", "0.5", "--seeds", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "n,p,m,seed,copies_found,family_size,p1,p2,p3,p4,p5");
}
