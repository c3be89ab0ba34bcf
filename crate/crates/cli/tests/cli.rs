use std::path::Path;
use std::process::{Command, Output};

fn dragonfish(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dragonfish"))
        .args(args)
        .env("DRAGONFISH_OUT", out)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn perft_passthrough() {
    let dir = tempfile::tempdir().unwrap();
    let o = dragonfish(&["perft", "--depth", "2"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o), "depth\tnodes\n1\t78\n2\t6084\n");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| dragonfish(args, dir.path()).status.code().unwrap();
    assert_eq!(code(&["perft", "--bogus"]), 2);
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["perft", "--depth", "0"]), 2);
    assert_eq!(code(&["play", "--depth", "1", "--time-ms", "5"]), 2);
    assert_eq!(code(&["play", "--gold", "wizard"]), 2);
    assert_eq!(code(&["evolve", "--games-per-candidate", "3"]), 2);

    let bad = dir.path().join("bad.theta");
    std::fs::write(&bad, "1\n2\nthree\n").unwrap();
    assert_eq!(code(&["eval-pos", "--theta", bad.to_str().unwrap()]), 3);
    assert_eq!(code(&["perft", "--dpn", "not a position"]), 3);

    assert_eq!(code(&["eval-pos", "--moves", "2g2-2g5"]), 4);
    let lonely = dir.path().join("lonely.toml");
    std::fs::write(&lonely, "[[entrant]]\nname = \"a\"\nkind = \"random\"\n").unwrap();
    assert_eq!(code(&["tournament", "--entrants", lonely.to_str().unwrap()]), 4);

    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn eval_pos_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = dragonfish(&["eval-pos"], dir.path());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 13);
    assert_eq!(lines[0], "component\traw\tweight\tweighted");
    assert_eq!(lines[1], "material\t0\t1\t0");
    assert_eq!(lines[12], "total\t-\t-\t0");

    let pretty = stdout(&dragonfish(&["eval-pos", "--moves", "2g2-2g3", "--pretty"], dir.path()));
    assert!(pretty.lines().next().unwrap().starts_with("component  "));
    assert!(!pretty.contains('\t'));
}

#[test]
fn play_writes_records_under_out() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["play", "--gold", "identity", "--scarlet", "random:4", "--depth", "1", "--games", "2", "--seed", "5"];
    let a = dragonfish(&args, &dir.path().join("a"));
    let b = dragonfish(&args, &dir.path().join("b"));
    assert!(a.status.success());
    assert_eq!(stdout(&a).replace("/a/", "/b/"), stdout(&b));
    let rows: Vec<String> = stdout(&a).lines().map(String::from).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("game\tseed\tresult"));
    for g in ["game-001.txt", "game-002.txt"] {
        let ra = std::fs::read_to_string(dir.path().join("a/games").join(g)).unwrap();
        let rb = std::fs::read_to_string(dir.path().join("b/games").join(g)).unwrap();
        assert_eq!(ra, rb);
        dragonfish_core::GameRecord::from_text(&ra).unwrap();
    }
}

#[test]
fn evolve_smoke_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["evolve", "--generations", "1", "--lambda", "4", "--games-per-candidate", "2", "--depth", "1"];
    let o = dragonfish(&args, dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let theta = dragonfish_core::ThetaVector::load(&dir.path().join("theta.txt")).unwrap();
    assert!(theta.as_slice().iter().all(|x| x.is_finite()));
    let cp = dragonfish_cmaes::Checkpoint::load(&dir.path().join("checkpoint.json")).unwrap();
    assert_eq!(cp.history.len(), 1);
    let history = std::fs::read_to_string(dir.path().join("evolution.tsv")).unwrap();
    assert_eq!(history.lines().count(), 2);

    // Rerunning the finished run resumes from the checkpoint and changes nothing.
    let again = dragonfish(&args, dir.path());
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn tournament_reruns_match() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["tournament", "--rounds", "5", "--depth", "2", "--seed", "7"];
    let a = dragonfish(&args, &dir.path().join("a"));
    let b = dragonfish(&args, &dir.path().join("b"));
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let read = |d: &str| std::fs::read(dir.path().join(d).join("standings.tsv")).unwrap();
    assert_eq!(read("a"), read("b"));
    assert_eq!(stdout(&a), stdout(&b));
    let table = stdout(&a);
    assert!(table.starts_with("Agent\tWins\tLosses\tDraws\tElo\n"));
    assert_eq!(table.lines().count(), 9);
    assert_eq!(std::fs::read_dir(dir.path().join("a/games")).unwrap().count(), 20);
}
