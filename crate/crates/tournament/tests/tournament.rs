use std::path::Path;

use dragonfish_core::{AgentConfig, Color, ThetaVector};
use dragonfish_tournament::{
    default_field, load_entrants, parse_entrants, run_tournament, Entrant, Limit, TournamentConfig,
    INITIAL_RATING,
};

fn randoms(n: u64) -> Vec<Entrant> {
    (1..=n).map(|s| Entrant { name: format!("Random-{s}"), agent: AgentConfig::random(s) }).collect()
}

#[test]
fn small_run_conserves_results() {
    let mut entrants = randoms(2);
    entrants.push(Entrant { name: "Minimax".into(), agent: AgentConfig::minimax(ThetaVector::identity(), 1) });
    let config = TournamentConfig::new(4, Limit::Depth(1), 3);
    let out = run_tournament(&entrants, &config).unwrap();
    let s = &out.state.standings;
    assert_eq!(out.state.round, 4);
    assert_eq!(out.games.len(), 4);
    assert_eq!(s.iter().map(|x| x.wins).sum::<u32>(), s.iter().map(|x| x.losses).sum::<u32>());
    assert_eq!(s.iter().map(|x| x.draws).sum::<u32>() % 2, 0);
    assert_eq!(s.iter().map(|x| x.elo).sum::<f64>(), 3.0 * INITIAL_RATING);
    for x in s {
        assert_eq!(x.games() + x.byes, 4);
    }
    let tsv = out.standings_tsv();
    assert!(tsv.starts_with("Agent\tWins\tLosses\tDraws\tElo\n"));
    assert_eq!(tsv.lines().count(), 4);
    assert!(out.results_tsv().lines().any(|l| l.contains("\tbye\t")));
}

#[test]
fn reruns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut entrants = randoms(2);
    entrants.push(Entrant { name: "Pre".into(), agent: AgentConfig::minimax(ThetaVector::identity(), 1) });
    entrants.push(Entrant { name: "Pre-2".into(), agent: AgentConfig::minimax(ThetaVector::identity(), 1) });
    let config = TournamentConfig::new(3, Limit::Depth(1), 7);
    let mut files = Vec::new();
    for run in 0..2 {
        let out = run_tournament(&entrants, &config).unwrap();
        let d = dir.path().join(run.to_string());
        out.write_artifacts(&d).unwrap();
        let mut contents = Vec::new();
        for entry in walk(&d) {
            contents.push((entry.strip_prefix(&d).unwrap().to_path_buf(), std::fs::read(&entry).unwrap()));
        }
        contents.sort();
        files.push(contents);
    }
    assert_eq!(files[0].len(), 2 + 6);
    assert_eq!(files[0], files[1]);
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn random_field_is_fair() {
    // 4 random agents over 100 rounds: 200 games, 100 per agent.
    let out = run_tournament(&randoms(4), &TournamentConfig::new(100, Limit::Depth(1), 11)).unwrap();
    // 99% two-sided binomial bound; draws only shrink the variance.
    let z = 2.576;
    for s in &out.state.standings {
        let n = s.games() as f64;
        let rate = s.score / n;
        assert!((rate - 0.5).abs() <= z * (0.25 / n).sqrt(), "{}: {rate}", s.entrant.name);
    }
    let gold_points: f64 = out.games.iter().map(|g| g.record.result.score_for(Color::Gold).unwrap()).sum();
    let n = out.games.len() as f64;
    assert_eq!(n, 200.0);
    assert!((gold_points / n - 0.5).abs() <= z * (0.25 / n).sqrt());
}

#[test]
fn limit_fills_unpinned_depths_only() {
    let text = r#"
[[entrant]]
name = "Free"
kind = "minimax"

[[entrant]]
name = "Pinned"
kind = "minimax"
preset = "gygax"
depth = 1

[[entrant]]
name = "Random-9"
kind = "random"
seed = 9
"#;
    let entrants = parse_entrants(text, Path::new(".")).unwrap();
    assert_eq!(entrants.len(), 3);
    assert_eq!(entrants[0].agent.max_depth, None);
    assert_eq!(entrants[1].agent.max_depth, Some(1));
    assert_eq!(entrants[2].agent.rng_seed, 9);
    let out = run_tournament(&entrants, &TournamentConfig::new(1, Limit::Depth(2), 1)).unwrap();
    let depths: Vec<_> = out.state.standings.iter().map(|s| s.entrant.agent.max_depth).collect();
    assert_eq!(depths, vec![Some(2), Some(1), None]);
}

#[test]
fn bad_entrant_files() {
    let base = Path::new(".");
    assert!(parse_entrants("[[entrant]]\nname = \"x\"\nkind = \"oracle\"\n", base).is_err());
    assert!(parse_entrants("[[entrant]]\nname = \"x\"\nkind = \"random\"\ndepth = 2\n", base).is_err());
    assert!(parse_entrants("[[entrant]]\nname = \"x\"\nkind = \"minimax\"\npreset = \"nobody\"\n", base).is_err());
    let dup = "[[entrant]]\nname = \"x\"\nkind = \"random\"\n[[entrant]]\nname = \"x\"\nkind = \"random\"\n";
    assert!(parse_entrants(dup, base).is_err());
    assert!(load_entrants(Path::new("/nonexistent/entrants.toml")).is_err());
}

#[test]
fn theta_paths_resolve_next_to_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let theta = ThetaVector::identity().scaled(2.0);
    theta.save(&dir.path().join("post.theta")).unwrap();
    let cfg = dir.path().join("field.toml");
    std::fs::write(&cfg, "[[entrant]]\nname = \"Post\"\nkind = \"minimax\"\ntheta = \"post.theta\"\n").unwrap();
    let entrants = load_entrants(&cfg).unwrap();
    assert_eq!(entrants[0].agent.weights.theta().unwrap(), theta);
}

#[test]
fn default_field_has_eight_named_agents() {
    let field = default_field(ThetaVector::identity());
    let names: Vec<_> = field.iter().map(|e| e.name.as_str()).collect();
    assert_eq!(
        names,
        ["Dragonfish-post", "Dragonfish-pre", "Gygax", "Jackman", "Random-1", "Random-2", "Random-3", "Random-4"]
    );
    assert!(field.iter().all(|e| e.agent.max_depth.is_none()));
}
