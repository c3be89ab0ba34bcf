//! Playing a whole tournament and writing its artifacts.

use std::fmt::Write as _;
use std::path::Path;

use dragonfish_core::search::mix_seed;
use dragonfish_core::{play_game_with, AgentKind, GameOptions, GameRecord, Outcome};
use rayon::prelude::*;

use crate::swiss::{pair_round, Entrant, GameResult, TournamentState};
use crate::Error;

/// Search limit for entrants that do not pin their own depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Limit {
    Depth(u32),
    TimeMs(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TournamentConfig {
    pub rounds: u32,
    pub limit: Limit,
    pub seed: u64,
    pub opening_plies: u32,
}

/// Random plies opening each game, so that repeated pairings of two
/// deterministic searchers do not replay the same game.
pub const DEFAULT_OPENING_PLIES: u32 = 2;

impl TournamentConfig {
    pub fn new(rounds: u32, limit: Limit, seed: u64) -> TournamentConfig {
        TournamentConfig { rounds, limit, seed, opening_plies: DEFAULT_OPENING_PLIES }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArchivedGame {
    pub round: u32,
    pub table: usize,
    pub record: GameRecord,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TournamentOutcome {
    pub state: TournamentState,
    pub games: Vec<ArchivedGame>,
}

fn apply_limit(entrant: &Entrant, limit: Limit) -> Entrant {
    let mut agent = entrant.agent.clone();
    if agent.kind == AgentKind::Minimax && agent.max_depth.is_none() {
        match limit {
            Limit::Depth(d) => agent.max_depth = Some(d),
            Limit::TimeMs(ms) => agent.time_budget_ms = ms,
        }
    }
    Entrant { name: entrant.name.clone(), agent }
}

/// Game seed of table `table` in round `round` (counted from 1).
pub fn game_seed(seed: u64, round: u32, table: usize) -> u64 {
    mix_seed(mix_seed(seed, round as u64), table as u64)
}

/// Plays `config.rounds` Swiss rounds. Games of a round run in parallel;
/// the round is scored only once all of them have finished.
pub fn run_tournament(entrants: &[Entrant], config: &TournamentConfig) -> Result<TournamentOutcome, Error> {
    if let Limit::Depth(0) | Limit::TimeMs(0) = config.limit {
        return Err(Error::Config("search limit must be positive".into()));
    }
    let entrants: Vec<Entrant> = entrants.iter().map(|e| apply_limit(e, config.limit)).collect();
    let mut state = TournamentState::new(entrants)?;
    let options = GameOptions { opening_plies: config.opening_plies };
    let mut games = Vec::new();
    for round in 1..=config.rounds {
        let pairings = pair_round(&state)?;
        let records: Vec<GameRecord> = pairings
            .pairs
            .par_iter()
            .enumerate()
            .map(|(table, p)| {
                let gold = &state.standings[p.gold].entrant.agent;
                let scarlet = &state.standings[p.scarlet].entrant.agent;
                play_game_with(gold, scarlet, game_seed(config.seed, round, table), &options)
            })
            .collect::<Result<_, _>>()?;
        let results = pairings
            .pairs
            .iter()
            .zip(&records)
            .map(|(&pairing, r)| GameResult {
                pairing,
                result: r.result,
                termination: r.termination,
                plies: r.plies(),
            })
            .collect();
        state.record_round(&pairings, results)?;
        log::info!("round {round}/{} done", config.rounds);
        games.extend(records.into_iter().enumerate().map(|(table, record)| ArchivedGame { round, table, record }));
    }
    Ok(TournamentOutcome { state, games })
}

const STANDINGS_HEADER: [&str; 5] = ["Agent", "Wins", "Losses", "Draws", "Elo"];

impl TournamentOutcome {
    /// Rows in final order: Elo descending, entrant index on ties.
    pub fn standings_rows(&self) -> Vec<[String; 5]> {
        let s = &self.state.standings;
        let mut ids: Vec<usize> = (0..s.len()).collect();
        ids.sort_by(|&a, &b| s[b].elo.total_cmp(&s[a].elo).then(a.cmp(&b)));
        ids.iter()
            .map(|&i| {
                let e = &s[i];
                [
                    e.entrant.name.clone(),
                    e.wins.to_string(),
                    e.losses.to_string(),
                    e.draws.to_string(),
                    format!("{:.2}", e.elo),
                ]
            })
            .collect()
    }

    /// Tab-separated standings with a header row.
    pub fn standings_tsv(&self) -> String {
        let mut out = STANDINGS_HEADER.join("\t") + "\n";
        for row in self.standings_rows() {
            out += &row.join("\t");
            out.push('\n');
        }
        out
    }

    /// The same table with aligned columns, for people.
    pub fn standings_pretty(&self) -> String {
        let rows = self.standings_rows();
        let name_width = rows.iter().map(|r| r[0].len()).chain([5]).max().unwrap_or(5);
        let mut out = format!("{:<name_width$}  {:>6}  {:>6}  {:>6}  {:>8}\n", "Agent", "Wins", "Losses", "Draws", "Elo");
        for r in rows {
            let _ = writeln!(out, "{:<name_width$}  {:>6}  {:>6}  {:>6}  {:>8}", r[0], r[1], r[2], r[3], r[4]);
        }
        out
    }

    /// One line per game: round, table, gold, scarlet, result, termination,
    /// plies.
    pub fn results_tsv(&self) -> String {
        let s = &self.state.standings;
        let mut out = String::from("round\ttable\tgold\tscarlet\tresult\ttermination\tplies\n");
        for log in &self.state.log {
            for (table, r) in log.results.iter().enumerate() {
                let result = match r.result {
                    Outcome::GoldWins => "1-0",
                    Outcome::ScarletWins => "0-1",
                    _ => "1/2-1/2",
                };
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    log.round,
                    table,
                    s[r.pairing.gold].entrant.name,
                    s[r.pairing.scarlet].entrant.name,
                    result,
                    r.termination.as_str(),
                    r.plies
                );
            }
            if let Some(b) = log.bye {
                let _ = writeln!(out, "{}\t-\t{}\t-\tbye\t-\t0", log.round, s[b].entrant.name);
            }
        }
        out
    }

    /// Writes `standings.tsv`, `results.tsv` and one record per game under
    /// `games/`.
    pub fn write_artifacts(&self, dir: &Path) -> std::io::Result<()> {
        let games_dir = dir.join("games");
        std::fs::create_dir_all(&games_dir)?;
        std::fs::write(dir.join("standings.tsv"), self.standings_tsv())?;
        std::fs::write(dir.join("results.tsv"), self.results_tsv())?;
        for g in &self.games {
            std::fs::write(games_dir.join(format!("round-{:03}-table-{}.txt", g.round, g.table)), g.record.to_text())?;
        }
        Ok(())
    }
}
