//! Whole games between two agents and the text game-record format.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::board::{Color, Move, Position, QUIET_PLY_CAP, TOTAL_PLY_CAP};
use crate::error::{Error, Result};
use crate::movegen::{in_check, legal_moves, terminal_state, Outcome};
use crate::notation::{format_move, parse_legal};
use crate::search::{best_move, mix_seed, AgentConfig};

/// A searcher slower than this multiple of its budget forfeits.
pub const FORFEIT_FACTOR: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Checkmate,
    Stalemate,
    QuietPlyCap,
    TotalPlyCap,
    Forfeit(Color),
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Checkmate => "checkmate",
            Termination::Stalemate => "stalemate",
            Termination::QuietPlyCap => "quiet-ply-cap",
            Termination::TotalPlyCap => "total-ply-cap",
            Termination::Forfeit(Color::Gold) => "forfeit-gold",
            Termination::Forfeit(Color::Scarlet) => "forfeit-scarlet",
        }
    }

    pub fn parse(s: &str) -> Option<Termination> {
        Some(match s {
            "checkmate" => Termination::Checkmate,
            "stalemate" => Termination::Stalemate,
            "quiet-ply-cap" => Termination::QuietPlyCap,
            "total-ply-cap" => Termination::TotalPlyCap,
            "forfeit-gold" => Termination::Forfeit(Color::Gold),
            "forfeit-scarlet" => Termination::Forfeit(Color::Scarlet),
            _ => return None,
        })
    }
}

/// Extra knobs for [`play_game_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameOptions {
    /// Number of uniformly random plies played from the game seed before
    /// the agents take over.
    pub opening_plies: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameRecord {
    pub gold: String,
    pub scarlet: String,
    pub seed: u64,
    /// `depth` when both agents are depth capped, otherwise `time`.
    pub mode: String,
    pub opening_plies: u32,
    pub result: Outcome,
    pub termination: Termination,
    pub moves: Vec<Move>,
}

impl GameRecord {
    pub fn plies(&self) -> usize {
        self.moves.len()
    }

    pub fn final_position(&self) -> Position {
        let mut p = Position::initial();
        for mv in &self.moves {
            p.apply_in_place(mv);
        }
        p
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# dragonfish game record v1\n");
        let result = match self.result {
            Outcome::GoldWins => "gold",
            Outcome::ScarletWins => "scarlet",
            Outcome::Draw => "draw",
            Outcome::Ongoing => "ongoing",
        };
        let _ = writeln!(out, "gold: {}", self.gold);
        let _ = writeln!(out, "scarlet: {}", self.scarlet);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "mode: {}", self.mode);
        let _ = writeln!(out, "opening-plies: {}", self.opening_plies);
        let _ = writeln!(out, "result: {result}");
        let _ = writeln!(out, "termination: {}", self.termination.as_str());
        let _ = writeln!(out, "plies: {}", self.moves.len());
        out.push('\n');
        for mv in &self.moves {
            out.push_str(&format_move(mv));
            out.push('\n');
        }
        out
    }

    /// Parses [`GameRecord::to_text`] output, replaying every move from the
    /// initial position.
    pub fn from_text(text: &str) -> Result<GameRecord> {
        let err = |m: String| Error::Record(m);
        let mut header = std::collections::HashMap::new();
        let mut lines = text.lines();
        for line in lines.by_ref() {
            let line = line.trim();
            if line.is_empty() {
                break;
            }
            if line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once(':').ok_or_else(|| err(format!("bad header line {line:?}")))?;
            header.insert(k.trim().to_string(), v.trim().to_string());
        }
        let field = |k: &str| header.get(k).cloned().ok_or_else(|| err(format!("missing header field {k}")));
        let number = |k: &str| -> Result<u64> { field(k)?.parse().map_err(|_| err(format!("bad number in {k}"))) };
        let result = match field("result")?.as_str() {
            "gold" => Outcome::GoldWins,
            "scarlet" => Outcome::ScarletWins,
            "draw" => Outcome::Draw,
            "ongoing" => Outcome::Ongoing,
            other => return Err(err(format!("bad result {other:?}"))),
        };
        let termination =
            Termination::parse(&field("termination")?).ok_or_else(|| err("bad termination".to_string()))?;
        let mut position = Position::initial();
        let mut moves = Vec::new();
        for line in lines.map(str::trim).filter(|l| !l.is_empty()) {
            let mv = parse_legal(&position, line).map_err(|e| err(format!("ply {}: {e}", moves.len() + 1)))?;
            position.apply_in_place(&mv);
            moves.push(mv);
        }
        if number("plies")? != moves.len() as u64 {
            return Err(err("ply count does not match the move list".to_string()));
        }
        Ok(GameRecord {
            gold: field("gold")?,
            scarlet: field("scarlet")?,
            seed: number("seed")?,
            mode: field("mode")?,
            opening_plies: number("opening-plies")? as u32,
            result,
            termination,
            moves,
        })
    }
}

pub fn play_game(gold: &AgentConfig, scarlet: &AgentConfig, seed: u64) -> Result<GameRecord> {
    play_game_with(gold, scarlet, seed, &GameOptions::default())
}

/// Plays from the initial position until the game ends. Random agents draw
/// from a stream derived from both their own seed and the game seed.
pub fn play_game_with(
    gold: &AgentConfig,
    scarlet: &AgentConfig,
    seed: u64,
    options: &GameOptions,
) -> Result<GameRecord> {
    gold.validate()?;
    scarlet.validate()?;
    let agents = [
        gold.clone().with_seed(mix_seed(gold.rng_seed, mix_seed(seed, 1))),
        scarlet.clone().with_seed(mix_seed(scarlet.rng_seed, mix_seed(seed, 2))),
    ];
    let mut position = Position::initial();
    let mut moves = Vec::new();
    let mut opening = ChaCha8Rng::seed_from_u64(mix_seed(seed, 0));
    let mut forfeit = None;

    for _ in 0..options.opening_plies {
        let legal = legal_moves(&position);
        if legal.is_empty() {
            break;
        }
        let mv = legal[opening.random_range(0..legal.len())];
        position.apply_in_place(&mv);
        moves.push(mv);
    }

    while terminal_state(&position) == Outcome::Ongoing {
        let side = position.side_to_move;
        let agent = &agents[side.index()];
        let started = Instant::now();
        let mv = best_move(&position, agent)?;
        if !agent.depth_capped() {
            let limit = Duration::from_millis(agent.time_budget_ms) * FORFEIT_FACTOR;
            if started.elapsed() > limit {
                log::warn!("{} exceeded {limit:?} and forfeits", agent.describe());
                forfeit = Some(side);
                break;
            }
        }
        position.apply_in_place(&mv);
        moves.push(mv);
    }

    let (result, termination) = match forfeit {
        Some(side) => (Outcome::win_for(side.opposite()), Termination::Forfeit(side)),
        None => {
            let result = terminal_state(&position);
            let termination = if position.ply_count >= TOTAL_PLY_CAP {
                Termination::TotalPlyCap
            } else if position.halfmove_clock >= QUIET_PLY_CAP {
                Termination::QuietPlyCap
            } else if in_check(&position, position.side_to_move) {
                Termination::Checkmate
            } else {
                Termination::Stalemate
            };
            (result, termination)
        }
    };
    let mode = if gold.depth_capped() && scarlet.depth_capped() { "depth" } else { "time" };
    Ok(GameRecord {
        gold: gold.describe(),
        scarlet: scarlet.describe(),
        seed,
        mode: mode.to_string(),
        opening_plies: options.opening_plies,
        result,
        termination,
        moves,
    })
}
