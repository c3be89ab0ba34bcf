//! Agents: a seeded random mover and an iterative-deepening alpha-beta
//! searcher over the weighted heuristic total.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::board::{Move, Position};
use crate::error::{Error, Result};
use crate::eval::{baseline_value, heuristic_total, PieceValues, ThetaVector};
use crate::movegen::{has_legal_move, in_check, legal_moves, terminal_state, Outcome};
use crate::board::{Color, PieceKind, QUIET_PLY_CAP, TOTAL_PLY_CAP};

/// Score of a mate at the root; mates found deeper score slightly less.
pub const MATE: f64 = 1.0e9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AgentKind {
    Random,
    Minimax,
}

/// Evaluation weights of a minimax agent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Weights {
    Theta(ThetaVector),
    /// Material-only evaluation with a named piece-value table.
    Preset(PieceValues),
}

impl Weights {
    pub fn theta(&self) -> Result<ThetaVector> {
        match self {
            Weights::Theta(t) => Ok(*t),
            Weights::Preset(p) => p.to_theta(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    pub kind: AgentKind,
    pub weights: Weights,
    /// Wall-clock budget per move. Ignored when `max_depth` is set.
    pub time_budget_ms: u64,
    /// Fixed search depth. Setting it selects the reproducible depth-cap
    /// mode.
    pub max_depth: Option<u32>,
    pub rng_seed: u64,
}

pub const DEFAULT_TIME_BUDGET_MS: u64 = 3000;

impl AgentConfig {
    pub fn random(seed: u64) -> AgentConfig {
        AgentConfig {
            kind: AgentKind::Random,
            weights: Weights::Theta(ThetaVector::identity()),
            time_budget_ms: DEFAULT_TIME_BUDGET_MS,
            max_depth: None,
            rng_seed: seed,
        }
    }

    pub fn minimax(theta: ThetaVector, depth: u32) -> AgentConfig {
        AgentConfig {
            kind: AgentKind::Minimax,
            weights: Weights::Theta(theta),
            time_budget_ms: DEFAULT_TIME_BUDGET_MS,
            max_depth: Some(depth),
            rng_seed: 0,
        }
    }

    pub fn preset(values: PieceValues, depth: u32) -> AgentConfig {
        AgentConfig { weights: Weights::Preset(values), ..AgentConfig::minimax(ThetaVector::identity(), depth) }
    }

    /// Switch to wall-clock mode with the given per-move budget.
    pub fn timed(mut self, budget_ms: u64) -> AgentConfig {
        self.time_budget_ms = budget_ms;
        self.max_depth = None;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> AgentConfig {
        self.rng_seed = seed;
        self
    }

    pub fn depth_capped(&self) -> bool {
        self.kind == AgentKind::Random || self.max_depth.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        if self.time_budget_ms == 0 {
            return Err(Error::IllegalMove("time budget must be positive".into()));
        }
        if self.max_depth == Some(0) {
            return Err(Error::IllegalMove("depth cap must be at least 1".into()));
        }
        self.weights.theta().map(|_| ())
    }

    /// One-line description for logs and game records.
    pub fn describe(&self) -> String {
        match self.kind {
            AgentKind::Random => format!("random seed={}", self.rng_seed),
            AgentKind::Minimax => {
                let limit = match self.max_depth {
                    Some(d) => format!("depth={d}"),
                    None => format!("time-ms={}", self.time_budget_ms),
                };
                let weights = match &self.weights {
                    Weights::Theta(t) if *t == ThetaVector::identity() => "identity".to_string(),
                    Weights::Theta(t) => format!("theta:{:016x}", fingerprint(t.as_slice())),
                    Weights::Preset(p) => format!("preset:{}", p.name),
                };
                format!("minimax {limit} weights={weights}")
            }
        }
    }
}

fn fingerprint(values: &[f64]) -> u64 {
    values.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, x| (h ^ x.to_bits()).wrapping_mul(0x0100_0000_01b3))
}

/// SplitMix64 finaliser, used to derive independent seeds.
pub fn mix_seed(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(a << 6).wrapping_add(a >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn position_hash(position: &Position) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &c in position.cells.iter() {
        h = (h ^ c as u8 as u64).wrapping_mul(0x0100_0000_01b3);
    }
    h ^ ((position.side_to_move as u64) << 63) ^ position.ply_count as u64
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub best: Move,
    /// Value from the mover's point of view.
    pub value: f64,
    /// Deepest fully searched depth (0 for partial or random choices).
    pub depth: u32,
    pub nodes: u64,
}

pub fn best_move(position: &Position, config: &AgentConfig) -> Result<Move> {
    search(position, config).map(|r| r.best)
}

pub fn search(position: &Position, config: &AgentConfig) -> Result<SearchResult> {
    let moves = legal_moves(position);
    if moves.is_empty() {
        return Err(Error::GameOver);
    }
    match config.kind {
        AgentKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(config.rng_seed, position_hash(position)));
            let best = moves[rng.random_range(0..moves.len())];
            Ok(SearchResult { best, value: 0.0, depth: 0, nodes: 0 })
        }
        AgentKind::Minimax => {
            let theta = config.weights.theta()?;
            let deadline = match config.max_depth {
                Some(_) => None,
                None => Some(Instant::now() + Duration::from_millis(config.time_budget_ms)),
            };
            Ok(iterative_deepening(position, &theta, config.max_depth.unwrap_or(u32::MAX), deadline, moves.moves))
        }
    }
}

/// Value of `position` for the side to move by the heuristic alone.
#[inline]
pub fn static_value(position: &Position, theta: &ThetaVector) -> f64 {
    let v = heuristic_total(position, theta);
    match position.side_to_move {
        Color::Gold => v,
        Color::Scarlet => -v,
    }
}

/// Value at the search horizon. Mated and stalemated positions score
/// exactly, so that even a one-ply search sees the result of its move.
fn leaf_value(position: &Position, theta: &ThetaVector, ply: u32) -> f64 {
    let side = position.side_to_move;
    if has_legal_move(position, side) {
        static_value(position, theta)
    } else if in_check(position, side) {
        -(MATE - ply as f64)
    } else {
        0.0
    }
}

fn capped(position: &Position) -> bool {
    position.halfmove_clock >= QUIET_PLY_CAP || position.ply_count >= TOTAL_PLY_CAP
}

fn victim_value(mv: &Move) -> f64 {
    PieceKind::from_code(mv.captured.unsigned_abs()).map_or(0.0, baseline_value)
}

/// Captures first, most valuable victim first; otherwise list order.
fn order_moves(moves: &mut [Move], first: Option<Move>) {
    moves.sort_by(|a, b| victim_value(b).total_cmp(&victim_value(a)));
    if let Some(pv) = first {
        if let Some(i) = moves.iter().position(|m| *m == pv) {
            moves[..=i].rotate_right(1);
        }
    }
}

struct Searcher<'a> {
    theta: &'a ThetaVector,
    deadline: Option<Instant>,
    nodes: u64,
    aborted: bool,
}

impl Searcher<'_> {
    fn out_of_time(&mut self) -> bool {
        if !self.aborted && self.nodes & 255 == 0 {
            if let Some(d) = self.deadline {
                self.aborted = Instant::now() >= d;
            }
        }
        self.aborted
    }

    fn negamax(&mut self, position: &Position, depth: u32, mut alpha: f64, beta: f64, ply: u32) -> f64 {
        self.nodes += 1;
        if self.out_of_time() {
            return 0.0;
        }
        if capped(position) {
            return 0.0;
        }
        if depth == 0 {
            return leaf_value(position, self.theta, ply);
        }
        let mut moves = legal_moves(position).moves;
        if moves.is_empty() {
            return if in_check(position, position.side_to_move) { -(MATE - ply as f64) } else { 0.0 };
        }
        order_moves(&mut moves, None);
        let mut best = f64::NEG_INFINITY;
        for mv in &moves {
            let child = position.apply(mv);
            let v = -self.negamax(&child, depth - 1, -beta, -alpha, ply + 1);
            if self.aborted {
                return 0.0;
            }
            if v > best {
                best = v;
            }
            if v > alpha {
                alpha = v;
                if alpha >= beta {
                    break;
                }
            }
        }
        best
    }
}

/// Largest float strictly below `x`.
fn next_down(x: f64) -> f64 {
    if x.is_nan() || x == f64::NEG_INFINITY {
        return x;
    }
    if x == 0.0 {
        return -f64::from_bits(1);
    }
    let bits = x.to_bits();
    f64::from_bits(if x > 0.0 { bits - 1 } else { bits + 1 })
}

/// Root search at one depth. Among equal values the move with the smallest
/// `(from, to, kind)` wins, which the root windows below make exact.
fn search_root(searcher: &mut Searcher, position: &Position, moves: &[Move], depth: u32) -> Option<(Move, f64)> {
    let mut best: Option<(Move, f64)> = None;
    for mv in moves {
        let child = position.apply(mv);
        let alpha = match best {
            None => f64::NEG_INFINITY,
            Some((b, v)) if mv.key() < b.key() => next_down(v),
            Some((_, v)) => v,
        };
        let value = -searcher.negamax(&child, depth - 1, f64::NEG_INFINITY, -alpha, 1);
        if searcher.aborted {
            return best;
        }
        if value > alpha || best.is_none() {
            best = Some((*mv, value));
        }
    }
    best
}

fn iterative_deepening(
    position: &Position,
    theta: &ThetaVector,
    max_depth: u32,
    deadline: Option<Instant>,
    mut moves: Vec<Move>,
) -> SearchResult {
    let mut searcher = Searcher { theta, deadline, nodes: 0, aborted: false };
    let mut done: Option<(Move, f64, u32)> = None;
    let mut pv = None;
    for depth in 1..=max_depth {
        order_moves(&mut moves, pv);
        let result = search_root(&mut searcher, position, &moves, depth);
        if searcher.aborted {
            if done.is_none() {
                // Partial first iteration: best of the moves scanned so far.
                let (mv, v) = result.unwrap_or((moves[0], 0.0));
                return SearchResult { best: mv, value: v, depth: 0, nodes: searcher.nodes };
            }
            break;
        }
        let (mv, v) = result.expect("non-empty move list");
        done = Some((mv, v, depth));
        pv = Some(mv);
        // A forced mate will not change with more depth.
        if v.abs() >= MATE - 1000.0 {
            break;
        }
    }
    let (best, value, depth) = done.expect("at least one iteration");
    SearchResult { best, value, depth, nodes: searcher.nodes }
}

/// Plain minimax without pruning: the exact value of every root move at
/// `depth` and the best move by the same tie rule as [`search`].
pub fn minimax_reference(position: &Position, theta: &ThetaVector, depth: u32) -> Option<(Move, f64)> {
    fn value(position: &Position, theta: &ThetaVector, depth: u32, ply: u32) -> f64 {
        if capped(position) {
            return 0.0;
        }
        if depth == 0 {
            return leaf_value(position, theta, ply);
        }
        let moves = legal_moves(position);
        if moves.is_empty() {
            return if in_check(position, position.side_to_move) { -(MATE - ply as f64) } else { 0.0 };
        }
        moves.iter().map(|m| -value(&position.apply(m), theta, depth - 1, ply + 1)).fold(f64::NEG_INFINITY, f64::max)
    }
    let mut best: Option<(Move, f64)> = None;
    for mv in legal_moves(position).iter() {
        let v = -value(&position.apply(mv), theta, depth - 1, 1);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((*mv, v));
        }
    }
    best
}

/// Game result as seen by the search: `Some` when the game is over.
pub fn game_over(position: &Position) -> Option<Outcome> {
    match terminal_state(position) {
        Outcome::Ongoing => None,
        o => Some(o),
    }
}
