//! Game sessions and their JSON views.

use dragonfish_core::board::{CELLS, LEVELS};
use dragonfish_core::dpn::to_dpn;
use dragonfish_core::eval::theta::COMPONENT_NAMES;
use dragonfish_core::movegen::{in_check, is_frozen};
use dragonfish_core::notation::{format_move, format_square};
use dragonfish_core::search::mix_seed;
use dragonfish_core::{
    legal_moves, terminal_state, AgentConfig, Color, Move, MoveKind, Outcome, PieceValues, Position, Square,
    ThetaVector,
};
use serde::{Deserialize, Serialize};

/// Search depth of engine players that specify neither a depth nor a time.
pub const DEFAULT_ENGINE_DEPTH: u32 = 2;

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum WeightsSpec {
    /// `identity`, `gygax` or `jackman`.
    Named(String),
    Theta(Vec<f64>),
}

impl Default for WeightsSpec {
    fn default() -> WeightsSpec {
        WeightsSpec::Named("identity".into())
    }
}

/// Who moves for one side.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PlayerSpec {
    Human,
    Random {
        #[serde(default)]
        seed: u64,
    },
    Minimax {
        #[serde(default)]
        weights: WeightsSpec,
        depth: Option<u32>,
        time_ms: Option<u64>,
    },
}

impl PlayerSpec {
    /// `None` for a human player.
    pub fn to_agent(&self) -> Result<Option<AgentConfig>, String> {
        let agent = match self {
            PlayerSpec::Human => return Ok(None),
            PlayerSpec::Random { seed } => AgentConfig::random(*seed),
            PlayerSpec::Minimax { weights, depth, time_ms } => {
                let mut agent = match weights {
                    WeightsSpec::Named(n) if n == "identity" => AgentConfig::minimax(ThetaVector::identity(), 1),
                    WeightsSpec::Named(n) if n == "gygax" => AgentConfig::preset(PieceValues::gygax(), 1),
                    WeightsSpec::Named(n) if n == "jackman" => AgentConfig::preset(PieceValues::jackman(), 1),
                    WeightsSpec::Named(n) => return Err(format!("unknown weights {n:?}")),
                    WeightsSpec::Theta(v) => {
                        AgentConfig::minimax(ThetaVector::from_slice(v).map_err(|e| e.to_string())?, 1)
                    }
                };
                match (depth, time_ms) {
                    (Some(_), Some(_)) => return Err("give depth or time_ms, not both".into()),
                    (Some(d), None) => agent.max_depth = Some(*d),
                    (None, Some(ms)) => agent = agent.timed(*ms),
                    (None, None) => agent.max_depth = Some(DEFAULT_ENGINE_DEPTH),
                }
                agent
            }
        };
        agent.validate().map_err(|e| e.to_string())?;
        Ok(Some(agent))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewGame {
    #[serde(default = "human")]
    pub gold: PlayerSpec,
    #[serde(default = "default_engine")]
    pub scarlet: PlayerSpec,
    /// Seeds the random choices of engine players.
    #[serde(default)]
    pub seed: u64,
}

fn human() -> PlayerSpec {
    PlayerSpec::Human
}

fn default_engine() -> PlayerSpec {
    PlayerSpec::Minimax { weights: WeightsSpec::default(), depth: None, time_ms: None }
}

pub struct Session {
    pub id: u64,
    pub position: Position,
    pub history: Vec<Move>,
    /// Indexed by `Color::index`; `None` is a human.
    pub players: [Option<AgentConfig>; 2],
    pub seed: u64,
}

impl Session {
    pub fn new(id: u64, request: &NewGame) -> Result<Session, String> {
        let players = [request.gold.to_agent()?, request.scarlet.to_agent()?];
        Ok(Session { id, position: Position::initial(), history: Vec::new(), players, seed: request.seed })
    }

    pub fn outcome(&self) -> Outcome {
        terminal_state(&self.position)
    }

    /// The engine that moves next, if the side to move is not human.
    pub fn engine_to_move(&self) -> Option<AgentConfig> {
        let agent = self.players[self.position.side_to_move.index()].as_ref()?;
        // Random choices depend on the session seed and the ply only.
        let salt = mix_seed(self.seed, self.position.ply_count as u64);
        Some(agent.clone().with_seed(mix_seed(agent.rng_seed, salt)))
    }

    pub fn play(&mut self, mv: Move) {
        self.position.apply_in_place(&mv);
        self.history.push(mv);
    }

    pub fn view(&self) -> GameView {
        let p = &self.position;
        let outcome = self.outcome();
        let cells = (0..CELLS)
            .map(|i| {
                let sq = Square::from_index(i).expect("index below CELLS");
                let piece = p.piece_at(i);
                CellView {
                    index: i,
                    square: format_square(sq),
                    level: sq.level(),
                    rank: sq.rank(),
                    file: sq.file(),
                    piece: piece.map(|pc| PieceView { kind: pc.kind.name(), color: color_name(pc.color), code: pc.code() }),
                    frozen: piece.is_some() && is_frozen(p, sq).unwrap_or(false),
                }
            })
            .collect();
        let player = |c: Color| match &self.players[c.index()] {
            None => "human".to_string(),
            Some(a) => a.describe(),
        };
        GameView {
            id: self.id,
            dpn: to_dpn(p),
            side_to_move: color_name(p.side_to_move),
            ply: p.ply_count,
            quiet_plies: p.halfmove_clock,
            in_check: in_check(p, p.side_to_move),
            status: if outcome == Outcome::Ongoing { "ongoing" } else { "finished" },
            result: match outcome {
                Outcome::Ongoing => None,
                Outcome::GoldWins => Some("gold"),
                Outcome::ScarletWins => Some("scarlet"),
                Outcome::Draw => Some("draw"),
            },
            players: Players { gold: player(Color::Gold), scarlet: player(Color::Scarlet) },
            history: self.history.iter().map(format_move).collect(),
            levels: LEVELS,
            cells,
        }
    }
}

pub fn color_name(c: Color) -> &'static str {
    match c {
        Color::Gold => "gold",
        Color::Scarlet => "scarlet",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceView {
    pub kind: &'static str,
    pub color: &'static str,
    pub code: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellView {
    pub index: usize,
    pub square: String,
    pub level: u8,
    pub rank: u8,
    pub file: u8,
    pub piece: Option<PieceView>,
    pub frozen: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Players {
    pub gold: String,
    pub scarlet: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GameView {
    pub id: u64,
    pub dpn: String,
    pub side_to_move: &'static str,
    pub ply: u32,
    pub quiet_plies: u32,
    pub in_check: bool,
    pub status: &'static str,
    pub result: Option<&'static str>,
    pub players: Players,
    pub history: Vec<String>,
    pub levels: usize,
    /// All 288 cells, Sky first, rank 1 first, file a first.
    pub cells: Vec<CellView>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MoveView {
    #[serde(rename = "move")]
    pub text: String,
    pub from: String,
    pub to: String,
    pub kind: &'static str,
    pub capture: bool,
}

impl MoveView {
    pub fn new(mv: &Move) -> MoveView {
        MoveView {
            text: format_move(mv),
            from: format_square(mv.from_square()),
            to: format_square(mv.to_square()),
            kind: match mv.kind {
                MoveKind::Normal => "normal",
                MoveKind::RemoteCapture => "remote-capture",
                MoveKind::Promotion => "promotion",
            },
            capture: mv.captured != 0,
        }
    }
}

pub fn legal_views(position: &Position) -> Vec<MoveView> {
    legal_moves(position).iter().map(MoveView::new).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentView {
    pub name: &'static str,
    pub raw: f64,
    pub weight: f64,
    pub weighted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalView {
    pub weights: String,
    /// Gold minus Scarlet.
    pub components: Vec<ComponentView>,
    pub total: f64,
}

pub fn eval_view(position: &Position, weights_name: &str) -> Result<EvalView, String> {
    let theta = match weights_name {
        "identity" => ThetaVector::identity(),
        "gygax" => PieceValues::gygax().to_theta().map_err(|e| e.to_string())?,
        "jackman" => PieceValues::jackman().to_theta().map_err(|e| e.to_string())?,
        other => return Err(format!("unknown weights {other:?}")),
    };
    let b = dragonfish_core::evaluate(position, &theta);
    let components = b
        .components()
        .iter()
        .enumerate()
        .map(|(i, &raw)| {
            // Material already carries its piece scales; its weight applies on top.
            let weight = theta.component_weight(i);
            ComponentView { name: COMPONENT_NAMES[i], raw, weight, weighted: raw * weight }
        })
        .collect();
    Ok(EvalView { weights: weights_name.to_string(), components, total: b.total })
}
