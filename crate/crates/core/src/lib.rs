//! Dragonchess engine: the 3x8x12 board, move generation, the transferred
//! chess evaluation, search agents and game records.

pub mod board;
pub mod dpn;
pub mod error;
pub mod eval;
pub mod game;
pub mod movegen;
pub mod notation;
pub mod rules;
pub mod search;

pub use board::{Color, Move, MoveKind, Piece, PieceKind, Position, Square};
pub use error::{Error, Result};
pub use eval::{evaluate, heuristic_total, EvalBreakdown, PieceValues, ThetaVector};
pub use game::{play_game, play_game_with, GameOptions, GameRecord, Termination};
pub use movegen::{legal_moves, perft, terminal_state, Outcome};
pub use search::{best_move, AgentConfig, AgentKind, Weights};
