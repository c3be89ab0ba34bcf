use thiserror::Error;

use crate::board::Color;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("square out of range: level {level}, rank {rank}, file {file}")]
    SquareOutOfRange { level: u8, rank: u8, file: u8 },
    #[error("cell index {0} out of range 0..288")]
    IndexOutOfRange(usize),
    #[error("no piece on square {0}")]
    EmptySquare(usize),
    #[error("undo does not match the position: {0}")]
    UndoMismatch(&'static str),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("game is already over")]
    GameOver,
    #[error("{0} has no King")]
    MissingKing(Color),
    #[error("malformed position text: {0}")]
    Dpn(String),
    #[error("malformed move text {text:?}: {reason}")]
    MoveText { text: String, reason: &'static str },
    #[error("malformed weight file: {0}")]
    WeightFile(String),
    #[error("malformed game record: {0}")]
    Record(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
