//! Move text: `<L><file><rank>-<L><file><rank>[suffix]`, with levels numbered
//! 1 (Sky) to 3 (Underworld), files `a`..`l` and ranks `1`..`8`.
//!
//! Suffixes: `x` capture, `=H` promotion (`x=H` when capturing), `r` remote
//! capture.

use std::fmt::Write;

use crate::board::{Move, MoveKind, Position, Square};
use crate::error::{Error, Result};
use crate::movegen::legal_moves;

/// A move as written, before it is matched against a position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveText {
    pub from: Square,
    pub to: Square,
    pub kind: MoveKind,
    pub capture: bool,
}

pub fn format_square(square: Square) -> String {
    format!("{}{}{}", square.level() + 1, (b'a' + square.file()) as char, square.rank() + 1)
}

pub fn format_move(mv: &Move) -> String {
    let mut s = format!("{}-{}", format_square(mv.from_square()), format_square(mv.to_square()));
    match mv.kind {
        MoveKind::RemoteCapture => s.push('r'),
        MoveKind::Promotion => {
            if mv.captured != 0 {
                s.push('x');
            }
            s.push_str("=H");
        }
        MoveKind::Normal => {
            if mv.captured != 0 {
                s.push('x');
            }
        }
    }
    s
}

fn bad(text: &str, reason: &'static str) -> Error {
    Error::MoveText { text: text.to_string(), reason }
}

fn parse_square(text: &str, part: &[u8]) -> Result<Square> {
    let [l, f, r] = part else { return Err(bad(text, "square must be three characters")) };
    let level = l.checked_sub(b'1').filter(|&x| x < 3).ok_or_else(|| bad(text, "level must be 1-3"))?;
    let file = f.checked_sub(b'a').filter(|&x| x < 12).ok_or_else(|| bad(text, "file must be a-l"))?;
    let rank = r.checked_sub(b'1').filter(|&x| x < 8).ok_or_else(|| bad(text, "rank must be 1-8"))?;
    Square::new(level, rank, file)
}

pub fn parse_move(text: &str) -> Result<MoveText> {
    let trimmed = text.trim();
    let bytes = trimmed.as_bytes();
    if bytes.len() < 7 || bytes[3] != b'-' {
        return Err(bad(text, "expected <square>-<square>"));
    }
    let from = parse_square(text, &bytes[0..3])?;
    let to = parse_square(text, &bytes[4..7])?;
    let (kind, capture) = match &trimmed[7..] {
        "" => (MoveKind::Normal, false),
        "x" => (MoveKind::Normal, true),
        "r" => (MoveKind::RemoteCapture, true),
        "=H" => (MoveKind::Promotion, false),
        "x=H" => (MoveKind::Promotion, true),
        _ => return Err(bad(text, "unknown suffix")),
    };
    Ok(MoveText { from, to, kind, capture })
}

impl MoveText {
    /// The legal move of `position` this text denotes. The capture marker is
    /// optional on input.
    pub fn resolve(&self, position: &Position) -> Result<Move> {
        let (from, to) = (self.from.index() as u16, self.to.index() as u16);
        legal_moves(position)
            .iter()
            .find(|m| m.from == from && m.to == to && m.kind == self.kind && (!self.capture || m.captured != 0))
            .copied()
            .ok_or_else(|| Error::IllegalMove(self.to_string()))
    }
}

impl std::fmt::Display for MoveText {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", format_square(self.from), format_square(self.to))?;
        match (self.kind, self.capture) {
            (MoveKind::RemoteCapture, _) => f.write_char('r'),
            (MoveKind::Promotion, true) => f.write_str("x=H"),
            (MoveKind::Promotion, false) => f.write_str("=H"),
            (MoveKind::Normal, true) => f.write_char('x'),
            (MoveKind::Normal, false) => Ok(()),
        }
    }
}

/// Parse and resolve in one step.
pub fn parse_legal(position: &Position, text: &str) -> Result<Move> {
    parse_move(text)?.resolve(position)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Position;

    #[test]
    fn warrior_push_text() {
        let p = Position::initial();
        let mv = parse_legal(&p, "2g2-2g3").unwrap();
        assert_eq!(format_move(&mv), "2g2-2g3");
        assert!(matches!(parse_legal(&p, "2g2-2g5"), Err(Error::IllegalMove(_))));
    }

    #[test]
    fn malformed_text() {
        for text in ["", "2g2", "2g2-2g", "4a1-1a1", "1m1-1a1", "1a9-1a1", "1a1-1a2q", "2g2+2g3"] {
            assert!(matches!(parse_move(text), Err(Error::MoveText { .. })), "{text}");
        }
    }

    #[test]
    fn every_legal_move_round_trips() {
        let p = Position::initial();
        for mv in legal_moves(&p).iter() {
            let text = format_move(mv);
            assert_eq!(parse_legal(&p, &text).unwrap(), *mv, "{text}");
            assert_eq!(parse_move(&text).unwrap().to_string(), text);
        }
    }
}
