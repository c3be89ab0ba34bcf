//! Position text format.
//!
//! Three level blocks (Sky first) separated by `|`; each block holds eight
//! rank rows (rank 1 first) separated by `/`; each row is twelve
//! comma-separated signed piece codes. The board is followed by the side to
//! move (`g` or `s`), the ply count and the quiet-ply clock:
//!
//! ```text
//! 0,0,2,0,0,3,0,0,0,2,0,0/1,0,1,...|...|... g 0 0
//! ```

use crate::board::{Color, Position, FILES, LEVELS, LEVEL_CELLS, RANKS};
use crate::error::{Error, Result};

pub fn to_dpn(position: &Position) -> String {
    let mut out = String::with_capacity(900);
    for level in 0..LEVELS {
        if level > 0 {
            out.push('|');
        }
        for rank in 0..RANKS {
            if rank > 0 {
                out.push('/');
            }
            let base = level * LEVEL_CELLS + rank * FILES;
            for file in 0..FILES {
                if file > 0 {
                    out.push(',');
                }
                out.push_str(&position.cells[base + file].to_string());
            }
        }
    }
    out.push(' ');
    out.push(position.side_to_move.letter());
    out.push_str(&format!(" {} {}", position.ply_count, position.halfmove_clock));
    out
}

pub fn from_dpn(text: &str) -> Result<Position> {
    let err = |m: &str| Error::Dpn(m.to_string());
    let mut parts = text.split_whitespace();
    let board = parts.next().ok_or_else(|| err("empty input"))?;
    let side = match parts.next() {
        Some("g") => Color::Gold,
        Some("s") => Color::Scarlet,
        _ => return Err(err("side to move must be g or s")),
    };
    let ply_count = parts.next().ok_or_else(|| err("missing ply count"))?.parse().map_err(|_| err("bad ply count"))?;
    let halfmove_clock = match parts.next() {
        Some(s) => s.parse().map_err(|_| err("bad quiet-ply clock"))?,
        None => 0,
    };
    if parts.next().is_some() {
        return Err(err("trailing fields"));
    }

    let mut position = Position::empty(side);
    position.ply_count = ply_count;
    position.halfmove_clock = halfmove_clock;
    let levels: Vec<&str> = board.split('|').collect();
    if levels.len() != LEVELS {
        return Err(err("expected 3 level blocks"));
    }
    for (level, block) in levels.iter().enumerate() {
        let rows: Vec<&str> = block.split('/').collect();
        if rows.len() != RANKS {
            return Err(err("expected 8 rows per level"));
        }
        for (rank, row) in rows.iter().enumerate() {
            let fields: Vec<&str> = row.split(',').collect();
            if fields.len() != FILES {
                return Err(err("expected 12 fields per row"));
            }
            for (file, field) in fields.iter().enumerate() {
                let code: i8 = field.parse().map_err(|_| err("field is not an integer"))?;
                if !(-15..=15).contains(&code) {
                    return Err(err("piece code out of range"));
                }
                position.cells[level * LEVEL_CELLS + rank * FILES + file] = code;
            }
        }
    }
    Ok(position)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_round_trip() {
        let p = Position::initial();
        let text = to_dpn(&p);
        assert!(text.ends_with(" g 0 0"));
        assert_eq!(from_dpn(&text).unwrap(), p);
        assert_eq!(to_dpn(&from_dpn(&text).unwrap()), text);
    }

    #[test]
    fn clock_is_optional_on_input() {
        let p = Position::initial();
        let text = to_dpn(&p);
        let short = text.strip_suffix(" 0").unwrap();
        assert_eq!(from_dpn(short).unwrap(), p);
    }

    #[test]
    fn rejects_garbage() {
        let text = to_dpn(&Position::initial());
        assert!(from_dpn("").is_err());
        assert!(from_dpn(&text.replace(" g ", " x ")).is_err());
        assert!(from_dpn(&text.replacen("|", "/", 1)).is_err());
        assert!(from_dpn(&text.replacen("11", "16", 1)).is_err());
        assert!(from_dpn(&text.replacen(",0,", ",,", 1)).is_err());
        assert!(from_dpn(&format!("{text} 9")).is_err());
    }
}
