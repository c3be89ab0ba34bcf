//! Chess piece-square tables applied to the central 8x8 window of the Ground.

use std::sync::OnceLock;

use crate::board::PieceKind;
use crate::error::{Error, Result};

/// First file of the window (file c); the window spans files c..=j.
pub const WINDOW_FIRST_FILE: u8 = 2;
pub const WINDOW_FILES: u8 = 8;

pub const TABLE_NAMES: [&str; 6] = ["pawn", "knight", "bishop", "rook", "queen", "king"];

/// Chess piece class a kind borrows its table from.
pub fn table_class(kind: PieceKind) -> Option<usize> {
    use PieceKind::*;
    match kind {
        Sylph | Warrior | Dwarf => Some(0),
        Unicorn | Basilisk => Some(1),
        Cleric | Mage => Some(2),
        Hero | Thief | Oliphant => Some(3),
        Dragon => Some(4),
        King => Some(5),
        Griffin | Paladin | Elemental => None,
    }
}

/// Six 8x8 tables; `tables[class][row][col]` with row 0 on Gold's home rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsqtTables {
    pub tables: [[[i32; 8]; 8]; 6],
}

impl PsqtTables {
    pub fn standard() -> &'static PsqtTables {
        static TABLES: OnceLock<PsqtTables> = OnceLock::new();
        TABLES.get_or_init(|| PsqtTables::parse(include_str!("../../data/psqt.txt")).expect("bundled psqt tables"))
    }

    /// Bonus for a kind on a window cell, with `row` already reflected for
    /// Scarlet.
    #[inline]
    pub fn lookup(&self, kind: PieceKind, row: usize, col: usize) -> i32 {
        table_class(kind).map_or(0, |c| self.tables[c][row][col])
    }

    pub fn parse(text: &str) -> Result<PsqtTables> {
        let err = |m: String| Error::WeightFile(format!("psqt: {m}"));
        let mut tables = [[[0i32; 8]; 8]; 6];
        let mut seen = [false; 6];
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        while let Some(name) = lines.next() {
            let class = TABLE_NAMES
                .iter()
                .position(|n| n.eq_ignore_ascii_case(name))
                .ok_or_else(|| err(format!("unknown table {name:?}")))?;
            if std::mem::replace(&mut seen[class], true) {
                return Err(err(format!("table {name:?} given twice")));
            }
            for row in 0..8 {
                let line = lines.next().ok_or_else(|| err(format!("table {name:?} is short")))?;
                let values: Vec<i32> = line
                    .split_whitespace()
                    .map(|v| v.parse().map_err(|_| err(format!("bad value in {line:?}"))))
                    .collect::<Result<_>>()?;
                if values.len() != 8 {
                    return Err(err(format!("row {line:?} does not have 8 values")));
                }
                tables[class][row].copy_from_slice(&values);
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(err(format!("missing table {:?}", TABLE_NAMES[i])));
        }
        Ok(PsqtTables { tables })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, table) in TABLE_NAMES.iter().zip(&self.tables) {
            out.push_str(name);
            out.push('\n');
            for row in table {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>4}")).collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }
}
