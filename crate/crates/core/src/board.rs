//! Three-level board, piece encoding and state mutation.
//!
//! Cells are addressed by a flat index `level * 96 + rank * 12 + file`, so each
//! level occupies a contiguous 96-cell slice. A cell holds a signed piece code:
//! the magnitude is the piece kind and the sign is the owner (positive Gold,
//! negative Scarlet, zero empty).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const LEVELS: usize = 3;
pub const RANKS: usize = 8;
pub const FILES: usize = 12;
pub const LEVEL_CELLS: usize = RANKS * FILES;
pub const CELLS: usize = LEVELS * LEVEL_CELLS;

pub const SKY: u8 = 0;
pub const GROUND: u8 = 1;
pub const UNDERWORLD: u8 = 2;

/// Plies without a capture or Warrior move before the game is drawn.
pub const QUIET_PLY_CAP: u32 = 100;
/// Total plies before the game is drawn.
pub const TOTAL_PLY_CAP: u32 = 600;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Gold,
    Scarlet,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Gold, Color::Scarlet];

    #[inline]
    pub fn opposite(self) -> Color {
        match self {
            Color::Gold => Color::Scarlet,
            Color::Scarlet => Color::Gold,
        }
    }

    /// +1 for Gold, -1 for Scarlet.
    #[inline]
    pub fn sign(self) -> i8 {
        match self {
            Color::Gold => 1,
            Color::Scarlet => -1,
        }
    }

    /// Rank direction this side advances in.
    #[inline]
    pub fn forward(self) -> i8 {
        self.sign()
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Color::Gold => 'g',
            Color::Scarlet => 's',
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Gold => "Gold",
            Color::Scarlet => "Scarlet",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum PieceKind {
    Sylph = 1,
    Griffin = 2,
    Dragon = 3,
    Warrior = 4,
    Oliphant = 5,
    Unicorn = 6,
    Hero = 7,
    Thief = 8,
    Cleric = 9,
    Mage = 10,
    King = 11,
    Paladin = 12,
    Basilisk = 13,
    Dwarf = 14,
    Elemental = 15,
}

impl PieceKind {
    pub const ALL: [PieceKind; 15] = [
        PieceKind::Sylph,
        PieceKind::Griffin,
        PieceKind::Dragon,
        PieceKind::Warrior,
        PieceKind::Oliphant,
        PieceKind::Unicorn,
        PieceKind::Hero,
        PieceKind::Thief,
        PieceKind::Cleric,
        PieceKind::Mage,
        PieceKind::King,
        PieceKind::Paladin,
        PieceKind::Basilisk,
        PieceKind::Dwarf,
        PieceKind::Elemental,
    ];

    #[inline]
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<PieceKind> {
        PieceKind::ALL.get((code as usize).wrapping_sub(1)).copied()
    }

    /// Sylph, Warrior and Dwarf play the role of the chess pawn.
    #[inline]
    pub fn is_pawn_class(self) -> bool {
        matches!(self, PieceKind::Sylph | PieceKind::Warrior | PieceKind::Dwarf)
    }

    pub fn name(self) -> &'static str {
        match self {
            PieceKind::Sylph => "Sylph",
            PieceKind::Griffin => "Griffin",
            PieceKind::Dragon => "Dragon",
            PieceKind::Warrior => "Warrior",
            PieceKind::Oliphant => "Oliphant",
            PieceKind::Unicorn => "Unicorn",
            PieceKind::Hero => "Hero",
            PieceKind::Thief => "Thief",
            PieceKind::Cleric => "Cleric",
            PieceKind::Mage => "Mage",
            PieceKind::King => "King",
            PieceKind::Paladin => "Paladin",
            PieceKind::Basilisk => "Basilisk",
            PieceKind::Dwarf => "Dwarf",
            PieceKind::Elemental => "Elemental",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub kind: PieceKind,
    pub color: Color,
}

impl Piece {
    pub const fn new(kind: PieceKind, color: Color) -> Piece {
        Piece { kind, color }
    }

    #[inline]
    pub fn code(self) -> i8 {
        self.kind.code() as i8 * self.color.sign()
    }

    #[inline]
    pub fn from_code(code: i8) -> Option<Piece> {
        let kind = PieceKind::from_code(code.unsigned_abs())?;
        let color = if code > 0 { Color::Gold } else { Color::Scarlet };
        Some(Piece { kind, color })
    }
}

/// A cell coordinate. Level 0 is the Sky, rank 0 is Gold's home rank and
/// file 0 is file "a".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Square {
    level: u8,
    rank: u8,
    file: u8,
}

impl Square {
    pub fn new(level: u8, rank: u8, file: u8) -> Result<Square> {
        if (level as usize) < LEVELS && (rank as usize) < RANKS && (file as usize) < FILES {
            Ok(Square { level, rank, file })
        } else {
            Err(Error::SquareOutOfRange { level, rank, file })
        }
    }

    pub fn from_index(index: usize) -> Result<Square> {
        if index >= CELLS {
            return Err(Error::IndexOutOfRange(index));
        }
        Ok(Square::at(index))
    }

    /// Infallible variant for indices already known to be in range.
    #[inline]
    pub(crate) fn at(index: usize) -> Square {
        debug_assert!(index < CELLS);
        Square {
            level: (index / LEVEL_CELLS) as u8,
            rank: ((index % LEVEL_CELLS) / FILES) as u8,
            file: (index % FILES) as u8,
        }
    }

    /// Signed offset, `None` when it leaves the board.
    #[inline]
    pub fn offset(self, dl: i8, dr: i8, df: i8) -> Option<Square> {
        let l = self.level as i8 + dl;
        let r = self.rank as i8 + dr;
        let f = self.file as i8 + df;
        if (0..LEVELS as i8).contains(&l) && (0..RANKS as i8).contains(&r) && (0..FILES as i8).contains(&f) {
            Some(Square { level: l as u8, rank: r as u8, file: f as u8 })
        } else {
            None
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self.level as usize * LEVEL_CELLS + self.rank as usize * FILES + self.file as usize
    }

    #[inline]
    pub fn level(self) -> u8 {
        self.level
    }

    #[inline]
    pub fn rank(self) -> u8 {
        self.rank
    }

    #[inline]
    pub fn file(self) -> u8 {
        self.file
    }

    /// Reflect the rank (r <-> 7 - r), keeping level and file.
    #[inline]
    pub fn mirror(self) -> Square {
        Square { rank: (RANKS - 1) as u8 - self.rank, ..self }
    }
}

/// Level-major flat index of a square given by raw fields.
pub fn index_of(level: u8, rank: u8, file: u8) -> Result<usize> {
    Square::new(level, rank, file).map(Square::index)
}

pub fn square_of(index: usize) -> Result<Square> {
    Square::from_index(index)
}

#[inline]
pub(crate) fn mirror_index(index: usize) -> usize {
    Square::at(index).mirror().index()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    Normal,
    /// The mover stays put and the piece on `to` is removed.
    RemoteCapture,
    /// A Warrior reaching the far rank, replaced by `promoted_to`.
    Promotion,
}

/// A move together with everything needed to undo it.
///
/// `clock_before` is the quiet-ply counter of the position the move was
/// generated in; it lets `undo` restore draw bookkeeping exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub from: u16,
    pub to: u16,
    pub kind: MoveKind,
    pub captured: i8,
    pub promoted_to: i8,
    pub clock_before: u32,
}

impl Move {
    /// Deterministic ordering key used by move lists.
    #[inline]
    pub fn key(&self) -> (u16, u16, MoveKind) {
        (self.from, self.to, self.kind)
    }

    #[inline]
    pub fn is_capture(&self) -> bool {
        self.captured != 0
    }

    /// The same move seen through [`Position::mirror`].
    pub fn mirror(&self) -> Move {
        Move {
            from: mirror_index(self.from as usize) as u16,
            to: mirror_index(self.to as usize) as u16,
            kind: self.kind,
            captured: -self.captured,
            promoted_to: -self.promoted_to,
            clock_before: self.clock_before,
        }
    }

    pub fn from_square(&self) -> Square {
        Square::at(self.from as usize)
    }

    pub fn to_square(&self) -> Square {
        Square::at(self.to as usize)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Position {
    pub cells: [i8; CELLS],
    pub side_to_move: Color,
    pub ply_count: u32,
    /// Plies since the last capture or Warrior move.
    pub halfmove_clock: u32,
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Position({})", crate::dpn::to_dpn(self))
    }
}

impl Default for Position {
    fn default() -> Self {
        Position::initial()
    }
}

const GOLD_SETUP: &[(u8, u8, u8, PieceKind)] = {
    use PieceKind::*;
    &[
        (SKY, 0, 2, Griffin),
        (SKY, 0, 5, Dragon),
        (SKY, 0, 9, Griffin),
        (SKY, 1, 0, Sylph),
        (SKY, 1, 2, Sylph),
        (SKY, 1, 4, Sylph),
        (SKY, 1, 6, Sylph),
        (SKY, 1, 8, Sylph),
        (SKY, 1, 10, Sylph),
        (GROUND, 0, 0, Oliphant),
        (GROUND, 0, 1, Unicorn),
        (GROUND, 0, 2, Hero),
        (GROUND, 0, 3, Thief),
        (GROUND, 0, 4, Cleric),
        (GROUND, 0, 5, Mage),
        (GROUND, 0, 6, King),
        (GROUND, 0, 7, Paladin),
        (GROUND, 0, 8, Thief),
        (GROUND, 0, 9, Hero),
        (GROUND, 0, 10, Unicorn),
        (GROUND, 0, 11, Oliphant),
        (UNDERWORLD, 0, 2, Basilisk),
        (UNDERWORLD, 0, 5, Elemental),
        (UNDERWORLD, 0, 9, Basilisk),
        (UNDERWORLD, 1, 1, Dwarf),
        (UNDERWORLD, 1, 3, Dwarf),
        (UNDERWORLD, 1, 5, Dwarf),
        (UNDERWORLD, 1, 7, Dwarf),
        (UNDERWORLD, 1, 9, Dwarf),
        (UNDERWORLD, 1, 11, Dwarf),
    ]
};

/// Files of the Sylph starting squares (Sky, second rank of each side).
pub const SYLPH_HOME_FILES: [u8; 6] = [0, 2, 4, 6, 8, 10];

/// Rank of the Sylph starting squares for `color`.
#[inline]
pub fn sylph_home_rank(color: Color) -> u8 {
    match color {
        Color::Gold => 1,
        Color::Scarlet => (RANKS - 2) as u8,
    }
}

impl Position {
    /// A position with no pieces.
    pub fn empty(side_to_move: Color) -> Position {
        Position { cells: [0; CELLS], side_to_move, ply_count: 0, halfmove_clock: 0 }
    }

    pub fn initial() -> Position {
        let mut pos = Position::empty(Color::Gold);
        for &(level, rank, file, kind) in GOLD_SETUP {
            let gold = Square { level, rank, file };
            pos.cells[gold.index()] = Piece::new(kind, Color::Gold).code();
            pos.cells[gold.mirror().index()] = Piece::new(kind, Color::Scarlet).code();
        }
        for file in 0..FILES as u8 {
            let gold = Square { level: GROUND, rank: 1, file };
            pos.cells[gold.index()] = Piece::new(PieceKind::Warrior, Color::Gold).code();
            pos.cells[gold.mirror().index()] = Piece::new(PieceKind::Warrior, Color::Scarlet).code();
        }
        pos
    }

    #[inline]
    pub fn piece_at(&self, index: usize) -> Option<Piece> {
        Piece::from_code(self.cells[index])
    }

    #[inline]
    pub fn piece_on(&self, square: Square) -> Option<Piece> {
        self.piece_at(square.index())
    }

    /// Place (or clear, with `None`) a piece. Intended for building test and
    /// editor positions.
    pub fn put(&mut self, square: Square, piece: Option<Piece>) {
        self.cells[square.index()] = piece.map_or(0, Piece::code);
    }

    pub fn with_piece(mut self, square: Square, piece: Piece) -> Position {
        self.put(square, Some(piece));
        self
    }

    pub fn king_square(&self, color: Color) -> Option<usize> {
        let code = Piece::new(PieceKind::King, color).code();
        self.cells.iter().position(|&c| c == code)
    }

    pub fn pieces(&self) -> impl Iterator<Item = (usize, Piece)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| Piece::from_code(c).map(|p| (i, p)))
    }

    pub fn count(&self, piece: Piece) -> usize {
        let code = piece.code();
        self.cells.iter().filter(|&&c| c == code).count()
    }

    /// Successor position; `self` is left untouched.
    pub fn apply(&self, mv: &Move) -> Position {
        let mut next = self.clone();
        next.apply_in_place(mv);
        next
    }

    pub fn apply_in_place(&mut self, mv: &Move) {
        let from = mv.from as usize;
        let to = mv.to as usize;
        let mover = self.cells[from];
        debug_assert!(mover != 0, "apply from an empty cell");
        debug_assert_eq!(self.cells[to], mv.captured, "captured code mismatch");
        match mv.kind {
            MoveKind::Normal => {
                self.cells[to] = mover;
                self.cells[from] = 0;
            }
            MoveKind::Promotion => {
                self.cells[to] = mv.promoted_to;
                self.cells[from] = 0;
            }
            MoveKind::RemoteCapture => {
                self.cells[to] = 0;
            }
        }
        let warrior = mover.unsigned_abs() == PieceKind::Warrior.code();
        self.halfmove_clock = if mv.captured != 0 || warrior { 0 } else { self.halfmove_clock + 1 };
        self.ply_count += 1;
        self.side_to_move = self.side_to_move.opposite();
    }

    /// Exact inverse of [`Position::apply`] for the last applied move.
    pub fn undo(&self, mv: &Move) -> Result<Position> {
        let mut prev = self.clone();
        prev.undo_in_place(mv)?;
        Ok(prev)
    }

    pub fn undo_in_place(&mut self, mv: &Move) -> Result<()> {
        let from = mv.from as usize;
        let to = mv.to as usize;
        if from >= CELLS || to >= CELLS || self.ply_count == 0 {
            return Err(Error::UndoMismatch("move out of range or no move to undo"));
        }
        let mover_side = self.side_to_move.opposite();
        let belongs = |code: i8| code != 0 && (code > 0) == (mover_side == Color::Gold);
        match mv.kind {
            MoveKind::Normal => {
                if self.cells[from] != 0 || !belongs(self.cells[to]) {
                    return Err(Error::UndoMismatch("mover is not on the destination"));
                }
                self.cells[from] = self.cells[to];
                self.cells[to] = mv.captured;
            }
            MoveKind::Promotion => {
                if self.cells[from] != 0 || self.cells[to] != mv.promoted_to || !belongs(mv.promoted_to) {
                    return Err(Error::UndoMismatch("promoted piece is not on the destination"));
                }
                self.cells[from] = Piece::new(PieceKind::Warrior, mover_side).code();
                self.cells[to] = mv.captured;
            }
            MoveKind::RemoteCapture => {
                if !belongs(self.cells[from]) || self.cells[to] != 0 || mv.captured == 0 {
                    return Err(Error::UndoMismatch("remote capture target is not empty"));
                }
                self.cells[to] = mv.captured;
            }
        }
        self.halfmove_clock = mv.clock_before;
        self.ply_count -= 1;
        self.side_to_move = mover_side;
        Ok(())
    }

    /// Rank-reflected, color-swapped copy.
    pub fn mirror(&self) -> Position {
        let mut out = Position {
            cells: [0; CELLS],
            side_to_move: self.side_to_move.opposite(),
            ply_count: self.ply_count,
            halfmove_clock: self.halfmove_clock,
        };
        for (i, &c) in self.cells.iter().enumerate() {
            out.cells[mirror_index(i)] = -c;
        }
        out
    }
}
