//! Legal move generation, attack probes, freeze handling and terminal
//! detection.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::board::{
    Color, Move, MoveKind, Piece, PieceKind, Position, Square, CELLS, FILES, GROUND, LEVEL_CELLS, QUIET_PLY_CAP, RANKS,
    TOTAL_PLY_CAP,
};
use crate::error::{Error, Result};
use crate::rules::{set_contains, Compiled, Mode};

/// Moves for one side in deterministic `(from, to, kind)` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveList {
    pub moves: Vec<Move>,
    pub generated_for: Color,
}

impl Deref for MoveList {
    type Target = [Move];

    fn deref(&self) -> &[Move] {
        &self.moves
    }
}

impl IntoIterator for MoveList {
    type Item = Move;
    type IntoIter = std::vec::IntoIter<Move>;

    fn into_iter(self) -> Self::IntoIter {
        self.moves.into_iter()
    }
}

impl<'a> IntoIterator for &'a MoveList {
    type Item = &'a Move;
    type IntoIter = std::slice::Iter<'a, Move>;

    fn into_iter(self) -> Self::IntoIter {
        self.moves.iter()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Ongoing,
    GoldWins,
    ScarletWins,
    Draw,
}

impl Outcome {
    pub fn win_for(color: Color) -> Outcome {
        match color {
            Color::Gold => Outcome::GoldWins,
            Color::Scarlet => Outcome::ScarletWins,
        }
    }

    /// Score from `color`'s point of view: 1 win, 0.5 draw, 0 loss.
    pub fn score_for(self, color: Color) -> Option<f64> {
        match (self, color) {
            (Outcome::Ongoing, _) => None,
            (Outcome::Draw, _) => Some(0.5),
            (Outcome::GoldWins, Color::Gold) | (Outcome::ScarletWins, Color::Scarlet) => Some(1.0),
            _ => Some(0.0),
        }
    }
}

#[inline]
fn owner(code: i8) -> Color {
    if code > 0 {
        Color::Gold
    } else {
        Color::Scarlet
    }
}

#[inline]
fn is_enemy(code: i8, color: Color) -> bool {
    code != 0 && owner(code) != color
}

/// Frozen test on a raw index; `code` must be the occupant.
#[inline]
fn frozen_at(cells: &[i8; CELLS], index: usize, code: i8) -> bool {
    if index / LEVEL_CELLS != GROUND as usize {
        return false;
    }
    let below = cells[index + LEVEL_CELLS];
    below.unsigned_abs() == PieceKind::Basilisk.code() && (below > 0) != (code > 0)
}

/// True iff the piece on `square` sits on the Ground with an enemy Basilisk
/// directly beneath it.
pub fn is_frozen(position: &Position, square: Square) -> Result<bool> {
    let index = square.index();
    let code = position.cells[index];
    if code == 0 {
        return Err(Error::EmptySquare(index));
    }
    Ok(frozen_at(&position.cells, index, code))
}

/// Pseudo-legal moves of the piece on `from` (own King safety ignored).
pub(crate) fn piece_moves(position: &Position, from: usize, out: &mut Vec<Move>) {
    let code = position.cells[from];
    let Some(piece) = Piece::from_code(code) else { return };
    if frozen_at(&position.cells, from, code) {
        return;
    }
    let compiled = Compiled::get();
    let promote_rank = if piece.color == Color::Gold { RANKS - 1 } else { 0 };
    let promotion = match piece.kind {
        PieceKind::Warrior => Some(Piece::new(PieceKind::Hero, piece.color).code()),
        _ => None,
    };
    let clock = position.halfmove_clock;
    let mut push = |to: usize, captured: i8, remote: bool| {
        let (kind, promoted_to) = if remote {
            (MoveKind::RemoteCapture, 0)
        } else if let Some(p) = promotion.filter(|_| (to % LEVEL_CELLS) / FILES == promote_rank) {
            (MoveKind::Promotion, p)
        } else {
            (MoveKind::Normal, 0)
        };
        out.push(Move { from: from as u16, to: to as u16, kind, captured, promoted_to, clock_before: clock });
    };
    for ray in compiled.rays(piece.color, piece.kind, from) {
        for &to in compiled.ray_cells(ray) {
            let to = to as usize;
            let target = position.cells[to];
            if target == 0 {
                if ray.mode.can_move() {
                    push(to, 0, false);
                    continue;
                }
                break;
            }
            if is_enemy(target, piece.color) && ray.mode.can_capture() {
                push(to, target, ray.mode == Mode::Remote);
            }
            break;
        }
    }
}

/// All pseudo-legal moves of `color`, ignoring whose turn it is.
pub fn pseudo_moves(position: &Position, color: Color) -> Vec<Move> {
    let mut out = Vec::with_capacity(96);
    for index in 0..CELLS {
        let code = position.cells[index];
        if code != 0 && owner(code) == color {
            piece_moves(position, index, &mut out);
        }
    }
    out
}

/// Number of pseudo-legal moves of the piece on `from`; zero when frozen.
pub fn piece_move_count(position: &Position, from: usize) -> usize {
    let code = position.cells[from];
    let Some(piece) = Piece::from_code(code) else { return 0 };
    if frozen_at(&position.cells, from, code) {
        return 0;
    }
    let compiled = Compiled::get();
    let mut count = 0;
    for ray in compiled.rays(piece.color, piece.kind, from) {
        for &to in compiled.ray_cells(ray) {
            let target = position.cells[to as usize];
            if target == 0 {
                if ray.mode.can_move() {
                    count += 1;
                    continue;
                }
                break;
            }
            if is_enemy(target, piece.color) && ray.mode.can_capture() {
                count += 1;
            }
            break;
        }
    }
    count
}

/// Calls `visit(target, same_level)` for every cell the piece on `from`
/// could capture on if an enemy stood there. Frozen pieces attack nothing.
pub(crate) fn for_each_attack(cells: &[i8; CELLS], from: usize, mut visit: impl FnMut(usize, bool)) {
    let code = cells[from];
    let Some(piece) = Piece::from_code(code) else { return };
    if frozen_at(cells, from, code) {
        return;
    }
    let compiled = Compiled::get();
    for ray in compiled.rays(piece.color, piece.kind, from) {
        for &to in compiled.ray_cells(ray) {
            let to = to as usize;
            if ray.mode.can_capture() {
                visit(to, ray.same_level);
            }
            if cells[to] != 0 || !ray.mode.can_move() {
                break;
            }
        }
    }
}

fn piece_hits(cells: &[i8; CELLS], from: usize, piece: Piece, target: usize) -> bool {
    let compiled = Compiled::get();
    for ray in compiled.rays(piece.color, piece.kind, from) {
        if !ray.mode.can_capture() {
            continue;
        }
        for &to in compiled.ray_cells(ray) {
            let to = to as usize;
            if to == target {
                return true;
            }
            if cells[to] != 0 {
                break;
            }
        }
    }
    false
}

pub(crate) fn attacked_in(cells: &[i8; CELLS], target: usize, by: Color) -> bool {
    let compiled = Compiled::get();
    for (from, &code) in cells.iter().enumerate() {
        if code == 0 || owner(code) != by {
            continue;
        }
        let Some(piece) = Piece::from_code(code) else { continue };
        if !set_contains(compiled.reach(by, piece.kind, from), target) {
            continue;
        }
        if frozen_at(cells, from, code) {
            continue;
        }
        if piece_hits(cells, from, piece, target) {
            return true;
        }
    }
    false
}

/// True iff some piece of `by` has a capture vector reaching `square`,
/// including vertical and remote captures.
pub fn attacks(position: &Position, square: Square, by: Color) -> bool {
    attacked_in(&position.cells, square.index(), by)
}

pub fn in_check(position: &Position, color: Color) -> bool {
    match position.king_square(color) {
        Some(k) => attacked_in(&position.cells, k, color.opposite()),
        None => false,
    }
}

/// Whether `mv` (pseudo-legal for its mover) leaves the mover's King safe.
fn keeps_king_safe(position: &Position, mv: &Move, mover: Color, king: Option<usize>) -> bool {
    let mut cells = position.cells;
    let from = mv.from as usize;
    let to = mv.to as usize;
    match mv.kind {
        MoveKind::RemoteCapture => cells[to] = 0,
        MoveKind::Promotion => {
            cells[to] = mv.promoted_to;
            cells[from] = 0;
        }
        MoveKind::Normal => {
            cells[to] = cells[from];
            cells[from] = 0;
        }
    }
    let king = match king {
        Some(k) if k == from && mv.kind != MoveKind::RemoteCapture => to,
        Some(k) => k,
        None => return true,
    };
    !attacked_in(&cells, king, mover.opposite())
}

fn game_capped(position: &Position) -> bool {
    position.halfmove_clock >= QUIET_PLY_CAP || position.ply_count >= TOTAL_PLY_CAP
}

/// Drops the moves that leave `color`'s King attacked.
///
/// When the King is not in check, a move by a piece other than the King or
/// a Basilisk, and not a remote capture, can expose the King only by
/// vacating its source cell. One probe with that cell emptied then clears
/// every such move of the piece; the per-move probe runs only when it fails.
fn retain_legal(position: &Position, color: Color, moves: &mut Vec<Move>) {
    let Some(king) = position.king_square(color) else { return };
    let enemy = color.opposite();
    let checked = attacked_in(&position.cells, king, enemy);
    let mut cached: Option<(u16, bool)> = None;
    moves.retain(|m| {
        let from = m.from as usize;
        let kind = position.cells[from].unsigned_abs();
        let simple = !checked
            && m.kind != MoveKind::RemoteCapture
            && kind != PieceKind::King.code()
            && kind != PieceKind::Basilisk.code();
        if simple {
            let free = match cached {
                Some((f, free)) if f == m.from => free,
                _ => {
                    let mut cells = position.cells;
                    cells[from] = 0;
                    let free = !attacked_in(&cells, king, enemy);
                    cached = Some((m.from, free));
                    free
                }
            };
            if free {
                return true;
            }
        }
        keeps_king_safe(position, m, color, Some(king))
    });
}

/// Legal moves for `color` regardless of the side to move and the ply caps.
pub(crate) fn legal_moves_for(position: &Position, color: Color) -> Vec<Move> {
    let mut moves = pseudo_moves(position, color);
    retain_legal(position, color, &mut moves);
    moves.sort_unstable_by_key(Move::key);
    moves.dedup();
    moves
}

/// Legal moves of the piece on `from` only.
pub(crate) fn legal_piece_moves(position: &Position, from: usize) -> Vec<Move> {
    let Some(piece) = position.piece_at(from) else { return Vec::new() };
    let mut moves = Vec::new();
    piece_moves(position, from, &mut moves);
    retain_legal(position, piece.color, &mut moves);
    moves
}

/// All and only the legal moves for the side to move. Empty once the game
/// is over, including by the ply caps.
pub fn legal_moves(position: &Position) -> MoveList {
    let side = position.side_to_move;
    let moves = if game_capped(position) { Vec::new() } else { legal_moves_for(position, side) };
    MoveList { moves, generated_for: side }
}

/// Whether `color` has at least one legal move, ignoring the ply caps.
/// Stops at the first piece that can move.
pub fn has_legal_move(position: &Position, color: Color) -> bool {
    let mut moves = Vec::new();
    for (from, piece) in position.pieces() {
        if piece.color != color {
            continue;
        }
        moves.clear();
        piece_moves(position, from, &mut moves);
        retain_legal(position, color, &mut moves);
        if !moves.is_empty() {
            return true;
        }
    }
    false
}

pub fn is_legal(position: &Position, mv: &Move) -> bool {
    legal_moves(position).moves.contains(mv)
}

/// [`Position::apply`] with a legality check.
pub fn apply_checked(position: &Position, mv: &Move) -> Result<Position> {
    if is_legal(position, mv) {
        Ok(position.apply(mv))
    } else {
        Err(Error::IllegalMove(crate::notation::format_move(mv)))
    }
}

pub fn terminal_state(position: &Position) -> Outcome {
    if game_capped(position) {
        return Outcome::Draw;
    }
    let side = position.side_to_move;
    if has_legal_move(position, side) {
        return Outcome::Ongoing;
    }
    if in_check(position, side) {
        Outcome::win_for(side.opposite())
    } else {
        Outcome::Draw
    }
}

/// `perft(initial, d)` for `d = 0..=3`, agreed by the engine and the
/// reference generator.
pub const PERFT_INITIAL: [u64; 4] = [1, 78, 6_084, 487_725];

/// Leaf count of the legal-move tree.
pub fn perft(position: &Position, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    let moves = legal_moves(position);
    if depth == 1 {
        return moves.len() as u64;
    }
    let mut scratch = position.clone();
    let mut total = 0;
    for mv in &moves {
        scratch.apply_in_place(mv);
        total += perft(&scratch, depth - 1);
        scratch.undo_in_place(mv).expect("undo of a just-applied move");
    }
    total
}
