//! A deliberately naive move generator.
//!
//! Every (from, to) pair on the board is tested against a per-kind
//! geometric predicate written directly from the movement table, then
//! filtered for occupancy, the Basilisk freeze and King safety. It shares
//! only the board types with the engine and none of its rule tables.

use dragonfish_core::{Color, Move, MoveKind, Position};

const CELLS: usize = 288;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Access {
    MoveOnly,
    CaptureOnly,
    Both,
    Remote,
}

#[derive(Clone, Copy)]
struct Cell {
    l: i32,
    r: i32,
    f: i32,
}

fn cell(index: usize) -> Cell {
    Cell { l: (index / 96) as i32, r: (index % 96 / 12) as i32, f: (index % 12) as i32 }
}

fn index(l: i32, r: i32, f: i32) -> usize {
    (l * 96 + r * 12 + f) as usize
}

fn kind_of(code: i8) -> u8 {
    code.unsigned_abs()
}

fn owner(code: i8) -> Color {
    if code > 0 {
        Color::Gold
    } else {
        Color::Scarlet
    }
}

/// Intermediate cells between two cells on one level along a straight or
/// diagonal line are all empty.
fn clear_between(cells: &[i8; CELLS], a: Cell, b: Cell) -> bool {
    let (sr, sf) = ((b.r - a.r).signum(), (b.f - a.f).signum());
    let steps = (b.r - a.r).abs().max((b.f - a.f).abs());
    (1..steps).all(|k| cells[index(a.l, a.r + k * sr, a.f + k * sf)] == 0)
}

/// What a piece of `kind` and `color` standing on `a` may do to `b`,
/// ignoring what stands on `b`. Slides require the line to be clear.
fn access(cells: &[i8; CELLS], kind: u8, color: Color, a: Cell, b: Cell) -> Option<Access> {
    use Access::*;
    let fwd = if color == Color::Gold { 1 } else { -1 };
    let dl = b.l - a.l;
    let dr = (b.r - a.r) * fwd;
    let df = b.f - a.f;
    let (ar, af) = (dr.abs(), df.abs());
    let straight = dr == 0 && df == 0;
    let king_step = ar <= 1 && af <= 1 && !straight;
    let orth_step = ar + af == 1;
    let diagonal = ar == af && ar > 0;
    let orthogonal = (ar == 0) != (af == 0);
    let knight = (ar == 1 && af == 2) || (ar == 2 && af == 1);
    let (sky, ground, under) = (a.l == 0, a.l == 1, a.l == 2);
    let yes = |c: bool, x: Access| if c { Some(x) } else { None };

    match kind {
        // Sylph
        1 => {
            if sky && dl == 0 {
                if dr == 1 && af == 1 {
                    return Some(MoveOnly);
                }
                return yes(dr == 1 && df == 0, CaptureOnly);
            }
            if sky && dl == 1 {
                return yes(straight, CaptureOnly);
            }
            if ground && dl == -1 {
                let home_rank = if color == Color::Gold { 1 } else { 6 };
                let home = b.r == home_rank && b.f % 2 == 0;
                return yes(straight || home, MoveOnly);
            }
            None
        }
        // Griffin
        2 => {
            if sky && dl == 0 {
                return yes((ar == 3 && af == 2) || (ar == 2 && af == 3), Both);
            }
            if (sky && dl == 1) || (ground && (dl == 0 || dl == -1)) {
                return yes(ar == 1 && af == 1, Both);
            }
            None
        }
        // Dragon
        3 => {
            if !sky {
                return None;
            }
            if dl == 0 {
                return yes(orth_step || (diagonal && clear_between(cells, a, b)), Both);
            }
            yes(dl == 1 && ar + af <= 1, Remote)
        }
        // Warrior
        4 => {
            if !ground || dl != 0 || dr != 1 {
                return None;
            }
            match af {
                0 => Some(MoveOnly),
                1 => Some(CaptureOnly),
                _ => None,
            }
        }
        // Oliphant
        5 => yes(ground && dl == 0 && orthogonal && clear_between(cells, a, b), Both),
        // Unicorn
        6 => yes(ground && dl == 0 && knight, Both),
        // Hero
        7 => {
            if ground {
                if dl == 0 {
                    return yes(diagonal && ar <= 2, Both);
                }
                return yes(dl.abs() == 1 && ar == 1 && af == 1, Both);
            }
            yes(b.l == 1 && ar == 1 && af == 1, Both)
        }
        // Thief
        8 => yes(ground && dl == 0 && diagonal && clear_between(cells, a, b), Both),
        // Cleric and King
        9 | 11 => {
            if dl == 0 {
                return yes(king_step, Both);
            }
            yes(dl.abs() == 1 && straight, Both)
        }
        // Mage
        10 => {
            if ground {
                if dl == 0 {
                    return yes((diagonal || orthogonal) && clear_between(cells, a, b), Both);
                }
                return yes(dl.abs() == 1 && straight, Both);
            }
            if dl == 0 {
                return yes(orth_step, Both);
            }
            yes(b.l == 1 && straight, Both)
        }
        // Paladin
        12 => match dl.abs() {
            0 => yes(king_step || (ground && knight), Both),
            1 => yes((ar == 2 && af == 0) || (ar == 0 && af == 2), Both),
            2 => yes(orth_step, Both),
            _ => None,
        },
        // Basilisk
        13 => {
            if !under || dl != 0 {
                return None;
            }
            if dr == 1 && af <= 1 {
                return Some(Both);
            }
            yes(dr == -1 && df == 0, MoveOnly)
        }
        // Dwarf
        14 => {
            if (under && dl == -1) || (ground && dl == 1) {
                return yes(straight, CaptureOnly);
            }
            if !(under || ground) || dl != 0 {
                return None;
            }
            if (dr == 1 && df == 0) || (dr == 0 && af == 1) {
                return Some(MoveOnly);
            }
            yes(dr == 1 && af == 1, CaptureOnly)
        }
        // Elemental
        15 => {
            if under && dl == 0 {
                if orthogonal && ar.max(af) <= 2 && clear_between(cells, a, b) {
                    return Some(Both);
                }
                return yes(ar == 1 && af == 1, MoveOnly);
            }
            if (under && dl == -1) || (ground && dl == 1) {
                return yes(ar + af <= 1, Both);
            }
            yes(ground && dl == 0 && orth_step, Both)
        }
        _ => None,
    }
}

fn frozen(cells: &[i8; CELLS], from: usize) -> bool {
    let a = cell(from);
    if a.l != 1 {
        return false;
    }
    let below = cells[index(2, a.r, a.f)];
    kind_of(below) == 13 && owner(below) != owner(cells[from])
}

/// Whether any piece of `by` could capture on `target`.
pub fn attacked(cells: &[i8; CELLS], target: usize, by: Color) -> bool {
    (0..CELLS).any(|from| {
        let code = cells[from];
        code != 0
            && owner(code) == by
            && from != target
            && !frozen(cells, from)
            && matches!(
                access(cells, kind_of(code), by, cell(from), cell(target)),
                Some(Access::CaptureOnly | Access::Both | Access::Remote)
            )
    })
}

/// Moves obeying piece geometry, occupancy and the freeze, before the King
/// safety filter. Sorted by `(from, to, kind)`.
pub fn pseudo_moves(position: &Position) -> Vec<Move> {
    let cells = &position.cells;
    let side = position.side_to_move;
    let mut out = Vec::new();
    for from in 0..CELLS {
        let code = cells[from];
        if code == 0 || owner(code) != side || frozen(cells, from) {
            continue;
        }
        for to in 0..CELLS {
            if to == from {
                continue;
            }
            let Some(acc) = access(cells, kind_of(code), side, cell(from), cell(to)) else { continue };
            let target = cells[to];
            let quiet = target == 0 && matches!(acc, Access::MoveOnly | Access::Both);
            let capture = target != 0
                && owner(target) != side
                && matches!(acc, Access::CaptureOnly | Access::Both | Access::Remote);
            if !quiet && !capture {
                continue;
            }
            let far_rank = if side == Color::Gold { 7 } else { 0 };
            let (kind, promoted_to) = if acc == Access::Remote {
                (MoveKind::RemoteCapture, 0)
            } else if kind_of(code) == 4 && cell(to).r == far_rank {
                (MoveKind::Promotion, 7 * code.signum())
            } else {
                (MoveKind::Normal, 0)
            };
            out.push(Move {
                from: from as u16,
                to: to as u16,
                kind,
                captured: target,
                promoted_to,
                clock_before: position.halfmove_clock,
            });
        }
    }
    out
}

/// Legal moves for the side to move, ignoring the ply caps.
pub fn legal_moves(position: &Position) -> Vec<Move> {
    let side = position.side_to_move;
    pseudo_moves(position)
        .into_iter()
        .filter(|mv| {
            let next = position.apply(mv);
            match next.cells.iter().position(|&c| c == 11 * side.sign()) {
                Some(king) => !attacked(&next.cells, king, side.opposite()),
                None => true,
            }
        })
        .collect()
}

pub fn perft(position: &Position, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    let moves = legal_moves(position);
    if depth == 1 {
        return moves.len() as u64;
    }
    moves.iter().map(|mv| perft(&position.apply(mv), depth - 1)).sum()
}
