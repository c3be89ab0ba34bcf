//! Chess evaluation heuristics carried over to the three-level board.
//!
//! Every component is a raw score from Gold's point of view (positive is
//! good for Gold). [`heuristic_total`] weights the components with the last
//! eleven entries of a [`ThetaVector`]; the first fourteen entries scale the
//! piece values used by [`material`].
//!
//! All components except the pawn ratio are integer valued, and each is
//! accumulated from per-side tallies, so mirroring a position negates every
//! component exactly.

pub mod psqt;
pub mod theta;

use serde::{Deserialize, Serialize};

use crate::board::{Color, Piece, PieceKind, Position, Square, CELLS, FILES, LEVEL_CELLS, RANKS, SKY};
use crate::error::{Error, Result};
use crate::movegen::{for_each_attack, legal_piece_moves, piece_move_count};
use crate::rules::{set_contains, set_insert, CellSet};

pub use psqt::PsqtTables;
pub use theta::{baseline_value, PieceValues, ThetaVector, COMPONENT_NAMES, KING_VALUE};

pub const KING_ZONE_ATTACKER: f64 = 8.0;
pub const KING_ESCAPE: f64 = 4.0;
pub const KING_SHIELD: f64 = 6.0;
pub const PASSED_PER_RANK: f64 = 10.0;
pub const PAIR_BONUS: f64 = 25.0;
pub const MAGE_OFF_GROUND: f64 = 30.0;
pub const IMMOBILE_PIECE: f64 = 10.0;
pub const DRAGON_CENTER: f64 = 20.0;

const PAIR_KINDS: [PieceKind; 6] = [
    PieceKind::Griffin,
    PieceKind::Oliphant,
    PieceKind::Unicorn,
    PieceKind::Hero,
    PieceKind::Thief,
    PieceKind::Basilisk,
];

/// Raw component scores and their weighted total.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalBreakdown {
    pub material: f64,
    pub psqt: f64,
    pub mobility: f64,
    pub king_safety: f64,
    pub threats: f64,
    pub passed_pieces: f64,
    pub pawn_count: f64,
    pub imbalance: f64,
    pub space: f64,
    pub activity_penalty: f64,
    pub dragon_center: f64,
    pub total: f64,
}

impl EvalBreakdown {
    /// Components in weight-vector order.
    pub fn components(&self) -> [f64; theta::COMPONENTS] {
        [
            self.material,
            self.psqt,
            self.mobility,
            self.king_safety,
            self.threats,
            self.passed_pieces,
            self.pawn_count,
            self.imbalance,
            self.space,
            self.activity_penalty,
            self.dragon_center,
        ]
    }
}

#[inline]
fn side(color: Color) -> usize {
    color.index()
}

/// Per-side piece counts indexed by kind code.
fn piece_counts(position: &Position) -> [[i32; 16]; 2] {
    let mut counts = [[0i32; 16]; 2];
    for &code in position.cells.iter() {
        if code != 0 {
            counts[(code < 0) as usize][code.unsigned_abs() as usize] += 1;
        }
    }
    counts
}

fn gold_minus_scarlet(per_side: [f64; 2]) -> f64 {
    per_side[0] - per_side[1]
}

/// Piece values scaled by `theta`; Kings count a fixed 20000.
pub fn material(position: &Position, theta: &ThetaVector) -> f64 {
    material_from_counts(&piece_counts(position), theta)
}

fn material_from_counts(counts: &[[i32; 16]; 2], theta: &ThetaVector) -> f64 {
    let mut total = 0.0;
    for kind in PieceKind::ALL {
        let diff = (counts[0][kind.code() as usize] - counts[1][kind.code() as usize]) as f64;
        if diff != 0.0 {
            total += theta.piece_scale(kind) * baseline_value(kind) * diff;
        }
    }
    total
}

pub fn psqt(position: &Position) -> f64 {
    psqt_with(position, PsqtTables::standard())
}

/// Table bonuses for Ground pieces inside the c..j window.
pub fn psqt_with(position: &Position, tables: &PsqtTables) -> f64 {
    let mut per_side = [0i32; 2];
    let ground = &position.cells[LEVEL_CELLS..2 * LEVEL_CELLS];
    for rank in 0..RANKS {
        for col in 0..psqt::WINDOW_FILES as usize {
            let code = ground[rank * FILES + psqt::WINDOW_FIRST_FILE as usize + col];
            let Some(piece) = Piece::from_code(code) else { continue };
            let row = if piece.color == Color::Gold { rank } else { RANKS - 1 - rank };
            per_side[side(piece.color)] += tables.lookup(piece.kind, row, col);
        }
    }
    (per_side[0] - per_side[1]) as f64
}

/// Pseudo-legal move counts, piece by piece, plus single-level attack maps.
struct Activity {
    moves: [i32; 2],
    immobile: [i32; 2],
    attacked: [CellSet; 2],
}

fn activity(position: &Position) -> Activity {
    let mut out = Activity { moves: [0; 2], immobile: [0; 2], attacked: [[0; 5]; 2] };
    for index in 0..CELLS {
        let code = position.cells[index];
        if code == 0 {
            continue;
        }
        let s = (code < 0) as usize;
        let n = piece_move_count(position, index) as i32;
        out.moves[s] += n;
        if n == 0 {
            out.immobile[s] += 1;
        }
        let set = &mut out.attacked[s];
        for_each_attack(&position.cells, index, |to, same_level| {
            if same_level {
                set_insert(set, to);
            }
        });
    }
    out
}

/// Gold's pseudo-legal move count minus Scarlet's.
pub fn mobility(position: &Position) -> f64 {
    let a = activity(position);
    (a.moves[0] - a.moves[1]) as f64
}

fn king_danger(position: &Position, color: Color) -> Option<f64> {
    let king = position.king_square(color)?;
    let sq = Square::from_index(king).ok()?;
    let mut near = 0;
    for dr in -2i8..=2 {
        for df in -2i8..=2 {
            if let Some(s) = sq.offset(0, dr, df) {
                let code = position.cells[s.index()];
                if code != 0 && (code > 0) != (color == Color::Gold) {
                    near += 1;
                }
            }
        }
    }
    let escapes = legal_piece_moves(position, king).len();
    let mut shield = 0;
    for df in -1i8..=1 {
        if let Some(s) = sq.offset(0, color.forward(), df) {
            if let Some(p) = position.piece_on(s) {
                if p.color == color && p.kind.is_pawn_class() {
                    shield += 1;
                }
            }
        }
    }
    Some(KING_ZONE_ATTACKER * near as f64 - KING_ESCAPE * escapes as f64 - KING_SHIELD * shield as f64)
}

/// Scarlet King danger minus Gold King danger.
pub fn king_safety(position: &Position) -> Result<f64> {
    let gold = king_danger(position, Color::Gold).ok_or(Error::MissingKing(Color::Gold))?;
    let scarlet = king_danger(position, Color::Scarlet).ok_or(Error::MissingKing(Color::Scarlet))?;
    Ok(scarlet - gold)
}

/// A missing King contributes no danger.
fn king_safety_lenient(position: &Position) -> f64 {
    king_danger(position, Color::Scarlet).unwrap_or(0.0) - king_danger(position, Color::Gold).unwrap_or(0.0)
}

fn threats_from(position: &Position, attacked: &[CellSet; 2]) -> f64 {
    let mut per_side = [0.0f64; 2];
    for (index, piece) in position.pieces() {
        if piece.kind == PieceKind::King {
            continue;
        }
        let attacker = piece.color.opposite();
        if set_contains(&attacked[side(attacker)], index) {
            per_side[side(attacker)] += baseline_value(piece.kind) / 10.0;
        }
    }
    gold_minus_scarlet(per_side)
}

/// Value/10 of every enemy piece under single-level attack, Gold minus
/// Scarlet. Kings are not counted.
pub fn threats(position: &Position) -> f64 {
    threats_from(position, &activity(position).attacked)
}

/// Bonus for pawn-class pieces with no enemy ahead on their own and adjacent
/// files of the same level.
pub fn passed_pieces(position: &Position) -> f64 {
    let mut per_side = [0.0f64; 2];
    for (index, piece) in position.pieces() {
        if !piece.kind.is_pawn_class() {
            continue;
        }
        let sq = Square::from_index(index).expect("index from pieces()");
        let level = sq.level() as usize;
        let (rank, file) = (sq.rank() as i32, sq.file() as i32);
        let fwd = piece.color.forward() as i32;
        let mut blocked = false;
        let mut r = rank + fwd;
        'scan: while (0..RANKS as i32).contains(&r) {
            for f in (file - 1).max(0)..=(file + 1).min(FILES as i32 - 1) {
                let code = position.cells[level * LEVEL_CELLS + r as usize * FILES + f as usize];
                if code != 0 && (code > 0) != (piece.color == Color::Gold) {
                    blocked = true;
                    break 'scan;
                }
            }
            r += fwd;
        }
        if !blocked {
            let start = if piece.color == Color::Gold { 1 } else { RANKS as i32 - 2 };
            let advanced = ((rank - start) * fwd).max(0);
            per_side[side(piece.color)] += PASSED_PER_RANK * advanced as f64;
        }
    }
    gold_minus_scarlet(per_side)
}

fn pawn_count_from(counts: &[[i32; 16]; 2]) -> f64 {
    let pawns = |s: usize| {
        counts[s][PieceKind::Sylph.code() as usize]
            + counts[s][PieceKind::Warrior.code() as usize]
            + counts[s][PieceKind::Dwarf.code() as usize]
    };
    let (g, s) = (pawns(0), pawns(1));
    if g + s == 0 {
        0.0
    } else {
        100.0 * (g - s) as f64 / (g + s) as f64
    }
}

/// `100 * (g - s) / (g + s)` over the pawn-class piece counts.
pub fn pawn_count(position: &Position) -> f64 {
    pawn_count_from(&piece_counts(position))
}

fn imbalance_from(counts: &[[i32; 16]; 2]) -> f64 {
    let mut per_side = [0.0f64; 2];
    for kind in PAIR_KINDS {
        let k = kind.code() as usize;
        for s in 0..2 {
            if counts[s][k] >= 2 && counts[1 - s][k] < 2 {
                per_side[s] += PAIR_BONUS;
            }
        }
    }
    gold_minus_scarlet(per_side)
}

/// Pair bonus for each paired kind one side still holds twice and the other
/// does not.
pub fn imbalance(position: &Position) -> f64 {
    imbalance_from(&piece_counts(position))
}

fn space_from(position: &Position, attacked: &[CellSet; 2]) -> f64 {
    let mut per_side = [0i32; 2];
    for (s, set) in attacked.iter().enumerate() {
        for (index, &code) in position.cells.iter().enumerate() {
            if code == 0 && set_contains(set, index) {
                per_side[s] += 1;
            }
        }
    }
    (per_side[0] - per_side[1]) as f64
}

/// Empty cells under single-level attack, Gold minus Scarlet.
pub fn space(position: &Position) -> f64 {
    space_from(position, &activity(position).attacked)
}

fn activity_penalty_from(position: &Position, immobile: &[i32; 2]) -> f64 {
    let mut per_side = [0.0f64; 2];
    for (index, piece) in position.pieces() {
        if piece.kind == PieceKind::Mage && index / LEVEL_CELLS != 1 {
            per_side[side(piece.color)] -= MAGE_OFF_GROUND;
        }
    }
    for s in 0..2 {
        per_side[s] -= IMMOBILE_PIECE * immobile[s] as f64;
    }
    gold_minus_scarlet(per_side)
}

/// Penalties for Mages off the Ground and for pieces with no moves.
pub fn activity_penalty(position: &Position) -> f64 {
    activity_penalty_from(position, &activity(position).immobile)
}

/// Bonus per Dragon on the Sky inside files e..h, ranks 3..6.
pub fn dragon_center(position: &Position) -> f64 {
    let mut per_side = [0.0f64; 2];
    for rank in 2..=5usize {
        for file in 4..=7usize {
            let code = position.cells[SKY as usize * LEVEL_CELLS + rank * FILES + file];
            if code.unsigned_abs() == PieceKind::Dragon.code() {
                per_side[(code < 0) as usize] += DRAGON_CENTER;
            }
        }
    }
    gold_minus_scarlet(per_side)
}

/// Every component plus the weighted total.
pub fn evaluate(position: &Position, theta: &ThetaVector) -> EvalBreakdown {
    evaluate_with(position, theta, PsqtTables::standard())
}

pub fn evaluate_with(position: &Position, theta: &ThetaVector, tables: &PsqtTables) -> EvalBreakdown {
    let counts = piece_counts(position);
    let act = activity(position);
    let mut b = EvalBreakdown {
        material: material_from_counts(&counts, theta),
        psqt: psqt_with(position, tables),
        mobility: (act.moves[0] - act.moves[1]) as f64,
        king_safety: king_safety_lenient(position),
        threats: threats_from(position, &act.attacked),
        passed_pieces: passed_pieces(position),
        pawn_count: pawn_count_from(&counts),
        imbalance: imbalance_from(&counts),
        space: space_from(position, &act.attacked),
        activity_penalty: activity_penalty_from(position, &act.immobile),
        dragon_center: dragon_center(position),
        total: 0.0,
    };
    b.total = weighted_sum(&b.components(), theta);
    b
}

fn weighted_sum(components: &[f64; theta::COMPONENTS], theta: &ThetaVector) -> f64 {
    let mut total = 0.0;
    for (i, c) in components.iter().enumerate() {
        total += theta.component_weight(i) * c;
    }
    total
}

/// Weighted sum of the components from Gold's point of view. Components
/// with a zero weight are not computed.
pub fn heuristic_total(position: &Position, theta: &ThetaVector) -> f64 {
    heuristic_total_with(position, theta, PsqtTables::standard())
}

pub fn heuristic_total_with(position: &Position, theta: &ThetaVector, tables: &PsqtTables) -> f64 {
    let w = |i: usize| theta.component_weight(i);
    let counts = piece_counts(position);
    // mobility, threats, space and activity share one walk over the pieces
    let act = if [2, 4, 8, 9].iter().any(|&i| w(i) != 0.0) { Some(activity(position)) } else { None };
    let mut c = [0.0; theta::COMPONENTS];
    if w(0) != 0.0 {
        c[0] = material_from_counts(&counts, theta);
    }
    if w(1) != 0.0 {
        c[1] = psqt_with(position, tables);
    }
    if let Some(a) = &act {
        c[2] = (a.moves[0] - a.moves[1]) as f64;
        c[4] = threats_from(position, &a.attacked);
        c[8] = space_from(position, &a.attacked);
        c[9] = activity_penalty_from(position, &a.immobile);
    }
    if w(3) != 0.0 {
        c[3] = king_safety_lenient(position);
    }
    if w(5) != 0.0 {
        c[5] = passed_pieces(position);
    }
    c[6] = pawn_count_from(&counts);
    c[7] = imbalance_from(&counts);
    if w(10) != 0.0 {
        c[10] = dragon_center(position);
    }
    weighted_sum(&c, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{GROUND, UNDERWORLD};

    fn sq(l: u8, r: u8, f: u8) -> Square {
        Square::new(l, r, f).unwrap()
    }

    fn gold(kind: PieceKind) -> Piece {
        Piece::new(kind, Color::Gold)
    }

    fn scarlet(kind: PieceKind) -> Piece {
        Piece::new(kind, Color::Scarlet)
    }

    #[test]
    fn initial_position_scores_zero_everywhere() {
        let p = Position::initial();
        let b = evaluate(&p, &ThetaVector::identity());
        assert_eq!(b.components(), [0.0; 11]);
        assert_eq!(b.total, 0.0);
        assert_eq!(king_safety(&p).unwrap(), 0.0);
    }

    #[test]
    fn material_examples() {
        let mut p = Position::initial();
        p.put(sq(0, 7, 5), None);
        assert_eq!(material(&p, &ThetaVector::identity()), 900.0);
        let mut theta = ThetaVector::identity();
        theta.0[2] = 2.0;
        assert_eq!(material(&p, &theta), 1800.0);
    }

    #[test]
    fn psqt_window_and_warrior_advance() {
        let edge = Position::empty(Color::Gold)
            .with_piece(sq(GROUND, 3, 0), gold(PieceKind::Warrior))
            .with_piece(sq(GROUND, 3, 11), gold(PieceKind::Oliphant))
            .with_piece(sq(SKY, 3, 5), gold(PieceKind::Dragon))
            .with_piece(sq(UNDERWORLD, 3, 5), gold(PieceKind::Basilisk));
        assert_eq!(psqt(&edge), 0.0);

        let tables = PsqtTables::standard();
        let home = Position::empty(Color::Gold).with_piece(sq(GROUND, 1, 5), gold(PieceKind::Warrior));
        let advanced = Position::empty(Color::Gold).with_piece(sq(GROUND, 4, 5), gold(PieceKind::Warrior));
        let delta = psqt(&advanced) - psqt(&home);
        assert_eq!(delta, (tables.tables[0][4][3] - tables.tables[0][1][3]) as f64);
        assert!(delta > 0.0);
    }

    #[test]
    fn pawn_ratio_examples() {
        let mut p = Position::empty(Color::Gold);
        for f in 0..12 {
            p.put(sq(GROUND, 2, f), Some(gold(PieceKind::Warrior)));
        }
        assert_eq!(pawn_count(&p), 100.0);
        for f in 0..4 {
            p.put(sq(GROUND, 3, f), Some(gold(PieceKind::Warrior)));
        }
        for f in 0..8 {
            p.put(sq(GROUND, 6, f), Some(scarlet(PieceKind::Warrior)));
        }
        assert_eq!(pawn_count(&p), 100.0 * 8.0 / 24.0);
        assert_eq!(pawn_count(&Position::empty(Color::Gold)), 0.0);
    }

    #[test]
    fn imbalance_examples() {
        let mut p = Position::initial();
        p.put(sq(GROUND, 7, 3), None);
        assert_eq!(imbalance(&p), 25.0);
        let mut q = Position::initial();
        q.put(sq(GROUND, 7, 2), None);
        q.put(sq(GROUND, 0, 2), None);
        assert_eq!(imbalance(&q), 0.0);
    }

    #[test]
    fn passed_piece_example() {
        let p = Position::empty(Color::Gold).with_piece(sq(GROUND, 5, 4), gold(PieceKind::Warrior));
        assert_eq!(passed_pieces(&p), 40.0);
        let blocked = p.clone().with_piece(sq(GROUND, 7, 5), scarlet(PieceKind::Thief));
        assert_eq!(passed_pieces(&blocked), 0.0);
        // An enemy on another level does not block.
        let other_level = p.with_piece(sq(SKY, 7, 4), scarlet(PieceKind::Sylph));
        assert_eq!(passed_pieces(&other_level), 40.0);
        assert_eq!(passed_pieces(&Position::initial()), 0.0);
    }

    #[test]
    fn space_lone_oliphant() {
        let p = Position::empty(Color::Gold).with_piece(sq(GROUND, 0, 0), gold(PieceKind::Oliphant));
        assert_eq!(space(&p), 18.0);
    }

    #[test]
    fn threats_examples() {
        let p = Position::empty(Color::Gold)
            .with_piece(sq(GROUND, 2, 2), gold(PieceKind::Oliphant))
            .with_piece(sq(GROUND, 2, 8), scarlet(PieceKind::Mage));
        // The Mage attacks back along the same rank.
        assert_eq!(threats(&p), 33.0 - 50.0);

        let q = Position::empty(Color::Gold)
            .with_piece(sq(GROUND, 2, 2), gold(PieceKind::Oliphant))
            .with_piece(sq(GROUND, 5, 2), scarlet(PieceKind::Mage))
            .with_piece(sq(GROUND, 4, 2), scarlet(PieceKind::Warrior));
        // The Warrior shields the Mage and is itself the only target.
        assert_eq!(threats(&q), 10.0);

        let dragon = Position::empty(Color::Gold)
            .with_piece(sq(SKY, 3, 5), gold(PieceKind::Dragon))
            .with_piece(sq(GROUND, 3, 5), scarlet(PieceKind::Thief));
        assert_eq!(threats(&dragon), 0.0);
    }

    #[test]
    fn undefended_mage_is_a_threat() {
        // A frozen Mage cannot hit back along the file.
        let p = Position::empty(Color::Gold)
            .with_piece(sq(GROUND, 0, 3), gold(PieceKind::Oliphant))
            .with_piece(sq(GROUND, 5, 3), scarlet(PieceKind::Mage))
            .with_piece(sq(UNDERWORLD, 5, 3), gold(PieceKind::Basilisk));
        assert_eq!(threats(&p), 33.0);
    }

    #[test]
    fn activity_examples() {
        let p = Position::initial();
        let mut q = p.clone();
        q.put(sq(GROUND, 0, 5), None);
        q.put(sq(SKY, 4, 5), Some(gold(PieceKind::Mage)));
        let mut base = p.clone();
        base.put(sq(GROUND, 0, 5), None);
        base.put(sq(GROUND, 4, 5), Some(gold(PieceKind::Mage)));
        // Both Mages are mobile, so only the level penalty differs.
        assert_eq!(activity_penalty(&q) - activity_penalty(&base), -30.0);

        let w = Position::empty(Color::Gold)
            .with_piece(sq(GROUND, 4, 3), gold(PieceKind::Warrior))
            .with_piece(sq(UNDERWORLD, 6, 0), scarlet(PieceKind::Dwarf));
        let frozen = w.clone().with_piece(sq(UNDERWORLD, 4, 3), scarlet(PieceKind::Basilisk));
        let free = w.with_piece(sq(UNDERWORLD, 4, 9), scarlet(PieceKind::Basilisk));
        assert_eq!(activity_penalty(&frozen) - activity_penalty(&free), -10.0);
    }

    #[test]
    fn dragon_center_examples() {
        let p = Position::empty(Color::Gold).with_piece(sq(SKY, 3, 5), gold(PieceKind::Dragon));
        assert_eq!(dragon_center(&p), 20.0);
        let both = p.with_piece(sq(SKY, 4, 6), scarlet(PieceKind::Dragon));
        assert_eq!(dragon_center(&both), 0.0);
        assert_eq!(dragon_center(&Position::initial()), 0.0);
    }

    #[test]
    fn king_safety_needs_both_kings() {
        let p = Position::empty(Color::Gold).with_piece(sq(GROUND, 0, 6), gold(PieceKind::King));
        assert_eq!(king_safety(&p), Err(Error::MissingKing(Color::Scarlet)));
    }

    #[test]
    fn heuristic_total_matches_breakdown() {
        let mut p = Position::initial();
        p.put(sq(GROUND, 1, 4), None);
        p.put(sq(SKY, 6, 2), None);
        let mut theta = ThetaVector::identity();
        for (i, x) in theta.0.iter_mut().enumerate() {
            *x = 0.5 + i as f64 * 0.1;
        }
        assert_eq!(heuristic_total(&p, &theta), evaluate(&p, &theta).total);
        let b = evaluate(&p, &ThetaVector::identity());
        assert_eq!(b.total, b.components().iter().sum::<f64>());
    }
}
