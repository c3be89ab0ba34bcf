mod common;

use dragonfish_core::board::{Square, GROUND, SKY, UNDERWORLD};
use dragonfish_core::eval::theta::{COMPONENTS, PIECE_SCALES};
use dragonfish_core::eval::{baseline_value, evaluate, heuristic_total, king_safety, material};
use dragonfish_core::{Color, Piece, PieceKind, Position, ThetaVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sq(l: u8, r: u8, f: u8) -> Square {
    Square::new(l, r, f).unwrap()
}

#[test]
fn antisymmetry_on_random_positions_and_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let thetas: Vec<ThetaVector> = (0..20).map(|_| common::random_theta(&mut rng)).collect();
    for p in common::playout_positions(1000, 31) {
        let m = p.mirror();
        let (a, b) = (evaluate(&p, &ThetaVector::identity()), evaluate(&m, &ThetaVector::identity()));
        // Integer-valued components negate exactly.
        for (i, (x, y)) in a.components().iter().zip(b.components()).enumerate() {
            assert_eq!(*x, -y, "component {i} in {p:?}");
        }
        for theta in &thetas {
            let (x, y) = (heuristic_total(&p, theta), heuristic_total(&m, theta));
            assert!((x + y).abs() <= 1e-9 * x.abs().max(1.0), "{x} vs {y}");
        }
    }
}

#[test]
fn total_is_linear_in_the_component_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for p in common::playout_positions(100, 32) {
        let theta = common::random_theta(&mut rng);
        let breakdown = evaluate(&p, &theta);
        let by_hand: f64 =
            breakdown.components().iter().enumerate().map(|(i, c)| theta.component_weight(i) * c).sum();
        assert!((breakdown.total - by_hand).abs() <= 1e-9 * by_hand.abs().max(1.0));
        let double = heuristic_total(&p, &ThetaVector(std::array::from_fn(|i| {
            if i < PIECE_SCALES { theta.0[i] } else { 2.0 * theta.0[i] }
        })));
        assert!((double - 2.0 * breakdown.total).abs() <= 1e-9 * double.abs().max(1.0));
    }
    assert_eq!(COMPONENTS, 11);
}

#[test]
fn removing_one_piece_changes_material_by_its_baseline() {
    let identity = ThetaVector::identity();
    let start = Position::initial();
    let base = material(&start, &identity);
    assert_eq!(base, 0.0);
    let mut checked = Vec::new();
    for (index, piece) in start.pieces() {
        if piece.color != Color::Scarlet || piece.kind == PieceKind::King || checked.contains(&piece.kind) {
            continue;
        }
        let mut p = start.clone();
        p.cells[index] = 0;
        assert_eq!(material(&p, &identity) - base, baseline_value(piece.kind), "{:?}", piece.kind);
        checked.push(piece.kind);
    }
    assert_eq!(checked.len(), 14);
    assert_eq!(baseline_value(PieceKind::Dragon), 900.0);
    assert_eq!(baseline_value(PieceKind::Warrior), 100.0);
    assert_eq!(baseline_value(PieceKind::Unicorn), 320.0);
    assert_eq!(baseline_value(PieceKind::Cleric), 330.0);
    assert_eq!(baseline_value(PieceKind::Oliphant), 500.0);
}

#[test]
fn piece_scales_multiply_material() {
    let mut theta = ThetaVector::identity();
    theta.0[2] = 1.5; // Dragon
    let p = Position::empty(Color::Gold).with_piece(sq(SKY, 0, 5), Piece::new(PieceKind::Dragon, Color::Gold));
    assert_eq!(material(&p, &theta), 1350.0);
}

#[test]
fn king_safety_enemy_next_to_the_king() {
    // The Gold Basilisk freezes the intruder, so the King's escapes are the
    // same with or without it and only the zone count changes.
    let lone = Position::empty(Color::Gold)
        .with_piece(sq(GROUND, 0, 6), Piece::new(PieceKind::King, Color::Gold))
        .with_piece(sq(UNDERWORLD, 1, 6), Piece::new(PieceKind::Basilisk, Color::Gold))
        .with_piece(sq(GROUND, 7, 0), Piece::new(PieceKind::King, Color::Scarlet));
    let near = lone.clone().with_piece(sq(GROUND, 1, 6), Piece::new(PieceKind::Oliphant, Color::Scarlet));
    assert_eq!(king_safety(&lone).unwrap() - king_safety(&near).unwrap(), 8.0);
    assert!(king_safety(&Position::empty(Color::Gold)).is_err());
}

#[test]
fn initial_position_breakdown_is_zero() {
    let b = evaluate(&Position::initial(), &ThetaVector::identity());
    assert!(b.components().iter().all(|&c| c == 0.0));
    assert_eq!(b.total, 0.0);
}
