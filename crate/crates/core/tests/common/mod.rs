#![allow(dead_code)]

use dragonfish_core::board::{QUIET_PLY_CAP, TOTAL_PLY_CAP};
use dragonfish_core::eval::theta::THETA_LEN;
use dragonfish_core::movegen::legal_moves;
use dragonfish_core::{Position, ThetaVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uncapped, non-terminal positions from seeded random playouts.
pub fn playout_positions(count: usize, seed: u64) -> Vec<Position> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut p = Position::initial();
    while out.len() < count {
        let moves = legal_moves(&p);
        if moves.is_empty() {
            p = Position::initial();
            continue;
        }
        p = p.apply(&moves[rng.random_range(0..moves.len())]);
        if p.ply_count < TOTAL_PLY_CAP && p.halfmove_clock < QUIET_PLY_CAP && !legal_moves(&p).is_empty() {
            out.push(p.clone());
        }
    }
    out
}

pub fn random_theta(rng: &mut ChaCha8Rng) -> ThetaVector {
    let mut w = [0.0; THETA_LEN];
    for x in &mut w {
        *x = rng.random_range(-2.0..2.0);
    }
    ThetaVector(w)
}
