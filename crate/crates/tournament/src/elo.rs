//! Standard Elo updates with a fixed K-factor.

pub const INITIAL_RATING: f64 = 1500.0;
pub const K_FACTOR: f64 = 32.0;

/// Deltas are rounded to a multiple of 2^-20. Ratings then stay dyadic
/// rationals with few significant bits, so every addition is exact and the
/// sum of all ratings never drifts from `1500 × entrants`.
const QUANTUM: f64 = 1.0 / (1u64 << 20) as f64;

/// Expected score of a player rated `ra` against one rated `rb`.
pub fn expected_score(ra: f64, rb: f64) -> f64 {
    1.0 / (1.0 + 10f64.powf((rb - ra) / 400.0))
}

/// New ratings after one game; `result_for_a` is 1, 0.5 or 0.
pub fn elo_update(ra: f64, rb: f64, result_for_a: f64) -> (f64, f64) {
    let delta = K_FACTOR * (result_for_a - expected_score(ra, rb));
    let delta = (delta / QUANTUM).round() * QUANTUM;
    (ra + delta, rb - delta)
}
