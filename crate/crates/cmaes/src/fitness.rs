//! Win-rate fitness of a weight vector against a fixed opponent pool.

use dragonfish_core::search::mix_seed;
use dragonfish_core::{play_game_with, AgentConfig, Color, GameOptions, Outcome, ThetaVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Opponent {
    pub name: String,
    pub agent: AgentConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitnessSpec {
    pub opponents: Vec<Opponent>,
    /// Games against each opponent, alternating colours. Consecutive pairs
    /// share a game seed, so the same opening is played from both sides.
    pub games_per_opponent: u32,
    /// Depth cap of the candidate's search.
    pub depth: u32,
    pub opening_plies: u32,
}

impl FitnessSpec {
    /// Random and identity-weights minimax opponents at `depth`.
    pub fn standard(depth: u32, games_per_opponent: u32) -> FitnessSpec {
        FitnessSpec {
            opponents: vec![
                Opponent { name: "random".into(), agent: AgentConfig::random(0) },
                Opponent { name: "identity".into(), agent: AgentConfig::minimax(ThetaVector::identity(), depth) },
            ],
            games_per_opponent,
            depth,
            opening_plies: DEFAULT_OPENING_PLIES,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.games_per_opponent == 0 {
            return Err(Error::Config("games per candidate must be at least 1".into()));
        }
        if self.opponents.is_empty() {
            return Err(Error::Config("opponent pool is empty".into()));
        }
        if self.depth == 0 {
            return Err(Error::Config("search depth must be at least 1".into()));
        }
        for o in &self.opponents {
            if !o.agent.depth_capped() {
                return Err(Error::Config(format!("opponent {} must be depth capped", o.name)));
            }
            o.agent.validate()?;
        }
        Ok(())
    }

    pub fn games(&self) -> u32 {
        self.games_per_opponent * self.opponents.len() as u32
    }
}

/// Random plies at the start of each fitness game; without them two
/// depth-capped searchers replay one game.
pub const DEFAULT_OPENING_PLIES: u32 = 2;

/// Points for `color` in a finished game: 1, 0.5 or 0. Forfeits are losses.
pub fn points(result: Outcome, color: Color) -> f64 {
    result.score_for(color).unwrap_or(0.0)
}

/// The candidate's score `(wins + draws / 2) / games` over the schedule.
pub fn evaluate_fitness(theta: &ThetaVector, spec: &FitnessSpec, seed: u64) -> Result<f64, Error> {
    spec.validate()?;
    let candidate = AgentConfig::minimax(*theta, spec.depth);
    let options = GameOptions { opening_plies: spec.opening_plies };
    let mut total = 0.0;
    for (j, opponent) in spec.opponents.iter().enumerate() {
        for g in 0..spec.games_per_opponent {
            let game_seed = mix_seed(mix_seed(seed, j as u64), (g / 2) as u64);
            let as_gold = g % 2 == 0;
            let record = if as_gold {
                play_game_with(&candidate, &opponent.agent, game_seed, &options)?
            } else {
                play_game_with(&opponent.agent, &candidate, game_seed, &options)?
            };
            total += points(record.result, if as_gold { Color::Gold } else { Color::Scarlet });
        }
    }
    Ok(total / spec.games() as f64)
}

/// Fitness of every candidate against the same game seeds.
pub fn evaluate_population(thetas: &[ThetaVector], spec: &FitnessSpec, seed: u64) -> Result<Vec<f64>, Error> {
    thetas.par_iter().map(|t| evaluate_fitness(t, spec, seed)).collect()
}
