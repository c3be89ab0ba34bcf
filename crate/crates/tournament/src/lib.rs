//! Swiss-system tournaments between engine agents, rated with Elo after
//! every round.

pub mod elo;
pub mod entrants;
pub mod run;
pub mod swiss;

pub use elo::{elo_update, expected_score, INITIAL_RATING, K_FACTOR};
pub use entrants::{default_field, load_entrants, parse_entrants};
pub use run::{run_tournament, ArchivedGame, Limit, TournamentConfig, TournamentOutcome};
pub use swiss::{pair_round, Entrant, GameResult, Pairing, RoundLog, RoundPairings, Standing, TournamentState};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Engine(#[from] dragonfish_core::Error),
}
