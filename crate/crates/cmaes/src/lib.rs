//! Evolution of the 25 evaluation weights with CMA-ES, using game win rate
//! as the fitness signal.

pub mod cma;
pub mod evolution;
pub mod fitness;

pub use cma::CmaState;
pub use evolution::{run_evolution, Checkpoint, EvolutionConfig, EvolutionResult, GenerationLog, RunHooks};
pub use fitness::{evaluate_fitness, evaluate_population, FitnessSpec, Opponent};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Engine(#[from] dragonfish_core::Error),
}
