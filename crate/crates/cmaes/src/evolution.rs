//! The generation loop: sample, play, update, checkpoint.

use std::path::{Path, PathBuf};

use dragonfish_core::search::mix_seed;
use dragonfish_core::ThetaVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cma::CmaState;
use crate::fitness::{evaluate_fitness, evaluate_population, FitnessSpec};
use crate::Error;

pub const DEFAULT_SIGMA: f64 = 0.3;
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub generations: u64,
    /// Population size; `None` selects the default for 25 dimensions.
    pub lambda: Option<usize>,
    pub sigma0: f64,
    pub seed: u64,
}

impl EvolutionConfig {
    pub fn new(generations: u64, seed: u64) -> EvolutionConfig {
        EvolutionConfig { generations, lambda: None, sigma0: DEFAULT_SIGMA, seed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationLog {
    pub generation: u64,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    /// Step size after the update.
    pub sigma: f64,
    /// Fitness of the generation's leader on fresh games.
    pub leader_rescore: f64,
    pub best_ever_fitness: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub config: EvolutionConfig,
    pub spec: FitnessSpec,
    pub initial: ThetaVector,
    pub state: CmaState,
    pub history: Vec<GenerationLog>,
    pub best: Option<(ThetaVector, f64)>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Checkpoint, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        let cp: Checkpoint =
            serde_json::from_str(&text).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported checkpoint version {}", cp.version)));
        }
        Ok(cp)
    }

    /// Written to a sibling file first, then renamed over `path`.
    pub fn save(&self, path: &Path) -> Result<(), Error> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Checkpoint(e.to_string()))?;
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, text + "\n").map_err(|e| Error::Checkpoint(format!("{}: {e}", tmp.display())))?;
        std::fs::rename(&tmp, path).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionResult {
    pub best: ThetaVector,
    pub best_fitness: f64,
    pub history: Vec<GenerationLog>,
    pub state: CmaState,
}

/// Optional knobs that do not affect the outcome.
#[derive(Default)]
pub struct RunHooks<'a> {
    pub checkpoint: Option<PathBuf>,
    pub on_generation: Option<&'a mut dyn FnMut(&GenerationLog)>,
}

fn sample_seed(seed: u64, generation: u64) -> u64 {
    mix_seed(seed, 3 * generation)
}

fn games_seed(seed: u64, generation: u64) -> u64 {
    mix_seed(seed, 3 * generation + 1)
}

fn rescore_seed(seed: u64, generation: u64) -> u64 {
    mix_seed(seed, 3 * generation + 2)
}

/// Runs `config.generations` generations from `initial`, resuming from the
/// checkpoint when one exists for the same run. Every generation draws its
/// samples and game seeds from `(seed, generation)` alone, so a resumed run
/// reproduces an uninterrupted one exactly.
pub fn run_evolution(
    initial: &ThetaVector,
    spec: &FitnessSpec,
    config: &EvolutionConfig,
    mut hooks: RunHooks,
) -> Result<EvolutionResult, Error> {
    if config.generations == 0 {
        return Err(Error::Config("generations must be at least 1".into()));
    }
    spec.validate()?;
    let fresh = || -> Result<Checkpoint, Error> {
        let state = match config.lambda {
            Some(l) => CmaState::with_lambda(initial.as_slice(), config.sigma0, l)?,
            None => CmaState::new(initial.as_slice(), config.sigma0)?,
        };
        Ok(Checkpoint {
            version: CHECKPOINT_VERSION,
            config: config.clone(),
            spec: spec.clone(),
            initial: *initial,
            state,
            history: Vec::new(),
            best: None,
        })
    };
    let mut cp = match &hooks.checkpoint {
        Some(path) if path.exists() => {
            let cp = Checkpoint::load(path)?;
            let same_run = cp.spec == *spec
                && cp.initial == *initial
                && cp.config.seed == config.seed
                && cp.config.lambda == config.lambda
                && cp.config.sigma0 == config.sigma0;
            if !same_run {
                return Err(Error::Checkpoint(format!(
                    "{} belongs to a different run (seed, weights, population or opponents differ)",
                    path.display()
                )));
            }
            log::info!("resuming from generation {}", cp.state.generation);
            Checkpoint { config: config.clone(), ..cp }
        }
        _ => fresh()?,
    };

    while cp.state.generation < config.generations {
        let g = cp.state.generation;
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(config.seed, g));
        let candidates = cp.state.ask(&mut rng)?;
        let thetas: Vec<ThetaVector> =
            candidates.iter().map(|c| ThetaVector::from_slice(c)).collect::<Result<_, _>>()?;
        let fitness = evaluate_population(&thetas, spec, games_seed(config.seed, g))?;
        cp.state.tell(&candidates, &fitness)?;

        let leader = (0..fitness.len()).fold(0, |b, i| if fitness[i] > fitness[b] { i } else { b });
        let rescore = evaluate_fitness(&thetas[leader], spec, rescore_seed(config.seed, g))?;
        if cp.best.as_ref().is_none_or(|(_, f)| rescore > *f) {
            cp.best = Some((thetas[leader], rescore));
        }
        let log = GenerationLog {
            generation: g + 1,
            best_fitness: fitness[leader],
            mean_fitness: fitness.iter().sum::<f64>() / fitness.len() as f64,
            sigma: cp.state.sigma,
            leader_rescore: rescore,
            best_ever_fitness: cp.best.as_ref().map_or(f64::NAN, |b| b.1),
        };
        log::info!(
            "generation {}: best {:.3} mean {:.3} sigma {:.4} best-ever {:.3}",
            log.generation,
            log.best_fitness,
            log.mean_fitness,
            log.sigma,
            log.best_ever_fitness
        );
        if let Some(f) = hooks.on_generation.as_mut() {
            f(&log);
        }
        cp.history.push(log);
        if let Some(path) = &hooks.checkpoint {
            cp.save(path)?;
        }
    }

    let (best, best_fitness) = cp.best.expect("at least one generation ran");
    Ok(EvolutionResult { best, best_fitness, history: cp.history, state: cp.state })
}
