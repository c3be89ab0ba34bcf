//! The `dragonfish` command line: argument definitions and dispatch.
//!
//! Standard output carries tab-separated tables with a header row, so that
//! scripts can consume them; `--pretty` aligns the columns for people
//! instead. Logs go to standard error.

use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use dragonfish_cmaes::{run_evolution, EvolutionConfig, FitnessSpec, GenerationLog, RunHooks};
use dragonfish_core::dpn::from_dpn;
use dragonfish_core::eval::theta::COMPONENT_NAMES;
use dragonfish_core::eval::{evaluate_with, PsqtTables};
use dragonfish_core::notation::{format_move, parse_legal};
use dragonfish_core::search::mix_seed;
use dragonfish_core::{
    perft, play_game_with, AgentConfig, AgentKind, GameOptions, Outcome, PieceValues, Position, ThetaVector,
};
use dragonfish_tournament::{default_field, load_entrants, run_tournament, Limit, TournamentConfig};

/// Depth used when neither `--depth` nor `--time-ms` is given.
pub const DEFAULT_DEPTH: u32 = 2;

#[derive(Debug, Parser)]
#[command(name = "dragonfish", version, about = "Dragonchess engine and weight-evolution workbench")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Master seed; every random choice derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Fixed search depth (reproducible mode).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: Option<u32>,
    /// Wall-clock budget per move in milliseconds.
    #[arg(long, global = true, conflicts_with = "depth", value_parser = clap::value_parser!(u64).range(1..))]
    pub time_ms: Option<u64>,
    /// Weight file, one value per line (25 lines).
    #[arg(long, global = true)]
    pub theta: Option<PathBuf>,
    /// Directory for every file a subcommand writes.
    #[arg(long, global = true, env = "DRAGONFISH_OUT", default_value = "dragonfish-out")]
    pub out: PathBuf,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
    /// Aligned human-readable tables instead of tab-separated output.
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count leaf nodes of the legal move tree.
    Perft {
        /// Start position in DPN; the initial position when absent.
        #[arg(long)]
        dpn: Option<String>,
    },
    /// Play games between two agents and archive the records.
    Play {
        /// random[:seed], identity, theta[:file], gygax, jackman or preset:file.
        #[arg(long, default_value = "theta")]
        gold: String,
        #[arg(long, default_value = "random")]
        scarlet: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        games: u32,
        #[arg(long, default_value_t = 0)]
        opening_plies: u32,
    },
    /// Evolve the weights with CMA-ES against random and identity opponents.
    Evolve {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        generations: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        lambda: Option<u64>,
        /// Games per candidate, split evenly over the opponents.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        games_per_candidate: u32,
        #[arg(long, default_value_t = dragonfish_cmaes::evolution::DEFAULT_SIGMA)]
        sigma: f64,
        /// Resume file; `<out>/checkpoint.json` when absent.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = dragonfish_cmaes::fitness::DEFAULT_OPENING_PLIES)]
        opening_plies: u32,
    },
    /// Swiss tournament with Elo ratings.
    Tournament {
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
        rounds: u32,
        /// TOML entrant list; the eight-agent default field when absent.
        #[arg(long)]
        entrants: Option<PathBuf>,
        #[arg(long, default_value_t = dragonfish_tournament::run::DEFAULT_OPENING_PLIES)]
        opening_plies: u32,
    },
    /// Host the HTTP game service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
    },
    /// Evaluation breakdown of a position.
    EvalPos {
        #[arg(long)]
        dpn: Option<String>,
        /// Moves played from the start position first, space separated.
        #[arg(long, default_value = "")]
        moves: String,
        /// Replacement piece-square tables.
        #[arg(long)]
        psqt: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Domain(_) => 4,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<dragonfish_core::Error> for CliError {
    fn from(e: dragonfish_core::Error) -> CliError {
        use dragonfish_core::Error as E;
        match e {
            E::WeightFile(_) | E::Dpn(_) | E::Record(_) | E::MoveText { .. } => CliError::Data(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<dragonfish_cmaes::Error> for CliError {
    fn from(e: dragonfish_cmaes::Error) -> CliError {
        use dragonfish_cmaes::Error as E;
        match e {
            E::Config(m) => CliError::Usage(m),
            E::Checkpoint(m) => CliError::Data(m),
            E::Numeric(m) => CliError::Runtime(m),
            E::Engine(e) => e.into(),
        }
    }
}

impl From<dragonfish_tournament::Error> for CliError {
    fn from(e: dragonfish_tournament::Error) -> CliError {
        use dragonfish_tournament::Error as E;
        match e {
            E::Config(m) => CliError::Data(m),
            E::Domain(m) => CliError::Domain(m),
            E::Engine(e) => e.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Runtime(e.to_string())
    }
}

/// Runs one invocation, writing its table to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.common.jobs {
        pool = pool.num_threads(j as usize);
    }
    let pool = pool.build().map_err(|e| CliError::Runtime(e.to_string()))?;
    // The table is buffered because a locked stdout cannot cross into the
    // pool's threads.
    let mut table = Vec::new();
    let result = pool.install(|| dispatch(&cli.common, &cli.command, &mut table));
    stdout.write_all(&table)?;
    result
}

fn dispatch(c: &Common, command: &Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Perft { dpn } => cmd_perft(c, dpn.as_deref(), stdout),
        Command::Play { gold, scarlet, games, opening_plies } => {
            cmd_play(c, gold, scarlet, *games, *opening_plies, stdout)
        }
        Command::Evolve { generations, lambda, games_per_candidate, sigma, checkpoint, opening_plies } => {
            let spec = evolve_spec(c, *games_per_candidate, *opening_plies)?;
            let config = EvolutionConfig {
                generations: *generations,
                lambda: lambda.map(|l| l as usize),
                sigma0: *sigma,
                seed: c.seed,
            };
            cmd_evolve(c, spec, config, checkpoint.clone(), stdout)
        }
        Command::Tournament { rounds, entrants, opening_plies } => {
            cmd_tournament(c, *rounds, entrants.as_deref(), *opening_plies, stdout)
        }
        Command::Serve { addr } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(dragonfish_service::serve(*addr))?;
            Ok(())
        }
        Command::EvalPos { dpn, moves, psqt } => cmd_eval(c, dpn.as_deref(), moves, psqt.as_deref(), stdout),
    }
}

/// Prints rows either tab separated or padded to the widest cell.
fn print_table(pretty: bool, rows: &[Vec<String>], stdout: &mut dyn Write) -> Result<(), CliError> {
    if !pretty {
        for row in rows {
            writeln!(stdout, "{}", row.join("\t"))?;
        }
        return Ok(());
    }
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..columns).map(|i| rows.iter().filter_map(|r| r.get(i)).map(String::len).max().unwrap_or(0)).collect();
    for row in rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        writeln!(stdout, "{}", cells.join("  ").trim_end())?;
    }
    Ok(())
}

fn load_theta(c: &Common) -> Result<ThetaVector, CliError> {
    match &c.theta {
        Some(path) => Ok(ThetaVector::load(path)?),
        None => Ok(ThetaVector::identity()),
    }
}

fn cmd_perft(c: &Common, dpn: Option<&str>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let position = match dpn {
        Some(text) => from_dpn(text)?,
        None => Position::initial(),
    };
    let depth = c.depth.unwrap_or(3);
    let mut rows = vec![vec!["depth".to_string(), "nodes".to_string()]];
    for d in 1..=depth {
        rows.push(vec![d.to_string(), perft(&position, d).to_string()]);
    }
    print_table(c.pretty, &rows, stdout)
}

/// Parses an agent name as accepted by `play --gold/--scarlet`.
pub fn parse_agent(spec: &str, c: &Common) -> Result<AgentConfig, CliError> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let mut agent = match (name, arg) {
        ("random", None) => AgentConfig::random(0),
        ("random", Some(seed)) => AgentConfig::random(
            seed.parse().map_err(|_| CliError::Usage(format!("bad random seed in {spec:?}")))?,
        ),
        ("identity", None) => AgentConfig::minimax(ThetaVector::identity(), 1),
        ("theta", None) => AgentConfig::minimax(load_theta(c)?, 1),
        ("theta", Some(path)) => AgentConfig::minimax(ThetaVector::load(Path::new(path))?, 1),
        ("gygax", None) => AgentConfig::preset(PieceValues::gygax(), 1),
        ("jackman", None) => AgentConfig::preset(PieceValues::jackman(), 1),
        ("preset", Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{path}: {e}")))?;
            let stem = Path::new(path).file_stem().map_or("preset".into(), |s| s.to_string_lossy().into_owned());
            AgentConfig::preset(PieceValues::from_text(&stem, &text)?, 1)
        }
        _ => return Err(CliError::Usage(format!("unknown agent {spec:?}"))),
    };
    if agent.kind == AgentKind::Minimax {
        agent = match c.time_ms {
            Some(ms) => agent.timed(ms),
            None => AgentConfig { max_depth: Some(c.depth.unwrap_or(DEFAULT_DEPTH)), ..agent },
        };
    }
    Ok(agent)
}

fn outcome_text(o: Outcome) -> &'static str {
    match o {
        Outcome::GoldWins => "gold",
        Outcome::ScarletWins => "scarlet",
        Outcome::Draw => "draw",
        Outcome::Ongoing => "ongoing",
    }
}

fn cmd_play(
    c: &Common,
    gold: &str,
    scarlet: &str,
    games: u32,
    opening_plies: u32,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let (gold, scarlet) = (parse_agent(gold, c)?, parse_agent(scarlet, c)?);
    let dir = c.out.join("games");
    std::fs::create_dir_all(&dir)?;
    let options = GameOptions { opening_plies };
    let mut rows = vec![["game", "seed", "result", "termination", "plies", "record"].map(String::from).to_vec()];
    for g in 1..=games {
        let seed = mix_seed(c.seed, g as u64);
        let record = play_game_with(&gold, &scarlet, seed, &options)?;
        let path = dir.join(format!("game-{g:03}.txt"));
        std::fs::write(&path, record.to_text())?;
        log::info!("game {g}: {}", outcome_text(record.result));
        rows.push(vec![
            g.to_string(),
            seed.to_string(),
            outcome_text(record.result).into(),
            record.termination.as_str().into(),
            record.plies().to_string(),
            path.display().to_string(),
        ]);
    }
    print_table(c.pretty, &rows, stdout)
}

fn evolve_spec(c: &Common, games_per_candidate: u32, opening_plies: u32) -> Result<FitnessSpec, CliError> {
    if c.time_ms.is_some() {
        return Err(CliError::Usage("evolve runs in depth-cap mode only; use --depth".into()));
    }
    let mut spec = FitnessSpec::standard(c.depth.unwrap_or(DEFAULT_DEPTH), 1);
    let opponents = spec.opponents.len() as u32;
    if games_per_candidate % opponents != 0 {
        return Err(CliError::Usage(format!(
            "--games-per-candidate must be a multiple of the {opponents} opponents"
        )));
    }
    spec.games_per_opponent = games_per_candidate / opponents;
    spec.opening_plies = opening_plies;
    Ok(spec)
}

fn history_row(log: &GenerationLog) -> Vec<String> {
    vec![
        log.generation.to_string(),
        log.best_fitness.to_string(),
        log.mean_fitness.to_string(),
        log.sigma.to_string(),
        log.leader_rescore.to_string(),
        log.best_ever_fitness.to_string(),
    ]
}

const HISTORY_HEADER: [&str; 6] = ["generation", "best", "mean", "sigma", "leader_rescore", "best_ever"];

fn cmd_evolve(
    c: &Common,
    spec: FitnessSpec,
    config: EvolutionConfig,
    checkpoint: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    std::fs::create_dir_all(&c.out)?;
    let initial = load_theta(c)?;
    let checkpoint = checkpoint.unwrap_or_else(|| c.out.join("checkpoint.json"));
    let mut progress = |log: &GenerationLog| {
        log::info!("generation {} best-ever {}", log.generation, log.best_ever_fitness);
    };
    let hooks = RunHooks { checkpoint: Some(checkpoint), on_generation: Some(&mut progress) };
    let result = run_evolution(&initial, &spec, &config, hooks)?;

    let mut rows = vec![HISTORY_HEADER.map(String::from).to_vec()];
    rows.extend(result.history.iter().map(history_row));
    let tsv: String = rows.iter().map(|r| r.join("\t") + "\n").collect();
    std::fs::write(c.out.join("evolution.tsv"), tsv)?;
    let theta_path = c.out.join("theta.txt");
    result.best.save(&theta_path)?;
    print_table(c.pretty, &rows, stdout)?;
    writeln!(stdout, "theta\t{}", theta_path.display())?;
    Ok(())
}

fn cmd_tournament(
    c: &Common,
    rounds: u32,
    entrants: Option<&Path>,
    opening_plies: u32,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let field = match entrants {
        Some(path) => load_entrants(path)?,
        None => default_field(load_theta(c)?),
    };
    let limit = match (c.depth, c.time_ms) {
        (_, Some(ms)) => Limit::TimeMs(ms),
        (d, None) => Limit::Depth(d.unwrap_or(DEFAULT_DEPTH)),
    };
    let config = TournamentConfig { rounds, limit, seed: c.seed, opening_plies };
    let outcome = run_tournament(&field, &config)?;
    outcome.write_artifacts(&c.out)?;
    if c.pretty {
        write!(stdout, "{}", outcome.standings_pretty())?;
    } else {
        write!(stdout, "{}", outcome.standings_tsv())?;
    }
    Ok(())
}

fn cmd_eval(
    c: &Common,
    dpn: Option<&str>,
    moves: &str,
    psqt: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let mut position = match dpn {
        Some(text) => from_dpn(text)?,
        None => Position::initial(),
    };
    for text in moves.split_whitespace() {
        let mv = parse_legal(&position, text)?;
        log::debug!("playing {}", format_move(&mv));
        position.apply_in_place(&mv);
    }
    let tables = match psqt {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            PsqtTables::parse(&text)?
        }
        None => PsqtTables::standard().clone(),
    };
    let theta = load_theta(c)?;
    let b = evaluate_with(&position, &theta, &tables);
    let mut rows = vec![["component", "raw", "weight", "weighted"].map(String::from).to_vec()];
    for (i, raw) in b.components().into_iter().enumerate() {
        let w = theta.component_weight(i);
        rows.push(vec![COMPONENT_NAMES[i].into(), raw.to_string(), w.to_string(), (raw * w).to_string()]);
    }
    rows.push(vec!["total".into(), "-".into(), "-".into(), b.total.to_string()]);
    print_table(c.pretty, &rows, stdout)
}
