//! Entrant lists: the default field and TOML configuration files.
//!
//! ```toml
//! [[entrant]]
//! name = "Dragonfish-post"
//! kind = "minimax"
//! theta = "evolved.theta"   # relative to this file; identity when absent
//!
//! [[entrant]]
//! name = "Gygax"
//! kind = "minimax"
//! preset = "gygax"          # or: preset-file = "values.txt"
//! depth = 2                 # optional; overrides the tournament limit
//!
//! [[entrant]]
//! name = "Random-1"
//! kind = "random"
//! seed = 1
//! ```

use std::path::Path;

use dragonfish_core::{AgentConfig, PieceValues, ThetaVector};
use serde::Deserialize;

use crate::swiss::Entrant;
use crate::Error;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntrantFile {
    entrant: Vec<EntrantEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct EntrantEntry {
    name: String,
    kind: String,
    theta: Option<String>,
    preset: Option<String>,
    preset_file: Option<String>,
    depth: Option<u32>,
    seed: Option<u64>,
}

/// Minimax entrants carry no depth unless the file pins one; the tournament
/// limit fills it in.
pub fn load_entrants(path: &Path) -> Result<Vec<Entrant>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_entrants(&text, base).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Parses an entrant file; relative weight paths resolve against `base`.
pub fn parse_entrants(text: &str, base: &Path) -> Result<Vec<Entrant>, Error> {
    let file: EntrantFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let mut entrants = Vec::new();
    for e in file.entrant {
        if entrants.iter().any(|x: &Entrant| x.name == e.name) {
            return Err(Error::Config(format!("duplicate entrant name {:?}", e.name)));
        }
        let agent = match e.kind.as_str() {
            "random" => {
                if e.theta.is_some() || e.preset.is_some() || e.preset_file.is_some() || e.depth.is_some() {
                    return Err(Error::Config(format!("{}: random entrants take only a seed", e.name)));
                }
                AgentConfig::random(e.seed.unwrap_or(0))
            }
            "minimax" => {
                let mut agent = match (&e.theta, &e.preset, &e.preset_file) {
                    (None, None, None) => AgentConfig::minimax(ThetaVector::identity(), 1),
                    (Some(t), None, None) => AgentConfig::minimax(ThetaVector::load(&base.join(t))?, 1),
                    (None, Some(p), None) => AgentConfig::preset(named_preset(p)?, 1),
                    (None, None, Some(f)) => {
                        let path = base.join(f);
                        let text = std::fs::read_to_string(&path)
                            .map_err(|err| Error::Config(format!("{}: {err}", path.display())))?;
                        let name = path.file_stem().map_or(f.clone(), |s| s.to_string_lossy().into_owned());
                        AgentConfig::preset(PieceValues::from_text(&name, &text)?, 1)
                    }
                    _ => return Err(Error::Config(format!("{}: give at most one of theta, preset, preset-file", e.name))),
                };
                agent.max_depth = e.depth;
                agent.rng_seed = e.seed.unwrap_or(0);
                agent
            }
            other => return Err(Error::Config(format!("{}: unknown kind {other:?}", e.name))),
        };
        entrants.push(Entrant { name: e.name, agent });
    }
    Ok(entrants)
}

fn named_preset(name: &str) -> Result<PieceValues, Error> {
    match name {
        "gygax" => Ok(PieceValues::gygax()),
        "jackman" => Ok(PieceValues::jackman()),
        other => Err(Error::Config(format!("unknown preset {other:?} (gygax, jackman)"))),
    }
}

/// The eight-agent field: evolved and identity weights, the two
/// material-only presets, and four random movers with distinct seeds.
pub fn default_field(evolved: ThetaVector) -> Vec<Entrant> {
    let agent = |name: &str, mut a: AgentConfig| {
        a.max_depth = None;
        Entrant { name: name.to_string(), agent: a }
    };
    let mut field = vec![
        agent("Dragonfish-post", AgentConfig::minimax(evolved, 1)),
        agent("Dragonfish-pre", AgentConfig::minimax(ThetaVector::identity(), 1)),
        agent("Gygax", AgentConfig::preset(PieceValues::gygax(), 1)),
        agent("Jackman", AgentConfig::preset(PieceValues::jackman(), 1)),
    ];
    for seed in 1..=4 {
        field.push(Entrant { name: format!("Random-{seed}"), agent: AgentConfig::random(seed) });
    }
    field
}
