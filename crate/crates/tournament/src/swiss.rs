//! Tournament bookkeeping and Swiss pairing.

use dragonfish_core::{AgentConfig, Color, Outcome, Termination};

use crate::elo::{elo_update, INITIAL_RATING};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Entrant {
    pub name: String,
    pub agent: AgentConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Standing {
    pub entrant: Entrant,
    /// Win 1, draw 0.5, bye 1.
    pub score: f64,
    pub elo: f64,
    pub wins: u32,
    pub losses: u32,
    pub draws: u32,
    pub byes: u32,
    /// Indices of past opponents, one entry per game.
    pub opponents: Vec<usize>,
    pub colors: Vec<Color>,
}

impl Standing {
    pub fn games(&self) -> u32 {
        self.wins + self.losses + self.draws
    }

    /// Gold games minus Scarlet games.
    fn color_balance(&self) -> i32 {
        self.colors.iter().map(|c| if *c == Color::Gold { 1 } else { -1 }).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub gold: usize,
    pub scarlet: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundPairings {
    /// Ordered from the top of the ranking down.
    pub pairs: Vec<Pairing>,
    pub bye: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameResult {
    pub pairing: Pairing,
    pub result: Outcome,
    pub termination: Termination,
    pub plies: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundLog {
    pub round: u32,
    pub bye: Option<usize>,
    pub results: Vec<GameResult>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TournamentState {
    pub standings: Vec<Standing>,
    /// Rounds completed so far.
    pub round: u32,
    pub log: Vec<RoundLog>,
}

impl TournamentState {
    pub fn new(entrants: Vec<Entrant>) -> Result<TournamentState, Error> {
        if entrants.len() < 2 {
            return Err(Error::Domain("a tournament needs at least 2 entrants".into()));
        }
        for e in &entrants {
            e.agent.validate()?;
        }
        let standings = entrants
            .into_iter()
            .map(|entrant| Standing {
                entrant,
                score: 0.0,
                elo: INITIAL_RATING,
                wins: 0,
                losses: 0,
                draws: 0,
                byes: 0,
                opponents: Vec::new(),
                colors: Vec::new(),
            })
            .collect();
        Ok(TournamentState { standings, round: 0, log: Vec::new() })
    }

    /// Indices sorted by score, then Elo, both descending, then index.
    pub fn ranking(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.standings.len()).collect();
        ids.sort_by(|&a, &b| {
            let (sa, sb) = (&self.standings[a], &self.standings[b]);
            sb.score.total_cmp(&sa.score).then(sb.elo.total_cmp(&sa.elo)).then(a.cmp(&b))
        });
        ids
    }

    pub fn have_met(&self, a: usize, b: usize) -> bool {
        self.standings[a].opponents.contains(&b)
    }

    /// Applies a finished round: scores first, then Elo updates in pairing
    /// order.
    pub fn record_round(&mut self, pairings: &RoundPairings, results: Vec<GameResult>) -> Result<(), Error> {
        if results.len() != pairings.pairs.len()
            || results.iter().zip(&pairings.pairs).any(|(r, p)| r.pairing != *p || r.result == Outcome::Ongoing)
        {
            return Err(Error::Domain("round results do not match the pairings".into()));
        }
        if let Some(b) = pairings.bye {
            self.standings[b].score += 1.0;
            self.standings[b].byes += 1;
        }
        for r in &results {
            let Pairing { gold, scarlet } = r.pairing;
            let gold_points = r.result.score_for(Color::Gold).expect("finished game");
            for (me, other, color, points) in
                [(gold, scarlet, Color::Gold, gold_points), (scarlet, gold, Color::Scarlet, 1.0 - gold_points)]
            {
                let s = &mut self.standings[me];
                s.score += points;
                s.opponents.push(other);
                s.colors.push(color);
                if points == 1.0 {
                    s.wins += 1;
                } else if points == 0.0 {
                    s.losses += 1;
                } else {
                    s.draws += 1;
                }
            }
            if let Termination::Forfeit(side) = r.termination {
                let who = if side == Color::Gold { gold } else { scarlet };
                log::warn!("{} forfeited in round {}", self.standings[who].entrant.name, self.round + 1);
            }
        }
        for r in &results {
            let Pairing { gold, scarlet } = r.pairing;
            let gold_points = r.result.score_for(Color::Gold).expect("finished game");
            let (g, s) = elo_update(self.standings[gold].elo, self.standings[scarlet].elo, gold_points);
            self.standings[gold].elo = g;
            self.standings[scarlet].elo = s;
        }
        self.round += 1;
        self.log.push(RoundLog { round: self.round, bye: pairings.bye, results });
        Ok(())
    }
}

/// Past this many search steps the rematch-free matcher gives up and the
/// greedy fallback pairs the field.
const MATCH_STEP_LIMIT: usize = 1_000_000;

/// Pairs the next round. Players are taken from the top of the ranking and
/// matched with the highest-ranked opponent they have not met; the search
/// backtracks so that a rematch happens only when no rematch-free perfect
/// matching exists. With an odd field the lowest-ranked player without a
/// previous bye sits out.
pub fn pair_round(state: &TournamentState) -> Result<RoundPairings, Error> {
    if state.standings.len() < 2 {
        return Err(Error::Domain("a tournament needs at least 2 entrants".into()));
    }
    let mut ranking = state.ranking();
    let bye = if ranking.len() % 2 == 1 {
        let pos = ranking.iter().rposition(|&i| state.standings[i].byes == 0).unwrap_or(ranking.len() - 1);
        Some(ranking.remove(pos))
    } else {
        None
    };

    let mut steps = 0;
    let matched = match_without_rematch(state, &ranking, &mut steps);
    let pairs = matched.unwrap_or_else(|| {
        log::info!("round {}: no rematch-free pairing, allowing rematches", state.round + 1);
        greedy_with_rematches(state, &ranking)
    });
    let pairs = pairs.into_iter().map(|(a, b)| assign_colors(state, a, b)).collect();
    Ok(RoundPairings { pairs, bye })
}

fn match_without_rematch(state: &TournamentState, rest: &[usize], steps: &mut usize) -> Option<Vec<(usize, usize)>> {
    let Some((&top, others)) = rest.split_first() else {
        return Some(Vec::new());
    };
    for (j, &candidate) in others.iter().enumerate() {
        *steps += 1;
        if *steps > MATCH_STEP_LIMIT {
            return None;
        }
        if state.have_met(top, candidate) {
            continue;
        }
        let remaining: Vec<usize> = others.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &i)| i).collect();
        if let Some(mut tail) = match_without_rematch(state, &remaining, steps) {
            tail.insert(0, (top, candidate));
            return Some(tail);
        }
    }
    None
}

fn greedy_with_rematches(state: &TournamentState, ranking: &[usize]) -> Vec<(usize, usize)> {
    let mut left = ranking.to_vec();
    let mut pairs = Vec::new();
    while left.len() >= 2 {
        let top = left.remove(0);
        let j = left.iter().position(|&c| !state.have_met(top, c)).unwrap_or(0);
        pairs.push((top, left.remove(j)));
    }
    pairs
}

/// Gold goes to whoever has had it less often, then to whoever was Scarlet
/// most recently, then alternates with the round for the higher-ranked
/// player `a`.
fn assign_colors(state: &TournamentState, a: usize, b: usize) -> Pairing {
    let (sa, sb) = (&state.standings[a], &state.standings[b]);
    let a_gold = match sa.color_balance().cmp(&sb.color_balance()) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => match (sa.colors.last(), sb.colors.last()) {
            (Some(Color::Scarlet), Some(Color::Gold)) => true,
            (Some(Color::Gold), Some(Color::Scarlet)) => false,
            _ => state.round % 2 == 0,
        },
    };
    if a_gold {
        Pairing { gold: a, scarlet: b }
    } else {
        Pairing { gold: b, scarlet: a }
    }
}
