//! Movement descriptors for all fifteen piece kinds.
//!
//! Vectors are written from Gold's point of view (`dr > 0` is forward) and
//! flipped for Scarlet. `dl` is the level delta: negative goes up towards the
//! Sky, positive goes down towards the Underworld.
//!
//! The descriptors are compiled once into per-square ray tables that the move
//! generator and the attack probes walk.

use std::sync::OnceLock;

use crate::board::{
    sylph_home_rank, Color, PieceKind, Square, CELLS, GROUND, LEVELS, SKY, SYLPH_HOME_FILES, UNDERWORLD,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Move to an empty cell or capture an enemy on it.
    Both,
    MoveOnly,
    CaptureOnly,
    /// Capture an enemy without relocating.
    Remote,
}

impl Mode {
    #[inline]
    pub fn can_move(self) -> bool {
        matches!(self, Mode::Both | Mode::MoveOnly)
    }

    #[inline]
    pub fn can_capture(self) -> bool {
        !matches!(self, Mode::MoveOnly)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reach {
    /// Single jump; intermediate cells are irrelevant.
    Leap,
    /// Repeats until blocked or off the board.
    Slide,
    /// Like `Slide` but at most two cells.
    Slide2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    pub dl: i8,
    pub dr: i8,
    pub df: i8,
    pub reach: Reach,
    pub mode: Mode,
}

const fn v(dl: i8, dr: i8, df: i8, reach: Reach, mode: Mode) -> Vector {
    Vector { dl, dr, df, reach, mode }
}

#[derive(Clone, Debug)]
pub struct Descriptor {
    pub kind: PieceKind,
    /// Vectors available from each level; an empty list means the kind never
    /// stands there.
    pub by_level: [Vec<Vector>; LEVELS],
    /// A Sylph on the Ground may fly back to any empty Sylph starting cell.
    pub returns_home: bool,
    pub promotes_to: Option<PieceKind>,
    /// Freezes the enemy piece on the Ground cell directly above.
    pub freezes_above: bool,
}

impl Descriptor {
    pub fn allowed_on(&self, level: u8) -> bool {
        !self.by_level[level as usize].is_empty() || (self.returns_home && level == GROUND)
    }
}

const ORTHO: [(i8, i8); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const DIAG: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
const KNIGHT: [(i8, i8); 8] = [(1, 2), (1, -2), (-1, 2), (-1, -2), (2, 1), (2, -1), (-2, 1), (-2, -1)];

fn planar(set: &[(i8, i8)], reach: Reach, mode: Mode) -> Vec<Vector> {
    set.iter().map(|&(dr, df)| v(0, dr, df, reach, mode)).collect()
}

fn vertical(set: &[(i8, i8)], dl: i8, mode: Mode) -> Vec<Vector> {
    set.iter().map(|&(dr, df)| v(dl, dr, df, Reach::Leap, mode)).collect()
}

fn king_steps(mode: Mode) -> Vec<Vector> {
    let mut out = planar(&ORTHO, Reach::Leap, mode);
    out.extend(planar(&DIAG, Reach::Leap, mode));
    out
}

fn descriptor(kind: PieceKind) -> Descriptor {
    use Mode::*;
    use PieceKind::*;
    use Reach::*;
    let mut by_level: [Vec<Vector>; LEVELS] = Default::default();
    let (sky, ground, under) = (SKY as usize, GROUND as usize, UNDERWORLD as usize);
    let mut returns_home = false;
    let mut promotes_to = None;
    let mut freezes_above = false;
    match kind {
        Sylph => {
            by_level[sky] = vec![
                v(0, 1, 1, Leap, MoveOnly),
                v(0, 1, -1, Leap, MoveOnly),
                v(0, 1, 0, Leap, CaptureOnly),
                v(1, 0, 0, Leap, CaptureOnly),
            ];
            by_level[ground] = vec![v(-1, 0, 0, Leap, MoveOnly)];
            returns_home = true;
        }
        Griffin => {
            let mut sky_moves: Vec<Vector> = [(3, 2), (3, -2), (-3, 2), (-3, -2), (2, 3), (2, -3), (-2, 3), (-2, -3)]
                .iter()
                .map(|&(dr, df)| v(0, dr, df, Leap, Both))
                .collect();
            sky_moves.extend(vertical(&DIAG, 1, Both));
            by_level[sky] = sky_moves;
            let mut ground_moves = planar(&DIAG, Leap, Both);
            ground_moves.extend(vertical(&DIAG, -1, Both));
            by_level[ground] = ground_moves;
        }
        Dragon => {
            let mut sky_moves = planar(&DIAG, Slide, Both);
            sky_moves.extend(planar(&ORTHO, Leap, Both));
            sky_moves.push(v(1, 0, 0, Leap, Remote));
            sky_moves.extend(vertical(&ORTHO, 1, Remote));
            by_level[sky] = sky_moves;
        }
        Warrior => {
            by_level[ground] = vec![v(0, 1, 0, Leap, MoveOnly), v(0, 1, 1, Leap, CaptureOnly), v(0, 1, -1, Leap, CaptureOnly)];
            promotes_to = Some(Hero);
        }
        Oliphant => by_level[ground] = planar(&ORTHO, Slide, Both),
        Unicorn => by_level[ground] = planar(&KNIGHT, Leap, Both),
        Thief => by_level[ground] = planar(&DIAG, Slide, Both),
        Hero => {
            let mut ground_moves = planar(&DIAG, Leap, Both);
            ground_moves.extend(planar(&[(2, 2), (2, -2), (-2, 2), (-2, -2)], Leap, Both));
            ground_moves.extend(vertical(&DIAG, -1, Both));
            ground_moves.extend(vertical(&DIAG, 1, Both));
            by_level[ground] = ground_moves;
            by_level[sky] = vertical(&DIAG, 1, Both);
            by_level[under] = vertical(&DIAG, -1, Both);
        }
        Cleric => {
            for level in 0..LEVELS {
                let mut moves = king_steps(Both);
                if level > 0 {
                    moves.push(v(-1, 0, 0, Leap, Both));
                }
                if level + 1 < LEVELS {
                    moves.push(v(1, 0, 0, Leap, Both));
                }
                by_level[level] = moves;
            }
        }
        Mage => {
            let mut ground_moves = planar(&ORTHO, Slide, Both);
            ground_moves.extend(planar(&DIAG, Slide, Both));
            ground_moves.push(v(-1, 0, 0, Leap, Both));
            ground_moves.push(v(1, 0, 0, Leap, Both));
            by_level[ground] = ground_moves;
            let mut sky_moves = planar(&ORTHO, Leap, Both);
            sky_moves.push(v(1, 0, 0, Leap, Both));
            by_level[sky] = sky_moves;
            let mut under_moves = planar(&ORTHO, Leap, Both);
            under_moves.push(v(-1, 0, 0, Leap, Both));
            by_level[under] = under_moves;
        }
        King => {
            let mut ground_moves = king_steps(Both);
            ground_moves.push(v(-1, 0, 0, Leap, Both));
            ground_moves.push(v(1, 0, 0, Leap, Both));
            by_level[ground] = ground_moves;
            let mut sky_moves = king_steps(Both);
            sky_moves.push(v(1, 0, 0, Leap, Both));
            by_level[sky] = sky_moves;
            let mut under_moves = king_steps(Both);
            under_moves.push(v(-1, 0, 0, Leap, Both));
            by_level[under] = under_moves;
        }
        Paladin => {
            let orth2: [(i8, i8); 4] = [(2, 0), (-2, 0), (0, 2), (0, -2)];
            for (level, slot) in by_level.iter_mut().enumerate() {
                let mut moves = king_steps(Both);
                if level == ground {
                    moves.extend(planar(&KNIGHT, Leap, Both));
                }
                for dl in [-2i8, -1, 1, 2] {
                    let target = level as i8 + dl;
                    if !(0..LEVELS as i8).contains(&target) {
                        continue;
                    }
                    let offsets: &[(i8, i8)] = if dl.abs() == 1 { &orth2 } else { &ORTHO };
                    moves.extend(vertical(offsets, dl, Both));
                }
                *slot = moves;
            }
        }
        Basilisk => {
            by_level[under] = vec![
                v(0, 1, 0, Leap, Both),
                v(0, 1, 1, Leap, Both),
                v(0, 1, -1, Leap, Both),
                v(0, -1, 0, Leap, MoveOnly),
            ];
            freezes_above = true;
        }
        Dwarf => {
            let planar_moves = vec![
                v(0, 1, 0, Leap, MoveOnly),
                v(0, 0, 1, Leap, MoveOnly),
                v(0, 0, -1, Leap, MoveOnly),
                v(0, 1, 1, Leap, CaptureOnly),
                v(0, 1, -1, Leap, CaptureOnly),
            ];
            let mut under_moves = planar_moves.clone();
            under_moves.push(v(-1, 0, 0, Leap, CaptureOnly));
            by_level[under] = under_moves;
            let mut ground_moves = planar_moves;
            ground_moves.push(v(1, 0, 0, Leap, CaptureOnly));
            by_level[ground] = ground_moves;
        }
        Elemental => {
            let mut under_moves = planar(&ORTHO, Slide2, Both);
            under_moves.extend(planar(&DIAG, Leap, MoveOnly));
            under_moves.extend(vertical(&ORTHO, -1, Both));
            under_moves.push(v(-1, 0, 0, Leap, Both));
            by_level[under] = under_moves;
            let mut ground_moves = planar(&ORTHO, Leap, Both);
            ground_moves.extend(vertical(&ORTHO, 1, Both));
            ground_moves.push(v(1, 0, 0, Leap, Both));
            by_level[ground] = ground_moves;
        }
    }
    Descriptor { kind, by_level, returns_home, promotes_to, freezes_above }
}

/// One descriptor per piece kind, indexed by `kind.code() - 1`.
#[derive(Clone, Debug)]
pub struct RulesetTable {
    descriptors: Vec<Descriptor>,
}

impl RulesetTable {
    pub fn standard() -> &'static RulesetTable {
        static TABLE: OnceLock<RulesetTable> = OnceLock::new();
        TABLE.get_or_init(|| RulesetTable { descriptors: PieceKind::ALL.iter().map(|&k| descriptor(k)).collect() })
    }

    #[inline]
    pub fn get(&self, kind: PieceKind) -> &Descriptor {
        &self.descriptors[kind.code() as usize - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Descriptor> {
        self.descriptors.iter()
    }
}

/// A run of target cells walked in order; a leap is a ray of length one.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Ray {
    start: u32,
    len: u8,
    pub mode: Mode,
    /// Planar, non-remote: the only kind of attack counted by the
    /// single-level evaluation terms.
    pub same_level: bool,
}

pub(crate) type CellSet = [u64; 5];

#[inline]
pub(crate) fn set_contains(set: &CellSet, index: usize) -> bool {
    set[index >> 6] >> (index & 63) & 1 == 1
}

#[inline]
pub(crate) fn set_insert(set: &mut CellSet, index: usize) {
    set[index >> 6] |= 1 << (index & 63);
}

/// Rays for every (color, kind, square), plus a superset of the capture
/// targets per entry for quick attack rejection.
pub(crate) struct Compiled {
    spans: Vec<(u32, u32)>,
    rays: Vec<Ray>,
    cells: Vec<u16>,
    reach: Vec<CellSet>,
}

#[inline]
fn slot(color: Color, kind: PieceKind, square: usize) -> usize {
    (color.index() * PieceKind::ALL.len() + kind.code() as usize - 1) * CELLS + square
}

impl Compiled {
    pub(crate) fn get() -> &'static Compiled {
        static COMPILED: OnceLock<Compiled> = OnceLock::new();
        COMPILED.get_or_init(|| Compiled::build(RulesetTable::standard()))
    }

    fn build(table: &RulesetTable) -> Compiled {
        let total = 2 * PieceKind::ALL.len() * CELLS;
        let mut out = Compiled {
            spans: vec![(0, 0); total],
            rays: Vec::new(),
            cells: Vec::new(),
            reach: vec![[0; 5]; total],
        };
        for color in Color::BOTH {
            for desc in table.iter() {
                for index in 0..CELLS {
                    let from = Square::at(index);
                    let first = out.rays.len() as u32;
                    let mut reach = [0u64; 5];
                    for vec in &desc.by_level[from.level() as usize] {
                        let dr = vec.dr * color.forward();
                        let limit = match vec.reach {
                            Reach::Leap => 1,
                            Reach::Slide2 => 2,
                            Reach::Slide => usize::MAX,
                        };
                        let start = out.cells.len() as u32;
                        let mut cursor = from;
                        let mut len = 0usize;
                        while len < limit {
                            let Some(next) = cursor.offset(vec.dl, dr, vec.df) else { break };
                            out.cells.push(next.index() as u16);
                            if vec.mode.can_capture() {
                                set_insert(&mut reach, next.index());
                            }
                            cursor = next;
                            len += 1;
                        }
                        if len > 0 {
                            out.rays.push(Ray {
                                start,
                                len: len as u8,
                                mode: vec.mode,
                                same_level: vec.dl == 0 && vec.mode != Mode::Remote,
                            });
                        }
                    }
                    if desc.returns_home && from.level() == GROUND {
                        let above = from.offset(-1, 0, 0).map(Square::index);
                        for file in SYLPH_HOME_FILES {
                            let home = Square::new(SKY, sylph_home_rank(color), file).expect("home square");
                            if Some(home.index()) == above {
                                continue;
                            }
                            out.rays.push(Ray {
                                start: out.cells.len() as u32,
                                len: 1,
                                mode: Mode::MoveOnly,
                                same_level: false,
                            });
                            out.cells.push(home.index() as u16);
                        }
                    }
                    let s = slot(color, desc.kind, index);
                    out.spans[s] = (first, out.rays.len() as u32);
                    out.reach[s] = reach;
                }
            }
        }
        out
    }

    #[inline]
    pub(crate) fn rays(&self, color: Color, kind: PieceKind, square: usize) -> &[Ray] {
        let (a, b) = self.spans[slot(color, kind, square)];
        &self.rays[a as usize..b as usize]
    }

    #[inline]
    pub(crate) fn ray_cells(&self, ray: &Ray) -> &[u16] {
        &self.cells[ray.start as usize..ray.start as usize + ray.len as usize]
    }

    #[inline]
    pub(crate) fn reach(&self, color: Color, kind: PieceKind, square: usize) -> &CellSet {
        &self.reach[slot(color, kind, square)]
    }
}
