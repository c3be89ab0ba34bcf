//! The 25 evolvable scaling factors and the baseline piece values they scale.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::board::PieceKind;
use crate::error::{Error, Result};

pub const THETA_LEN: usize = 25;
pub const PIECE_SCALES: usize = 14;
pub const COMPONENTS: usize = 11;

pub const KING_VALUE: f64 = 20000.0;

/// Direct-transfer centipawn value of each kind.
pub fn baseline_value(kind: PieceKind) -> f64 {
    use PieceKind::*;
    match kind {
        Sylph | Warrior | Dwarf => 100.0,
        Unicorn | Basilisk | Griffin | Elemental => 320.0,
        Cleric | Mage => 330.0,
        Hero | Thief | Oliphant | Paladin => 500.0,
        Dragon => 900.0,
        King => KING_VALUE,
    }
}

/// Position of a kind's scale factor inside the vector; `None` for the King,
/// whose value is never scaled.
pub fn piece_scale_index(kind: PieceKind) -> Option<usize> {
    use PieceKind::*;
    Some(match kind {
        Sylph => 0,
        Griffin => 1,
        Dragon => 2,
        Warrior => 3,
        Oliphant => 4,
        Unicorn => 5,
        Hero => 6,
        Thief => 7,
        Cleric => 8,
        Mage => 9,
        King => return None,
        Paladin => 10,
        Basilisk => 11,
        Dwarf => 12,
        Elemental => 13,
    })
}

/// Names of the weighted evaluation components, in vector order after the
/// piece scales.
pub const COMPONENT_NAMES: [&str; COMPONENTS] = [
    "material",
    "psqt",
    "mobility",
    "king_safety",
    "threats",
    "passed_pieces",
    "pawn_count",
    "imbalance",
    "space",
    "activity_penalty",
    "dragon_center",
];

/// `w[0..14]` scale the non-King piece values, `w[14..25]` weight the eleven
/// components. All ones is the direct-transfer configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaVector(pub [f64; THETA_LEN]);

impl Default for ThetaVector {
    fn default() -> Self {
        ThetaVector::identity()
    }
}

impl ThetaVector {
    pub fn identity() -> ThetaVector {
        ThetaVector([1.0; THETA_LEN])
    }

    pub fn from_slice(values: &[f64]) -> Result<ThetaVector> {
        let arr: [f64; THETA_LEN] = values
            .try_into()
            .map_err(|_| Error::WeightFile(format!("expected {THETA_LEN} values, got {}", values.len())))?;
        if let Some(i) = arr.iter().position(|x| !x.is_finite()) {
            return Err(Error::WeightFile(format!("value {} is not finite", i + 1)));
        }
        Ok(ThetaVector(arr))
    }

    #[inline]
    pub fn piece_scale(&self, kind: PieceKind) -> f64 {
        piece_scale_index(kind).map_or(1.0, |i| self.0[i])
    }

    #[inline]
    pub fn component_weight(&self, component: usize) -> f64 {
        self.0[PIECE_SCALES + component]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> ThetaVector {
        ThetaVector(self.0.map(|x| x * factor))
    }

    /// One value per line, shortest round-trip decimal form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for x in self.0 {
            writeln!(out, "{x:?}").expect("write to string");
        }
        out
    }

    /// Parses the one-value-per-line form. Blank lines and `#` comments are
    /// skipped.
    pub fn from_text(text: &str) -> Result<ThetaVector> {
        let values = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .enumerate()
            .map(|(i, l)| l.parse::<f64>().map_err(|_| Error::WeightFile(format!("line {}: {l:?}", i + 1))))
            .collect::<Result<Vec<f64>>>()?;
        ThetaVector::from_slice(&values)
    }

    pub fn load(path: &Path) -> Result<ThetaVector> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::WeightFile(format!("{}: {e}", path.display())))?;
        ThetaVector::from_text(&text)
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_text())
    }
}

/// A hand-picked table of piece values, as used by the material-only preset
/// agents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceValues {
    pub name: String,
    pub values: [f64; 15],
}

impl PieceValues {
    pub fn get(&self, kind: PieceKind) -> f64 {
        self.values[kind.code() as usize - 1]
    }

    /// `Kind value` pairs, one per line; every kind must appear once.
    pub fn from_text(name: &str, text: &str) -> Result<PieceValues> {
        let mut values = [f64::NAN; 15];
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let mut it = line.split_whitespace();
            let (Some(kind), Some(value), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::WeightFile(format!("expected 'Kind value': {line:?}")));
            };
            let kind = PieceKind::ALL
                .iter()
                .find(|k| k.name().eq_ignore_ascii_case(kind))
                .ok_or_else(|| Error::WeightFile(format!("unknown piece kind {kind:?}")))?;
            let value: f64 = value.parse().map_err(|_| Error::WeightFile(format!("bad value in {line:?}")))?;
            values[kind.code() as usize - 1] = value;
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::WeightFile(format!("missing or non-finite value for {}", PieceKind::ALL[i].name())));
        }
        Ok(PieceValues { name: name.to_string(), values })
    }

    pub fn gygax() -> PieceValues {
        PieceValues::from_text("gygax", include_str!("../../data/gygax.txt")).expect("bundled gygax weights")
    }

    pub fn jackman() -> PieceValues {
        PieceValues::from_text("jackman", include_str!("../../data/jackman.txt")).expect("bundled jackman weights")
    }

    /// The equivalent weight vector: material only, with each piece scale
    /// set to `value / baseline`. The King value must equal the baseline.
    pub fn to_theta(&self) -> Result<ThetaVector> {
        if self.get(PieceKind::King) != KING_VALUE {
            return Err(Error::WeightFile(format!("King value must be {KING_VALUE}")));
        }
        let mut w = [0.0; THETA_LEN];
        for kind in PieceKind::ALL {
            if let Some(i) = piece_scale_index(kind) {
                w[i] = self.get(kind) / baseline_value(kind);
            }
        }
        w[PIECE_SCALES] = 1.0;
        Ok(ThetaVector(w))
    }
}
