//! Dice distributions, point-game rules, and their compilation into an
//! absorbing Markov chain with exact rational transition probabilities.
//!
//! The chain's states are ordered come-out first, then one state per point
//! group, then the absorbing seven-out state. Points sharing a make
//! probability (4 and 10, 5 and 9, ...) are merged into one state unless
//! [`StateMerging::PerPoint`] is requested. Point groups are ordered by
//! increasing make probability, so the diagonal of `Q` decreases down the
//! point states.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::SquareMatrix;

/// A two-dice total, 2 through 12.
pub type Outcome = u8;

pub const SEVEN: Outcome = 7;
const OUTCOMES: std::ops::RangeInclusive<Outcome> = 2..=12;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("outcome {0} is not a two-dice total (2..=12)")]
    OutOfRange(Outcome),
    #[error("outcome {0} appears in more than one of naturals/craps/points")]
    Overlap(Outcome),
    #[error("7 cannot be a {0} number; it is always a come-out natural")]
    SevenMisplaced(&'static str),
    #[error("outcome {0} is not assigned to naturals, craps, or points")]
    Unassigned(Outcome),
    #[error("unknown built-in game {0:?} (expected craps or crapless)")]
    UnknownGame(String),
    #[error("invalid game file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read game file: {0}")]
    Io(#[from] std::io::Error),
    #[error("transition matrix is not square")]
    NotSquare,
    #[error("state labels ({labels}) do not match matrix dimension ({dim})")]
    LabelCount { labels: usize, dim: usize },
    #[error("row {row} has a negative entry")]
    NegativeEntry { row: usize },
    #[error("row {row} sums to {sum}, not 1")]
    RowSum { row: usize, sum: BigRational },
    #[error("last state is not absorbing")]
    NotAbsorbing,
}

/// Probabilities of the dice totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiceDistribution {
    probs: BTreeMap<Outcome, BigRational>,
}

impl DiceDistribution {
    pub fn prob(&self, outcome: Outcome) -> BigRational {
        self.probs
            .get(&outcome)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> + '_ {
        self.probs.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Outcome, &BigRational)> {
        self.probs.iter().map(|(k, v)| (*k, v))
    }

    pub fn total<'a>(&self, outcomes: impl IntoIterator<Item = &'a Outcome>) -> BigRational {
        outcomes.into_iter().map(|&j| self.prob(j)).sum()
    }
}

/// Two fair dice: `P(j) = (6 - |j - 7|) / 36`.
pub fn standard_dice() -> DiceDistribution {
    let probs = OUTCOMES
        .map(|j| {
            let ways = 6 - (j as i64 - 7).abs();
            (j, BigRational::new(BigInt::from(ways), BigInt::from(36)))
        })
        .collect();
    DiceDistribution { probs }
}

/// On-disk game description. `7` may be omitted from `naturals`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub naturals: Vec<Outcome>,
    #[serde(default)]
    pub craps: Vec<Outcome>,
    pub points: Vec<Outcome>,
}

/// Come-out and point rules for a craps-like game on two standard dice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointGameSpec {
    naturals: BTreeSet<Outcome>,
    craps: BTreeSet<Outcome>,
    points: BTreeSet<Outcome>,
    dice: DiceDistribution,
}

impl PointGameSpec {
    /// Validates a partition of 2..=12 into naturals, craps and points.
    /// Seven is added to the naturals if absent.
    pub fn new(
        naturals: impl IntoIterator<Item = Outcome>,
        craps: impl IntoIterator<Item = Outcome>,
        points: impl IntoIterator<Item = Outcome>,
    ) -> Result<Self, GameError> {
        let mut seen = BTreeSet::new();
        let mut collect = |items: Vec<Outcome>| -> Result<BTreeSet<Outcome>, GameError> {
            let mut set = BTreeSet::new();
            for j in items {
                if !OUTCOMES.contains(&j) {
                    return Err(GameError::OutOfRange(j));
                }
                if !seen.insert(j) || !set.insert(j) {
                    return Err(GameError::Overlap(j));
                }
            }
            Ok(set)
        };
        let mut naturals = collect(naturals.into_iter().collect())?;
        let craps = collect(craps.into_iter().collect())?;
        let points = collect(points.into_iter().collect())?;
        if craps.contains(&SEVEN) {
            return Err(GameError::SevenMisplaced("craps"));
        }
        if points.contains(&SEVEN) {
            return Err(GameError::SevenMisplaced("point"));
        }
        naturals.insert(SEVEN);
        if let Some(j) = OUTCOMES
            .clone()
            .find(|j| !naturals.contains(j) && !craps.contains(j) && !points.contains(j))
        {
            return Err(GameError::Unassigned(j));
        }
        Ok(PointGameSpec {
            naturals,
            craps,
            points,
            dice: standard_dice(),
        })
    }

    /// Naturals 7 and 11; craps 2, 3, 12; points 4, 5, 6, 8, 9, 10.
    pub fn craps() -> Self {
        Self::new([7, 11], [2, 3, 12], [4, 5, 6, 8, 9, 10]).expect("standard craps is valid")
    }

    /// Seven is the only natural, there are no craps numbers.
    pub fn crapless() -> Self {
        Self::new([7], [], [2, 3, 4, 5, 6, 8, 9, 10, 11, 12]).expect("crapless craps is valid")
    }

    pub fn builtin(name: &str) -> Result<Self, GameError> {
        match name {
            "craps" => Ok(Self::craps()),
            "crapless" => Ok(Self::crapless()),
            other => Err(GameError::UnknownGame(other.to_string())),
        }
    }

    pub fn from_file(file: GameFile) -> Result<Self, GameError> {
        Self::new(file.naturals, file.craps, file.points)
    }

    pub fn from_json_str(s: &str) -> Result<Self, GameError> {
        Self::from_file(serde_json::from_str(s)?)
    }

    pub fn from_json_path(path: &Path) -> Result<Self, GameError> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_file(&self) -> GameFile {
        GameFile {
            naturals: self.naturals.iter().copied().collect(),
            craps: self.craps.iter().copied().collect(),
            points: self.points.iter().copied().collect(),
        }
    }

    pub fn naturals(&self) -> &BTreeSet<Outcome> {
        &self.naturals
    }

    pub fn craps_numbers(&self) -> &BTreeSet<Outcome> {
        &self.craps
    }

    pub fn points(&self) -> &BTreeSet<Outcome> {
        &self.points
    }

    pub fn seven_out(&self) -> Outcome {
        SEVEN
    }

    pub fn dice(&self) -> &DiceDistribution {
        &self.dice
    }

    pub fn is_standard_craps(&self) -> bool {
        *self == Self::craps()
    }

    pub fn is_crapless(&self) -> bool {
        *self == Self::crapless()
    }

    /// `craps`, `crapless`, or `custom`.
    pub fn name(&self) -> &'static str {
        if self.is_standard_craps() {
            "craps"
        } else if self.is_crapless() {
            "crapless"
        } else {
            "custom"
        }
    }
}

impl fmt::Display for PointGameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<Outcome>| {
            s.iter()
                .map(|j| j.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "naturals {{{}}}, craps {{{}}}, points {{{}}}",
            list(&self.naturals),
            list(&self.craps),
            list(&self.points)
        )
    }
}

/// Points sharing one chain state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointGroup {
    pub points: Vec<Outcome>,
    /// Per-roll probability of making any one of these points.
    pub make_probability: BigRational,
}

impl PointGroup {
    /// Come-out probability of establishing some point in the group.
    pub fn mass(&self) -> BigRational {
        &self.make_probability * BigRational::from_integer(BigInt::from(self.points.len()))
    }

    pub fn label(&self) -> String {
        let pts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        format!("p{}", pts.join("-"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StateMerging {
    /// One state per distinct make probability.
    #[default]
    ByMakeProbability,
    /// One state per point number.
    PerPoint,
}

/// An absorbing Markov chain: come-out first, absorbing seven-out last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    states: Vec<String>,
    p: SquareMatrix,
    q: SquareMatrix,
    point_groups: Vec<PointGroup>,
}

impl ChainSpec {
    /// Wraps a hand-built transition matrix. Rows must be stochastic and the
    /// last state absorbing; no structure beyond that is required.
    pub fn from_transition_matrix(
        states: Vec<String>,
        p: Vec<Vec<BigRational>>,
    ) -> Result<Self, GameError> {
        let p = SquareMatrix::from_rows(p).ok_or(GameError::NotSquare)?;
        let n = p.dim();
        if states.len() != n {
            return Err(GameError::LabelCount {
                labels: states.len(),
                dim: n,
            });
        }
        for (row, r) in p.rows().enumerate() {
            if r.iter().any(Signed::is_negative) {
                return Err(GameError::NegativeEntry { row });
            }
            let sum: BigRational = r.iter().sum();
            if !sum.is_one() {
                return Err(GameError::RowSum { row, sum });
            }
        }
        if n == 0 || !p[(n - 1, n - 1)].is_one() {
            return Err(GameError::NotAbsorbing);
        }
        let q = p.leading_block(n - 1);
        Ok(ChainSpec {
            states,
            p,
            q,
            point_groups: Vec::new(),
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Full transition matrix, absorbing state last.
    pub fn p(&self) -> &SquareMatrix {
        &self.p
    }

    /// Transient block of `P`.
    pub fn q(&self) -> &SquareMatrix {
        &self.q
    }

    /// Empty for hand-built chains.
    pub fn point_groups(&self) -> &[PointGroup] {
        &self.point_groups
    }

    pub fn transient_count(&self) -> usize {
        self.q.dim()
    }

    /// Some transient row leaks probability into the absorbing state.
    pub fn can_absorb(&self) -> bool {
        (0..self.q.dim()).any(|i| self.q.row_sum(i) < BigRational::one())
    }

    pub fn is_standard_craps(&self) -> bool {
        *self == compile_chain(&PointGameSpec::craps())
    }
}

/// Compiles with the default merging of equal-probability points.
pub fn compile_chain(spec: &PointGameSpec) -> ChainSpec {
    compile_chain_with(spec, StateMerging::ByMakeProbability)
}

pub fn compile_chain_with(spec: &PointGameSpec, merging: StateMerging) -> ChainSpec {
    let dice = spec.dice();
    let seven = dice.prob(SEVEN);

    let mut groups: Vec<PointGroup> = Vec::new();
    for &j in spec.points() {
        let pj = dice.prob(j);
        let existing = match merging {
            StateMerging::ByMakeProbability => groups.iter_mut().find(|g| g.make_probability == pj),
            StateMerging::PerPoint => None,
        };
        match existing {
            Some(g) => g.points.push(j),
            None => groups.push(PointGroup {
                points: vec![j],
                make_probability: pj,
            }),
        }
    }
    groups.sort_by(|a, b| {
        a.make_probability
            .cmp(&b.make_probability)
            .then_with(|| a.points.cmp(&b.points))
    });

    let k = groups.len();
    let n = k + 2;
    let absorbing = n - 1;
    let mut p = SquareMatrix::zeros(n);
    p[(0, 0)] = dice.total(spec.naturals()) + dice.total(spec.craps_numbers());
    for (g, group) in groups.iter().enumerate() {
        let s = g + 1;
        p[(0, s)] = group.mass();
        p[(s, 0)] = group.make_probability.clone();
        p[(s, s)] = BigRational::one() - &group.make_probability - &seven;
        p[(s, absorbing)] = seven.clone();
    }
    p[(absorbing, absorbing)] = BigRational::one();

    let mut states = Vec::with_capacity(n);
    states.push("co".to_string());
    states.extend(groups.iter().map(PointGroup::label));
    states.push("7o".to_string());

    ChainSpec {
        states,
        q: p.leading_block(n - 1),
        p,
        point_groups: groups,
    }
}
