//! Solvers for the split EF game (EFC), the delayed game (DG) and its
//! counter variant (DGVV), with ordinal clocks.

mod dg;
mod dgvv;
mod efc;
mod fixpoint;
pub mod oracle;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ordinal::ClockOrdinal;
use crate::partition::{enumerate_set_partitions, LabeledPartition, SetPartition};
use crate::structure::{is_partial_isomorphism, Elem, PartialMap, Structure, StructureError};

pub use dg::DgSolver;
pub use dgvv::{DgvvReading, DgvvSolver};
pub use efc::EfcSolver;
pub use oracle::{cross_check_bounded, cross_check_bounded_with};

/// Least clock with which Spoiler wins, or `Infinity`.
pub type Rank = ClockOrdinal;

/// Largest universe the solvers accept.
pub const SOLVER_BOUND: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("structures have different vocabularies")]
    VocabularyMismatch,
    #[error("theta must be at least 1")]
    ThetaZero,
    #[error("alpha must be at least 1")]
    AlphaZero,
    #[error("universe of size {size} exceeds the bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("invalid position: {0}")]
    InvalidPosition(String),
    #[error("clock must be below w^2 for the bounded oracle")]
    InfiniteClock,
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameKind {
    Efc,
    Dg,
    Dgvv { alpha: u32 },
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameKind::Efc => write!(f, "efc"),
            GameKind::Dg => write!(f, "dg"),
            GameKind::Dgvv { alpha } => write!(f, "dgvv({alpha})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Spoiler,
    Duplicator,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Spoiler => "SPOILER",
            Player::Duplicator => "DUPLICATOR",
        })
    }
}

/// Which structure a challenge is taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Solver knobs that are not part of the game parameters proper.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameConfig {
    pub dgvv_reading: DgvvReading,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig { dgvv_reading: DgvvReading::Corrected }
    }
}

impl FromStr for GameKind {
    type Err = String;

    /// `efc`, `dg`, `dgvv` (alpha 2) or `dgvv:K`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "efc" => Ok(GameKind::Efc),
            "dg" => Ok(GameKind::Dg),
            "dgvv" => Ok(GameKind::Dgvv { alpha: 2 }),
            other => match other.strip_prefix("dgvv:").map(str::parse) {
                Some(Ok(alpha)) => Ok(GameKind::Dgvv { alpha }),
                _ => Err(format!("unknown game `{other}` (expected efc, dg, dgvv or dgvv:K)")),
            },
        }
    }
}

/// A delayed obligation: elements of one side with their labels (DG) or
/// counters (DGVV), and the number of Duplicator moves since it was made.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub side: Side,
    pub elems: Vec<Elem>,
    pub labels: LabeledPartition,
    pub age: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GamePosition {
    pub kind: GameKind,
    pub pi: PartialMap,
    pub obligations: Vec<Obligation>,
    pub clock: ClockOrdinal,
    pub theta: usize,
}

impl GamePosition {
    /// Constants matched, nothing pending.
    pub fn initial(kind: GameKind, m: &Structure, n: &Structure, theta: usize, clock: ClockOrdinal) -> Result<Self, GameError> {
        check_pair(m, n, theta)?;
        let pi = PartialMap::from_pairs(m.constants().iter().copied().zip(n.constants().iter().copied()))
            .unwrap_or_default();
        Ok(GamePosition { kind, pi, obligations: Vec::new(), clock, theta })
    }
}

/// A Spoiler move: the new clock value, the side and the challenge set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpoilerMove {
    pub clock: ClockOrdinal,
    pub side: Side,
    pub challenge: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DuplicatorMove {
    /// EFC: the induced partition of the challenge.
    Partition(SetPartition),
    /// DG and DGVV: labels (or counters) for the challenge and the new map.
    Labeled { labels: LabeledPartition, pi: PartialMap },
}

pub(crate) fn check_pair(m: &Structure, n: &Structure, theta: usize) -> Result<(), GameError> {
    if m.vocab() != n.vocab() {
        return Err(GameError::VocabularyMismatch);
    }
    if theta == 0 {
        return Err(GameError::ThetaZero);
    }
    for s in [m, n] {
        if s.size() > SOLVER_BOUND {
            return Err(GameError::TooLarge { size: s.size(), bound: SOLVER_BOUND });
        }
    }
    Ok(())
}

/// A partial injection stored as two lookup arrays (`0` = unmapped,
/// `j + 1` = mapped to `j`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Pairs {
    fwd: Vec<u8>,
    bwd: Vec<u8>,
}

impl Pairs {
    pub(crate) fn empty(nm: usize, nn: usize) -> Self {
        Pairs { fwd: vec![0; nm], bwd: vec![0; nn] }
    }

    pub(crate) fn get(&self, a: Elem) -> Option<Elem> {
        self.fwd[a].checked_sub(1).map(usize::from)
    }

    pub(crate) fn pre(&self, b: Elem) -> Option<Elem> {
        self.bwd[b].checked_sub(1).map(usize::from)
    }

    pub(crate) fn covers(&self, side: Side, e: Elem) -> bool {
        match side {
            Side::Left => self.fwd[e] != 0,
            Side::Right => self.bwd[e] != 0,
        }
    }

    pub(crate) fn add(&mut self, a: Elem, b: Elem) {
        self.fwd[a] = b as u8 + 1;
        self.bwd[b] = a as u8 + 1;
    }

    pub(crate) fn pairs(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        self.fwd.iter().enumerate().filter(|(_, &b)| b != 0).map(|(a, &b)| (a, b as usize - 1))
    }

    pub(crate) fn key(&self) -> &[u8] {
        &self.fwd
    }

    pub(crate) fn to_map(&self) -> PartialMap {
        PartialMap::from_pairs(self.pairs()).expect("pairs are injective")
    }

    pub(crate) fn from_map(m: &Structure, n: &Structure, p: &PartialMap) -> Result<Self, GameError> {
        let mut out = Pairs::empty(m.size(), n.size());
        for (a, b) in p.pairs() {
            if a >= m.size() || b >= n.size() {
                return Err(GameError::InvalidPosition(format!("pair ({a},{b}) is outside the universes")));
            }
            out.add(a, b);
        }
        Ok(out)
    }

    /// Elements of `side` not yet covered.
    pub(crate) fn free(&self, side: Side) -> Vec<Elem> {
        let arr = match side {
            Side::Left => &self.fwd,
            Side::Right => &self.bwd,
        };
        arr.iter().enumerate().filter(|(_, &x)| x == 0).map(|(i, _)| i).collect()
    }
}

/// Whether `p ∪ {(a, b)}` is a partial isomorphism, given that `p` is one and
/// that `a`, `b` are both uncovered.
pub(crate) fn compatible(m: &Structure, n: &Structure, p: &Pairs, a: Elem, b: Elem) -> bool {
    for (&cm, &cn) in m.constants().iter().zip(n.constants()) {
        if (cm == a) != (cn == b) {
            return false;
        }
    }
    let mut list: Vec<(Elem, Elem)> = p.pairs().collect();
    list.push((a, b));
    let last = list.len() - 1;
    let mut src = Vec::new();
    let mut dst = Vec::new();
    for (idx, sym) in m.vocab().relations().iter().enumerate() {
        let k = sym.arity;
        let mut digits = vec![0usize; k];
        loop {
            if digits.contains(&last) {
                src.clear();
                dst.clear();
                src.extend(digits.iter().map(|&d| list[d].0));
                dst.extend(digits.iter().map(|&d| list[d].1));
                if m.holds(idx, &src) != n.holds(idx, &dst) {
                    return false;
                }
            }
            let mut i = 0;
            while i < k {
                digits[i] += 1;
                if digits[i] < list.len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    true
}

/// The pairs forced by the constants, if they form a partial isomorphism.
pub(crate) fn initial_pairs(m: &Structure, n: &Structure) -> Option<Pairs> {
    let mut p = Pairs::empty(m.size(), n.size());
    for (&a, &b) in m.constants().iter().zip(n.constants()) {
        match (p.get(a), p.pre(b)) {
            (Some(x), _) if x == b => continue,
            (None, None) => {
                if !compatible(m, n, &p, a, b) {
                    return None;
                }
                p.add(a, b);
            }
            _ => return None,
        }
    }
    Some(p)
}

/// Minimal extensions of `p` covering the uncovered elements of `due_left`
/// and `due_right`: every new pair touches a due element.
pub(crate) fn minimal_extensions(m: &Structure, n: &Structure, p: &Pairs, due_left: &[Elem], due_right: &[Elem]) -> Vec<Pairs> {
    let dl: Vec<Elem> = due_left.iter().copied().filter(|&a| !p.covers(Side::Left, a)).collect();
    let dr: Vec<Elem> = due_right.iter().copied().filter(|&b| !p.covers(Side::Right, b)).collect();
    let mut out = Vec::new();
    let mut cur = p.clone();
    extend_left(m, n, &mut cur, &dl, &dr, &mut out);
    out
}

fn extend_left(m: &Structure, n: &Structure, cur: &mut Pairs, dl: &[Elem], dr: &[Elem], out: &mut Vec<Pairs>) {
    let Some((&a, rest)) = dl.split_first() else {
        let pending: Vec<Elem> = dr.iter().copied().filter(|&b| !cur.covers(Side::Right, b)).collect();
        extend_right(m, n, cur, &pending, out);
        return;
    };
    for b in 0..n.size() {
        if cur.pre(b).is_none() && compatible(m, n, cur, a, b) {
            let saved = cur.clone();
            cur.add(a, b);
            extend_left(m, n, cur, rest, dr, out);
            *cur = saved;
        }
    }
}

fn extend_right(m: &Structure, n: &Structure, cur: &mut Pairs, dr: &[Elem], out: &mut Vec<Pairs>) {
    let Some((&b, rest)) = dr.split_first() else {
        out.push(cur.clone());
        return;
    };
    for a in 0..m.size() {
        if cur.get(a).is_none() && compatible(m, n, cur, a, b) {
            let saved = cur.clone();
            cur.add(a, b);
            extend_right(m, n, cur, rest, out);
            *cur = saved;
        }
    }
}

/// Nonempty subsets of `elems` with at most `theta` members, in
/// size-then-lexicographic order.
pub(crate) fn small_subsets(elems: &[Elem], theta: usize) -> Vec<Vec<Elem>> {
    use itertools::Itertools;
    (1..=theta.min(elems.len())).flat_map(|k| elems.iter().copied().combinations(k)).collect()
}

/// Least clock with which Spoiler wins from the initial position.
pub fn spoiler_rank(kind: GameKind, m: &Structure, n: &Structure, theta: usize) -> Result<Rank, GameError> {
    spoiler_rank_with(kind, m, n, theta, GameConfig::default())
}

pub fn spoiler_rank_with(kind: GameKind, m: &Structure, n: &Structure, theta: usize, config: GameConfig) -> Result<Rank, GameError> {
    match kind {
        GameKind::Efc => Ok(EfcSolver::new(m, n, theta)?.rank()),
        GameKind::Dg => Ok(DgSolver::new(m, n, theta)?.rank()),
        GameKind::Dgvv { alpha } => Ok(DgvvSolver::new(m, n, theta, alpha, config.dgvv_reading)?.rank()),
    }
}

/// Spoiler wins exactly when his rank is at most the clock.
pub fn winner(kind: GameKind, m: &Structure, n: &Structure, theta: usize, clock: ClockOrdinal) -> Result<Player, GameError> {
    winner_with(kind, m, n, theta, clock, GameConfig::default())
}

pub fn winner_with(
    kind: GameKind,
    m: &Structure,
    n: &Structure,
    theta: usize,
    clock: ClockOrdinal,
    config: GameConfig,
) -> Result<Player, GameError> {
    Ok(winner_from_rank(spoiler_rank_with(kind, m, n, theta, config)?, clock))
}

/// The winner at `clock` given the Spoiler rank.
pub fn winner_from_rank(rank: Rank, clock: ClockOrdinal) -> Player {
    if rank <= clock && rank != ClockOrdinal::Infinity {
        Player::Spoiler
    } else {
        Player::Duplicator
    }
}

/// A rank-achieving Spoiler move from a position without pending
/// obligations; `None` when Duplicator wins from it or it is already lost
/// for her.
pub fn spoiler_witness(pos: &GamePosition, m: &Structure, n: &Structure) -> Result<Option<SpoilerMove>, GameError> {
    check_pair(m, n, pos.theta)?;
    if !pos.obligations.is_empty() {
        return Err(GameError::InvalidPosition("witnesses are computed for positions without pending obligations".into()));
    }
    if !is_partial_isomorphism(m, n, &pos.pi)? {
        return Ok(None);
    }
    let pairs = Pairs::from_map(m, n, &pos.pi)?;
    match pos.kind {
        GameKind::Efc => Ok(EfcSolver::new(m, n, pos.theta)?.witness_at(&pairs)),
        GameKind::Dg => Ok(DgSolver::new(m, n, pos.theta)?.witness_at(&pairs)),
        GameKind::Dgvv { alpha } => {
            Ok(DgvvSolver::new(m, n, pos.theta, alpha, DgvvReading::Corrected)?.witness_at(&pairs))
        }
    }
}

/// Spoiler moves from `pos`. Clock choices are canonical: every finite value
/// up to a sufficient bound, and `w*k + bound` below each limit.
pub fn legal_moves(pos: &GamePosition, m: &Structure, n: &Structure) -> Result<Vec<SpoilerMove>, GameError> {
    check_pair(m, n, pos.theta)?;
    if !is_partial_isomorphism(m, n, &pos.pi)? {
        return Err(GameError::InvalidPosition("the map is not a partial isomorphism".into()));
    }
    let pairs = Pairs::from_map(m, n, &pos.pi)?;
    let bound = (m.size() + n.size() + 1) as u64;
    let clocks = canonical_clock_choices(pos.clock, bound);
    let mut out = Vec::new();
    for &clock in &clocks {
        for side in [Side::Left, Side::Right] {
            let mut free = pairs.free(side);
            if pos.kind != GameKind::Efc {
                let pending: BTreeSet<Elem> = pos
                    .obligations
                    .iter()
                    .filter(|o| o.side == side)
                    .flat_map(|o| o.elems.iter().copied())
                    .collect();
                free.retain(|e| !pending.contains(e));
            }
            for challenge in small_subsets(&free, pos.theta) {
                out.push(SpoilerMove { clock, side, challenge });
            }
        }
    }
    Ok(out)
}

pub(crate) fn canonical_clock_choices(clock: ClockOrdinal, bound: u64) -> Vec<ClockOrdinal> {
    match clock {
        ClockOrdinal::Infinity => (0..=bound).rev().map(ClockOrdinal::finite).collect(),
        ClockOrdinal::Below { omega, finite } => {
            let mut out: Vec<ClockOrdinal> =
                (0..finite).rev().filter(|&b| b <= bound).map(|b| ClockOrdinal::new(omega, b)).collect();
            for k in (0..omega).rev() {
                out.push(ClockOrdinal::new(k, bound));
            }
            out
        }
    }
}

/// Duplicator's answers to `mv` at `pos`. For EFC these are the partitions
/// of the challenge; for the delayed games, a labeling with labels up to
/// `|challenge| + finite part of the clock` together with a minimal map
/// covering whatever comes due now.
pub fn duplicator_responses(pos: &GamePosition, mv: &SpoilerMove, m: &Structure, n: &Structure) -> Result<Vec<DuplicatorMove>, GameError> {
    check_pair(m, n, pos.theta)?;
    let pairs = Pairs::from_map(m, n, &pos.pi)?;
    let idx_mask = (1u64 << mv.challenge.len()) - 1;
    if pos.kind == GameKind::Efc {
        return Ok(enumerate_set_partitions(idx_mask).map(DuplicatorMove::Partition).collect());
    }
    let max_label = (mv.challenge.len() as u64 + mv.clock.as_finite().unwrap_or(0)).min(8) as u32;
    let mut out = Vec::new();
    let k = mv.challenge.len();
    let mut labels = vec![0u32; k];
    loop {
        let mut due_l = Vec::new();
        let mut due_r = Vec::new();
        let push = |side: Side, e: Elem, l: &mut Vec<Elem>, r: &mut Vec<Elem>| match side {
            Side::Left => l.push(e),
            Side::Right => r.push(e),
        };
        for o in &pos.obligations {
            for (i, &e) in o.elems.iter().enumerate() {
                if o.labels.label(i) == Some(o.age) {
                    push(o.side, e, &mut due_l, &mut due_r);
                }
            }
        }
        for (i, &e) in mv.challenge.iter().enumerate() {
            if labels[i] == 0 {
                push(mv.side, e, &mut due_l, &mut due_r);
            }
        }
        let lp = LabeledPartition::new(labels.iter().copied().enumerate().collect(), max_label)
            .expect("labels within range");
        for ext in minimal_extensions(m, n, &pairs, &due_l, &due_r) {
            out.push(DuplicatorMove::Labeled { labels: lp.clone(), pi: ext.to_map() });
        }
        let mut i = 0;
        while i < k {
            labels[i] += 1;
            if labels[i] <= max_label {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    Ok(out)
}
