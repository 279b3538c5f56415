//! The counter variant of the delayed game. Duplicator first fixes a bound
//! `alpha0 < alpha`; every challenged element gets a counter below `alpha0`,
//! pending counters strictly decrease each round, and an element must be
//! covered once its counter reaches 0.

use std::collections::{HashMap, VecDeque};

use super::fixpoint::{self, Challenge, GameGraph, INF};
use super::{check_pair, initial_pairs, minimal_extensions, small_subsets, GameError, Pairs, Rank, Side, SpoilerMove};
use crate::ordinal::ClockOrdinal;
use crate::structure::{Elem, Structure};

/// How the due set of rounds after the first is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DgvvReading {
    /// A new element is due when its counter is 0, in every round.
    #[default]
    Corrected,
    /// After the first round, a new element is due when its counter is 1;
    /// a new element with counter 0 comes due in the following round.
    Literal,
}

impl std::str::FromStr for DgvvReading {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "corrected" => Ok(DgvvReading::Corrected),
            "literal" => Ok(DgvvReading::Literal),
            other => Err(format!("unknown reading `{other}` (expected corrected or literal)")),
        }
    }
}

/// Map, pending counters per side (`0` = not pending, `c + 1` = counter
/// `c`), and whether the first round has been played.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    pairs: Pairs,
    left: Vec<u8>,
    right: Vec<u8>,
    started: bool,
}

impl State {
    fn counters(&self, side: Side) -> &Vec<u8> {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

struct Solved {
    graph: GameGraph,
    rank: Vec<u32>,
    meta: Vec<Vec<(Side, Vec<Elem>)>>,
}

pub struct DgvvSolver<'s> {
    m: &'s Structure,
    n: &'s Structure,
    theta: usize,
    alpha: u32,
    reading: DgvvReading,
}

impl<'s> DgvvSolver<'s> {
    pub fn new(m: &'s Structure, n: &'s Structure, theta: usize, alpha: u32, reading: DgvvReading) -> Result<Self, GameError> {
        check_pair(m, n, theta)?;
        if alpha == 0 {
            return Err(GameError::AlphaZero);
        }
        Ok(DgvvSolver { m, n, theta, alpha, reading })
    }

    fn solve_from(&self, p: &Pairs, alpha0: u32) -> Solved {
        let start = State { pairs: p.clone(), left: vec![0; self.m.size()], right: vec![0; self.n.size()], started: false };
        let mut index: HashMap<State, usize> = HashMap::new();
        let mut states = Vec::new();
        let mut graph = GameGraph::default();
        let mut meta = Vec::new();
        let mut queue = VecDeque::new();
        let mut intern = |s: State, graph: &mut GameGraph, meta: &mut Vec<Vec<(Side, Vec<Elem>)>>, states: &mut Vec<State>, queue: &mut VecDeque<usize>| {
            if let Some(&id) = index.get(&s) {
                return id;
            }
            let id = graph.add_position();
            meta.push(Vec::new());
            index.insert(s.clone(), id);
            states.push(s);
            queue.push_back(id);
            id
        };
        intern(start, &mut graph, &mut meta, &mut states, &mut queue);
        while let Some(id) = queue.pop_front() {
            let s = states[id].clone();
            let mut challenges = vec![(Side::Left, Vec::new())];
            for side in [Side::Left, Side::Right] {
                let free: Vec<Elem> =
                    s.pairs.free(side).into_iter().filter(|&e| s.counters(side)[e] == 0).collect();
                challenges.extend(small_subsets(&free, self.theta).into_iter().map(|c| (side, c)));
            }
            for (side, ch) in challenges {
                let mut blocks = Vec::new();
                for succ_state in self.responses(&s, side, &ch, alpha0) {
                    let exts: Vec<usize> = succ_state
                        .into_iter()
                        .map(|t| intern(t, &mut graph, &mut meta, &mut states, &mut queue))
                        .collect();
                    blocks.push(exts);
                }
                let options = (0..blocks.len()).map(|i| vec![i]).collect();
                graph.challenges[id].push(Challenge { blocks, options });
                meta[id].push((side, ch));
            }
        }
        let rank = fixpoint::solve(&graph);
        Solved { graph, rank, meta }
    }

    /// For every choice of new and decreased counters, the successor states
    /// (one per minimal covering extension).
    fn responses(&self, s: &State, side: Side, ch: &[Elem], alpha0: u32) -> Vec<Vec<State>> {
        let due_label = match (self.reading, s.started) {
            (DgvvReading::Literal, true) => 1,
            _ => 0,
        };
        // (side, element, current counter) for pending elements
        let pending: Vec<(Side, Elem, u32)> = [Side::Left, Side::Right]
            .into_iter()
            .flat_map(|sd| {
                s.counters(sd).iter().enumerate().filter(|(_, &c)| c != 0).map(move |(e, &c)| (sd, e, u32::from(c) - 1))
            })
            .collect();
        // choice ranges: new counters in 0..alpha0, decreased counters below
        // the current one (a zero counter stays zero)
        let mut ranges: Vec<u32> = vec![alpha0; ch.len()];
        ranges.extend(pending.iter().map(|&(_, _, c)| c.max(1)));
        if ranges.contains(&0) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut choice = vec![0u32; ranges.len()];
        loop {
            let mut left = vec![0u8; self.m.size()];
            let mut right = vec![0u8; self.n.size()];
            let mut due_l = Vec::new();
            let mut due_r = Vec::new();
            let mut put = |sd: Side, e: Elem, c: u32, due: bool| {
                let (arr, dues) = match sd {
                    Side::Left => (&mut left, &mut due_l),
                    Side::Right => (&mut right, &mut due_r),
                };
                if due {
                    dues.push(e);
                } else {
                    arr[e] = c as u8 + 1;
                }
            };
            for (i, &e) in ch.iter().enumerate() {
                put(side, e, choice[i], choice[i] == due_label);
            }
            for (j, &(sd, e, _)) in pending.iter().enumerate() {
                let c = choice[ch.len() + j];
                put(sd, e, c, c == 0);
            }
            let succ = minimal_extensions(self.m, self.n, &s.pairs, &due_l, &due_r)
                .into_iter()
                .map(|pairs| {
                    let mut l = left.clone();
                    let mut r = right.clone();
                    for (a, b) in pairs.pairs() {
                        l[a] = 0;
                        r[b] = 0;
                    }
                    State { pairs, left: l, right: r, started: true }
                })
                .collect();
            out.push(succ);
            let mut i = 0;
            while i < ranges.len() {
                choice[i] += 1;
                if choice[i] < ranges[i] {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == ranges.len() {
                break;
            }
        }
        out
    }

    fn rank_with(&self, p: &Pairs, alpha0: u32) -> u32 {
        self.solve_from(p, alpha0).rank[0]
    }

    /// Duplicator's best bound and the resulting rank.
    fn best(&self, p: &Pairs) -> (u32, u32) {
        (0..self.alpha).map(|a0| (a0, self.rank_with(p, a0))).max_by_key(|&(a0, r)| (r, std::cmp::Reverse(a0))).expect("alpha >= 1")
    }

    pub fn rank(&self) -> Rank {
        match initial_pairs(self.m, self.n) {
            Some(p) => {
                let (_, r) = self.best(&p);
                if r == INF {
                    ClockOrdinal::Infinity
                } else {
                    ClockOrdinal::finite(u64::from(r))
                }
            }
            None => ClockOrdinal::ZERO,
        }
    }

    /// Rank for a fixed bound `alpha0`.
    pub fn rank_for_bound(&self, alpha0: u32) -> Rank {
        match initial_pairs(self.m, self.n) {
            Some(p) => match self.rank_with(&p, alpha0) {
                INF => ClockOrdinal::Infinity,
                r => ClockOrdinal::finite(u64::from(r)),
            },
            None => ClockOrdinal::ZERO,
        }
    }

    pub(crate) fn witness_at(&self, p: &Pairs) -> Option<SpoilerMove> {
        let (alpha0, r) = self.best(p);
        if r == INF {
            return None;
        }
        let solved = self.solve_from(p, alpha0);
        let (side, ch) = solved.graph.challenges[0]
            .iter()
            .zip(&solved.meta[0])
            .filter(|(c, _)| fixpoint::challenge_value(c, &solved.rank) == r - 1)
            .map(|(_, m)| m.clone())
            .min_by_key(|(side, ch)| (ch.len(), *side, ch.clone()))?;
        Some(SpoilerMove { clock: ClockOrdinal::finite(u64::from(r - 1)), side, challenge: ch })
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{order, unary};
    use super::*;

    #[test]
    fn bound_one_is_immediate_covering() {
        let (m, n) = (unary(2, &[0]), unary(2, &[]));
        let s = DgvvSolver::new(&m, &n, 1, 2, DgvvReading::Corrected).unwrap();
        assert_eq!(s.rank_for_bound(1), ClockOrdinal::finite(1));
        assert_eq!(s.rank_for_bound(0), ClockOrdinal::finite(1));
    }

    #[test]
    fn deferral_costs_spoiler_extra_rounds() {
        let (m, n) = (unary(2, &[0]), unary(2, &[]));
        let s = DgvvSolver::new(&m, &n, 1, 3, DgvvReading::Corrected).unwrap();
        // counter 1 postpones the obligation by one round; 2 is the top value
        // for alpha0 = 3 and postpones by two
        assert_eq!(s.rank_for_bound(2), ClockOrdinal::finite(2));
        assert_eq!(s.rank_for_bound(3), ClockOrdinal::finite(3));
        assert_eq!(s.rank(), ClockOrdinal::finite(2));
    }

    #[test]
    fn isomorphic_is_infinite() {
        let m = order(3);
        let s = DgvvSolver::new(&m, &m, 2, 3, DgvvReading::Literal).unwrap();
        assert_eq!(s.rank(), ClockOrdinal::Infinity);
    }

    #[test]
    fn alpha_zero_rejected() {
        let m = order(2);
        assert!(matches!(DgvvSolver::new(&m, &m, 1, 0, DgvvReading::Corrected), Err(GameError::AlphaZero)));
    }
}
