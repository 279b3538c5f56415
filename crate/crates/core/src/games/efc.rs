//! The split EF game. Spoiler challenges at most `theta` elements on one
//! side, Duplicator partitions the challenge, Spoiler picks a block, and
//! Duplicator extends the map to cover it.

use std::collections::{HashMap, VecDeque};

use super::fixpoint::{self, Challenge, GameGraph, INF};
use super::{check_pair, initial_pairs, minimal_extensions, small_subsets, GameError, Pairs, Rank, Side, SpoilerMove};
use crate::ordinal::ClockOrdinal;
use crate::partition::enumerate_set_partitions;
use crate::structure::{is_partial_isomorphism, Elem, PartialMap, Structure};

pub struct EfcSolver<'s> {
    m: &'s Structure,
    n: &'s Structure,
    theta: usize,
    index: HashMap<Vec<u8>, usize>,
    positions: Vec<Pairs>,
    meta: Vec<Vec<(Side, Vec<Elem>)>>,
    graph: GameGraph,
    rank: Vec<u32>,
    start: Option<usize>,
}

impl<'s> EfcSolver<'s> {
    /// Builds the positions reachable from the initial map and solves them.
    pub fn new(m: &'s Structure, n: &'s Structure, theta: usize) -> Result<Self, GameError> {
        check_pair(m, n, theta)?;
        let mut s = EfcSolver {
            m,
            n,
            theta,
            index: HashMap::new(),
            positions: Vec::new(),
            meta: Vec::new(),
            graph: GameGraph::default(),
            rank: Vec::new(),
            start: None,
        };
        if let Some(p0) = initial_pairs(m, n) {
            s.start = Some(s.explore(p0));
            s.rank = fixpoint::solve(&s.graph);
        }
        Ok(s)
    }

    fn intern(&mut self, p: Pairs, queue: &mut VecDeque<usize>) -> usize {
        if let Some(&id) = self.index.get(p.key()) {
            return id;
        }
        let id = self.graph.add_position();
        self.index.insert(p.key().to_vec(), id);
        self.positions.push(p);
        self.meta.push(Vec::new());
        queue.push_back(id);
        id
    }

    fn explore(&mut self, p0: Pairs) -> usize {
        let mut queue = VecDeque::new();
        let start = self.intern(p0, &mut queue);
        while let Some(id) = queue.pop_front() {
            let p = self.positions[id].clone();
            for side in [Side::Left, Side::Right] {
                for challenge in small_subsets(&p.free(side), self.theta) {
                    let k = challenge.len();
                    let full = (1u64 << k) - 1;
                    let mut block_of_mask = vec![usize::MAX; 1 << k];
                    let mut blocks = Vec::new();
                    for mask in 1..=full {
                        let elems: Vec<Elem> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| challenge[i]).collect();
                        let exts = match side {
                            Side::Left => minimal_extensions(self.m, self.n, &p, &elems, &[]),
                            Side::Right => minimal_extensions(self.m, self.n, &p, &[], &elems),
                        };
                        let succ = exts.into_iter().map(|e| self.intern(e, &mut queue)).collect();
                        block_of_mask[mask as usize] = blocks.len();
                        blocks.push(succ);
                    }
                    let options = enumerate_set_partitions(full)
                        .map(|part| part.blocks().iter().map(|&b| block_of_mask[b as usize]).collect())
                        .collect();
                    self.graph.challenges[id].push(Challenge { blocks, options });
                    self.meta[id].push((side, challenge));
                }
            }
        }
        start
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn left(&self) -> &'s Structure {
        self.m
    }

    pub fn right(&self) -> &'s Structure {
        self.n
    }

    /// Number of explored positions.
    pub fn position_count(&self) -> usize {
        self.positions.len()
    }

    fn to_rank(r: u32) -> Rank {
        if r == INF {
            ClockOrdinal::Infinity
        } else {
            ClockOrdinal::finite(u64::from(r))
        }
    }

    pub fn rank(&self) -> Rank {
        match self.start {
            Some(id) => Self::to_rank(self.rank[id]),
            None => ClockOrdinal::ZERO,
        }
    }

    pub(crate) fn pairs_of(&self, pairs: &[(Elem, Elem)]) -> Result<Pairs, GameError> {
        let mut p = Pairs::empty(self.m.size(), self.n.size());
        for &(a, b) in pairs {
            p.add(a, b);
        }
        Ok(p)
    }

    pub(crate) fn raw_rank(&self, p: &Pairs) -> Option<u32> {
        self.index.get(p.key()).map(|&id| self.rank[id])
    }

    /// Rank from an arbitrary map; broken maps have rank 0.
    pub fn rank_at(&self, pi: &PartialMap) -> Result<Rank, GameError> {
        if !is_partial_isomorphism(self.m, self.n, pi)? {
            return Ok(ClockOrdinal::ZERO);
        }
        let p = Pairs::from_map(self.m, self.n, pi)?;
        match self.raw_rank(&p) {
            Some(r) => Ok(Self::to_rank(r)),
            None => Ok(EfcSolver::from_pairs(self.m, self.n, self.theta, p).rank()),
        }
    }

    fn from_pairs(m: &'s Structure, n: &'s Structure, theta: usize, p: Pairs) -> Self {
        let mut s = EfcSolver {
            m,
            n,
            theta,
            index: HashMap::new(),
            positions: Vec::new(),
            meta: Vec::new(),
            graph: GameGraph::default(),
            rank: Vec::new(),
            start: None,
        };
        s.start = Some(s.explore(p));
        s.rank = fixpoint::solve(&s.graph);
        s
    }

    /// Worst case for Spoiler after he picks `block` on `side`: the largest
    /// rank among Duplicator's minimal extensions, 0 if none exists.
    pub(crate) fn block_value(&self, p: &Pairs, side: Side, block: &[Elem]) -> u32 {
        let exts = match side {
            Side::Left => minimal_extensions(self.m, self.n, p, block, &[]),
            Side::Right => minimal_extensions(self.m, self.n, p, &[], block),
        };
        exts.iter().map(|e| self.raw_rank(e).expect("extensions of explored positions are explored")).max().unwrap_or(0)
    }

    /// A smallest rank-achieving challenge at `p`.
    pub(crate) fn witness_at(&self, p: &Pairs) -> Option<SpoilerMove> {
        let owned;
        let solver = match self.index.get(p.key()) {
            Some(_) => self,
            None => {
                owned = EfcSolver::from_pairs(self.m, self.n, self.theta, p.clone());
                &owned
            }
        };
        let id = solver.index[p.key()];
        let r = solver.rank[id];
        if r == INF {
            return None;
        }
        let best = solver.graph.challenges[id]
            .iter()
            .zip(&solver.meta[id])
            .filter(|(c, _)| fixpoint::challenge_value(c, &solver.rank) == r - 1)
            .map(|(_, meta)| meta)
            .min_by_key(|(side, ch)| (ch.len(), *side, ch.clone()))?;
        Some(SpoilerMove { clock: ClockOrdinal::finite(u64::from(r - 1)), side: best.0, challenge: best.1.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{order, unary};
    use super::*;
    use crate::games::{spoiler_rank, spoiler_witness, winner, GameKind, GamePosition, Player};
    use crate::structure::canonical_key;

    #[test]
    fn p_pair_rank_one() {
        let (m, n) = (unary(2, &[0]), unary(2, &[]));
        assert_eq!(spoiler_rank(GameKind::Efc, &m, &n, 1).unwrap(), ClockOrdinal::finite(1));
        assert_eq!(winner(GameKind::Efc, &m, &n, 1, ClockOrdinal::ZERO).unwrap(), Player::Duplicator);
        assert_eq!(winner(GameKind::Efc, &m, &n, 1, ClockOrdinal::finite(1)).unwrap(), Player::Spoiler);
        let pos = GamePosition::initial(GameKind::Efc, &m, &n, 1, ClockOrdinal::finite(1)).unwrap();
        let w = spoiler_witness(&pos, &m, &n).unwrap().unwrap();
        assert_eq!((w.side, w.challenge, w.clock), (Side::Left, vec![0], ClockOrdinal::ZERO));
    }

    #[test]
    fn orders_two_and_three() {
        let (m, n) = (order(2), order(3));
        assert_eq!(spoiler_rank(GameKind::Efc, &m, &n, 1).unwrap(), ClockOrdinal::finite(2));
        assert_eq!(winner(GameKind::Efc, &m, &n, 1, ClockOrdinal::OMEGA).unwrap(), Player::Spoiler);
    }

    #[test]
    fn isomorphic_pairs_are_infinite() {
        let m = order(3);
        let n = m.permuted(&[2, 0, 1]);
        assert_eq!(spoiler_rank(GameKind::Efc, &m, &n, 2).unwrap(), ClockOrdinal::Infinity);
        let pos = GamePosition::initial(GameKind::Efc, &m, &n, 2, ClockOrdinal::Infinity).unwrap();
        assert_eq!(spoiler_witness(&pos, &m, &n).unwrap(), None);
        assert_eq!(winner(GameKind::Efc, &m, &m, 2, ClockOrdinal::new(3, 0)).unwrap(), Player::Duplicator);
    }

    #[test]
    fn broken_position_has_no_witness() {
        let (m, n) = (unary(2, &[0]), unary(2, &[]));
        let pos = GamePosition {
            pi: PartialMap::from_pairs([(0, 0)]).unwrap(),
            ..GamePosition::initial(GameKind::Efc, &m, &n, 1, ClockOrdinal::finite(1)).unwrap()
        };
        assert_eq!(spoiler_witness(&pos, &m, &n).unwrap(), None);
        let solver = EfcSolver::new(&m, &n, 1).unwrap();
        assert_eq!(solver.rank_at(&pos.pi).unwrap(), ClockOrdinal::ZERO);
    }

    #[test]
    fn rank_infinite_iff_isomorphic_small_unary() {
        let all: Vec<Structure> = (1..=3)
            .flat_map(|n| (0..1u32 << n).map(move |mask| unary(n, &(0..n).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>())))
            .collect();
        for m in &all {
            for n in &all {
                let iso = canonical_key(m).unwrap() == canonical_key(n).unwrap();
                for theta in 1..=2 {
                    let r = spoiler_rank(GameKind::Efc, m, n, theta).unwrap();
                    assert_eq!(r == ClockOrdinal::Infinity, iso);
                }
            }
        }
    }
}
