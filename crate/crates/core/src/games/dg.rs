//! The delayed game. Duplicator labels each challenged element with the
//! number of rounds she may wait before covering it.
//!
//! Labels only ever need to outlast the current run of moves below one
//! limit stage, since Spoiler can always choose the next finite stretch long
//! enough for every label to come due. The solver therefore works stage by
//! stage: at clock `w*a + b`, Spoiler spends the `b` remaining moves adding
//! challenges to the pending set; when he drops below the limit, Duplicator
//! must cover everything pending, after which Spoiler may pend any set of
//! uncovered elements for the next stage. At stage 0 nothing ever comes due.

use std::cell::RefCell;
use std::collections::HashMap;

use super::{check_pair, initial_pairs, minimal_extensions, small_subsets, GameError, Pairs, Rank, Side, SpoilerMove};
use crate::ordinal::ClockOrdinal;
use crate::structure::{Elem, Structure};

/// Highest limit stage searched; a pair surviving `w*MAX_STAGE + bmax` has
/// infinite rank.
const MAX_STAGE: u64 = 3;

type Key = (Vec<u8>, u64, u64, u64, u64);

pub struct DgSolver<'s> {
    m: &'s Structure,
    n: &'s Structure,
    theta: usize,
    memo: RefCell<HashMap<Key, bool>>,
}

fn mask_of(elems: &[Elem]) -> u64 {
    elems.iter().fold(0, |acc, &e| acc | 1 << e)
}

fn elems_of(mask: u64) -> Vec<Elem> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}

impl<'s> DgSolver<'s> {
    pub fn new(m: &'s Structure, n: &'s Structure, theta: usize) -> Result<Self, GameError> {
        check_pair(m, n, theta)?;
        Ok(DgSolver { m, n, theta, memo: RefCell::new(HashMap::new()) })
    }

    fn bmax(&self) -> u64 {
        (self.m.size() + self.n.size() + 1) as u64
    }

    /// Whether Duplicator survives from map `p` with pending sets
    /// `(pl, pr)` at clock `w*a + b`.
    fn duplicator_wins(&self, p: &Pairs, pl: u64, pr: u64, a: u64, b: u64) -> bool {
        if a == 0 {
            return true;
        }
        let key = (p.key().to_vec(), pl, pr, a, b);
        if let Some(&v) = self.memo.borrow().get(&key) {
            return v;
        }
        let v = if b > 0 {
            self.duplicator_wins(p, pl, pr, a, b - 1)
                && self.challenges(p, pl, pr).into_iter().all(|(side, ch)| {
                    let (l, r) = add(pl, pr, side, &ch);
                    self.duplicator_wins(p, l, r, a, b - 1)
                })
        } else {
            minimal_extensions(self.m, self.n, p, &elems_of(pl), &elems_of(pr)).into_iter().any(|ext| {
                if a == 1 {
                    return true;
                }
                let fl = mask_of(&ext.free(Side::Left));
                let fr = mask_of(&ext.free(Side::Right));
                submasks(fl).all(|sl| submasks(fr).all(|sr| self.duplicator_wins(&ext, sl, sr, a - 1, 0)))
            })
        };
        self.memo.borrow_mut().insert(key, v);
        v
    }

    fn challenges(&self, p: &Pairs, pl: u64, pr: u64) -> Vec<(Side, Vec<Elem>)> {
        let mut out = Vec::new();
        for (side, pend) in [(Side::Left, pl), (Side::Right, pr)] {
            let free: Vec<Elem> = p.free(side).into_iter().filter(|&e| pend & (1 << e) == 0).collect();
            out.extend(small_subsets(&free, self.theta).into_iter().map(|c| (side, c)));
        }
        out
    }

    pub(crate) fn rank_from(&self, p: &Pairs) -> Rank {
        for a in 1..=MAX_STAGE {
            for b in 0..=self.bmax() {
                if !self.duplicator_wins(p, 0, 0, a, b) {
                    return ClockOrdinal::new(a, b);
                }
            }
        }
        ClockOrdinal::Infinity
    }

    pub fn rank(&self) -> Rank {
        match initial_pairs(self.m, self.n) {
            Some(p) => self.rank_from(&p),
            None => ClockOrdinal::ZERO,
        }
    }

    pub(crate) fn witness_at(&self, p: &Pairs) -> Option<SpoilerMove> {
        let ClockOrdinal::Below { omega: a, finite: b } = self.rank_from(p) else {
            return None;
        };
        if a == 0 {
            return None;
        }
        if b == 0 {
            let clock = ClockOrdinal::new(a - 1, self.bmax());
            return Some(SpoilerMove { clock, side: Side::Left, challenge: Vec::new() });
        }
        let mut options = self.challenges(p, 0, 0);
        options.sort_by_key(|(side, ch)| (ch.len(), *side, ch.clone()));
        options.into_iter().find_map(|(side, ch)| {
            let (l, r) = add(0, 0, side, &ch);
            (!self.duplicator_wins(p, l, r, a, b - 1))
                .then(|| SpoilerMove { clock: ClockOrdinal::new(a, b - 1), side, challenge: ch })
        })
    }
}

fn add(pl: u64, pr: u64, side: Side, ch: &[Elem]) -> (u64, u64) {
    match side {
        Side::Left => (pl | mask_of(ch), pr),
        Side::Right => (pl, pr | mask_of(ch)),
    }
}

/// All submasks of `mask`, including 0 and `mask`.
fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    std::iter::once(0).chain(crate::partition::nonempty_submasks(mask))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{order, unary};
    use super::*;
    use crate::games::{spoiler_rank, winner, GameKind, Player};

    #[test]
    fn finite_clocks_never_suffice() {
        let (m, n) = (unary(2, &[0]), unary(2, &[]));
        for c in 0..6 {
            assert_eq!(winner(GameKind::Dg, &m, &n, 1, ClockOrdinal::finite(c)).unwrap(), Player::Duplicator);
        }
        assert_eq!(winner(GameKind::Dg, &m, &n, 1, ClockOrdinal::OMEGA).unwrap(), Player::Duplicator);
    }

    #[test]
    fn p_pair_rank() {
        let (m, n) = (unary(2, &[0]), unary(2, &[]));
        assert_eq!(spoiler_rank(GameKind::Dg, &m, &n, 1).unwrap(), ClockOrdinal::new(1, 1));
    }

    #[test]
    fn orders_need_several_pending_elements() {
        // no single element or pair is uncoverable, but three left elements
        // cannot be covered in a 2-element order
        let (m, n) = (order(3), order(2));
        assert_eq!(spoiler_rank(GameKind::Dg, &m, &n, 1).unwrap(), ClockOrdinal::new(1, 3));
        assert_eq!(spoiler_rank(GameKind::Dg, &m, &n, 2).unwrap(), ClockOrdinal::new(1, 2));
        assert_eq!(spoiler_rank(GameKind::Dg, &m, &n, 3).unwrap(), ClockOrdinal::new(1, 1));
    }

    #[test]
    fn isomorphic_is_infinite() {
        let m = order(3);
        assert_eq!(spoiler_rank(GameKind::Dg, &m, &m.permuted(&[1, 2, 0]), 1).unwrap(), ClockOrdinal::Infinity);
    }
}
