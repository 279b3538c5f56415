//! Direct game-tree search with explicit ordinal clocks, used to validate
//! the rank solvers on small structures.
//!
//! The search plays the unreduced rules: challenges may be empty or contain
//! covered elements, Duplicator's labelings range over explicit values, and
//! her maps are arbitrary partial isomorphisms extending the current one.
//! The only bounds are on the finite parts of ordinals:
//!
//! * EFC: finite parts at most `min(|M|, |N|) + 1`. A round that does not
//!   enlarge the map leaves the position unchanged, so more rounds than that
//!   are never useful.
//! * DG: labels at most the finite part of the clock Spoiler just chose plus
//!   two, and finite clock parts at most the largest pending label plus
//!   `|M| + |N| + 2`.
//! * DGVV: finite clock parts at most `(|M| + |N| + 1) * alpha0 + 1`.

use std::collections::HashMap;

use itertools::Itertools;

use super::{check_pair, compatible, initial_pairs, GameConfig, GameError, GameKind, Pairs, Player, Side};
use crate::ordinal::ClockOrdinal;
use crate::structure::{Elem, Structure};

/// Largest universe the oracle accepts.
pub const ORACLE_BOUND: usize = 4;

pub fn cross_check_bounded(kind: GameKind, m: &Structure, n: &Structure, theta: usize, clock: ClockOrdinal) -> Result<Player, GameError> {
    cross_check_bounded_with(kind, m, n, theta, clock, GameConfig::default())
}

pub fn cross_check_bounded_with(
    kind: GameKind,
    m: &Structure,
    n: &Structure,
    theta: usize,
    clock: ClockOrdinal,
    config: GameConfig,
) -> Result<Player, GameError> {
    check_pair(m, n, theta)?;
    for s in [m, n] {
        if s.size() > ORACLE_BOUND {
            return Err(GameError::TooLarge { size: s.size(), bound: ORACLE_BOUND });
        }
    }
    if clock == ClockOrdinal::Infinity {
        return Err(GameError::InfiniteClock);
    }
    let Some(p0) = initial_pairs(m, n) else {
        // the constants already disagree
        return Ok(Player::Spoiler);
    };
    let spoiler = match kind {
        GameKind::Efc => Efc { m, n, theta, memo: HashMap::new() }.spoiler_wins(&p0, clock),
        GameKind::Dg => Dg { m, n, theta, memo: HashMap::new() }.spoiler_wins(&p0, &[], clock),
        GameKind::Dgvv { alpha } => (0..alpha).all(|alpha0| {
            let mut g = Dgvv { m, n, theta, alpha0, literal: config.dgvv_reading == super::DgvvReading::Literal, memo: HashMap::new() };
            g.spoiler_wins(&p0, &[], false, clock)
        }),
    };
    Ok(if spoiler { Player::Spoiler } else { Player::Duplicator })
}

/// Every subset of either universe with at most `theta` elements, the empty
/// one included.
fn all_challenges(m: &Structure, n: &Structure, theta: usize) -> Vec<(Side, Vec<Elem>)> {
    let mut out = vec![(Side::Left, Vec::new())];
    for (side, size) in [(Side::Left, m.size()), (Side::Right, n.size())] {
        for k in 1..=theta.min(size) {
            out.extend((0..size).combinations(k).map(|c| (side, c)));
        }
    }
    out
}

/// Every partial isomorphism extending `p` whose domain contains `due_l`
/// and whose range contains `due_r`.
fn all_extensions(m: &Structure, n: &Structure, p: &Pairs, due_l: &[Elem], due_r: &[Elem]) -> Vec<Pairs> {
    fn go(m: &Structure, n: &Structure, a: Elem, cur: &mut Pairs, due_l: &[Elem], due_r: &[Elem], out: &mut Vec<Pairs>) {
        if a == m.size() {
            if due_r.iter().all(|&b| cur.pre(b).is_some()) {
                out.push(cur.clone());
            }
            return;
        }
        if cur.get(a).is_some() {
            go(m, n, a + 1, cur, due_l, due_r, out);
            return;
        }
        if !due_l.contains(&a) {
            go(m, n, a + 1, cur, due_l, due_r, out);
        }
        for b in 0..n.size() {
            if cur.pre(b).is_none() && compatible(m, n, cur, a, b) {
                let saved = cur.clone();
                cur.add(a, b);
                go(m, n, a + 1, cur, due_l, due_r, out);
                *cur = saved;
            }
        }
    }
    let mut out = Vec::new();
    go(m, n, 0, &mut p.clone(), due_l, due_r, &mut out);
    out
}

/// All functions `0..k -> 0..labels`.
fn labelings(k: usize, labels: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    std::iter::repeat_n(0..labels, k).multi_cartesian_product().collect()
}

fn split(side: Side, elems: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    match side {
        Side::Left => (elems.to_vec(), Vec::new()),
        Side::Right => (Vec::new(), elems.to_vec()),
    }
}

struct Efc<'s> {
    m: &'s Structure,
    n: &'s Structure,
    theta: usize,
    memo: HashMap<(Pairs, ClockOrdinal), bool>,
}

impl Efc<'_> {
    fn spoiler_wins(&mut self, p: &Pairs, clock: ClockOrdinal) -> bool {
        if let Some(&v) = self.memo.get(&(p.clone(), clock)) {
            return v;
        }
        let cap = (self.m.size().min(self.n.size()) + 1) as u64;
        let challenges = all_challenges(self.m, self.n, self.theta);
        let v = clock.choices_below(cap).into_iter().any(|next| {
            challenges.iter().any(|(side, ch)| {
                // Duplicator labels the challenge; one label more than the
                // challenge size guarantees an empty piece is available
                labelings(ch.len(), ch.len() as u32 + 1).into_iter().all(|f| {
                    (0..=ch.len() as u32).any(|piece| {
                        let block: Vec<Elem> = ch.iter().zip(&f).filter(|(_, &l)| l == piece).map(|(&e, _)| e).collect();
                        let (dl, dr) = split(*side, &block);
                        all_extensions(self.m, self.n, p, &dl, &dr).iter().all(|q| self.spoiler_wins(q, next))
                    })
                })
            })
        });
        self.memo.insert((p.clone(), clock), v);
        v
    }
}

/// Pending obligation: side, element, rounds until due.
type Pending = (Side, Elem, u64);

fn normalize(mut pend: Vec<Pending>) -> Vec<Pending> {
    pend.sort();
    // keep the earliest deadline per element
    pend.dedup_by(|later, earlier| later.0 == earlier.0 && later.1 == earlier.1);
    pend
}

struct Dg<'s> {
    m: &'s Structure,
    n: &'s Structure,
    theta: usize,
    memo: HashMap<(Pairs, Vec<Pending>, ClockOrdinal), bool>,
}

impl Dg<'_> {
    fn spoiler_wins(&mut self, p: &Pairs, pend: &[Pending], clock: ClockOrdinal) -> bool {
        let key = (p.clone(), pend.to_vec(), clock);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let latest = pend.iter().map(|x| x.2).max().unwrap_or(0);
        let cap = latest + (self.m.size() + self.n.size() + 2) as u64;
        let challenges = all_challenges(self.m, self.n, self.theta);
        let v = clock.choices_below(cap).into_iter().any(|next| {
            let top_label = match next {
                ClockOrdinal::Below { finite, .. } => finite + 2,
                ClockOrdinal::Infinity => 0,
            };
            challenges.iter().any(|(side, ch)| {
                labelings(ch.len(), top_label as u32 + 1).into_iter().all(|f| {
                    let mut all: Vec<Pending> = pend.to_vec();
                    all.extend(ch.iter().zip(&f).map(|(&e, &l)| (*side, e, u64::from(l))));
                    let all = normalize(all);
                    let due_l: Vec<Elem> = all.iter().filter(|x| x.0 == Side::Left && x.2 == 0).map(|x| x.1).collect();
                    let due_r: Vec<Elem> = all.iter().filter(|x| x.0 == Side::Right && x.2 == 0).map(|x| x.1).collect();
                    all_extensions(self.m, self.n, p, &due_l, &due_r).iter().all(|q| {
                        let rest: Vec<Pending> = all
                            .iter()
                            .filter(|x| !q.covers(x.0, x.1))
                            .map(|&(s, e, r)| (s, e, r - 1))
                            .collect();
                        self.spoiler_wins(q, &rest, next)
                    })
                })
            })
        });
        self.memo.insert(key, v);
        v
    }
}

struct Dgvv<'s> {
    m: &'s Structure,
    n: &'s Structure,
    theta: usize,
    alpha0: u32,
    literal: bool,
    memo: HashMap<(Pairs, Vec<Pending>, bool, ClockOrdinal), bool>,
}

impl Dgvv<'_> {
    fn spoiler_wins(&mut self, p: &Pairs, pend: &[Pending], started: bool, clock: ClockOrdinal) -> bool {
        let key = (p.clone(), pend.to_vec(), started, clock);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let cap = ((self.m.size() + self.n.size() + 1) as u64) * u64::from(self.alpha0.max(1)) + 1;
        let due_label = u64::from(self.literal && started);
        let challenges = all_challenges(self.m, self.n, self.theta);
        let v = clock.choices_below(cap).into_iter().any(|next| {
            challenges.iter().any(|(side, ch)| {
                let fresh = labelings(ch.len(), self.alpha0);
                // decreased counters: strictly below the current one, zero stays zero
                let decreases: Vec<Vec<u64>> = if pend.is_empty() {
                    vec![Vec::new()]
                } else {
                    pend.iter().map(|x| (0..x.2.max(1)).collect::<Vec<_>>()).multi_cartesian_product().collect()
                };
                fresh.iter().all(|f| {
                    decreases.iter().all(|dec| {
                        let mut due_l = Vec::new();
                        let mut due_r = Vec::new();
                        let mut rest: Vec<Pending> = Vec::new();
                        let mut place = |s: Side, e: Elem, c: u64, due: bool| {
                            if due {
                                match s {
                                    Side::Left => due_l.push(e),
                                    Side::Right => due_r.push(e),
                                }
                            } else {
                                rest.push((s, e, c));
                            }
                        };
                        for (&e, &h) in ch.iter().zip(f) {
                            place(*side, e, u64::from(h), u64::from(h) == due_label);
                        }
                        for (x, &c) in pend.iter().zip(dec) {
                            place(x.0, x.1, c, c == 0);
                        }
                        all_extensions(self.m, self.n, p, &due_l, &due_r).iter().all(|q| {
                            let left: Vec<Pending> =
                                normalize(rest.iter().copied().filter(|x| !q.covers(x.0, x.1)).collect());
                            self.spoiler_wins(q, &left, true, next)
                        })
                    })
                })
            })
        });
        self.memo.insert(key, v);
        v
    }
}
