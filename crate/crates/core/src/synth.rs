//! Sentence builders: the classical split examples, the covering sentence
//! `Theta_mu`, and extraction of distinguishing sentences from Spoiler wins.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::games::{EfcSolver, GameError, Side};
use crate::logic::{dualize, Fml, Formula, LogicError, Term, Var, THETA_MAX};
use crate::partition::{enumerate_set_partitions, mask_indices};
use crate::structure::{Elem, Structure};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("the structures are equivalent for every clock; nothing separates them")]
    NoDistinguisher,
    #[error("invalid parameters: {0}")]
    Params(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExampleKind {
    CardLt,
    NoDescChain,
    NoClique,
    NoBranch,
    Aronszajn,
    EncodeExists,
    EncodeForall,
}

impl ExampleKind {
    pub const ALL: [ExampleKind; 7] = [
        ExampleKind::CardLt,
        ExampleKind::NoDescChain,
        ExampleKind::NoClique,
        ExampleKind::NoBranch,
        ExampleKind::Aronszajn,
        ExampleKind::EncodeExists,
        ExampleKind::EncodeForall,
    ];

    fn name(self) -> &'static str {
        match self {
            ExampleKind::CardLt => "card-lt",
            ExampleKind::NoDescChain => "no-desc-chain",
            ExampleKind::NoClique => "no-clique",
            ExampleKind::NoBranch => "no-branch",
            ExampleKind::Aronszajn => "aronszajn",
            ExampleKind::EncodeExists => "encode-exists",
            ExampleKind::EncodeForall => "encode-forall",
        }
    }
}

impl fmt::Display for ExampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleKind {
    type Err = SynthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExampleKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| SynthError::Params(format!("unknown example kind `{s}`")))
    }
}

/// Parameters for [`build_example`].
#[derive(Clone, Debug)]
pub struct ExampleParams {
    /// The unary predicate (CARD_LT), order (chains, branches) or graph
    /// relation (cliques).
    pub relation: String,
    /// For the encodings: the body and the index of its distinguished
    /// variable, which must be named `x{xi}`.
    pub encode: Option<(Fml, usize)>,
}

impl ExampleParams {
    pub fn relation(name: &str) -> Self {
        ExampleParams { relation: name.to_string(), encode: None }
    }

    pub fn encode(psi: Fml, xi: usize) -> Self {
        ExampleParams { relation: String::new(), encode: Some((psi, xi)) }
    }
}

/// The bound variables `x0, .., x{m-1}` used by the examples.
pub fn example_vars(m: usize) -> Vec<Var> {
    (0..m).map(|i| Var::new(&format!("x{i}"))).collect()
}

fn check_width(m: usize) -> Result<(), SynthError> {
    if m > THETA_MAX {
        return Err(LogicError::WidthExceeded { width: m, max: THETA_MAX }.into());
    }
    Ok(())
}

fn pairs_in(mask: u64) -> Vec<(usize, usize)> {
    let idx = mask_indices(mask);
    let mut out = Vec::new();
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            out.push((i, j));
        }
    }
    out
}

fn var_term(v: &Var) -> Term {
    Term::Var(v.clone())
}

pub fn build_example(kind: ExampleKind, theta: usize, params: &ExampleParams) -> Result<Fml, SynthError> {
    check_width(theta)?;
    let xs = example_vars(theta);
    let r = params.relation.as_str();
    let rel2 = |a: usize, b: usize| Formula::rel_vars(r, &[&xs[a], &xs[b]]);
    let f = match kind {
        ExampleKind::CardLt => Formula::split_forall(xs.clone(), table(theta, |mask| {
            let premise = Formula::and(mask_indices(mask).into_iter().map(|i| Formula::rel_vars(r, &[&xs[i]])).collect());
            let collide = Formula::or(
                pairs_in(mask).into_iter().map(|(i, j)| Formula::eq(var_term(&xs[i]), var_term(&xs[j]))).collect(),
            );
            Formula::implies(premise, collide)
        }))?,
        ExampleKind::NoDescChain | ExampleKind::Aronszajn => Formula::split_forall(xs.clone(), table(theta, |mask| {
            Formula::or(pairs_in(mask).into_iter().map(|(i, j)| Formula::not(rel2(j, i))).collect())
        }))?,
        ExampleKind::NoBranch => Formula::split_forall(xs.clone(), table(theta, |mask| {
            Formula::or(pairs_in(mask).into_iter().map(|(i, j)| Formula::not(rel2(i, j))).collect())
        }))?,
        ExampleKind::NoClique => Formula::split_forall(xs.clone(), table(theta, |mask| {
            Formula::or(
                pairs_in(mask)
                    .into_iter()
                    .flat_map(|(i, j)| [Formula::not(rel2(i, j)), Formula::not(rel2(j, i))])
                    .collect(),
            )
        }))?,
        ExampleKind::EncodeExists | ExampleKind::EncodeForall => {
            let (psi, xi) = params
                .encode
                .clone()
                .ok_or_else(|| SynthError::Params("the encodings need a body and an index".into()))?;
            if xi >= theta {
                return Err(SynthError::Params(format!("index {xi} is outside width {theta}")));
            }
            let exists = kind == ExampleKind::EncodeExists;
            let filler = if exists { Formula::bot() } else { Formula::top() };
            let tab = table(theta, |mask| if mask & (1 << xi) != 0 { psi.clone() } else { filler.clone() });
            if exists {
                Formula::split_exists(xs, tab)?
            } else {
                Formula::split_forall(xs, tab)?
            }
        }
    };
    Ok(f)
}

fn table(m: usize, f: impl FnMut(u64) -> Fml) -> Vec<Fml> {
    (0..1u64 << m).map(f).collect()
}

/// The covering sentence for fibers of `rel`: every fiber `R(y, .)` has at
/// most `mu` elements, and every `mu`-tuple splits into blocks that each lie
/// in one fiber.
pub fn build_theta_mu(mu: usize, rel: &str) -> Result<Fml, SynthError> {
    if mu == 0 {
        return Err(SynthError::Params("mu must be at least 1".into()));
    }
    check_width(mu + 1)?;
    let y = Var::new("y");
    let wide = example_vars(mu + 1);
    let small_fibers = Formula::forall(
        y.clone(),
        Formula::split_forall(wide.clone(), table(mu + 1, |mask| {
            let inside = Formula::and(mask_indices(mask).into_iter().map(|i| Formula::rel_vars(rel, &[&y, &wide[i]])).collect());
            let collide = Formula::or(
                pairs_in(mask).into_iter().map(|(i, j)| Formula::eq(var_term(&wide[i]), var_term(&wide[j]))).collect(),
            );
            Formula::implies(inside, collide)
        }))?,
    );
    let xs = example_vars(mu);
    let covered = Formula::split_forall(xs.clone(), table(mu, |mask| {
        Formula::exists(
            y.clone(),
            Formula::and(mask_indices(mask).into_iter().map(|i| Formula::rel_vars(rel, &[&y, &xs[i]])).collect()),
        )
    }))?;
    Ok(Formula::and(vec![small_fibers, covered]))
}

/// A term naming a matched pair, with the elements it denotes on each side.
type Slot = (Term, Elem, Elem);

/// A literal over `slots` true on the left and false on the right, if the
/// slots do not induce a partial isomorphism.
fn mismatch(m: &Structure, n: &Structure, slots: &[Slot]) -> Option<Fml> {
    let lit = |atom: Fml, left: bool| if left { atom } else { Formula::not(atom) };
    for (i, a) in slots.iter().enumerate() {
        for b in &slots[i..] {
            let (l, r) = (a.1 == b.1, a.2 == b.2);
            if l != r {
                return Some(lit(Formula::eq(a.0.clone(), b.0.clone()), l));
            }
        }
    }
    for (ci, name) in m.vocab().constants().iter().enumerate() {
        for s in slots {
            let (l, r) = (m.constant(ci) == s.1, n.constant(ci) == s.2);
            if l != r {
                return Some(lit(Formula::eq(Term::Const(name.clone()), s.0.clone()), l));
            }
        }
    }
    for (idx, sym) in m.vocab().relations().iter().enumerate() {
        let k = sym.arity;
        if slots.is_empty() && k > 0 {
            continue;
        }
        let mut digits = vec![0usize; k];
        loop {
            let left: Vec<Elem> = digits.iter().map(|&d| slots[d].1).collect();
            let right: Vec<Elem> = digits.iter().map(|&d| slots[d].2).collect();
            let l = m.holds(idx, &left);
            if l != n.holds(idx, &right) {
                let args = digits.iter().map(|&d| slots[d].0.clone()).collect();
                return Some(lit(Formula::rel(&sym.name, args), l));
            }
            let mut i = 0;
            while i < k {
                digits[i] += 1;
                if digits[i] < slots.len() {
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
    None
}

struct Extractor<'s> {
    solver: EfcSolver<'s>,
    memo: HashMap<Vec<Slot>, Fml>,
}

impl Extractor<'_> {
    fn m(&self) -> &Structure {
        self.solver.left()
    }

    fn n(&self) -> &Structure {
        self.solver.right()
    }

    /// A formula over the slot terms, true in the left structure and false
    /// in the right one, of rank at most the Spoiler rank of the position.
    fn separate(&mut self, slots: &[Slot]) -> Result<Fml, SynthError> {
        let mut key = slots.to_vec();
        key.sort();
        if let Some(f) = self.memo.get(&key) {
            return Ok(f.clone());
        }
        let f = match mismatch(self.m(), self.n(), slots) {
            Some(lit) => lit,
            None => self.split_step(slots)?,
        };
        self.memo.insert(key, f.clone());
        Ok(f)
    }

    fn split_step(&mut self, slots: &[Slot]) -> Result<Fml, SynthError> {
        let pairs: Vec<(Elem, Elem)> = slots.iter().map(|s| (s.1, s.2)).collect();
        let p = self.solver.pairs_of(&pairs)?;
        let r = self.solver.raw_rank(&p).ok_or(SynthError::NoDistinguisher)?;
        let mv = self.solver.witness_at(&p).ok_or(SynthError::NoDistinguisher)?;
        let ch = mv.challenge;
        let k = ch.len();
        let prefix = match mv.side {
            Side::Left => "l",
            Side::Right => "r",
        };
        let vars: Vec<Var> = ch.iter().map(|e| Var::new(&format!("{prefix}{e}"))).collect();
        // one failing block per partition of the challenge
        let full = (1u64 << k) - 1;
        let mut chosen = vec![false; 1 << k];
        for part in enumerate_set_partitions(full) {
            let bad = part
                .blocks()
                .iter()
                .copied()
                .find(|&b| {
                    let elems: Vec<Elem> = mask_indices(b).into_iter().map(|i| ch[i]).collect();
                    self.solver.block_value(&p, mv.side, &elems) < r
                })
                .expect("a witness challenge leaves a failing block in every partition");
            chosen[bad as usize] = true;
        }
        let other_size = match mv.side {
            Side::Left => self.n().size(),
            Side::Right => self.m().size(),
        };
        let mut tab = vec![Formula::bot(); 1 << k];
        for (mask, _) in chosen.iter().enumerate().filter(|(_, &c)| c) {
            let idx = mask_indices(mask as u64);
            let mut conj = Vec::new();
            for image in itertools::Itertools::multi_cartesian_product(idx.iter().map(|_| 0..other_size)) {
                let mut ext = slots.to_vec();
                for (&i, &d) in idx.iter().zip(&image) {
                    let t = Term::Var(vars[i].clone());
                    ext.push(match mv.side {
                        Side::Left => (t, ch[i], d),
                        Side::Right => (t, d, ch[i]),
                    });
                }
                let psi = self.separate(&ext)?;
                let psi = match mv.side {
                    Side::Left => psi,
                    Side::Right => dualize(&psi),
                };
                if !conj.contains(&psi) {
                    conj.push(psi);
                }
            }
            tab[mask] = Formula::and(conj);
        }
        let chi = Formula::split_exists(vars, tab)?;
        Ok(match mv.side {
            Side::Left => chi,
            Side::Right => dualize(&chi),
        })
    }
}

/// A sentence true in `m` and false in `n` whose quantifier rank is the
/// Spoiler rank of the split EF game with challenges of size at most
/// `theta`, and whose split widths are at most `theta`.
pub fn distinguishing_sentence(m: &Structure, n: &Structure, theta: usize) -> Result<Fml, SynthError> {
    let solver = EfcSolver::new(m, n, theta)?;
    let slots: Vec<Slot> = m
        .vocab()
        .constants()
        .iter()
        .enumerate()
        .map(|(i, c)| (Term::Const(c.clone()), m.constant(i), n.constant(i)))
        .collect();
    if let Some(lit) = mismatch(m, n, &slots) {
        return Ok(lit);
    }
    if solver.rank() == crate::ordinal::ClockOrdinal::Infinity {
        return Err(SynthError::NoDistinguisher);
    }
    let mut ex = Extractor { solver, memo: HashMap::new() };
    ex.separate(&slots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{holds, SemanticsMode};
    use crate::games::{spoiler_rank, GameKind};
    use crate::logic::quantifier_rank;
    use crate::structure::Vocabulary;
    use std::sync::Arc;

    const AD: SemanticsMode = SemanticsMode::Adapted;

    fn unary(size: usize, p: &[Elem]) -> Structure {
        let tuples: Vec<&[Elem]> = p.iter().map(std::slice::from_ref).collect();
        Structure::from_relations(Arc::new(Vocabulary::relational(&[("P", 1)])), size, &[("P", &tuples)]).unwrap()
    }

    fn graph(size: usize, edges: &[(Elem, Elem)]) -> Structure {
        let both: Vec<[Elem; 2]> = edges.iter().flat_map(|&(a, b)| [[a, b], [b, a]]).collect();
        let tuples: Vec<&[Elem]> = both.iter().map(|t| t.as_slice()).collect();
        Structure::from_relations(Arc::new(Vocabulary::relational(&[("R", 2)])), size, &[("R", &tuples)]).unwrap()
    }

    fn order(size: usize) -> Structure {
        let pairs: Vec<[Elem; 2]> = (0..size).flat_map(|a| (a + 1..size).map(move |b| [a, b])).collect();
        let tuples: Vec<&[Elem]> = pairs.iter().map(|t| t.as_slice()).collect();
        Structure::from_relations(Arc::new(Vocabulary::relational(&[("Lt", 2)])), size, &[("Lt", &tuples)]).unwrap()
    }

    #[test]
    fn card_lt_two() {
        let phi = build_example(ExampleKind::CardLt, 2, &ExampleParams::relation("P")).unwrap();
        let got: Vec<bool> = (0..4).map(|k| holds(&unary(3, &(0..k).collect::<Vec<_>>()), &phi, AD).unwrap()).collect();
        assert_eq!(got, vec![true, true, false, false]);
    }

    #[test]
    fn no_clique_three() {
        let phi = build_example(ExampleKind::NoClique, 3, &ExampleParams::relation("R")).unwrap();
        assert!(!holds(&graph(3, &[(0, 1), (1, 2), (0, 2)]), &phi, AD).unwrap());
        assert!(holds(&graph(3, &[(0, 1), (1, 2)]), &phi, AD).unwrap());
    }

    #[test]
    fn chains_and_branches() {
        let desc = build_example(ExampleKind::NoDescChain, 3, &ExampleParams::relation("Lt")).unwrap();
        let branch = build_example(ExampleKind::NoBranch, 3, &ExampleParams::relation("Lt")).unwrap();
        assert!(holds(&order(2), &desc, AD).unwrap());
        assert!(!holds(&order(3), &desc, AD).unwrap());
        assert!(!holds(&order(3), &branch, AD).unwrap());
        let aron = build_example(ExampleKind::Aronszajn, 3, &ExampleParams::relation("Lt")).unwrap();
        assert_eq!(aron, desc);
    }

    #[test]
    fn encode_exists_matches_exists() {
        let x0 = Var::new("x0");
        let psi = Formula::rel_vars("P", &[&x0]);
        let enc = build_example(ExampleKind::EncodeExists, 2, &ExampleParams::encode(psi.clone(), 0)).unwrap();
        let all = build_example(ExampleKind::EncodeForall, 2, &ExampleParams::encode(psi.clone(), 0)).unwrap();
        for size in 1..=3 {
            for mask in 0..1u32 << size {
                let p: Vec<Elem> = (0..size).filter(|i| mask & (1 << i) != 0).collect();
                let m = unary(size, &p);
                assert_eq!(holds(&m, &enc, AD).unwrap(), !p.is_empty());
                assert_eq!(holds(&m, &all, AD).unwrap(), p.len() == size);
            }
        }
        assert!(matches!(
            build_example(ExampleKind::EncodeExists, 2, &ExampleParams::relation("P")),
            Err(SynthError::Params(_))
        ));
    }

    #[test]
    fn theta_mu_rank_and_width() {
        let t = build_theta_mu(2, "R").unwrap();
        assert_eq!(quantifier_rank(&t), 2);
        assert_eq!(t.max_width(), 3);
        assert!(matches!(build_theta_mu(THETA_MAX, "R"), Err(SynthError::Logic(LogicError::WidthExceeded { .. }))));
    }

    #[test]
    fn width_limit() {
        assert!(matches!(
            build_example(ExampleKind::CardLt, THETA_MAX + 1, &ExampleParams::relation("P")),
            Err(SynthError::Logic(LogicError::WidthExceeded { .. }))
        ));
    }

    fn check_separates(m: &Structure, n: &Structure, theta: usize) {
        let r = spoiler_rank(GameKind::Efc, m, n, theta).unwrap().as_finite().unwrap();
        let phi = distinguishing_sentence(m, n, theta).unwrap();
        assert!(u64::from(quantifier_rank(&phi)) <= r);
        assert!(phi.max_width() <= theta);
        assert!(holds(m, &phi, AD).unwrap());
        assert!(!holds(n, &phi, AD).unwrap());
    }

    #[test]
    fn p_pair_distinguisher() {
        check_separates(&unary(2, &[0]), &unary(2, &[]), 1);
        check_separates(&unary(2, &[]), &unary(2, &[0]), 1);
    }

    #[test]
    fn orders_distinguisher() {
        check_separates(&order(2), &order(3), 1);
        check_separates(&order(3), &order(2), 1);
        check_separates(&order(3), &order(4), 2);
    }

    #[test]
    fn isomorphic_has_none() {
        let m = order(3);
        assert!(matches!(distinguishing_sentence(&m, &m.permuted(&[2, 1, 0]), 2), Err(SynthError::NoDistinguisher)));
    }
}
