//! Model checking for the split fragment, Skolem closure and elementary
//! substructures relative to a fragment.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

use crate::logic::{free_variables_memo, Atom, Fml, Formula, Fragment, Split, Term, Var, THETA_MAX};
use crate::structure::{Elem, Structure, StructureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` is not assigned")]
    UnboundVariable(String),
    #[error("split width {width} exceeds the maximum {max}")]
    WidthExceeded { width: usize, max: usize },
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("relation `{name}` has arity {expected}, used with {got} arguments")]
    ArityMismatch { name: String, expected: usize, got: usize },
    #[error("element {elem} outside universe of size {size}")]
    OutOfUniverse { elem: Elem, size: usize },
    #[error("relation `{0}` is not binary")]
    NotBinary(String),
    #[error("seed set is empty")]
    EmptySeed,
    #[error("not an induced substructure: {0}")]
    NotSubstructure(String),
    #[error("chain link {0} is not an induced substructure of its successor")]
    NotChain(usize),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// How a split treats the piece indexed by the empty set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemanticsMode {
    /// The empty-set entry gates the split (conjunct for the universal form,
    /// disjunct for the existential form).
    Strict,
    /// Only partitions into nonempty blocks count.
    #[default]
    Adapted,
}

impl std::str::FromStr for SemanticsMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(SemanticsMode::Strict),
            "adapted" => Ok(SemanticsMode::Adapted),
            other => Err(format!("unknown semantics mode `{other}` (expected strict or adapted)")),
        }
    }
}

impl std::fmt::Display for SemanticsMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SemanticsMode::Strict => "strict",
            SemanticsMode::Adapted => "adapted",
        })
    }
}

pub type Assignment = BTreeMap<Var, Elem>;

type NodeKey = (*const Formula, Vec<Elem>);

/// Memoizing evaluator bound to one structure. Formulas passed to it are
/// kept alive for the evaluator's lifetime so node addresses stay unique.
pub struct Evaluator<'m> {
    m: &'m Structure,
    mode: SemanticsMode,
    keep: Vec<Fml>,
    kept: HashSet<*const Formula>,
    validated: HashSet<*const Formula>,
    free: HashMap<*const Formula, Arc<BTreeSet<Var>>>,
    memo: HashMap<NodeKey, bool>,
    env: Vec<(Var, Elem)>,
}

impl<'m> Evaluator<'m> {
    pub fn new(m: &'m Structure, mode: SemanticsMode) -> Self {
        Evaluator {
            m,
            mode,
            keep: Vec::new(),
            kept: HashSet::new(),
            validated: HashSet::new(),
            free: HashMap::new(),
            memo: HashMap::new(),
            env: Vec::new(),
        }
    }

    pub fn structure(&self) -> &'m Structure {
        self.m
    }

    fn retain(&mut self, phi: &Fml) {
        if self.kept.insert(Arc::as_ptr(phi)) {
            self.keep.push(phi.clone());
        }
    }

    fn validate(&mut self, phi: &Fml) -> Result<(), EvalError> {
        let mut stack = vec![phi.clone()];
        while let Some(f) = stack.pop() {
            if !self.validated.insert(Arc::as_ptr(&f)) {
                continue;
            }
            let check_term = |t: &Term| match t {
                Term::Const(c) if self.m.vocab().constant_index(c).is_none() => {
                    Err(EvalError::UnknownConstant(c.clone()))
                }
                _ => Ok(()),
            };
            match &*f {
                Formula::Atom(Atom::Eq(a, b)) => {
                    check_term(a)?;
                    check_term(b)?;
                }
                Formula::Atom(Atom::Rel { name, args }) => {
                    let arity = self.m.vocab().arity(name).ok_or_else(|| EvalError::UnknownRelation(name.clone()))?;
                    if arity != args.len() {
                        return Err(EvalError::ArityMismatch { name: name.clone(), expected: arity, got: args.len() });
                    }
                    args.iter().try_for_each(check_term)?;
                }
                Formula::SplitForall(s) | Formula::SplitExists(s) if s.width() > THETA_MAX => {
                    return Err(EvalError::WidthExceeded { width: s.width(), max: THETA_MAX });
                }
                _ => {}
            }
            stack.extend(f.children().into_iter().cloned());
        }
        Ok(())
    }

    pub fn free_vars(&mut self, phi: &Fml) -> Arc<BTreeSet<Var>> {
        free_variables_memo(phi, &mut self.free)
    }

    /// Checks `phi` under `a`; `a` must cover the free variables of `phi`.
    pub fn eval(&mut self, phi: &Fml, a: &Assignment) -> Result<bool, EvalError> {
        self.retain(phi);
        self.validate(phi)?;
        for v in self.free_vars(phi).iter() {
            match a.get(v) {
                None => return Err(EvalError::UnboundVariable(v.to_string())),
                Some(&e) if e >= self.m.size() => return Err(EvalError::OutOfUniverse { elem: e, size: self.m.size() }),
                Some(_) => {}
            }
        }
        self.env.clear();
        self.env.extend(a.iter().map(|(v, &e)| (v.clone(), e)));
        Ok(self.go(phi))
    }

    fn lookup(&self, v: &Var) -> Elem {
        self.env.iter().rev().find(|(w, _)| w == v).map(|&(_, e)| e).expect("validated assignment")
    }

    fn term(&self, t: &Term) -> Elem {
        match t {
            Term::Var(v) => self.lookup(v),
            Term::Const(c) => self.m.constant(self.m.vocab().constant_index(c).expect("validated constant")),
        }
    }

    fn go(&mut self, phi: &Fml) -> bool {
        match &**phi {
            Formula::Atom(Atom::Eq(a, b)) => self.term(a) == self.term(b),
            Formula::Atom(Atom::Rel { name, args }) => {
                let idx = self.m.vocab().relation_index(name).expect("validated relation");
                let tuple: Vec<Elem> = args.iter().map(|t| self.term(t)).collect();
                self.m.holds(idx, &tuple)
            }
            Formula::Not(f) => !self.go(f),
            Formula::And(fs) => fs.iter().all(|f| self.go(f)),
            Formula::Or(fs) => fs.iter().any(|f| self.go(f)),
            _ => {
                let fv = free_variables_memo(phi, &mut self.free);
                let key_vals: Vec<Elem> = fv.iter().map(|v| self.lookup(v)).collect();
                let key = (Arc::as_ptr(phi), key_vals);
                if let Some(&b) = self.memo.get(&key) {
                    return b;
                }
                let b = self.quantified(phi);
                self.memo.insert(key, b);
                b
            }
        }
    }

    fn quantified(&mut self, phi: &Fml) -> bool {
        match &**phi {
            Formula::Exists(v, f) => (0..self.m.size()).any(|e| self.with(&[(v, e)], |s| s.go(f))),
            Formula::Forall(v, f) => (0..self.m.size()).all(|e| self.with(&[(v, e)], |s| s.go(f))),
            Formula::SplitForall(s) => {
                let gate = self.mode == SemanticsMode::Adapted || self.go(s.entry(0));
                gate && self.tuples(s.width()).all(|c| self.partitionable(s, &c, true))
            }
            Formula::SplitExists(s) => {
                let gate = self.mode == SemanticsMode::Strict && self.go(s.entry(0));
                gate || self.tuples(s.width()).any(|c| !self.partitionable(s, &c, false))
            }
            _ => unreachable!("connectives are evaluated directly"),
        }
    }

    fn tuples(&self, m: usize) -> impl Iterator<Item = Vec<Elem>> {
        std::iter::repeat_n(0..self.m.size(), m).multi_cartesian_product().chain(
            // multi_cartesian_product of zero factors yields nothing
            (m == 0).then(Vec::new),
        )
    }

    fn with<T>(&mut self, binds: &[(&Var, Elem)], f: impl FnOnce(&mut Self) -> T) -> T {
        let depth = self.env.len();
        self.env.extend(binds.iter().map(|(v, e)| ((*v).clone(), *e)));
        let out = f(self);
        self.env.truncate(depth);
        out
    }

    /// Truth of `table[B]` at `c̄↾B`.
    fn block_truth(&mut self, s: &Split, c: &[Elem], block: u64) -> bool {
        let binds: Vec<(&Var, Elem)> =
            (0..s.width()).filter(|i| block & (1 << i) != 0).map(|i| (&s.bound()[i], c[i])).collect();
        self.with(&binds, |ev| ev.go(s.entry(block)))
    }

    /// Whether the index set of `c` splits into nonempty blocks whose
    /// entries all evaluate to `want`.
    fn partitionable(&mut self, s: &Split, c: &[Elem], want: bool) -> bool {
        let m = s.width();
        let full = (1u64 << m) - 1;
        let mut truth: Vec<Option<bool>> = vec![None; 1 << m];
        let mut ok = vec![false; 1 << m];
        ok[0] = true;
        for set in 1..=full {
            let low = set & set.wrapping_neg();
            let rest = set ^ low;
            // blocks containing the lowest index of `set`
            let mut sub = rest;
            loop {
                let block = sub | low;
                if ok[(set ^ block) as usize] {
                    let t = match truth[block as usize] {
                        Some(t) => t,
                        None => {
                            let t = self.block_truth(s, c, block);
                            truth[block as usize] = Some(t);
                            t
                        }
                    };
                    if t == want {
                        ok[set as usize] = true;
                        break;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        ok[full as usize]
    }

    /// Lexicographically least tuple making the body of the quantified node
    /// `phi` behave as its witness kind demands: a satisfying tuple for
    /// existential nodes, a refuting tuple for universal ones. The outer
    /// assignment is `a`.
    fn least_witness(&mut self, phi: &Fml, a: &Assignment) -> Option<Vec<Elem>> {
        self.env.clear();
        self.env.extend(a.iter().map(|(v, &e)| (v.clone(), e)));
        match &**phi {
            Formula::Exists(v, f) => (0..self.m.size()).find(|&e| self.with(&[(v, e)], |s| s.go(f))).map(|e| vec![e]),
            Formula::Forall(v, f) => (0..self.m.size()).find(|&e| !self.with(&[(v, e)], |s| s.go(f))).map(|e| vec![e]),
            Formula::SplitExists(s) => {
                let s = s.clone();
                self.tuples(s.width()).find(|c| !self.partitionable(&s, c, false))
            }
            Formula::SplitForall(s) => {
                let s = s.clone();
                self.tuples(s.width()).find(|c| !self.partitionable(&s, c, true))
            }
            _ => None,
        }
    }
}

pub fn evaluate(m: &Structure, phi: &Fml, a: &Assignment, mode: SemanticsMode) -> Result<bool, EvalError> {
    Evaluator::new(m, mode).eval(phi, a)
}

/// Truth of a sentence.
pub fn holds(m: &Structure, phi: &Fml, mode: SemanticsMode) -> Result<bool, EvalError> {
    evaluate(m, phi, &Assignment::new(), mode)
}

/// Every fiber `R(a, ·)` has at most `mu` elements and, for `mu ≥ 1`, every
/// element lies in some fiber.
pub fn covering_class_oracle(m: &Structure, rel: &str, mu: usize) -> Result<bool, EvalError> {
    let idx = m.vocab().relation_index(rel).ok_or_else(|| EvalError::UnknownRelation(rel.to_string()))?;
    if m.vocab().relations()[idx].arity != 2 {
        return Err(EvalError::NotBinary(rel.to_string()));
    }
    let mut fiber = vec![0usize; m.size()];
    let mut covered = vec![false; m.size()];
    for t in m.tuples(idx) {
        fiber[t[0]] += 1;
        covered[t[1]] = true;
    }
    Ok(fiber.iter().all(|&f| f <= mu) && (mu == 0 || covered.iter().all(|&c| c)))
}

/// A structure together with its embedding into a larger one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substructure {
    pub structure: Structure,
    /// `embedding[i]` is the element of the ambient structure that `i` names.
    pub embedding: Vec<Elem>,
}

impl Substructure {
    pub fn induced(m: &Structure, elems: &BTreeSet<Elem>) -> Result<Self, EvalError> {
        let (structure, embedding) = m.induced(elems)?;
        Ok(Substructure { structure, embedding })
    }

    /// `m0` viewed inside `m` via the identity on `0..|m0|`.
    pub fn prefix(m0: &Structure) -> Self {
        Substructure { structure: m0.clone(), embedding: (0..m0.size()).collect() }
    }

    pub fn universe_in_ambient(&self) -> BTreeSet<Elem> {
        self.embedding.iter().copied().collect()
    }
}

/// Least superset of `seed` (plus the constants) closed under the least-witness
/// Skolem functions of every quantified node of `t`. Existential nodes
/// contribute a satisfying tuple, universal nodes a refuting one.
pub fn skolem_closure(
    m: &Structure,
    t: &Fragment,
    seed: &BTreeSet<Elem>,
    mode: SemanticsMode,
) -> Result<Substructure, EvalError> {
    if seed.is_empty() {
        return Err(EvalError::EmptySeed);
    }
    if let Some(&e) = seed.iter().find(|&&e| e >= m.size()) {
        return Err(EvalError::OutOfUniverse { elem: e, size: m.size() });
    }
    let mut ev = Evaluator::new(m, mode);
    let nodes: Vec<Fml> = t.quantified().cloned().collect();
    for n in &nodes {
        ev.retain(n);
        ev.validate(n)?;
    }
    let mut set: BTreeSet<Elem> = seed.clone();
    set.extend(m.constants().iter().copied());
    let mut tried: HashSet<(*const Formula, Vec<Elem>)> = HashSet::new();
    loop {
        let before = set.len();
        let current: Vec<Elem> = set.iter().copied().collect();
        for n in &nodes {
            let fv: Vec<Var> = ev.free_vars(n).iter().cloned().collect();
            for vals in std::iter::repeat_n(current.iter().copied(), fv.len()).multi_cartesian_product().chain((fv.is_empty()).then(Vec::new)) {
                if !tried.insert((Arc::as_ptr(n), vals.clone())) {
                    continue;
                }
                let a: Assignment = fv.iter().cloned().zip(vals).collect();
                if let Some(w) = ev.least_witness(n, &a) {
                    set.extend(w);
                }
            }
        }
        if set.len() == before {
            break;
        }
    }
    Substructure::induced(m, &set)
}

fn check_induced(sub: &Substructure, m: &Structure) -> Result<(), EvalError> {
    let s = &sub.structure;
    if s.vocab() != m.vocab() {
        return Err(EvalError::NotSubstructure("vocabularies differ".into()));
    }
    if sub.embedding.len() != s.size() {
        return Err(EvalError::NotSubstructure("embedding length differs from universe size".into()));
    }
    if sub.embedding.iter().any(|&e| e >= m.size()) || sub.embedding.iter().collect::<HashSet<_>>().len() != s.size() {
        return Err(EvalError::NotSubstructure("embedding is not an injection into the ambient universe".into()));
    }
    for (i, &c) in s.constants().iter().enumerate() {
        if sub.embedding[c] != m.constant(i) {
            return Err(EvalError::NotSubstructure("constants are not preserved".into()));
        }
    }
    for (idx, sym) in s.vocab().relations().iter().enumerate() {
        for t in std::iter::repeat_n(0..s.size(), sym.arity).multi_cartesian_product() {
            let img: Vec<Elem> = t.iter().map(|&e| sub.embedding[e]).collect();
            if s.holds(idx, &t) != m.holds(idx, &img) {
                return Err(EvalError::NotSubstructure(format!("relation `{}` is not the induced restriction", sym.name)));
            }
        }
    }
    Ok(())
}

/// `m0 ≺_T m`: every formula of `t` has the same truth value in both
/// structures under every assignment into `m0`.
pub fn is_elementary_substructure(
    m0: &Substructure,
    m: &Structure,
    t: &Fragment,
    mode: SemanticsMode,
) -> Result<bool, EvalError> {
    check_induced(m0, m)?;
    let mut small = Evaluator::new(&m0.structure, mode);
    let mut big = Evaluator::new(m, mode);
    for phi in t.iter() {
        let fv: Vec<Var> = small.free_vars(phi).iter().cloned().collect();
        let tuples = std::iter::repeat_n(0..m0.structure.size(), fv.len())
            .multi_cartesian_product()
            .chain(fv.is_empty().then(Vec::new));
        for vals in tuples {
            let a: Assignment = fv.iter().cloned().zip(vals.iter().copied()).collect();
            let b: Assignment = fv.iter().cloned().zip(vals.iter().map(|&e| m0.embedding[e])).collect();
            if small.eval(phi, &a)? != big.eval(phi, &b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    /// `chain[i] ≺_T chain[i+1]` for each adjacent pair.
    pub adjacent: Vec<bool>,
    /// `chain[0] ≺_T chain[last]`, computed when every adjacent pair holds.
    pub ends: Option<bool>,
}

impl ChainReport {
    /// False exactly when the adjacent pairs all hold but the ends do not.
    pub fn consistent(&self) -> bool {
        self.ends != Some(false)
    }
}

/// Each `chain[i]` must be the substructure of `chain[i+1]` induced on
/// `0..chain[i].size()`.
pub fn check_chain_union(chain: &[Structure], t: &Fragment, mode: SemanticsMode) -> Result<ChainReport, EvalError> {
    for (i, w) in chain.windows(2).enumerate() {
        if w[0].size() > w[1].size() || check_induced(&Substructure::prefix(&w[0]), &w[1]).is_err() {
            return Err(EvalError::NotChain(i));
        }
    }
    let adjacent = chain
        .windows(2)
        .map(|w| is_elementary_substructure(&Substructure::prefix(&w[0]), &w[1], t, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let ends = match (adjacent.iter().all(|&b| b), chain.first(), chain.last()) {
        (true, Some(first), Some(last)) => Some(is_elementary_substructure(&Substructure::prefix(first), last, t, mode)?),
        _ => None,
    };
    Ok(ChainReport { adjacent, ends })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{dualize, subformula_closure};
    use crate::structure::Vocabulary;
    use crate::textio::{parse_formula_str, parse_structure_str};

    fn order(n: usize) -> Structure {
        let v = Arc::new(Vocabulary::relational(&[("Lt", 2)]));
        let ts: Vec<Vec<Elem>> = (0..n).flat_map(|i| (i + 1..n).map(move |j| vec![i, j])).collect();
        let refs: Vec<&[Elem]> = ts.iter().map(|t| t.as_slice()).collect();
        Structure::from_relations(v, n, &[("Lt", &refs)]).unwrap()
    }

    fn unary(n: usize, p: &[Elem]) -> Structure {
        let v = Arc::new(Vocabulary::relational(&[("P", 1)]));
        let ts: Vec<Vec<Elem>> = p.iter().map(|&e| vec![e]).collect();
        let refs: Vec<&[Elem]> = ts.iter().map(|t| t.as_slice()).collect();
        Structure::from_relations(v, n, &[("P", &refs)]).unwrap()
    }

    fn card_lt_2(vocab: &Vocabulary) -> Fml {
        // φ_A = (⋀_{i∈A} P(x_i)) → ⋁_{i≠j∈A} x_i = x_j, written out for A ⊆ {0,1}
        parse_formula_str(
            "splitall (x0 x1) {
                {} -> or { not top; bot };
                {0} -> or { not and { P(x0) }; bot };
                {1} -> or { not and { P(x1) }; bot };
                {0 1} -> or { not and { P(x0); P(x1) }; or { x0 = x1 } };
            }",
            vocab,
        )
        .unwrap()
    }

    #[test]
    fn constants_top_bot() {
        let m = unary(2, &[0]);
        for mode in [SemanticsMode::Strict, SemanticsMode::Adapted] {
            assert!(holds(&m, &Formula::top(), mode).unwrap());
            assert!(!holds(&m, &Formula::bot(), mode).unwrap());
        }
    }

    #[test]
    fn card_lt_by_hand() {
        let v = Vocabulary::relational(&[("P", 1)]);
        let f = card_lt_2(&v);
        for (p, expected) in [(&[][..], true), (&[0][..], true), (&[0, 1][..], false), (&[0, 1, 2][..], false)] {
            let m = unary(3, p);
            assert_eq!(holds(&m, &f, SemanticsMode::Adapted).unwrap(), expected, "|P| = {}", p.len());
            assert!(!holds(&m, &f, SemanticsMode::Strict).unwrap());
        }
    }

    #[test]
    fn empty_splits() {
        let m = unary(1, &[]);
        let all = Formula::split_forall(vec![], vec![Formula::bot()]).unwrap();
        let ex = Formula::split_exists(vec![], vec![Formula::top()]).unwrap();
        assert!(holds(&m, &all, SemanticsMode::Adapted).unwrap());
        assert!(!holds(&m, &ex, SemanticsMode::Adapted).unwrap());
        assert!(!holds(&m, &all, SemanticsMode::Strict).unwrap());
        assert!(holds(&m, &ex, SemanticsMode::Strict).unwrap());
    }

    #[test]
    fn errors() {
        let m = unary(2, &[]);
        let v = m.vocab().clone();
        let f = parse_formula_str("P(x)", &v).unwrap();
        assert_eq!(holds(&m, &f, SemanticsMode::Adapted), Err(EvalError::UnboundVariable("x".into())));
        let a: Assignment = [(Var::new("x"), 7)].into();
        assert!(matches!(evaluate(&m, &f, &a, SemanticsMode::Adapted), Err(EvalError::OutOfUniverse { .. })));
        let q = Formula::rel("Q", vec![]);
        assert_eq!(holds(&m, &q, SemanticsMode::Adapted), Err(EvalError::UnknownRelation("Q".into())));
    }

    #[test]
    fn covering_examples() {
        let m = parse_structure_str("structure { universe 3; rel R/2 { (0,1)(0,2) } }").unwrap();
        assert!(!covering_class_oracle(&m, "R", 2).unwrap());
        let m = parse_structure_str("structure { universe 3; rel R/2 { (0,0)(1,1)(2,2) } }").unwrap();
        assert!(covering_class_oracle(&m, "R", 1).unwrap());
        let m = parse_structure_str("structure { universe 2; rel R/2 { (0,0)(0,1) } }").unwrap();
        assert!(!covering_class_oracle(&m, "R", 1).unwrap());
        let p = unary(2, &[]);
        assert_eq!(covering_class_oracle(&p, "P", 1), Err(EvalError::NotBinary("P".into())));
    }

    #[test]
    fn skolem_order_example() {
        let m = order(4);
        let f = parse_formula_str("exists x . Lt(y, x)", m.vocab()).unwrap();
        let t = subformula_closure(&f);
        let sub = skolem_closure(&m, &t, &[0].into(), SemanticsMode::Adapted).unwrap();
        assert_eq!(sub.universe_in_ambient(), (0..4).collect());
        assert!(is_elementary_substructure(&sub, &m, &t, SemanticsMode::Adapted).unwrap());
        assert_eq!(skolem_closure(&m, &t, &BTreeSet::new(), SemanticsMode::Adapted), Err(EvalError::EmptySeed));
        let full = skolem_closure(&m, &t, &(0..4).collect(), SemanticsMode::Adapted).unwrap();
        assert_eq!(full.structure, m);
    }

    #[test]
    fn skolem_unsatisfiable_node() {
        let m = order(3);
        let f = parse_formula_str("exists x . Lt(x, x)", m.vocab()).unwrap();
        let sub = skolem_closure(&m, &subformula_closure(&f), &[1].into(), SemanticsMode::Adapted).unwrap();
        assert_eq!(sub.universe_in_ambient(), [1].into());
    }

    #[test]
    fn skolem_needs_universal_witnesses() {
        let m = unary(2, &[0]);
        let f = parse_formula_str("all x . P(x)", m.vocab()).unwrap();
        let t = subformula_closure(&f);
        let sub = skolem_closure(&m, &t, &[0].into(), SemanticsMode::Adapted).unwrap();
        assert_eq!(sub.universe_in_ambient(), [0, 1].into());
        let naive = Substructure::induced(&m, &[0].into()).unwrap();
        assert!(!is_elementary_substructure(&naive, &m, &t, SemanticsMode::Adapted).unwrap());
    }

    #[test]
    fn elementary_substructure_examples() {
        let m = order(3);
        let f = parse_formula_str(
            "exists x . exists y . exists z . and { not x = y; not y = z; not x = z }",
            m.vocab(),
        )
        .unwrap();
        let t = subformula_closure(&f);
        let small = Substructure::induced(&m, &[0, 2].into()).unwrap();
        assert!(!is_elementary_substructure(&small, &m, &t, SemanticsMode::Adapted).unwrap());
        let same = Substructure::induced(&m, &(0..3).collect()).unwrap();
        assert!(is_elementary_substructure(&same, &m, &t, SemanticsMode::Adapted).unwrap());
        let qf = subformula_closure(&parse_formula_str("Lt(x, y)", m.vocab()).unwrap());
        assert!(is_elementary_substructure(&small, &m, &qf, SemanticsMode::Adapted).unwrap());
        let bogus = Substructure { structure: order(2), embedding: vec![1, 0] };
        assert!(matches!(
            is_elementary_substructure(&bogus, &m, &qf, SemanticsMode::Adapted),
            Err(EvalError::NotSubstructure(_))
        ));
    }

    #[test]
    fn chains() {
        let m = order(3);
        let f = parse_formula_str("exists x . Lt(y, x)", m.vocab()).unwrap();
        let t = subformula_closure(&f);
        let report = check_chain_union(&[m.clone(), m.clone(), m.clone()], &t, SemanticsMode::Adapted).unwrap();
        assert_eq!(report.adjacent, vec![true, true]);
        assert_eq!(report.ends, Some(true));
        let growing = check_chain_union(&[order(1), order(2), order(3)], &t, SemanticsMode::Adapted).unwrap();
        assert_eq!(growing.adjacent, vec![false, false]);
        assert!(growing.consistent());
        assert_eq!(
            check_chain_union(&[order(3), order(2)], &t, SemanticsMode::Adapted),
            Err(EvalError::NotChain(0))
        );
    }

    #[test]
    fn dual_of_card_lt_negates() {
        let v = Vocabulary::relational(&[("P", 1)]);
        let f = card_lt_2(&v);
        let g = dualize(&f);
        for p in [&[][..], &[1][..], &[0, 2][..]] {
            let m = unary(3, p);
            for mode in [SemanticsMode::Strict, SemanticsMode::Adapted] {
                assert_eq!(holds(&m, &g, mode).unwrap(), !holds(&m, &f, mode).unwrap());
            }
        }
    }
}
