//! Formulas of the finitary split-quantifier fragment: AST, validation,
//! quantifier rank, negation normal form and fragments.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Widest split accepted by the constructors.
pub const THETA_MAX: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("split width {width} exceeds the maximum {max}")]
    WidthExceeded { width: usize, max: usize },
    #[error("split table has {got} entries, expected {expected}")]
    TableNotTotal { expected: usize, got: usize },
    #[error("entry for subset {subset:?} mentions bound variable `{var}` outside the subset")]
    ConventionViolated { var: String, subset: Vec<usize> },
    #[error("bound variable `{0}` is repeated")]
    DuplicateBound(String),
}

/// An interned variable name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Const(String),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Var::new(name))
    }
}

impl From<Var> for Term {
    fn from(v: Var) -> Self {
        Term::Var(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Eq(Term, Term),
    Rel { name: String, args: Vec<Term> },
}

/// Bound tuple plus a total table indexed by subset bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    bound: Vec<Var>,
    table: Vec<Arc<Formula>>,
}

impl Split {
    pub fn new(bound: Vec<Var>, table: Vec<Arc<Formula>>) -> Result<Self, LogicError> {
        let m = bound.len();
        if m > THETA_MAX {
            return Err(LogicError::WidthExceeded { width: m, max: THETA_MAX });
        }
        let expected = 1usize << m;
        if table.len() != expected {
            return Err(LogicError::TableNotTotal { expected, got: table.len() });
        }
        let mut seen = BTreeSet::new();
        for v in &bound {
            if !seen.insert(v) {
                return Err(LogicError::DuplicateBound(v.to_string()));
            }
        }
        for (mask, entry) in table.iter().enumerate() {
            let fv = free_variables(entry);
            for (i, v) in bound.iter().enumerate() {
                if mask & (1 << i) == 0 && fv.contains(v) {
                    let subset = (0..m).filter(|j| mask & (1 << j) != 0).collect();
                    return Err(LogicError::ConventionViolated { var: v.to_string(), subset });
                }
            }
        }
        Ok(Split { bound, table })
    }

    /// Builds the table by calling `entry` on every subset mask.
    pub fn from_fn<F>(bound: Vec<Var>, mut entry: F) -> Result<Self, LogicError>
    where
        F: FnMut(u64) -> Arc<Formula>,
    {
        if bound.len() > THETA_MAX {
            return Err(LogicError::WidthExceeded { width: bound.len(), max: THETA_MAX });
        }
        let table = (0..1u64 << bound.len()).map(&mut entry).collect();
        Split::new(bound, table)
    }

    pub fn bound(&self) -> &[Var] {
        &self.bound
    }

    pub fn width(&self) -> usize {
        self.bound.len()
    }

    pub fn table(&self) -> &[Arc<Formula>] {
        &self.table
    }

    pub fn entry(&self, mask: u64) -> &Arc<Formula> {
        &self.table[mask as usize]
    }

    fn map_entries(&self, f: impl FnMut(&Arc<Formula>) -> Arc<Formula>) -> Split {
        Split { bound: self.bound.clone(), table: self.table.iter().map(f).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Not(Arc<Formula>),
    And(Vec<Arc<Formula>>),
    Or(Vec<Arc<Formula>>),
    Exists(Var, Arc<Formula>),
    Forall(Var, Arc<Formula>),
    SplitForall(Split),
    SplitExists(Split),
}

pub type Fml = Arc<Formula>;

impl Formula {
    pub fn top() -> Fml {
        Arc::new(Formula::And(Vec::new()))
    }

    pub fn bot() -> Fml {
        Arc::new(Formula::Or(Vec::new()))
    }

    pub fn rel(name: &str, args: Vec<Term>) -> Fml {
        Arc::new(Formula::Atom(Atom::Rel { name: name.to_string(), args }))
    }

    /// Relation atom over variables named by `vars`.
    pub fn rel_vars(name: &str, vars: &[&Var]) -> Fml {
        Formula::rel(name, vars.iter().map(|v| Term::Var((*v).clone())).collect())
    }

    pub fn eq(a: Term, b: Term) -> Fml {
        Arc::new(Formula::Atom(Atom::Eq(a, b)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Fml) -> Fml {
        Arc::new(Formula::Not(f))
    }

    pub fn and(fs: Vec<Fml>) -> Fml {
        Arc::new(Formula::And(fs))
    }

    pub fn or(fs: Vec<Fml>) -> Fml {
        Arc::new(Formula::Or(fs))
    }

    pub fn implies(a: Fml, b: Fml) -> Fml {
        Formula::or(vec![Formula::not(a), b])
    }

    pub fn exists(v: Var, f: Fml) -> Fml {
        Arc::new(Formula::Exists(v, f))
    }

    pub fn forall(v: Var, f: Fml) -> Fml {
        Arc::new(Formula::Forall(v, f))
    }

    pub fn split_forall(bound: Vec<Var>, table: Vec<Fml>) -> Result<Fml, LogicError> {
        Ok(Arc::new(Formula::SplitForall(Split::new(bound, table)?)))
    }

    pub fn split_exists(bound: Vec<Var>, table: Vec<Fml>) -> Result<Fml, LogicError> {
        Ok(Arc::new(Formula::SplitExists(Split::new(bound, table)?)))
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::And(v) if v.is_empty())
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Formula::Or(v) if v.is_empty())
    }

    /// Immediate subformulas; for splits, the table entries.
    pub fn children(&self) -> Vec<&Fml> {
        match self {
            Formula::Atom(_) => Vec::new(),
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => vec![f],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            Formula::SplitForall(s) | Formula::SplitExists(s) => s.table.iter().collect(),
        }
    }

    /// Variables bound at this node.
    pub fn binds(&self) -> Vec<&Var> {
        match self {
            Formula::Exists(v, _) | Formula::Forall(v, _) => vec![v],
            Formula::SplitForall(s) | Formula::SplitExists(s) => s.bound.iter().collect(),
            _ => Vec::new(),
        }
    }

    /// Largest split width occurring in the formula.
    pub fn max_width(self: &Fml) -> usize {
        let mut memo = HashMap::new();
        max_width_memo(self, &mut memo)
    }
}

fn max_width_memo(f: &Fml, memo: &mut HashMap<*const Formula, usize>) -> usize {
    if let Some(&w) = memo.get(&Arc::as_ptr(f)) {
        return w;
    }
    let own = match &**f {
        Formula::SplitForall(s) | Formula::SplitExists(s) => s.width(),
        _ => 0,
    };
    let w = f.children().into_iter().map(|c| max_width_memo(c, memo)).fold(own, usize::max);
    memo.insert(Arc::as_ptr(f), w);
    w
}

fn term_vars(t: &Term, out: &mut BTreeSet<Var>) {
    if let Term::Var(v) = t {
        out.insert(v.clone());
    }
}

/// Free variables; quantifiers and splits bind exactly their bound lists.
pub fn free_variables(phi: &Fml) -> BTreeSet<Var> {
    let mut memo = HashMap::new();
    free_variables_memo(phi, &mut memo).as_ref().clone()
}

pub(crate) fn free_variables_memo(
    phi: &Fml,
    memo: &mut HashMap<*const Formula, Arc<BTreeSet<Var>>>,
) -> Arc<BTreeSet<Var>> {
    if let Some(fv) = memo.get(&Arc::as_ptr(phi)) {
        return fv.clone();
    }
    let mut out = BTreeSet::new();
    match &**phi {
        Formula::Atom(Atom::Eq(a, b)) => {
            term_vars(a, &mut out);
            term_vars(b, &mut out);
        }
        Formula::Atom(Atom::Rel { args, .. }) => args.iter().for_each(|t| term_vars(t, &mut out)),
        other => {
            for c in other.children() {
                out.extend(free_variables_memo(c, memo).iter().cloned());
            }
            for v in other.binds() {
                out.remove(v);
            }
        }
    }
    let out = Arc::new(out);
    memo.insert(Arc::as_ptr(phi), out.clone());
    out
}

/// Atoms and connectives have rank of their deepest child, single
/// quantifiers and splits add one.
pub fn quantifier_rank(phi: &Fml) -> u32 {
    let mut memo = HashMap::new();
    rank_memo(phi, &mut memo)
}

fn rank_memo(phi: &Fml, memo: &mut HashMap<*const Formula, u32>) -> u32 {
    if let Some(&r) = memo.get(&Arc::as_ptr(phi)) {
        return r;
    }
    let inner = phi.children().into_iter().map(|c| rank_memo(c, memo)).max().unwrap_or(0);
    let r = match &**phi {
        Formula::Atom(_) => 0,
        Formula::Not(_) | Formula::And(_) | Formula::Or(_) => inner,
        _ => inner + 1,
    };
    memo.insert(Arc::as_ptr(phi), r);
    r
}

struct Normalizer {
    neg: HashMap<*const Formula, Fml>,
    pos: HashMap<*const Formula, Fml>,
}

impl Normalizer {
    fn negate(&mut self, phi: &Fml) -> Fml {
        if let Some(f) = self.neg.get(&Arc::as_ptr(phi)) {
            return f.clone();
        }
        let out = match &**phi {
            Formula::Atom(_) => Formula::not(phi.clone()),
            Formula::Not(f) => self.positive(f),
            Formula::And(fs) => Formula::or(fs.iter().map(|f| self.negate(f)).collect()),
            Formula::Or(fs) => Formula::and(fs.iter().map(|f| self.negate(f)).collect()),
            Formula::Exists(v, f) => Formula::forall(v.clone(), self.negate(f)),
            Formula::Forall(v, f) => Formula::exists(v.clone(), self.negate(f)),
            Formula::SplitForall(s) => Arc::new(Formula::SplitExists(s.map_entries(|e| self.negate(e)))),
            Formula::SplitExists(s) => Arc::new(Formula::SplitForall(s.map_entries(|e| self.negate(e)))),
        };
        self.neg.insert(Arc::as_ptr(phi), out.clone());
        out
    }

    fn positive(&mut self, phi: &Fml) -> Fml {
        if let Some(f) = self.pos.get(&Arc::as_ptr(phi)) {
            return f.clone();
        }
        let out = match &**phi {
            Formula::Atom(_) => phi.clone(),
            Formula::Not(f) => self.negate(f),
            Formula::And(fs) => Formula::and(fs.iter().map(|f| self.positive(f)).collect()),
            Formula::Or(fs) => Formula::or(fs.iter().map(|f| self.positive(f)).collect()),
            Formula::Exists(v, f) => Formula::exists(v.clone(), self.positive(f)),
            Formula::Forall(v, f) => Formula::forall(v.clone(), self.positive(f)),
            Formula::SplitForall(s) => Arc::new(Formula::SplitForall(s.map_entries(|e| self.positive(e)))),
            Formula::SplitExists(s) => Arc::new(Formula::SplitExists(s.map_entries(|e| self.positive(e)))),
        };
        self.pos.insert(Arc::as_ptr(phi), out.clone());
        out
    }
}

/// Negation normal form of `¬phi`. Splits swap kind and every table entry is
/// dualized; negation ends up on atoms only.
pub fn dualize(phi: &Fml) -> Fml {
    Normalizer { neg: HashMap::new(), pos: HashMap::new() }.negate(phi)
}

/// Negation normal form of `phi`.
pub fn nnf(phi: &Fml) -> Fml {
    Normalizer { neg: HashMap::new(), pos: HashMap::new() }.positive(phi)
}

/// A subformula-closed set of formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fragment {
    formulas: BTreeSet<Fml>,
}

impl Fragment {
    pub fn iter(&self) -> impl Iterator<Item = &Fml> {
        self.formulas.iter()
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn contains(&self, phi: &Formula) -> bool {
        self.formulas.contains(phi)
    }

    /// Least fragment containing every formula of `self` and `other`.
    pub fn union(&self, other: &Fragment) -> Fragment {
        Fragment { formulas: self.formulas.union(&other.formulas).cloned().collect() }
    }

    /// Closure of a set of formulas.
    pub fn generated_by<'a, I: IntoIterator<Item = &'a Fml>>(phis: I) -> Fragment {
        let mut frag = Fragment::default();
        let mut visited = std::collections::HashSet::new();
        let mut stack: Vec<Fml> = phis.into_iter().cloned().collect();
        while let Some(f) = stack.pop() {
            if !visited.insert(Arc::as_ptr(&f)) {
                continue;
            }
            stack.extend(f.children().into_iter().cloned());
            frag.formulas.insert(f);
        }
        frag
    }

    pub fn is_closed(&self) -> bool {
        self.formulas.iter().all(|f| f.children().iter().all(|c| self.formulas.contains(*c)))
    }

    /// Formulas with at least one bound variable at the root.
    pub fn quantified(&self) -> impl Iterator<Item = &Fml> {
        self.formulas.iter().filter(|f| !f.binds().is_empty())
    }
}

pub fn subformula_closure(phi: &Fml) -> Fragment {
    Fragment::generated_by(std::iter::once(phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Var {
        Var::new(n)
    }

    fn p(x: &str) -> Fml {
        Formula::rel("P", vec![Term::var(x)])
    }

    #[test]
    fn ranks() {
        assert_eq!(quantifier_rank(&p("x")), 0);
        assert_eq!(quantifier_rank(&Formula::exists(v("x"), p("x"))), 1);
        assert_eq!(quantifier_rank(&Formula::top()), 0);
        let s = Formula::split_forall(vec![v("x")], vec![Formula::top(), Formula::exists(v("y"), p("x"))]).unwrap();
        assert_eq!(quantifier_rank(&s), 2);
    }

    #[test]
    fn free_vars() {
        assert_eq!(free_variables(&p("x")), [v("x")].into());
        assert!(free_variables(&Formula::exists(v("x"), p("x"))).is_empty());
        let r = Formula::rel("R", vec![Term::var("x0"), Term::var("y")]);
        let s = Formula::split_forall(
            vec![v("x0"), v("x1")],
            vec![Formula::top(), r, Formula::top(), Formula::top()],
        )
        .unwrap();
        assert_eq!(free_variables(&s), [v("y")].into());
    }

    #[test]
    fn split_validation() {
        let bad = Formula::split_forall(vec![v("x0"), v("x1")], vec![Formula::top(), p("x0"), p("x0"), p("x0")]);
        assert_eq!(bad, Err(LogicError::ConventionViolated { var: "x0".into(), subset: vec![1] }));
        assert!(matches!(
            Formula::split_forall(vec![v("x")], vec![Formula::top()]),
            Err(LogicError::TableNotTotal { expected: 2, got: 1 })
        ));
        assert!(matches!(
            Formula::split_forall(vec![v("x"), v("x")], vec![Formula::top(); 4]),
            Err(LogicError::DuplicateBound(_))
        ));
        let wide: Vec<Var> = (0..=THETA_MAX).map(|i| v(&format!("x{i}"))).collect();
        assert!(matches!(Split::from_fn(wide, |_| Formula::top()), Err(LogicError::WidthExceeded { .. })));
    }

    #[test]
    fn dualize_rules() {
        assert_eq!(*dualize(&p("x")), Formula::Not(p("x")));
        let all_top = Formula::split_forall(vec![v("a"), v("b")], vec![Formula::top(); 4]).unwrap();
        let all_bot = Formula::split_exists(vec![v("a"), v("b")], vec![Formula::bot(); 4]).unwrap();
        assert_eq!(dualize(&all_top), all_bot);
        assert_eq!(dualize(&dualize(&all_top)), all_top);
        assert_eq!(dualize(&Formula::not(p("x"))), p("x"));
    }

    #[test]
    fn closures() {
        assert_eq!(subformula_closure(&p("x")).len(), 1);
        assert_eq!(subformula_closure(&Formula::exists(v("x"), p("x"))).len(), 2);
        let atoms = vec![
            Formula::eq(Term::var("y"), Term::var("y")),
            p("x0"),
            p("x1"),
            Formula::eq(Term::var("x0"), Term::var("x1")),
        ];
        let s = Formula::split_forall(vec![v("x0"), v("x1")], atoms).unwrap();
        let c = subformula_closure(&s);
        assert_eq!(c.len(), 5);
        assert!(c.is_closed());
        let again = Fragment::generated_by(c.iter());
        assert_eq!(again, c);
    }
}
