//! Random formulas over a vocabulary, with bounded quantifier rank and
//! split width.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::logic::{Fml, Formula, Term, Var};
use crate::structure::Vocabulary;

#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub vocab: Arc<Vocabulary>,
    pub max_rank: u32,
    pub max_width: usize,
    /// Upper bound on the number of generated nodes.
    pub max_nodes: usize,
    /// Probability of stopping at a literal when a connective is possible.
    pub leaf_prob: f64,
}

impl FormulaGen {
    pub fn new(vocab: Arc<Vocabulary>, max_rank: u32, max_width: usize) -> Self {
        FormulaGen { vocab, max_rank, max_width: max_width.max(1), max_nodes: 60, leaf_prob: 0.3 }
    }

    /// A random sentence.
    pub fn sentence<R: Rng>(&self, rng: &mut R) -> Fml {
        self.formula(rng, &[])
    }

    /// A random formula whose free variables lie in `scope`.
    pub fn formula<R: Rng>(&self, rng: &mut R, scope: &[Var]) -> Fml {
        let mut st = State { budget: self.max_nodes, fresh: 0 };
        self.gen(rng, scope, self.max_rank, &mut st)
    }

    fn gen<R: Rng>(&self, rng: &mut R, scope: &[Var], rank: u32, st: &mut State) -> Fml {
        st.budget = st.budget.saturating_sub(1);
        if st.budget == 0 || rng.gen_bool(self.leaf_prob) {
            return self.literal(rng, scope);
        }
        let choice = if rank == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..7) };
        match choice {
            0 => Formula::not(self.gen(rng, scope, rank, st)),
            1 | 2 => {
                let k = rng.gen_range(2..=3);
                let subs = (0..k).map(|_| self.gen(rng, scope, rank, st)).collect();
                if choice == 1 {
                    Formula::and(subs)
                } else {
                    Formula::or(subs)
                }
            }
            3 | 4 => {
                let v = st.fresh_var();
                let mut inner = scope.to_vec();
                inner.push(v.clone());
                let body = self.gen(rng, &inner, rank - 1, st);
                if choice == 3 {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                }
            }
            _ => {
                let w = rng.gen_range(1..=self.max_width);
                let bound: Vec<Var> = (0..w).map(|_| st.fresh_var()).collect();
                let table = (0..1u64 << w)
                    .map(|mask| {
                        let mut inner = scope.to_vec();
                        inner.extend(bound.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, v)| v.clone()));
                        self.gen(rng, &inner, rank - 1, st)
                    })
                    .collect();
                let f = if choice == 5 { Formula::split_forall(bound, table) } else { Formula::split_exists(bound, table) };
                f.expect("generated tables are total and respect the variable convention")
            }
        }
    }

    fn literal<R: Rng>(&self, rng: &mut R, scope: &[Var]) -> Fml {
        let mut terms: Vec<Term> = scope.iter().cloned().map(Term::Var).collect();
        terms.extend(self.vocab.constants().iter().map(|c| Term::Const(c.clone())));
        let atom = if terms.is_empty() {
            if rng.gen_bool(0.5) {
                Formula::top()
            } else {
                Formula::bot()
            }
        } else {
            let rels = self.vocab.relations();
            if rels.is_empty() || rng.gen_bool(0.2) {
                let a = terms.choose(rng).expect("nonempty").clone();
                let b = terms.choose(rng).expect("nonempty").clone();
                Formula::eq(a, b)
            } else {
                let sym = rels.choose(rng).expect("nonempty");
                let args = (0..sym.arity).map(|_| terms.choose(rng).expect("nonempty").clone()).collect();
                Formula::rel(&sym.name, args)
            }
        };
        if rng.gen_bool(0.5) {
            Formula::not(atom)
        } else {
            atom
        }
    }
}

struct State {
    budget: usize,
    fresh: usize,
}

impl State {
    fn fresh_var(&mut self) -> Var {
        self.fresh += 1;
        Var::new(&format!("v{}", self.fresh))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{free_variables, quantifier_rank};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bounds_hold() {
        let vocab = Arc::new(Vocabulary::new([("R".to_string(), 2), ("P".to_string(), 1)], ["c".to_string()]).unwrap());
        let g = FormulaGen::new(vocab, 2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            let f = g.sentence(&mut rng);
            assert!(quantifier_rank(&f) <= 2);
            assert!(f.max_width() <= 2);
            assert!(free_variables(&f).is_empty());
        }
    }
}
