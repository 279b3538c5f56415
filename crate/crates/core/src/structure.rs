//! Finite relational structures, partial maps between them, and
//! isomorphism-invariant keys.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

/// Element ids are dense: a structure of size `n` has universe `0..n`.
pub type Elem = usize;

/// Largest universe `canonical_key` accepts by default.
pub const CANONICAL_BOUND: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("duplicate symbol `{0}` in vocabulary")]
    DuplicateSymbol(String),
    #[error("relation `{0}` must have positive arity")]
    ZeroArity(String),
    #[error("universe must be nonempty")]
    EmptyUniverse,
    #[error("element {elem} outside universe of size {size}")]
    OutOfUniverse { elem: Elem, size: usize },
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("relation `{name}` has arity {expected}, got a tuple of length {got}")]
    ArityMismatch { name: String, expected: usize, got: usize },
    #[error("constant `{0}` has no interpretation")]
    UninterpretedConstant(String),
    #[error("structures have different vocabularies")]
    VocabularyMismatch,
    #[error("partial map is not injective")]
    NotInjective,
    #[error("universe of size {size} exceeds the bound {bound}")]
    TooLarge { size: usize, bound: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

/// Relation symbols with arities plus constant symbols. No function symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    relations: Vec<RelationSymbol>,
    constants: Vec<String>,
}

impl Vocabulary {
    pub fn new<R, C>(relations: R, constants: C) -> Result<Self, StructureError>
    where
        R: IntoIterator<Item = (String, usize)>,
        C: IntoIterator<Item = String>,
    {
        let mut seen = BTreeSet::new();
        let mut vocab = Vocabulary::default();
        for (name, arity) in relations {
            if arity == 0 {
                return Err(StructureError::ZeroArity(name));
            }
            if !seen.insert(name.clone()) {
                return Err(StructureError::DuplicateSymbol(name));
            }
            vocab.relations.push(RelationSymbol { name, arity });
        }
        for name in constants {
            if !seen.insert(name.clone()) {
                return Err(StructureError::DuplicateSymbol(name));
            }
            vocab.constants.push(name);
        }
        Ok(vocab)
    }

    /// Convenience constructor for relation-only vocabularies.
    pub fn relational(rels: &[(&str, usize)]) -> Self {
        Self::new(rels.iter().map(|(n, a)| (n.to_string(), *a)), std::iter::empty())
            .expect("valid relational vocabulary")
    }

    pub fn relations(&self) -> &[RelationSymbol] {
        &self.relations
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == name)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relation_index(name).map(|i| self.relations[i].arity)
    }
}

/// One relation interpretation: the tuple set plus a dense membership table
/// indexed by `Σ e_i · n^i`.
#[derive(Clone, Debug)]
struct Interpretation {
    tuples: BTreeSet<Vec<Elem>>,
    dense: Vec<bool>,
}

/// A finite structure with universe `0..size`.
#[derive(Clone, Debug)]
pub struct Structure {
    vocab: Arc<Vocabulary>,
    size: usize,
    relations: Vec<Interpretation>,
    constants: Vec<Elem>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.vocab == other.vocab
            && self.constants == other.constants
            && self.relations.iter().zip(&other.relations).all(|(a, b)| a.tuples == b.tuples)
    }
}

impl Eq for Structure {}

fn dense_index(tuple: &[Elem], size: usize) -> usize {
    tuple.iter().rev().fold(0, |acc, &e| acc * size + e)
}

impl Structure {
    /// Builds a structure, checking every tuple and constant against the
    /// universe and the vocabulary.
    pub fn new(
        vocab: Arc<Vocabulary>,
        size: usize,
        relations: BTreeMap<String, BTreeSet<Vec<Elem>>>,
        constants: BTreeMap<String, Elem>,
    ) -> Result<Self, StructureError> {
        if size == 0 {
            return Err(StructureError::EmptyUniverse);
        }
        for name in relations.keys() {
            if vocab.relation_index(name).is_none() {
                return Err(StructureError::UnknownRelation(name.clone()));
            }
        }
        for name in constants.keys() {
            if vocab.constant_index(name).is_none() {
                return Err(StructureError::UnknownConstant(name.clone()));
            }
        }
        let mut interps = Vec::with_capacity(vocab.relations.len());
        for sym in &vocab.relations {
            let tuples = relations.get(&sym.name).cloned().unwrap_or_default();
            let mut dense = vec![false; size.pow(sym.arity as u32)];
            for t in &tuples {
                if t.len() != sym.arity {
                    return Err(StructureError::ArityMismatch {
                        name: sym.name.clone(),
                        expected: sym.arity,
                        got: t.len(),
                    });
                }
                if let Some(&elem) = t.iter().find(|&&e| e >= size) {
                    return Err(StructureError::OutOfUniverse { elem, size });
                }
                dense[dense_index(t, size)] = true;
            }
            interps.push(Interpretation { tuples, dense });
        }
        let mut consts = Vec::with_capacity(vocab.constants.len());
        for name in &vocab.constants {
            let &elem = constants
                .get(name)
                .ok_or_else(|| StructureError::UninterpretedConstant(name.clone()))?;
            if elem >= size {
                return Err(StructureError::OutOfUniverse { elem, size });
            }
            consts.push(elem);
        }
        Ok(Structure { vocab, size, relations: interps, constants: consts })
    }

    /// Builds a relation-only structure from `(name, tuples)` pairs.
    pub fn from_relations(
        vocab: Arc<Vocabulary>,
        size: usize,
        rels: &[(&str, &[&[Elem]])],
    ) -> Result<Self, StructureError> {
        let relations = rels
            .iter()
            .map(|(n, ts)| (n.to_string(), ts.iter().map(|t| t.to_vec()).collect()))
            .collect();
        Self::new(vocab, size, relations, BTreeMap::new())
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn universe(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    /// Tuples of the `idx`-th relation of the vocabulary.
    pub fn tuples(&self, idx: usize) -> &BTreeSet<Vec<Elem>> {
        &self.relations[idx].tuples
    }

    pub fn tuples_named(&self, name: &str) -> Option<&BTreeSet<Vec<Elem>>> {
        self.vocab.relation_index(name).map(|i| self.tuples(i))
    }

    /// Membership test for the `idx`-th relation; `tuple` must have the right
    /// arity and lie in the universe.
    #[inline]
    pub fn holds(&self, idx: usize, tuple: &[Elem]) -> bool {
        self.relations[idx].dense[dense_index(tuple, self.size)]
    }

    pub fn holds_named(&self, name: &str, tuple: &[Elem]) -> Option<bool> {
        self.vocab.relation_index(name).map(|i| self.holds(i, tuple))
    }

    pub fn constant(&self, idx: usize) -> Elem {
        self.constants[idx]
    }

    pub fn constants(&self) -> &[Elem] {
        &self.constants
    }

    /// The substructure induced on `elems` (sorted, deduplicated, relabeled
    /// densely in increasing order). Returns the structure and the embedding
    /// `new id -> old id`.
    pub fn induced(&self, elems: &BTreeSet<Elem>) -> Result<(Structure, Vec<Elem>), StructureError> {
        if let Some(&elem) = elems.iter().find(|&&e| e >= self.size) {
            return Err(StructureError::OutOfUniverse { elem, size: self.size });
        }
        let embedding: Vec<Elem> = elems.iter().copied().collect();
        let back: BTreeMap<Elem, Elem> = embedding.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let relations = self
            .vocab
            .relations
            .iter()
            .zip(&self.relations)
            .map(|(sym, interp)| {
                let ts = interp
                    .tuples
                    .iter()
                    .filter(|t| t.iter().all(|e| back.contains_key(e)))
                    .map(|t| t.iter().map(|e| back[e]).collect())
                    .collect();
                (sym.name.clone(), ts)
            })
            .collect();
        let mut constants = BTreeMap::new();
        for (name, &c) in self.vocab.constants.iter().zip(&self.constants) {
            match back.get(&c) {
                Some(&i) => {
                    constants.insert(name.clone(), i);
                }
                None => return Err(StructureError::OutOfUniverse { elem: c, size: embedding.len() }),
            }
        }
        let s = Structure::new(self.vocab.clone(), embedding.len(), relations, constants)?;
        Ok((s, embedding))
    }

    /// Relabels the universe: element `e` becomes `perm[e]`.
    pub fn permuted(&self, perm: &[Elem]) -> Structure {
        assert_eq!(perm.len(), self.size, "permutation length must equal universe size");
        let relations = self
            .vocab
            .relations
            .iter()
            .zip(&self.relations)
            .map(|(sym, interp)| {
                let ts = interp.tuples.iter().map(|t| t.iter().map(|&e| perm[e]).collect()).collect();
                (sym.name.clone(), ts)
            })
            .collect();
        let constants = self
            .vocab
            .constants
            .iter()
            .zip(&self.constants)
            .map(|(n, &c)| (n.clone(), perm[c]))
            .collect();
        Structure::new(self.vocab.clone(), self.size, relations, constants)
            .expect("permutation preserves validity")
    }
}

/// A finite partial injection between two universes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialMap {
    forward: BTreeMap<Elem, Elem>,
}

impl PartialMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Elem, Elem)>>(pairs: I) -> Result<Self, StructureError> {
        let mut forward = BTreeMap::new();
        let mut targets = BTreeSet::new();
        for (a, b) in pairs {
            match forward.insert(a, b) {
                Some(old) if old != b => return Err(StructureError::NotInjective),
                Some(_) => continue,
                None => {}
            }
            if !targets.insert(b) {
                return Err(StructureError::NotInjective);
            }
        }
        Ok(PartialMap { forward })
    }

    pub fn identity<I: IntoIterator<Item = Elem>>(elems: I) -> Self {
        PartialMap { forward: elems.into_iter().map(|e| (e, e)).collect() }
    }

    pub fn get(&self, a: Elem) -> Option<Elem> {
        self.forward.get(&a).copied()
    }

    pub fn preimage(&self, b: Elem) -> Option<Elem> {
        self.forward.iter().find(|(_, &v)| v == b).map(|(&k, _)| k)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        self.forward.iter().map(|(&a, &b)| (a, b))
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<Elem> {
        self.forward.keys().copied().collect()
    }

    pub fn range(&self) -> BTreeSet<Elem> {
        self.forward.values().copied().collect()
    }

    pub fn inverse(&self) -> PartialMap {
        PartialMap { forward: self.forward.iter().map(|(&a, &b)| (b, a)).collect() }
    }

    /// Adds a pair; fails if it breaks functionality or injectivity.
    pub fn extended(&self, a: Elem, b: Elem) -> Result<PartialMap, StructureError> {
        PartialMap::from_pairs(self.pairs().chain(std::iter::once((a, b))))
    }

    pub fn is_subset_of(&self, other: &PartialMap) -> bool {
        self.pairs().all(|(a, b)| other.get(a) == Some(b))
    }
}

/// True iff `p` is a partial isomorphism from `m` to `n`: injective,
/// consistent on constants in its domain or range, and preserving every
/// relation in both directions on tuples over its domain.
pub fn is_partial_isomorphism(m: &Structure, n: &Structure, p: &PartialMap) -> Result<bool, StructureError> {
    if m.vocab() != n.vocab() {
        return Err(StructureError::VocabularyMismatch);
    }
    for (a, b) in p.pairs() {
        if a >= m.size() {
            return Err(StructureError::OutOfUniverse { elem: a, size: m.size() });
        }
        if b >= n.size() {
            return Err(StructureError::OutOfUniverse { elem: b, size: n.size() });
        }
    }
    // from_pairs already guarantees injectivity
    for (&cm, &cn) in m.constants().iter().zip(n.constants()) {
        if let Some(img) = p.get(cm) {
            if img != cn {
                return Ok(false);
            }
        }
        if let Some(pre) = p.preimage(cn) {
            if pre != cm {
                return Ok(false);
            }
        }
    }
    let pairs: Vec<(Elem, Elem)> = p.pairs().collect();
    for (idx, sym) in m.vocab().relations().iter().enumerate() {
        for combo in std::iter::repeat_n(pairs.iter(), sym.arity).multi_cartesian_product() {
            let src: Vec<Elem> = combo.iter().map(|(a, _)| *a).collect();
            let dst: Vec<Elem> = combo.iter().map(|(_, b)| *b).collect();
            if m.holds(idx, &src) != n.holds(idx, &dst) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Isomorphism-invariant key: the lexicographically least serialization of
/// the structure over all relabelings of its universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    size: usize,
    constants: Vec<Elem>,
    relations: Vec<Vec<Vec<Elem>>>,
}

pub fn canonical_key(m: &Structure) -> Result<CanonicalKey, StructureError> {
    canonical_key_bounded(m, CANONICAL_BOUND)
}

pub fn canonical_key_bounded(m: &Structure, bound: usize) -> Result<CanonicalKey, StructureError> {
    if m.size() > bound {
        return Err(StructureError::TooLarge { size: m.size(), bound });
    }
    let n = m.size();
    let serialize = |perm: &[Elem]| CanonicalKey {
        size: n,
        constants: m.constants().iter().map(|&c| perm[c]).collect(),
        relations: (0..m.vocab().relations().len())
            .map(|i| {
                let mut ts: Vec<Vec<Elem>> =
                    m.tuples(i).iter().map(|t| t.iter().map(|&e| perm[e]).collect()).collect();
                ts.sort();
                ts
            })
            .collect(),
    };
    let best = (0..n)
        .permutations(n)
        .map(|perm| serialize(&perm))
        .min()
        .expect("at least one permutation");
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unary(size: usize, p: &[Elem]) -> Structure {
        let v = Arc::new(Vocabulary::relational(&[("P", 1)]));
        let tuples: Vec<Vec<Elem>> = p.iter().map(|&e| vec![e]).collect();
        let refs: Vec<&[Elem]> = tuples.iter().map(|t| t.as_slice()).collect();
        Structure::from_relations(v, size, &[("P", &refs)]).unwrap()
    }

    fn chain(size: usize) -> Structure {
        let v = Arc::new(Vocabulary::relational(&[("Lt", 2)]));
        let ts: Vec<Vec<Elem>> =
            (0..size).flat_map(|i| (i + 1..size).map(move |j| vec![i, j])).collect();
        let refs: Vec<&[Elem]> = ts.iter().map(|t| t.as_slice()).collect();
        Structure::from_relations(v, size, &[("Lt", &refs)]).unwrap()
    }

    #[test]
    fn identity_is_partial_isomorphism() {
        let m = chain(4);
        for mask in 0u32..16 {
            let p = PartialMap::identity((0..4).filter(|i| mask & (1 << i) != 0));
            assert!(is_partial_isomorphism(&m, &m, &p).unwrap());
        }
    }

    #[test]
    fn atom_disagreement() {
        let m = unary(2, &[0]);
        let n = unary(2, &[]);
        let p = PartialMap::from_pairs([(0, 0)]).unwrap();
        assert!(!is_partial_isomorphism(&m, &n, &p).unwrap());
    }

    #[test]
    fn order_reversal_rejected() {
        let p = PartialMap::from_pairs([(0, 1), (2, 0)]).unwrap();
        assert!(!is_partial_isomorphism(&chain(3), &chain(2), &p).unwrap());
        let q = PartialMap::from_pairs([(0, 0), (2, 1)]).unwrap();
        assert!(is_partial_isomorphism(&chain(3), &chain(2), &q).unwrap());
    }

    #[test]
    fn errors() {
        let p = PartialMap::from_pairs([(5, 0)]).unwrap();
        assert!(matches!(
            is_partial_isomorphism(&unary(2, &[]), &unary(2, &[]), &p),
            Err(StructureError::OutOfUniverse { .. })
        ));
        assert!(matches!(
            is_partial_isomorphism(&unary(2, &[]), &chain(2), &PartialMap::new()),
            Err(StructureError::VocabularyMismatch)
        ));
        assert_eq!(PartialMap::from_pairs([(0, 1), (1, 1)]), Err(StructureError::NotInjective));
        assert_eq!(PartialMap::from_pairs([(0, 1), (0, 2)]), Err(StructureError::NotInjective));
        let v = Arc::new(Vocabulary::relational(&[("P", 1)]));
        assert!(matches!(
            Structure::from_relations(v.clone(), 2, &[("P", &[&[5]])]),
            Err(StructureError::OutOfUniverse { elem: 5, .. })
        ));
        assert!(matches!(Structure::from_relations(v, 0, &[]), Err(StructureError::EmptyUniverse)));
    }

    #[test]
    fn constants_must_agree() {
        let v = Arc::new(
            Vocabulary::new([("P".to_string(), 1)], ["c".to_string()]).unwrap(),
        );
        let mk = |c: Elem| {
            Structure::new(v.clone(), 2, BTreeMap::new(), [("c".to_string(), c)].into()).unwrap()
        };
        let (m, n) = (mk(0), mk(1));
        assert!(!is_partial_isomorphism(&m, &n, &PartialMap::from_pairs([(0, 0)]).unwrap()).unwrap());
        assert!(is_partial_isomorphism(&m, &n, &PartialMap::from_pairs([(0, 1)]).unwrap()).unwrap());
        assert!(!is_partial_isomorphism(&m, &n, &PartialMap::from_pairs([(1, 1)]).unwrap()).unwrap());
    }

    #[test]
    fn canonical_keys() {
        let m = chain(4);
        let perm = [2, 0, 3, 1];
        assert_eq!(canonical_key(&m).unwrap(), canonical_key(&m.permuted(&perm)).unwrap());
        assert_ne!(canonical_key(&unary(2, &[0])).unwrap(), canonical_key(&unary(2, &[0, 1])).unwrap());
        assert!(matches!(
            canonical_key_bounded(&chain(4), 3),
            Err(StructureError::TooLarge { size: 4, bound: 3 })
        ));
    }

    #[test]
    fn induced_substructure() {
        let m = chain(4);
        let (sub, emb) = m.induced(&[1, 3].into()).unwrap();
        assert_eq!(emb, vec![1, 3]);
        assert_eq!(sub.size(), 2);
        assert!(sub.holds(0, &[0, 1]));
        assert!(!sub.holds(0, &[1, 0]));
    }
}
