//! Deterministic corpora of small structures.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::LabError;
use crate::structure::{canonical_key, Elem, Structure, Vocabulary, CANONICAL_BOUND};

/// Largest universe a corpus may contain.
pub const CORPUS_BOUND: usize = CANONICAL_BOUND;

/// Largest tree generated before sampling subtrees.
pub const TREE_BOUND: usize = 64;

#[derive(Clone, Debug)]
pub enum Family {
    /// `p_count` unary predicates `P0, P1, ..` (just `P` when there is one).
    Unary { p_count: usize, n_max: usize },
    /// Loopless undirected graphs over `R`.
    Graphs { n_max: usize },
    /// Strict partial orders over `Lt`.
    Posets { n_max: usize },
    /// Rooted subtrees (containing the root) of the complete tree with the
    /// given branching and depth, ordered by `Lt` = strict ancestor, with at
    /// most `n_max` nodes.
    Trees { branch: usize, depth: usize, n_max: usize },
    /// Every tuple of every relation present with probability 1/2.
    Random { vocab: Arc<Vocabulary>, n_max: usize, count: usize, seed: u64 },
    /// Every binary relation `R` (loops allowed).
    Digraphs { n_max: usize },
}

#[derive(Clone, Debug)]
pub struct CorpusSpec {
    pub family: Family,
    /// Smallest universe size (exhaustive families only).
    pub n_min: usize,
    pub dedup: bool,
}

impl CorpusSpec {
    pub fn new(family: Family) -> Self {
        CorpusSpec { family, n_min: 1, dedup: true }
    }

    pub fn sizes(mut self, n_min: usize) -> Self {
        self.n_min = n_min.max(1);
        self
    }

    pub fn with_dedup(mut self, dedup: bool) -> Self {
        self.dedup = dedup;
        self
    }
}

pub fn unary_vocab(p_count: usize) -> Arc<Vocabulary> {
    let names = unary_names(p_count);
    let rels: Vec<(&str, usize)> = names.iter().map(|n| (n.as_str(), 1)).collect();
    Arc::new(Vocabulary::relational(&rels))
}

fn unary_names(p_count: usize) -> Vec<String> {
    if p_count == 1 {
        vec!["P".to_string()]
    } else {
        (0..p_count).map(|i| format!("P{i}")).collect()
    }
}

pub fn binary_vocab(name: &str) -> Arc<Vocabulary> {
    Arc::new(Vocabulary::relational(&[(name, 2)]))
}

/// A structure with one relation of the given name.
pub fn single_relation(vocab: &Arc<Vocabulary>, name: &str, size: usize, tuples: impl IntoIterator<Item = Vec<Elem>>) -> Structure {
    let mut rels = BTreeMap::new();
    rels.insert(name.to_string(), tuples.into_iter().collect::<BTreeSet<_>>());
    Structure::new(vocab.clone(), size, rels, BTreeMap::new()).expect("generated tuples lie in the universe")
}

/// The unary structure on `0..size` with `P = p`.
pub fn unary(size: usize, p: &[Elem]) -> Structure {
    single_relation(&unary_vocab(1), "P", size, p.iter().map(|&e| vec![e]))
}

/// The undirected graph with the given edges, over `R`.
pub fn graph(size: usize, edges: &[(Elem, Elem)]) -> Structure {
    single_relation(&binary_vocab("R"), "R", size, edges.iter().flat_map(|&(a, b)| [vec![a, b], vec![b, a]]))
}

/// The linear order `0 < 1 < .. < size-1`, over `Lt`.
pub fn linear_order(size: usize) -> Structure {
    single_relation(&binary_vocab("Lt"), "Lt", size, (0..size).flat_map(|a| (a + 1..size).map(move |b| vec![a, b])))
}

fn check_bound(n: usize) -> Result<(), LabError> {
    if n > CORPUS_BOUND {
        return Err(LabError::TooLarge { size: n, bound: CORPUS_BOUND });
    }
    Ok(())
}

fn all_pairs(n: usize) -> Vec<(Elem, Elem)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn subsets<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (0..1u64 << items.len())
        .map(move |mask| items.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, t)| t.clone()).collect())
}

fn unary_family(p_count: usize, n_min: usize, n_max: usize) -> Vec<Structure> {
    let vocab = unary_vocab(p_count);
    let names = unary_names(p_count);
    let mut out = Vec::new();
    for n in n_min..=n_max {
        let cells = n * p_count;
        for mask in 0..1u64 << cells {
            let mut rels = BTreeMap::new();
            for (j, name) in names.iter().enumerate() {
                let set: BTreeSet<Vec<Elem>> = (0..n).filter(|e| mask & (1 << (j * n + e)) != 0).map(|e| vec![e]).collect();
                rels.insert(name.clone(), set);
            }
            out.push(Structure::new(vocab.clone(), n, rels, BTreeMap::new()).expect("valid unary structure"));
        }
    }
    out
}

fn graph_family(n_min: usize, n_max: usize) -> Vec<Structure> {
    let mut out = Vec::new();
    for n in n_min..=n_max {
        let pairs = all_pairs(n);
        out.extend(subsets(&pairs).map(|edges| graph(n, &edges)));
    }
    out
}

fn digraph_family(n_min: usize, n_max: usize) -> Vec<Structure> {
    let vocab = binary_vocab("R");
    let mut out = Vec::new();
    for n in n_min..=n_max {
        let cells: Vec<Vec<Elem>> = (0..n).flat_map(|a| (0..n).map(move |b| vec![a, b])).collect();
        out.extend(subsets(&cells).map(|ts| single_relation(&vocab, "R", n, ts)));
    }
    out
}

fn poset_family(n_min: usize, n_max: usize) -> Vec<Structure> {
    let vocab = binary_vocab("Lt");
    let mut out = Vec::new();
    for n in n_min..=n_max {
        let ordered: Vec<(Elem, Elem)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        for rel in subsets(&ordered) {
            let set: HashSet<(Elem, Elem)> = rel.iter().copied().collect();
            let antisymmetric = rel.iter().all(|&(a, b)| !set.contains(&(b, a)));
            let transitive = rel.iter().all(|&(a, b)| rel.iter().filter(|&&(c, _)| c == b).all(|&(_, d)| set.contains(&(a, d))));
            if antisymmetric && transitive {
                out.push(single_relation(&vocab, "Lt", n, rel.into_iter().map(|(a, b)| vec![a, b])));
            }
        }
    }
    out
}

fn tree_family(branch: usize, depth: usize, n_min: usize, n_max: usize) -> Result<Vec<Structure>, LabError> {
    // complete tree: node 0 is the root, parent[i] < i
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut level = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &p in &level {
            for _ in 0..branch {
                parent.push(Some(p));
                next.push(parent.len() - 1);
                if parent.len() > TREE_BOUND {
                    return Err(LabError::TooLarge { size: parent.len(), bound: TREE_BOUND });
                }
            }
        }
        level = next;
    }
    let parent = &parent;
    let children = |v: usize| (0..parent.len()).filter(move |&c| parent[c] == Some(v));
    // rooted subtrees, grown by adding children of chosen nodes in index order
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![vec![0usize]];
    let mut seen = HashSet::new();
    while let Some(nodes) = stack.pop() {
        if !seen.insert(nodes.clone()) {
            continue;
        }
        if nodes.len() >= n_min {
            found.push(nodes.clone());
        }
        if nodes.len() == n_max {
            continue;
        }
        for &v in &nodes {
            for c in children(v) {
                if !nodes.contains(&c) {
                    let mut grown = nodes.clone();
                    grown.push(c);
                    grown.sort_unstable();
                    stack.push(grown);
                }
            }
        }
    }
    found.sort();
    let vocab = binary_vocab("Lt");
    Ok(found
        .into_iter()
        .map(|nodes| {
            let pos = |v: usize| nodes.iter().position(|&x| x == v).expect("closed under parents");
            let mut tuples = Vec::new();
            for (i, &v) in nodes.iter().enumerate() {
                let mut a = parent[v];
                while let Some(p) = a {
                    tuples.push(vec![pos(p), i]);
                    a = parent[p];
                }
            }
            single_relation(&vocab, "Lt", nodes.len(), tuples)
        })
        .collect())
}

fn random_family(vocab: &Arc<Vocabulary>, n_max: usize, count: usize, seed: u64) -> Vec<Structure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_structure(&mut rng, vocab, 1, n_max)).collect()
}

/// A random structure with universe size in `n_min..=n_max`; tuples are
/// present with probability 1/2, constants uniform.
pub fn random_structure<R: Rng>(rng: &mut R, vocab: &Arc<Vocabulary>, n_min: usize, n_max: usize) -> Structure {
    let n = rng.gen_range(n_min..=n_max);
    let mut rels = BTreeMap::new();
    for sym in vocab.relations() {
        let mut set = BTreeSet::new();
        let total = n.pow(sym.arity as u32);
        for idx in 0..total {
            if rng.gen_bool(0.5) {
                let mut t = Vec::with_capacity(sym.arity);
                let mut x = idx;
                for _ in 0..sym.arity {
                    t.push(x % n);
                    x /= n;
                }
                set.insert(t);
            }
        }
        rels.insert(sym.name.clone(), set);
    }
    let consts = vocab.constants().iter().map(|c| (c.clone(), rng.gen_range(0..n))).collect();
    Structure::new(vocab.clone(), n, rels, consts).expect("random tuples lie in the universe")
}

/// Keeps the first structure of every isomorphism class.
pub fn dedup_isomorphic(corpus: Vec<Structure>) -> Vec<Structure> {
    let mut keys = HashSet::new();
    corpus
        .into_iter()
        .filter(|s| keys.insert(canonical_key(s).expect("corpus structures are within the canonical bound")))
        .collect()
}

pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<Structure>, LabError> {
    let n_min = spec.n_min.max(1);
    let corpus = match &spec.family {
        Family::Unary { p_count, n_max } => {
            check_bound(*n_max)?;
            if n_max * p_count > 20 {
                return Err(LabError::TooLarge { size: n_max * p_count, bound: 20 });
            }
            unary_family(*p_count, n_min, *n_max)
        }
        Family::Graphs { n_max } => {
            check_bound(*n_max)?;
            if *n_max > 6 {
                return Err(LabError::TooLarge { size: *n_max, bound: 6 });
            }
            graph_family(n_min, *n_max)
        }
        Family::Digraphs { n_max } => {
            if *n_max > 4 {
                return Err(LabError::TooLarge { size: *n_max, bound: 4 });
            }
            digraph_family(n_min, *n_max)
        }
        Family::Posets { n_max } => {
            if *n_max > 5 {
                return Err(LabError::TooLarge { size: *n_max, bound: 5 });
            }
            poset_family(n_min, *n_max)
        }
        Family::Trees { branch, depth, n_max } => {
            check_bound(*n_max)?;
            tree_family(*branch, *depth, n_min, *n_max)?
        }
        Family::Random { vocab, n_max, count, seed } => {
            check_bound(*n_max)?;
            random_family(vocab, *n_max, *count, *seed)
        }
    };
    Ok(if spec.dedup { dedup_isomorphic(corpus) } else { corpus })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(family: Family, n_min: usize, dedup: bool) -> usize {
        generate_corpus(&CorpusSpec::new(family).sizes(n_min).with_dedup(dedup)).unwrap().len()
    }

    #[test]
    fn unary_size_two() {
        assert_eq!(count(Family::Unary { p_count: 1, n_max: 2 }, 2, true), 3);
        assert_eq!(count(Family::Unary { p_count: 1, n_max: 2 }, 2, false), 4);
    }

    #[test]
    fn graph_counts() {
        // unlabeled graphs on 1..=4 vertices: 1, 2, 4, 11
        assert_eq!(count(Family::Graphs { n_max: 4 }, 1, true), 18);
        assert_eq!(count(Family::Graphs { n_max: 4 }, 1, false), 1 + 2 + 8 + 64);
    }

    #[test]
    fn poset_counts() {
        assert_eq!(count(Family::Posets { n_max: 3 }, 3, true), 5);
        // labeled posets on 3 points: 19; unlabeled on 4 points: 16
        assert_eq!(count(Family::Posets { n_max: 3 }, 3, false), 19);
        assert_eq!(count(Family::Posets { n_max: 4 }, 4, true), 16);
    }

    #[test]
    fn digraph_counts() {
        // unlabeled binary relations with loops on 1, 2 points: 2, 10
        assert_eq!(count(Family::Digraphs { n_max: 2 }, 1, true), 12);
    }

    #[test]
    fn trees_are_rooted_subtrees() {
        // binary tree of depth 2 has 7 nodes; rooted subtrees up to iso with
        // at most 3 nodes: root, root-child, root-child-child, cherry
        let trees = generate_corpus(&CorpusSpec::new(Family::Trees { branch: 2, depth: 2, n_max: 3 })).unwrap();
        assert_eq!(trees.len(), 4);
        assert!(matches!(
            generate_corpus(&CorpusSpec::new(Family::Trees { branch: 4, depth: 3, n_max: 3 })),
            Err(LabError::TooLarge { .. })
        ));
    }

    #[test]
    fn random_is_deterministic() {
        let vocab = Arc::new(Vocabulary::new([("R".to_string(), 2), ("P".to_string(), 1)], ["c".to_string()]).unwrap());
        let spec = CorpusSpec::new(Family::Random { vocab, n_max: 5, count: 20, seed: 7 }).with_dedup(false);
        assert_eq!(generate_corpus(&spec).unwrap(), generate_corpus(&spec).unwrap());
        assert!(matches!(
            generate_corpus(&CorpusSpec::new(Family::Graphs { n_max: 9 })),
            Err(LabError::TooLarge { .. })
        ));
    }
}
