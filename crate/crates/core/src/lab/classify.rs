//! Partitioning a corpus by game equivalence at a fixed clock.

use rayon::prelude::*;

use super::LabError;
use crate::games::{spoiler_rank, winner_from_rank, GameKind, Player};
use crate::ordinal::ClockOrdinal;
use crate::structure::Structure;

/// Duplicator-win matrix of the split EF game at `clock`, computed in
/// parallel over pairs.
pub fn equivalence_matrix(corpus: &[Structure], theta: usize, clock: ClockOrdinal) -> Result<Vec<Vec<bool>>, LabError> {
    let n = corpus.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let results: Vec<bool> = pairs
        .par_iter()
        .map(|&(i, j)| Ok(winner_from_rank(spoiler_rank(GameKind::Efc, &corpus[i], &corpus[j], theta)?, clock) == Player::Duplicator))
        .collect::<Result<_, LabError>>()?;
    Ok(results.chunks(n.max(1)).map(|row| row.to_vec()).collect())
}

/// Equivalence classes (as sorted index lists, ordered by least member) of
/// Duplicator winning at `clock`. The relation is checked to be an
/// equivalence first.
pub fn classify(corpus: &[Structure], theta: usize, clock: ClockOrdinal) -> Result<Vec<Vec<usize>>, LabError> {
    if corpus.is_empty() {
        return Ok(Vec::new());
    }
    let eq = equivalence_matrix(corpus, theta, clock)?;
    let n = corpus.len();
    for i in 0..n {
        if !eq[i][i] {
            return Err(LabError::NotEquivalence(format!("structure {i} is not equivalent to itself")));
        }
        for j in 0..n {
            if eq[i][j] != eq[j][i] {
                return Err(LabError::NotEquivalence(format!("structures {i} and {j} are related in one direction only")));
            }
            if !eq[i][j] {
                continue;
            }
            if let Some(k) = (0..n).find(|&k| eq[j][k] && !eq[i][k]) {
                return Err(LabError::NotEquivalence(format!(
                    "{i} ~ {j} and {j} ~ {k} but not {i} ~ {k} (theta {theta}, clock {clock})"
                )));
            }
        }
    }
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_of[i].is_some() {
            continue;
        }
        let members: Vec<usize> = (i..n).filter(|&j| eq[i][j]).collect();
        for &j in &members {
            class_of[j] = Some(classes.len());
        }
        classes.push(members);
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::corpus::{generate_corpus, linear_order, unary, CorpusSpec, Family};

    #[test]
    fn unary_size_two_clock_one() {
        let corpus = generate_corpus(&CorpusSpec::new(Family::Unary { p_count: 1, n_max: 2 }).sizes(2)).unwrap();
        assert_eq!(classify(&corpus, 1, ClockOrdinal::finite(1)).unwrap().len(), 3);
        assert_eq!(classify(&corpus, 1, ClockOrdinal::ZERO).unwrap().len(), 1);
    }

    #[test]
    fn isomorphic_copies_form_one_class() {
        let m = linear_order(3);
        let corpus = vec![m.clone(), m.permuted(&[1, 2, 0]), m.permuted(&[2, 1, 0])];
        assert_eq!(classify(&corpus, 2, ClockOrdinal::Infinity).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn clock_grows_classes() {
        let corpus = vec![unary(3, &[]), unary(3, &[0]), unary(3, &[0, 1]), unary(3, &[0, 1, 2])];
        // one round at theta 1 only sees whether P and its complement are empty
        assert_eq!(classify(&corpus, 1, ClockOrdinal::finite(1)).unwrap(), vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(classify(&corpus, 1, ClockOrdinal::finite(2)).unwrap().len(), 4);
    }
}
