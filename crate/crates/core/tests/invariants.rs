//! Property tests for the structural invariants of the library.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splitgame::eval::{evaluate, holds, skolem_closure, SemanticsMode};
use splitgame::games::{winner, GameKind, Player};
use splitgame::lab::corpus::random_structure;
use splitgame::lab::FormulaGen;
use splitgame::logic::{dualize, nnf, quantifier_rank, subformula_closure};
use splitgame::ordinal::ClockOrdinal;
use splitgame::structure::{canonical_key, is_partial_isomorphism, PartialMap, Structure, Vocabulary};
use splitgame::textio::{parse_formula_str, render};

fn vocab() -> Arc<Vocabulary> {
    Arc::new(Vocabulary::new([("P".to_string(), 1), ("R".to_string(), 2)], ["c".to_string()]).unwrap())
}

fn relational() -> Arc<Vocabulary> {
    Arc::new(Vocabulary::relational(&[("P", 1), ("R", 2)]))
}

fn structure(seed: u64, vocab: &Arc<Vocabulary>, n_max: usize) -> Structure {
    random_structure(&mut ChaCha8Rng::seed_from_u64(seed), vocab, 1, n_max)
}

fn sentence(seed: u64, vocab: &Arc<Vocabulary>, rank: u32, width: usize) -> splitgame::logic::Fml {
    FormulaGen::new(vocab.clone(), rank, width).sentence(&mut ChaCha8Rng::seed_from_u64(seed))
}

const MODES: [SemanticsMode; 2] = [SemanticsMode::Adapted, SemanticsMode::Strict];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn canonical_key_ignores_relabelling(seed: u64, shuffle: u64) {
        let m = structure(seed, &vocab(), 5);
        let mut perm: Vec<usize> = m.universe().collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
        prop_assert_eq!(canonical_key(&m).unwrap(), canonical_key(&m.permuted(&perm)).unwrap());
    }

    #[test]
    fn partial_iso_is_symmetric_under_inverse(a: u64, b: u64, pick: u64) {
        let v = vocab();
        let (m, n) = (structure(a, &v, 4), structure(b, &v, 4));
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let mut dom: Vec<usize> = m.universe().collect();
        let mut img: Vec<usize> = n.universe().collect();
        dom.shuffle(&mut rng);
        img.shuffle(&mut rng);
        let k = rng.gen_range(0..=dom.len().min(img.len()));
        let p = PartialMap::from_pairs(dom.into_iter().zip(img).take(k)).unwrap();
        prop_assert_eq!(is_partial_isomorphism(&m, &n, &p).unwrap(), is_partial_isomorphism(&n, &m, &p.inverse()).unwrap());
    }

    #[test]
    fn render_then_parse_is_identity(seed: u64) {
        let v = vocab();
        let phi = sentence(seed, &v, 3, 3);
        let back = parse_formula_str(&render(&phi), &v).unwrap();
        prop_assert_eq!(render(&back), render(&phi));
        prop_assert_eq!(back, phi);
    }

    #[test]
    fn dualize_is_negation(fseed: u64, sseed: u64) {
        let v = vocab();
        let phi = sentence(fseed, &v, 3, 3);
        let m = structure(sseed, &v, 4);
        for mode in MODES {
            prop_assert_eq!(holds(&m, &dualize(&phi), mode).unwrap(), !holds(&m, &phi, mode).unwrap());
        }
    }

    #[test]
    fn dualize_keeps_rank_and_width(seed: u64) {
        let phi = sentence(seed, &vocab(), 4, 3);
        let dual = dualize(&phi);
        prop_assert_eq!(quantifier_rank(&dual), quantifier_rank(&phi));
        prop_assert_eq!(dual.max_width(), phi.max_width());
        prop_assert_eq!(dualize(&dual), nnf(&phi));
    }

    #[test]
    fn skolem_closure_is_idempotent(mseed: u64, fseed: u64, pick: u64) {
        let v = vocab();
        let m = structure(mseed, &v, 5);
        let t = subformula_closure(&sentence(fseed, &v, 2, 2));
        let seed: BTreeSet<usize> = [ChaCha8Rng::seed_from_u64(pick).gen_range(0..m.size())].into();
        for mode in MODES {
            let once = skolem_closure(&m, &t, &seed, mode).unwrap().universe_in_ambient();
            let twice = skolem_closure(&m, &t, &once, mode).unwrap().universe_in_ambient();
            prop_assert!(once.is_superset(&seed));
            prop_assert_eq!(once, twice);
        }
    }

    #[test]
    fn closure_agrees_with_ambient_on_fragment(mseed: u64, fseed: u64) {
        let v = vocab();
        let m = structure(mseed, &v, 4);
        let phi = sentence(fseed, &v, 2, 2);
        let sub = skolem_closure(&m, &subformula_closure(&phi), &[0].into(), SemanticsMode::Adapted).unwrap();
        let empty = Default::default();
        prop_assert_eq!(
            evaluate(&sub.structure, &phi, &empty, SemanticsMode::Adapted).unwrap(),
            evaluate(&m, &phi, &empty, SemanticsMode::Adapted).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn winner_is_symmetric(a: u64, b: u64, theta in 1usize..=2, clock in 0u64..=3) {
        let v = relational();
        let (m, n) = (structure(a, &v, 3), structure(b, &v, 3));
        for kind in [GameKind::Efc, GameKind::Dg] {
            let c = ClockOrdinal::finite(clock);
            prop_assert_eq!(winner(kind, &m, &n, theta, c).unwrap(), winner(kind, &n, &m, theta, c).unwrap());
        }
    }

    #[test]
    fn duplicator_wins_are_downward_closed_in_the_clock(a: u64, b: u64, theta in 1usize..=2) {
        let v = relational();
        let (m, n) = (structure(a, &v, 3), structure(b, &v, 3));
        for kind in [GameKind::Efc, GameKind::Dg] {
            let clocks = [0, 1, 2, 3].map(ClockOrdinal::finite).into_iter()
                .chain([ClockOrdinal::OMEGA, ClockOrdinal::new(1, 1), ClockOrdinal::new(2, 0), ClockOrdinal::Infinity]);
            let wins: Vec<bool> = clocks.map(|c| winner(kind, &m, &n, theta, c).unwrap() == Player::Duplicator).collect();
            for w in wins.windows(2) {
                prop_assert!(w[0] || !w[1], "{:?}: Duplicator wins at a larger clock but not a smaller one", kind);
            }
        }
    }

    #[test]
    fn structures_are_equivalent_to_their_copies(seed: u64, shuffle: u64, theta in 1usize..=2) {
        let m = structure(seed, &relational(), 3);
        let mut perm: Vec<usize> = m.universe().collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
        prop_assert_eq!(winner(GameKind::Efc, &m, &m.permuted(&perm), theta, ClockOrdinal::Infinity).unwrap(), Player::Duplicator);
    }
}
