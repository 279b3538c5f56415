//! Compare the fixpoint solvers with bounded direct search on every pair of
//! 2-element unary structures.

use splitgame::games::{cross_check_bounded, winner, GameKind};
use splitgame::lab::{generate_corpus, CorpusSpec, Family};
use splitgame::ordinal::ClockOrdinal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = generate_corpus(&CorpusSpec::new(Family::Unary { p_count: 1, n_max: 2 }))?;
    let clocks = [ClockOrdinal::finite(1), ClockOrdinal::finite(2), ClockOrdinal::OMEGA, ClockOrdinal::new(1, 1)];
    let (mut checked, mut disagreements) = (0, 0);
    for m in &corpus {
        for n in &corpus {
            for kind in [GameKind::Efc, GameKind::Dg] {
                for clock in clocks {
                    checked += 1;
                    if winner(kind, m, n, 1, clock)? != cross_check_bounded(kind, m, n, 1, clock)? {
                        disagreements += 1;
                    }
                }
            }
        }
    }
    println!("{checked} positions checked, {disagreements} disagreements");
    Ok(())
}
