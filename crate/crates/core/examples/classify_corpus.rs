//! Generate the 3-element posets and sort them into game-equivalence classes
//! at increasing clocks.

use splitgame::lab::{classify, generate_corpus, CorpusSpec, Family};
use splitgame::ordinal::ClockOrdinal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let posets = generate_corpus(&CorpusSpec::new(Family::Posets { n_max: 3 }).sizes(3))?;
    println!("{} posets on 3 elements up to isomorphism", posets.len());
    for theta in [1, 2] {
        for clock in [ClockOrdinal::finite(1), ClockOrdinal::finite(2), ClockOrdinal::Infinity] {
            let classes = classify(&posets, theta, clock)?;
            println!("theta {theta}, clock {clock}: {} classes {:?}", classes.len(), classes);
        }
    }
    Ok(())
}
