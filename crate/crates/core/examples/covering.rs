//! The covering-class sentence against its direct definition on every
//! structure with at most 3 elements and one binary relation.

use splitgame::eval::{covering_class_oracle, holds, SemanticsMode};
use splitgame::lab::{generate_corpus, CorpusSpec, Family};
use splitgame::logic::quantifier_rank;
use splitgame::synth::build_theta_mu;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = generate_corpus(&CorpusSpec::new(Family::Digraphs { n_max: 3 }).with_dedup(false))?;
    for mu in [1, 2] {
        let theta_mu = build_theta_mu(mu, "R")?;
        let (mut members, mut agree) = (0, 0);
        for m in &corpus {
            let want = covering_class_oracle(m, "R", mu)?;
            members += usize::from(want);
            agree += usize::from(holds(m, &theta_mu, SemanticsMode::Adapted)? == want);
        }
        println!(
            "mu {mu}: rank {}, {members} of {} structures in the class, sentence agrees on {agree}",
            quantifier_rank(&theta_mu),
            corpus.len()
        );
    }
    Ok(())
}
