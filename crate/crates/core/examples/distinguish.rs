//! Extract a sentence separating two structures from Spoiler's winning
//! strategy and confirm it on both sides.

use splitgame::eval::{holds, SemanticsMode};
use splitgame::games::{spoiler_rank, GameKind};
use splitgame::lab::corpus::graph;
use splitgame::logic::quantifier_rank;
use splitgame::synth::distinguishing_sentence;
use splitgame::textio::render;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = graph(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]);
    let triangle = graph(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]);
    for theta in [1, 2] {
        let rank = spoiler_rank(GameKind::Efc, &triangle, &path, theta)?;
        let phi = distinguishing_sentence(&triangle, &path, theta)?;
        println!("theta {theta}: Spoiler rank {rank}, sentence rank {}", quantifier_rank(&phi));
        println!(
            "  triangle: {}, path: {}",
            holds(&triangle, &phi, SemanticsMode::Adapted)?,
            holds(&path, &phi, SemanticsMode::Adapted)?
        );
        println!("{}", render(&phi));
    }
    Ok(())
}
