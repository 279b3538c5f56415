//! The stock split sentences checked against direct counting.

use splitgame::eval::{holds, SemanticsMode};
use splitgame::lab::corpus::{graph, unary};
use splitgame::logic::quantifier_rank;
use splitgame::synth::{build_example, ExampleKind, ExampleParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for theta in [2, 3] {
        let card = build_example(ExampleKind::CardLt, theta, &ExampleParams::relation("P"))?;
        println!("|P| < {theta} (rank {}):", quantifier_rank(&card));
        for k in 0..=4 {
            let p: Vec<usize> = (0..k).collect();
            println!("  |P| = {k}: {}", holds(&unary(4, &p), &card, SemanticsMode::Adapted)?);
        }
    }
    let no_triangle = build_example(ExampleKind::NoClique, 3, &ExampleParams::relation("R"))?;
    let sym = |edges: &[(usize, usize)]| edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect::<Vec<_>>();
    let square = graph(4, &sym(&[(0, 1), (1, 2), (2, 3), (3, 0)]));
    let k4 = graph(4, &sym(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]));
    println!("no 3-clique: square {}, K4 {}", holds(&square, &no_triangle, SemanticsMode::Adapted)?, holds(&k4, &no_triangle, SemanticsMode::Adapted)?);
    Ok(())
}
