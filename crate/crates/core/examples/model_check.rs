//! Parse a structure and a split sentence, then evaluate it under both
//! semantics.

use splitgame::eval::{holds, SemanticsMode};
use splitgame::logic::{dualize, quantifier_rank};
use splitgame::textio::{parse_formula_str, parse_structure_str, render};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = parse_structure_str("structure m { universe 3; rel R/2 { (0,1) (0,2) (1,0) } }")?;
    // every pair splits into blocks that are either single elements with an
    // R-predecessor or a pair of distinct elements; the empty entry is bot,
    // which only the strict reading consults
    let phi = parse_formula_str(
        "splitall (x0 x1) { {0} -> exists y. R(y, x0); {1} -> exists y. R(y, x1); {0 1} -> not x0 = x1; else -> bot; }",
        m.vocab(),
    )?;
    println!("sentence: {}", render(&phi));
    println!("rank {}, width {}", quantifier_rank(&phi), phi.max_width());
    for mode in [SemanticsMode::Adapted, SemanticsMode::Strict] {
        println!("{mode}: {}, dual: {}", holds(&m, &phi, mode)?, holds(&m, &dualize(&phi), mode)?);
    }
    Ok(())
}
