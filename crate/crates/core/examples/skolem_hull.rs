//! Close a seed under the Skolem functions of a fragment and check that the
//! result is an elementary substructure for it.

use splitgame::eval::{is_elementary_substructure, skolem_closure, SemanticsMode};
use splitgame::logic::subformula_closure;
use splitgame::textio::{parse_formula_str, parse_structure_str, render_structure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = parse_structure_str("structure m { universe 6; rel P/1 { (1) (3) (5) } }")?;
    let phi = parse_formula_str("and { exists x. P(x); exists x. not P(x) }", m.vocab())?;
    let t = subformula_closure(&phi);
    for seed in [[4].into(), [2, 4].into()] {
        let sub = skolem_closure(&m, &t, &seed, SemanticsMode::Adapted)?;
        let ok = is_elementary_substructure(&sub, &m, &t, SemanticsMode::Adapted)?;
        println!("seed {seed:?} -> elements {:?}, elementary: {ok}", sub.embedding);
        print!("{}", render_structure(&sub.structure));
    }
    Ok(())
}
