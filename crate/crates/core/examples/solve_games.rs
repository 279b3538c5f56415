//! Spoiler ranks in the three games on small linear orders and on the
//! one-predicate pair.

use splitgame::games::{spoiler_rank, winner, GameKind};
use splitgame::lab::corpus::{linear_order, unary};
use splitgame::ordinal::ClockOrdinal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kinds = [GameKind::Efc, GameKind::Dg, GameKind::Dgvv { alpha: 2 }];
    let p_pair = (unary(1, &[0]), unary(1, &[]));
    println!("P-pair:");
    for kind in kinds {
        println!("  {kind}: rank {}", spoiler_rank(kind, &p_pair.0, &p_pair.1, 1)?);
    }
    for (a, b) in [(2, 3), (3, 4)] {
        let (m, n) = (linear_order(a), linear_order(b));
        println!("orders of size {a} and {b}:");
        for theta in [1, 2] {
            for kind in kinds {
                let rank = spoiler_rank(kind, &m, &n, theta)?;
                let at_two = winner(kind, &m, &n, theta, ClockOrdinal::finite(2))?;
                println!("  theta {theta} {kind}: rank {rank}, winner at clock 2: {at_two}");
            }
        }
    }
    Ok(())
}
