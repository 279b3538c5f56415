//! Run the cheaper verification suites at reduced size and print their
//! reports.

use splitgame::lab::{run_suite, SuiteConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = SuiteConfig { nmax: 3, grid_nmax: 2, formulas_per_pair: 50, ..SuiteConfig::default() };
    for name in ["duality", "examples", "distinguisher-complete", "union-chain", "skolem-lst"] {
        let report = run_suite(name, &config)?;
        print!("{report}");
    }
    Ok(())
}
