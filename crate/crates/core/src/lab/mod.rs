//! Corpora, classification and the verification suites.

pub mod classify;
pub mod corpus;
pub mod randgen;
pub mod report;
pub mod suites;

use thiserror::Error;

use crate::eval::EvalError;
use crate::games::GameError;
use crate::structure::StructureError;
use crate::synth::SynthError;

pub use classify::{classify, equivalence_matrix};
pub use corpus::{generate_corpus, CorpusSpec, Family};
pub use randgen::FormulaGen;
pub use report::{Failure, SuiteReport};
pub use suites::{run_suite, SuiteConfig, SUITES};

#[derive(Debug, Error)]
pub enum LabError {
    #[error("universe size {size} exceeds the bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("game equivalence is not an equivalence relation: {0}")]
    NotEquivalence(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
