//! Finite model theory laboratory for split-quantifier logic.

pub mod ordinal;
pub mod partition;
pub mod structure;
pub mod logic;
pub mod textio;
pub mod eval;
pub mod games;
pub mod synth;
pub mod lab;
