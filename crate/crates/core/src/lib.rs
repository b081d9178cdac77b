//! Ambiguity of finite automata, unary unambiguity in near-linear time, unary
//! determinisability of weighted automata, and generators for hardness reductions.
//!
//! The general deciders in [`baseline`] work on any alphabet. The [`unary`] module
//! decides unambiguity of one-letter automata through disjointness of arithmetic
//! progressions ([`progressions`]); [`twins`] decides the twins property of unary
//! weighted automata. [`oracles`] holds slow reference implementations used by the
//! tests.

pub mod baseline;
pub mod bench;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod graph;
pub mod nfa;
pub mod oracles;
pub mod progressions;
pub mod reductions;
pub mod twins;
pub mod unary;
pub mod witness;

pub use error::{Error, Result};
pub use graph::StGraph;
pub use nfa::{Nfa, WeightedAutomaton};
pub use progressions::ProgressionsInstance;
pub use witness::{AmbiguityClass, AmbiguityVerdict, Witness};
