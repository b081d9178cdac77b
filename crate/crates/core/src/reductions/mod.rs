//! Generators for the hardness reductions: orthogonal vectors and k-cycle to DFA
//! intersection, intersection and unambiguity to EDA, IDA and the twins property, and
//! binary encodings of large alphabets.

mod chain;
mod gadget;
mod kcycle;
mod ov;

pub use chain::{ie2_to_unambiguity, ie3_to_ida, unambiguity_to_eda, unambiguity_to_twins};
pub use gadget::{binary_encode, bits_per_symbol, encode_word, expand_wildcards, GadgetDfa, Label};
pub use kcycle::{kcycle_to_2ie, LayeredGraph};
pub use ov::{kov_to_kie, OvInstance};
