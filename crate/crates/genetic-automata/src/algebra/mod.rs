//! Semiring-generic automata with multiplicities: matrix-triplet
//! representation, word-weight evaluation, vectorization, and norm-based
//! distances between automata.

mod automaton;
mod norm;
mod semiring;
pub mod text;

pub use automaton::{automaton_distance, Mode, WeightedAutomaton, STOCHASTIC_TOLERANCE};
pub use norm::NormSpec;
pub use semiring::{Semiring, SemiringKind};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {detail}")]
    DimensionMismatch { detail: String },
    #[error("stochasticity violation: {detail}")]
    StochasticityViolation { detail: String },
    #[error("letter '{letter}' is not in the alphabet")]
    UnknownLetter { letter: char },
    #[error("incompatible shapes: {detail}")]
    IncompatibleShapes { detail: String },
    #[error("behavior table would hold {words} words, over the {limit} limit")]
    TableTooLarge { words: u128, limit: u128 },
    #[error("invalid Holder exponent {alpha}, need a finite alpha >= 1")]
    InvalidNorm { alpha: f64 },
    #[error("line {line}: {detail}")]
    FormatError { line: usize, detail: String },
}
