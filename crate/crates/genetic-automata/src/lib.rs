//! Automata with multiplicities, evolved by row-level genetic operators.
//!
//! An automaton over a semiring is stored as a matrix triplet (entry vector,
//! one transition matrix per letter, exit vector). On top of that carrier the
//! crate provides:
//!
//! - [`algebra`] — construction and validation, word weights, coefficient
//!   vectorization, Hölder/max distances between automata, behavior tables,
//!   and a line-oriented text format.
//! - [`genetics`] — the chromosome view (alleles are matrix rows), the
//!   duplication / crossover / mutation operators, and a
//!   pair-and-select-top-2-of-4 evolution loop.
//! - [`dilemma`] — the iterated prisoner's dilemma: payoff table, fixed and
//!   probabilistic two-state strategies, the match engine, and training of a
//!   strategy population against a fixed opponent.
//! - [`emergence`] — agents with automaton behaviors on a grid or linkage
//!   graph, acyclic-successful-path evaluation matrices, the behavior
//!   semi-distance, neighborhood fitness, and the cluster-forming evolution
//!   loop.
//! - [`cli`] — the `genauto` binary's argument/config handling and run
//!   dispatch, plus deterministic stream derivation.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --example word_weights       # build automata, evaluate words
//! cargo run --example distances          # vectorization, norms, convergence
//! cargo run --example genetic_operators  # crossover/mutation, a small GA run
//! cargo run --example play_match         # strategies and match payoffs
//! cargo run --example train_dilemma      # evolve strategies against AlwaysD
//! cargo run --example emerge_clusters    # behavior clusters on a grid
//! ```

pub mod algebra;
pub mod cli;
pub mod dilemma;
pub mod emergence;
pub mod genetics;
pub mod stream;

#[cfg(test)]
pub(crate) mod test_support;
