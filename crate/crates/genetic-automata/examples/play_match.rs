//! Iterated prisoner's dilemma matches between fixed and probabilistic
//! strategies.
//!
//! ```bash
//! cargo run --example play_match
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use genetic_automata::dilemma::{
    play_match, PayoffTable, ProbabilisticStrategy, StrategySpec,
};

fn versus(a: &StrategySpec, b: &StrategySpec, label: &str, seed: u64) {
    let table = PayoffTable::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let result = play_match(a, b, 20, &table, &mut rng).unwrap();
    let history: String = result
        .history_a
        .iter()
        .zip(&result.history_b)
        .map(|(x, y)| format!("{x}{y} "))
        .collect();
    println!("{label:30} -> ({:>3}, {:>3})   {history}", result.total_a, result.total_b);
}

fn main() {
    println!("20 rounds each, (row, column) total payoffs, per-round move pairs:\n");
    versus(&StrategySpec::TitForTat, &StrategySpec::TitForTat, "tit-for-tat vs tit-for-tat", 0);
    versus(&StrategySpec::TitForTat, &StrategySpec::AlwaysD, "tit-for-tat vs always-betray", 0);
    versus(&StrategySpec::Vindictive, &StrategySpec::AlwaysD, "vindictive vs always-betray", 0);
    versus(&StrategySpec::AlwaysC, &StrategySpec::AlwaysD, "always-cooperate vs always-betray", 0);

    // The probabilistic two-state automaton covers all of these as corners of
    // its parameter cube; interior points give mixed behavior.
    let tft_corner = StrategySpec::Probabilistic(
        ProbabilisticStrategy::from_params([1.0, 1.0, 1.0, 0.0, 0.0, 1.0]).unwrap(),
    );
    versus(&tft_corner, &StrategySpec::TitForTat, "tit-for-tat corner vs tft", 0);

    let generous = StrategySpec::Probabilistic(
        ProbabilisticStrategy::from_params([1.0, 0.95, 0.8, 0.3, 0.1, 1.0]).unwrap(),
    );
    versus(&generous, &StrategySpec::Vindictive, "generous mixture vs vindictive", 3);
    versus(&generous, &generous, "generous mixture vs itself", 4);
}
