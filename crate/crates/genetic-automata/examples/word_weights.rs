//! Build automata over different semirings and evaluate word weights.
//!
//! ```bash
//! cargo run --example word_weights
//! ```

use genetic_automata::algebra::{text, Mode, WeightedAutomaton};

fn main() {
    // Boolean semiring: a two-state recognizer for words ending in 'b'.
    let recognizer = WeightedAutomaton::new(
        vec!['a', 'b'],
        vec![true, false],
        vec![
            vec![vec![true, false], vec![true, false]],
            vec![vec![false, true], vec![false, true]],
        ],
        vec![false, true],
        Mode::General,
    )
    .unwrap();
    println!("boolean recognizer (accepts words ending in 'b'):");
    for word in ["", "b", "ab", "ba", "abab", "abba"] {
        println!("  {word:5} -> {}", recognizer.word_weight(word).unwrap());
    }

    // Real semiring, row-stochastic: a machine that tracks the last input
    // letter (state 0 after C, state 1 after D).
    let mirror = text::parse_automaton(
        "alphabet = C D\n\
         states = 2\n\
         mode = stochastic\n\
         entry = 1 0\n\
         exit = 1 0\n\
         matrix C = 1 0 ; 1 0\n\
         matrix D = 0 1 ; 0 1\n",
    )
    .unwrap();
    println!("\nlast-letter tracker, weight = probability of ending in state 0:");
    for word in ["", "C", "D", "CC", "CD", "DC"] {
        println!("  {word:5} -> {}", mirror.word_weight(word).unwrap());
    }

    // A genuinely probabilistic machine and its behavior table.
    let noisy = text::parse_automaton(
        "alphabet = C D\n\
         states = 2\n\
         mode = stochastic\n\
         entry = 0.75 0.25\n\
         exit = 1 0\n\
         matrix C = 0.9 0.1 ; 0.4 0.6\n\
         matrix D = 0.2 0.8 ; 0.1 0.9\n",
    )
    .unwrap();
    println!("\nbehavior table of a probabilistic machine (words up to length 2):");
    for (word, weight) in noisy.behavior_table(2).unwrap() {
        println!("  {:5} -> {weight:.6}", if word.is_empty() { "ε" } else { &word });
    }

    // The two evaluation routes agree: matrix products vs explicit paths.
    let word = "CDC";
    println!(
        "\nmatrix route {} vs path enumeration {} for {word:?}",
        noisy.word_weight(word).unwrap(),
        noisy.word_weight_bruteforce(word).unwrap()
    );

    // Round-trip through the text format is exact.
    let reparsed = text::parse_automaton(&text::format_automaton(&noisy)).unwrap();
    println!("text-format round trip exact: {}", reparsed == noisy);
}
