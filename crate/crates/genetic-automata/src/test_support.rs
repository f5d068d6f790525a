//! Shared fixtures for unit tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Mode, WeightedAutomaton};

/// Copies its adversary's previous move when run as a strategy: stays in
/// state 0 after C, moves to state 1 after D.
pub fn mirror_automaton() -> WeightedAutomaton<f64> {
    WeightedAutomaton::new(
        vec!['C', 'D'],
        vec![1.0, 0.0],
        vec![
            vec![vec![1.0, 0.0], vec![1.0, 0.0]],
            vec![vec![0.0, 1.0], vec![0.0, 1.0]],
        ],
        vec![1.0, 0.0],
        Mode::RowStochastic,
    )
    .unwrap()
}

/// Random general-mode automaton with coefficients in [-1, 1).
pub fn random_general(
    rng: &mut ChaCha8Rng,
    alphabet: &[char],
    n: usize,
) -> WeightedAutomaton<f64> {
    let value = |rng: &mut ChaCha8Rng| rng.gen_range(-1.0..1.0);
    let entry: Vec<f64> = (0..n).map(|_| value(rng)).collect();
    let exit: Vec<f64> = (0..n).map(|_| value(rng)).collect();
    let transitions: Vec<Vec<Vec<f64>>> = (0..alphabet.len())
        .map(|_| {
            (0..n)
                .map(|_| (0..n).map(|_| value(rng)).collect())
                .collect()
        })
        .collect();
    WeightedAutomaton::new(alphabet.to_vec(), entry, transitions, exit, Mode::General).unwrap()
}

/// Random row-stochastic automaton; entry is a distribution, exit entries in
/// [0, 1].
pub fn random_stochastic(
    rng: &mut ChaCha8Rng,
    alphabet: &[char],
    n: usize,
) -> WeightedAutomaton<f64> {
    let simplex = |rng: &mut ChaCha8Rng| {
        let raw: Vec<f64> = (0..n).map(|_| 1.0 - rng.gen::<f64>()).collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / sum).collect::<Vec<f64>>()
    };
    let entry = simplex(rng);
    let exit: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let transitions: Vec<Vec<Vec<f64>>> = (0..alphabet.len())
        .map(|_| (0..n).map(|_| simplex(rng)).collect())
        .collect();
    WeightedAutomaton::new(
        alphabet.to_vec(),
        entry,
        transitions,
        exit,
        Mode::RowStochastic,
    )
    .unwrap()
}

/// Every word over `alphabet` of length at most `max_len`, shortlex order.
pub fn all_words(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut words = vec![String::new()];
    let mut level = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for &a in alphabet {
                let mut e = w.clone();
                e.push(a);
                next.push(e);
            }
        }
        words.extend(next.iter().cloned());
        level = next;
    }
    words
}
