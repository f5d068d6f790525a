//! Automata with multiplicities as matrix triplets.
//!
//! An automaton over an alphabet of `k` letters with `n` states is stored as
//! an entry row vector, one `n x n` transition matrix per letter, and an exit
//! column vector. The weight of a word is entry-vector times the product of
//! the matrices of its letters times the exit vector; everything an automaton
//! "does" is a statement about these coefficients.

use super::norm::NormSpec;
use super::semiring::Semiring;
use super::AlgebraError;

/// Row-sum tolerance for stochastic validation.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-9;

/// Validation regime for the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// No constraints beyond shape.
    General,
    /// Every transition row and the entry vector are probability
    /// distributions (nonnegative, summing to 1 within 1e-9); exit entries
    /// lie in [0, 1]. Violations are construction errors, never silently
    /// repaired.
    RowStochastic,
}

/// Automaton with multiplicities: alphabet, entry vector, one transition
/// matrix per letter (alphabet order), exit vector.
///
/// Instances are immutable after validated construction; all operations are
/// pure functions, so sharing across threads is safe.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAutomaton<K> {
    alphabet: Vec<char>,
    entry: Vec<K>,
    transitions: Vec<Vec<Vec<K>>>,
    exit: Vec<K>,
    mode: Mode,
}

impl<K: Semiring> WeightedAutomaton<K> {
    /// Validated constructor. `transitions[i]` is the matrix of
    /// `alphabet[i]`, stored as rows.
    pub fn new(
        alphabet: Vec<char>,
        entry: Vec<K>,
        transitions: Vec<Vec<Vec<K>>>,
        exit: Vec<K>,
        mode: Mode,
    ) -> Result<Self, AlgebraError> {
        if alphabet.is_empty() {
            return Err(AlgebraError::DimensionMismatch {
                detail: "alphabet must be nonempty".into(),
            });
        }
        for (i, a) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(a) {
                return Err(AlgebraError::DimensionMismatch {
                    detail: format!("duplicate letter '{a}' in alphabet"),
                });
            }
        }
        let n = entry.len();
        if n == 0 {
            return Err(AlgebraError::DimensionMismatch {
                detail: "state count must be at least 1".into(),
            });
        }
        if exit.len() != n {
            return Err(AlgebraError::DimensionMismatch {
                detail: format!("exit vector has length {}, expected {n}", exit.len()),
            });
        }
        if transitions.len() != alphabet.len() {
            return Err(AlgebraError::DimensionMismatch {
                detail: format!(
                    "{} transition matrices for {} letters",
                    transitions.len(),
                    alphabet.len()
                ),
            });
        }
        for (letter, matrix) in alphabet.iter().zip(&transitions) {
            if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                return Err(AlgebraError::DimensionMismatch {
                    detail: format!("matrix for '{letter}' is not {n}x{n}"),
                });
            }
        }
        let automaton = WeightedAutomaton {
            alphabet,
            entry,
            transitions,
            exit,
            mode,
        };
        if mode == Mode::RowStochastic {
            automaton.check_stochastic()?;
        }
        Ok(automaton)
    }

    fn check_stochastic(&self) -> Result<(), AlgebraError> {
        let check_distribution = |values: &[K], what: &str| -> Result<(), AlgebraError> {
            let mut sum = 0.0;
            for v in values {
                let x = v.to_real();
                if x < 0.0 {
                    return Err(AlgebraError::StochasticityViolation {
                        detail: format!("{what} has negative entry {x}"),
                    });
                }
                sum += x;
            }
            if (sum - 1.0).abs() > STOCHASTIC_TOLERANCE {
                return Err(AlgebraError::StochasticityViolation {
                    detail: format!("{what} sums to {sum}, expected 1"),
                });
            }
            Ok(())
        };
        check_distribution(&self.entry, "entry vector")?;
        for (letter, matrix) in self.alphabet.iter().zip(&self.transitions) {
            for (r, row) in matrix.iter().enumerate() {
                check_distribution(row, &format!("row {r} of matrix '{letter}'"))?;
            }
        }
        for (i, v) in self.exit.iter().enumerate() {
            let x = v.to_real();
            if !(0.0..=1.0).contains(&x) {
                return Err(AlgebraError::StochasticityViolation {
                    detail: format!("exit entry {i} is {x}, outside [0, 1]"),
                });
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.entry.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn entry(&self) -> &[K] {
        &self.entry
    }

    pub fn exit(&self) -> &[K] {
        &self.exit
    }

    /// Transition matrix of the `index`-th alphabet letter, as rows.
    pub fn transition(&self, index: usize) -> &Vec<Vec<K>> {
        &self.transitions[index]
    }

    pub fn transitions(&self) -> &[Vec<Vec<K>>] {
        &self.transitions
    }

    pub fn letter_index(&self, letter: char) -> Option<usize> {
        self.alphabet.iter().position(|&a| a == letter)
    }

    /// Behavior coefficient of `word`: entry . mu(w_1) ... mu(w_l) . exit.
    /// The empty word yields the dot product of entry and exit.
    pub fn word_weight(&self, word: &str) -> Result<K, AlgebraError> {
        let mut vector = self.entry.clone();
        for letter in word.chars() {
            let index = self
                .letter_index(letter)
                .ok_or(AlgebraError::UnknownLetter { letter })?;
            let matrix = &self.transitions[index];
            let n = self.state_count();
            let mut next = vec![K::zero(); n];
            for (j, slot) in next.iter_mut().enumerate() {
                for i in 0..n {
                    *slot = slot.add(&vector[i].mul(&matrix[i][j]));
                }
            }
            vector = next;
        }
        let mut weight = K::zero();
        for (v, e) in vector.iter().zip(&self.exit) {
            weight = weight.add(&v.mul(e));
        }
        Ok(weight)
    }

    /// Path-enumeration oracle for [`word_weight`](Self::word_weight): sums
    /// entry(s_0) * prod mu(w_t)[s_{t-1}, s_t] * exit(s_l) over every state
    /// sequence. Exponential in word length; intended for n <= 6, |word| <= 6.
    pub fn word_weight_bruteforce(&self, word: &str) -> Result<K, AlgebraError> {
        let mut letter_indices = Vec::with_capacity(word.len());
        for letter in word.chars() {
            letter_indices.push(
                self.letter_index(letter)
                    .ok_or(AlgebraError::UnknownLetter { letter })?,
            );
        }
        let n = self.state_count();
        let mut total = K::zero();
        // One nested loop level per position, expressed as an explicit stack
        // over partial state sequences.
        let mut stack: Vec<(usize, usize, K)> = (0..n)
            .map(|s| (0usize, s, self.entry[s]))
            .collect();
        while let Some((depth, state, weight)) = stack.pop() {
            if depth == letter_indices.len() {
                total = total.add(&weight.mul(&self.exit[state]));
                continue;
            }
            let matrix = &self.transitions[letter_indices[depth]];
            for (next, cost) in matrix[state].iter().enumerate() {
                stack.push((depth + 1, next, weight.mul(cost)));
            }
        }
        Ok(total)
    }

    /// All coefficients as one real vector: entry, then each letter matrix in
    /// alphabet order row-major, then exit. Length `k*n^2 + 2n`.
    pub fn vectorize(&self) -> Vec<f64> {
        let n = self.state_count();
        let k = self.alphabet.len();
        let mut out = Vec::with_capacity(k * n * n + 2 * n);
        out.extend(self.entry.iter().map(Semiring::to_real));
        for matrix in &self.transitions {
            for row in matrix {
                out.extend(row.iter().map(Semiring::to_real));
            }
        }
        out.extend(self.exit.iter().map(Semiring::to_real));
        out
    }

    /// Rebuild an automaton from its [`vectorize`](Self::vectorize) layout.
    pub fn from_vector(
        alphabet: Vec<char>,
        state_count: usize,
        values: &[f64],
        mode: Mode,
    ) -> Result<Self, AlgebraError> {
        let n = state_count;
        let k = alphabet.len();
        let expected = k * n * n + 2 * n;
        if values.len() != expected {
            return Err(AlgebraError::DimensionMismatch {
                detail: format!("vector has length {}, expected {expected}", values.len()),
            });
        }
        let decode = |slice: &[f64]| -> Result<Vec<K>, AlgebraError> {
            slice
                .iter()
                .map(|&x| {
                    K::from_real(x).ok_or(AlgebraError::DimensionMismatch {
                        detail: format!("value {x} is not representable in the carrier"),
                    })
                })
                .collect()
        };
        let entry = decode(&values[..n])?;
        let mut transitions = Vec::with_capacity(k);
        let mut offset = n;
        for _ in 0..k {
            let mut matrix = Vec::with_capacity(n);
            for _ in 0..n {
                matrix.push(decode(&values[offset..offset + n])?);
                offset += n;
            }
            transitions.push(matrix);
        }
        let exit = decode(&values[offset..offset + n])?;
        WeightedAutomaton::new(alphabet, entry, transitions, exit, mode)
    }

    /// Complete weight table for every word of length at most `max_len`, in
    /// shortlex order (by length, then lexicographically in alphabet order).
    /// Guarded against alphabets/lengths yielding more than 10^6 words.
    pub fn behavior_table(&self, max_len: usize) -> Result<Vec<(String, K)>, AlgebraError> {
        const WORD_LIMIT: u128 = 1_000_000;
        let k = self.alphabet.len() as u128;
        let mut total: u128 = 0;
        let mut level: u128 = 1;
        for _ in 0..=max_len {
            total += level;
            if total > WORD_LIMIT {
                return Err(AlgebraError::TableTooLarge {
                    words: total,
                    limit: WORD_LIMIT,
                });
            }
            level = level.saturating_mul(k);
        }

        let exit_weight = |vector: &[K]| {
            let mut w = K::zero();
            for (v, e) in vector.iter().zip(&self.exit) {
                w = w.add(&v.mul(e));
            }
            w
        };
        let step = |vector: &[K], letter_index: usize| {
            let matrix = &self.transitions[letter_index];
            let n = self.state_count();
            let mut next = vec![K::zero(); n];
            for (j, slot) in next.iter_mut().enumerate() {
                for i in 0..n {
                    *slot = slot.add(&vector[i].mul(&matrix[i][j]));
                }
            }
            next
        };

        let mut table = Vec::new();
        // Frontier of (word, entry . mu(word)) pairs, extended a letter at a
        // time so each prefix product is computed once.
        let mut frontier: Vec<(String, Vec<K>)> = vec![(String::new(), self.entry.clone())];
        for len in 0..=max_len {
            for (word, vector) in &frontier {
                table.push((word.clone(), exit_weight(vector)));
            }
            if len == max_len {
                break;
            }
            let mut next_frontier = Vec::with_capacity(frontier.len() * self.alphabet.len());
            for (word, vector) in &frontier {
                for (index, letter) in self.alphabet.iter().enumerate() {
                    let mut extended = word.clone();
                    extended.push(*letter);
                    next_frontier.push((extended, step(vector, index)));
                }
            }
            frontier = next_frontier;
        }
        Ok(table)
    }
}

/// Distance between two automata: the norm of the difference of their
/// coefficient vectors. Requires a shared alphabet and state count so the
/// layouts align.
pub fn automaton_distance<K: Semiring>(
    a: &WeightedAutomaton<K>,
    b: &WeightedAutomaton<K>,
    norm: &NormSpec,
) -> Result<f64, AlgebraError> {
    if a.alphabet() != b.alphabet() || a.state_count() != b.state_count() {
        return Err(AlgebraError::IncompatibleShapes {
            detail: format!(
                "alphabet/state mismatch: ({:?}, {}) vs ({:?}, {})",
                a.alphabet(),
                a.state_count(),
                b.alphabet(),
                b.state_count()
            ),
        });
    }
    let va = a.vectorize();
    let vb = b.vectorize();
    let diff: Vec<f64> = va.iter().zip(&vb).map(|(x, y)| x - y).collect();
    Ok(norm.apply(&diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{all_words, mirror_automaton, random_general};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mirror_instance_validates() {
        let a = mirror_automaton();
        assert_eq!(a.state_count(), 2);
        assert_eq!(a.alphabet(), &['C', 'D']);
        assert_eq!(a.mode(), Mode::RowStochastic);
    }

    #[test]
    fn entry_length_mismatch_rejected() {
        let err = WeightedAutomaton::new(
            vec!['a'],
            vec![1.0, 0.0, 0.0],
            vec![vec![vec![1.0, 0.0], vec![0.0, 1.0]]],
            vec![1.0, 0.0],
            Mode::General,
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::DimensionMismatch { .. }));
    }

    #[test]
    fn bad_row_sum_rejected() {
        let err = WeightedAutomaton::new(
            vec!['a'],
            vec![1.0, 0.0],
            vec![vec![vec![0.5, 0.6], vec![0.5, 0.5]]],
            vec![1.0, 0.0],
            Mode::RowStochastic,
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::StochasticityViolation { .. }));
    }

    #[test]
    fn negative_entry_rejected_in_stochastic_mode() {
        let err = WeightedAutomaton::new(
            vec!['a'],
            vec![1.0, 0.0],
            vec![vec![vec![1.2, -0.2], vec![0.5, 0.5]]],
            vec![1.0, 0.0],
            Mode::RowStochastic,
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::StochasticityViolation { .. }));
    }

    #[test]
    fn duplicate_letter_rejected() {
        let matrix = vec![vec![1.0]];
        let err = WeightedAutomaton::new(
            vec!['a', 'a'],
            vec![1.0],
            vec![matrix.clone(), matrix],
            vec![1.0],
            Mode::General,
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::DimensionMismatch { .. }));
    }

    #[test]
    fn empty_word_is_entry_dot_exit() {
        let a = mirror_automaton();
        assert_eq!(a.word_weight("").unwrap(), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random_general(&mut rng, &['x', 'y'], 3);
            let dot: f64 = a
                .entry()
                .iter()
                .zip(a.exit())
                .map(|(e, f)| e * f)
                .sum();
            assert_abs_diff_eq!(a.word_weight("").unwrap(), dot, epsilon = 1e-12);
        }
    }

    #[test]
    fn mirror_weight_of_cc_is_one() {
        let a = mirror_automaton();
        assert_eq!(a.word_weight("CC").unwrap(), 1.0);
        assert_eq!(a.word_weight("CD").unwrap(), 0.0);
    }

    #[test]
    fn zero_exit_means_zero_weight() {
        let a = WeightedAutomaton::new(
            vec!['a'],
            vec![0.7, 0.3],
            vec![vec![vec![0.5, 0.5], vec![0.1, 0.9]]],
            vec![0.0, 0.0],
            Mode::General,
        )
        .unwrap();
        for word in ["", "a", "aa", "aaa"] {
            assert_eq!(a.word_weight(word).unwrap(), 0.0);
        }
    }

    #[test]
    fn unknown_letter_is_an_error() {
        let a = mirror_automaton();
        assert!(matches!(
            a.word_weight("CX"),
            Err(AlgebraError::UnknownLetter { letter: 'X' })
        ));
        assert!(matches!(
            a.word_weight_bruteforce("Q"),
            Err(AlgebraError::UnknownLetter { letter: 'Q' })
        ));
    }

    #[test]
    fn bruteforce_matches_matrix_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let alphabet = ['a', 'b'];
        for _ in 0..100 {
            let a = random_general(&mut rng, &alphabet, 3);
            for word in all_words(&alphabet, 4) {
                let fast = a.word_weight(&word).unwrap();
                let slow = a.word_weight_bruteforce(&word).unwrap();
                assert_abs_diff_eq!(fast, slow, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn bruteforce_single_letter_is_double_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_general(&mut rng, &['a'], 3);
        let matrix = a.transition(0);
        let mut expected = 0.0;
        for (i, row) in matrix.iter().enumerate() {
            for (j, cost) in row.iter().enumerate() {
                expected += a.entry()[i] * cost * a.exit()[j];
            }
        }
        assert_abs_diff_eq!(a.word_weight_bruteforce("a").unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn boolean_word_weight_is_reachability() {
        // Recognizes words over {a, b} ending in 'b'.
        let a = WeightedAutomaton::new(
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
        assert!(!a.word_weight("").unwrap());
        assert!(a.word_weight("b").unwrap());
        assert!(a.word_weight("ab").unwrap());
        assert!(!a.word_weight("ba").unwrap());
        assert!(a.word_weight_bruteforce("aab").unwrap());
    }

    #[test]
    fn vectorize_layout_order() {
        let a = WeightedAutomaton::new(
            vec!['a'],
            vec![2.0],
            vec![vec![vec![3.0]]],
            vec![5.0],
            Mode::General,
        )
        .unwrap();
        assert_eq!(a.vectorize(), vec![2.0, 3.0, 5.0]);
    }

    #[test]
    fn vectorize_mirror_has_length_twelve() {
        let v = mirror_automaton().vectorize();
        assert_eq!(v.len(), 2 * 4 + 2 * 2);
        assert_eq!(
            v,
            vec![1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0]
        );
    }

    #[test]
    fn vector_roundtrip_reconstructs_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let a = random_general(&mut rng, &['a', 'b', 'c'], 3);
            let rebuilt = WeightedAutomaton::<f64>::from_vector(
                a.alphabet().to_vec(),
                a.state_count(),
                &a.vectorize(),
                a.mode(),
            )
            .unwrap();
            assert_eq!(a, rebuilt);
        }
    }

    #[test]
    fn boolean_vector_roundtrip() {
        let a = WeightedAutomaton::new(
            vec!['a'],
            vec![true, false],
            vec![vec![vec![false, true], vec![true, false]]],
            vec![false, true],
            Mode::General,
        )
        .unwrap();
        let rebuilt =
            WeightedAutomaton::<bool>::from_vector(vec!['a'], 2, &a.vectorize(), Mode::General)
                .unwrap();
        assert_eq!(a, rebuilt);
    }

    #[test]
    fn distance_to_self_is_zero() {
        let a = mirror_automaton();
        for norm in [NormSpec::euclidean(), NormSpec::Max, NormSpec::holder(3.0).unwrap()] {
            assert_eq!(automaton_distance(&a, &a, &norm).unwrap(), 0.0);
        }
    }

    #[test]
    fn single_coefficient_delta_under_holder_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let a = random_general(&mut rng, &['a', 'b'], 2);
        let mut v = a.vectorize();
        let delta = 0.37;
        v[4] += delta;
        let b = WeightedAutomaton::<f64>::from_vector(
            a.alphabet().to_vec(),
            2,
            &v,
            Mode::General,
        )
        .unwrap();
        let d = automaton_distance(&a, &b, &NormSpec::euclidean()).unwrap();
        assert_abs_diff_eq!(d, delta, epsilon = 1e-12);
    }

    #[test]
    fn distance_shape_mismatch_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_general(&mut rng, &['a'], 2);
        let b = random_general(&mut rng, &['a'], 3);
        let c = random_general(&mut rng, &['b'], 2);
        assert!(matches!(
            automaton_distance(&a, &b, &NormSpec::euclidean()),
            Err(AlgebraError::IncompatibleShapes { .. })
        ));
        assert!(matches!(
            automaton_distance(&a, &c, &NormSpec::euclidean()),
            Err(AlgebraError::IncompatibleShapes { .. })
        ));
    }

    #[test]
    fn triangle_inequality_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let norm = NormSpec::euclidean();
        for _ in 0..300 {
            let a = random_general(&mut rng, &['a', 'b'], 2);
            let b = random_general(&mut rng, &['a', 'b'], 2);
            let c = random_general(&mut rng, &['a', 'b'], 2);
            let ab = automaton_distance(&a, &b, &norm).unwrap();
            let bc = automaton_distance(&b, &c, &norm).unwrap();
            let ac = automaton_distance(&a, &c, &norm).unwrap();
            assert!(ac <= ab + bc + 1e-9);
            assert!(ab >= 0.0);
            assert_abs_diff_eq!(
                ab,
                automaton_distance(&b, &a, &norm).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn behavior_table_word_counts() {
        let a = mirror_automaton();
        let t0 = a.behavior_table(0).unwrap();
        assert_eq!(t0.len(), 1);
        assert_eq!(t0[0].0, "");
        assert_eq!(t0[0].1, 1.0);

        let t2 = a.behavior_table(2).unwrap();
        assert_eq!(t2.len(), 7);
        let words: Vec<&str> = t2.iter().map(|(w, _)| w.as_str()).collect();
        assert_eq!(words, vec!["", "C", "D", "CC", "CD", "DC", "DD"]);
    }

    #[test]
    fn behavior_table_matches_word_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let a = random_general(&mut rng, &['a', 'b'], 3);
        for (word, weight) in a.behavior_table(3).unwrap() {
            assert_abs_diff_eq!(weight, a.word_weight(&word).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn behavior_table_guard_trips() {
        let a = mirror_automaton();
        assert!(matches!(
            a.behavior_table(25),
            Err(AlgebraError::TableTooLarge { .. })
        ));
    }

    #[test]
    fn perturbation_family_converges() {
        // Desk-scale convergence: perturbing every coefficient by 1/n makes
        // the worst word-weight deviation shrink roughly linearly in 1/n.
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let base = random_general(&mut rng, &['a', 'b'], 3);
        let deviation = |n: f64| -> f64 {
            let v: Vec<f64> = base.vectorize().iter().map(|x| x + 1.0 / n).collect();
            let perturbed = WeightedAutomaton::<f64>::from_vector(
                base.alphabet().to_vec(),
                base.state_count(),
                &v,
                Mode::General,
            )
            .unwrap();
            base.behavior_table(5)
                .unwrap()
                .iter()
                .zip(perturbed.behavior_table(5).unwrap())
                .map(|((_, w0), (_, w1))| (w0 - w1).abs())
                .fold(0.0, f64::max)
        };
        let d10 = deviation(10.0);
        let d100 = deviation(100.0);
        let d1000 = deviation(1000.0);
        assert!(d10 > d100 && d100 > d1000);
        assert!(d1000 <= d10 / 50.0);
    }
}
