//! Line-oriented text format for real-valued automata.
//!
//! ```text
//! # a two-state machine
//! alphabet = C D
//! states = 2
//! mode = stochastic
//! entry = 1 0
//! exit = 1 0
//! matrix C = 1 0 ; 1 0
//! matrix D = 0 1 ; 0 1
//! ```
//!
//! `#` starts a comment (whole line or trailing), extra whitespace is
//! ignored, and values are plain decimals. Serialization round-trips
//! bit-exactly.

use std::fmt::Write as _;

use super::automaton::{Mode, WeightedAutomaton};
use super::AlgebraError;

/// Parse the text format into a real-valued automaton.
pub fn parse_automaton(input: &str) -> Result<WeightedAutomaton<f64>, AlgebraError> {
    let mut alphabet: Option<(usize, Vec<char>)> = None;
    let mut states: Option<(usize, usize)> = None;
    let mut mode: Option<(usize, Mode)> = None;
    let mut entry: Option<(usize, Vec<f64>)> = None;
    let mut exit: Option<(usize, Vec<f64>)> = None;
    let mut matrices: Vec<(usize, char, Vec<Vec<f64>>)> = Vec::new();

    for (line_index, raw) in input.lines().enumerate() {
        let line_no = line_index + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(AlgebraError::FormatError {
            line: line_no,
            detail: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        let value = value.trim();
        let err = |detail: String| AlgebraError::FormatError {
            line: line_no,
            detail,
        };

        match key {
            "alphabet" => {
                let letters = parse_letters(value).map_err(&err)?;
                set_once(&mut alphabet, line_no, letters, "alphabet")?;
            }
            "states" => {
                let n: usize = value
                    .parse()
                    .map_err(|_| err(format!("bad state count `{value}`")))?;
                set_once(&mut states, line_no, n, "states")?;
            }
            "mode" => {
                let m = match value {
                    "stochastic" => Mode::RowStochastic,
                    "general" => Mode::General,
                    other => return Err(err(format!("unknown mode `{other}`"))),
                };
                set_once(&mut mode, line_no, m, "mode")?;
            }
            "entry" => {
                let v = parse_numbers(value).map_err(&err)?;
                set_once(&mut entry, line_no, v, "entry")?;
            }
            "exit" => {
                let v = parse_numbers(value).map_err(&err)?;
                set_once(&mut exit, line_no, v, "exit")?;
            }
            _ => match key.strip_prefix("matrix") {
                Some(rest) => {
                    let rest = rest.trim();
                    let mut chars = rest.chars();
                    let letter = chars
                        .next()
                        .ok_or_else(|| err("matrix key without a letter".into()))?;
                    if chars.next().is_some() {
                        return Err(err(format!("letter `{rest}` must be a single character")));
                    }
                    if matrices.iter().any(|(_, l, _)| *l == letter) {
                        return Err(err(format!("duplicate matrix for letter `{letter}`")));
                    }
                    let rows = value
                        .split(';')
                        .map(|row| parse_numbers(row.trim()))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(&err)?;
                    matrices.push((line_no, letter, rows));
                }
                None => return Err(err(format!("unknown key `{key}`"))),
            },
        }
    }

    let require = |name: &str| AlgebraError::FormatError {
        line: 0,
        detail: format!("missing `{name}`"),
    };
    let (_, alphabet) = alphabet.ok_or_else(|| require("alphabet"))?;
    let (_, n) = states.ok_or_else(|| require("states"))?;
    let (_, mode) = mode.ok_or_else(|| require("mode"))?;
    let (entry_line, entry) = entry.ok_or_else(|| require("entry"))?;
    let (exit_line, exit) = exit.ok_or_else(|| require("exit"))?;

    if entry.len() != n {
        return Err(AlgebraError::FormatError {
            line: entry_line,
            detail: format!("entry has {} values, expected {n}", entry.len()),
        });
    }
    if exit.len() != n {
        return Err(AlgebraError::FormatError {
            line: exit_line,
            detail: format!("exit has {} values, expected {n}", exit.len()),
        });
    }

    let mut transitions = Vec::with_capacity(alphabet.len());
    for &letter in &alphabet {
        let (line, _, rows) = matrices
            .iter()
            .find(|(_, l, _)| *l == letter)
            .ok_or(AlgebraError::FormatError {
                line: 0,
                detail: format!("missing `matrix {letter}`"),
            })?;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::FormatError {
                line: *line,
                detail: format!("matrix {letter} is not {n}x{n}"),
            });
        }
        transitions.push(rows.clone());
    }
    for (line, letter, _) in &matrices {
        if !alphabet.contains(letter) {
            return Err(AlgebraError::FormatError {
                line: *line,
                detail: format!("matrix for `{letter}` which is not in the alphabet"),
            });
        }
    }

    WeightedAutomaton::new(alphabet, entry, transitions, exit, mode)
}

/// Serialize a real-valued automaton; `parse_automaton` of the result
/// reconstructs it exactly.
pub fn format_automaton(automaton: &WeightedAutomaton<f64>) -> String {
    let mut out = String::new();
    let letters: Vec<String> = automaton.alphabet().iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "alphabet = {}", letters.join(" "));
    let _ = writeln!(out, "states = {}", automaton.state_count());
    let mode = match automaton.mode() {
        Mode::RowStochastic => "stochastic",
        Mode::General => "general",
    };
    let _ = writeln!(out, "mode = {mode}");
    let _ = writeln!(out, "entry = {}", join_numbers(automaton.entry()));
    let _ = writeln!(out, "exit = {}", join_numbers(automaton.exit()));
    for (index, letter) in automaton.alphabet().iter().enumerate() {
        let rows: Vec<String> = automaton
            .transition(index)
            .iter()
            .map(|row| join_numbers(row))
            .collect();
        let _ = writeln!(out, "matrix {letter} = {}", rows.join(" ; "));
    }
    out
}

fn join_numbers(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_letters(value: &str) -> Result<Vec<char>, String> {
    let mut letters = Vec::new();
    for token in value.split_whitespace() {
        let mut chars = token.chars();
        let c = chars.next().ok_or("empty letter token")?;
        if chars.next().is_some() {
            return Err(format!("letter `{token}` must be a single character"));
        }
        letters.push(c);
    }
    if letters.is_empty() {
        return Err("alphabet is empty".into());
    }
    Ok(letters)
}

fn parse_numbers(value: &str) -> Result<Vec<f64>, String> {
    value
        .split_whitespace()
        .map(|token| {
            token
                .parse::<f64>()
                .map_err(|_| format!("bad number `{token}`"))
        })
        .collect()
}

fn set_once<T>(
    slot: &mut Option<(usize, T)>,
    line: usize,
    value: T,
    name: &str,
) -> Result<(), AlgebraError> {
    if slot.is_some() {
        return Err(AlgebraError::FormatError {
            line,
            detail: format!("duplicate `{name}`"),
        });
    }
    *slot = Some((line, value));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const MIRROR: &str = "\
# copies the previous input letter
alphabet = C D
states = 2
mode = stochastic
entry = 1 0
exit = 1 0
matrix C = 1 0 ; 1 0
matrix D = 0 1 ; 0 1
";

    #[test]
    fn parses_the_mirror_machine() {
        let a = parse_automaton(MIRROR).unwrap();
        assert_eq!(a.alphabet(), &['C', 'D']);
        assert_eq!(a.state_count(), 2);
        assert_eq!(a.mode(), Mode::RowStochastic);
        assert_eq!(a.word_weight("CC").unwrap(), 1.0);
    }

    #[test]
    fn whitespace_and_trailing_comments_tolerated() {
        let text = "\
  alphabet   =  a
states=1
mode = general   # trailing note
entry = 2.5
exit = -1
matrix a = 0.125
";
        let a = parse_automaton(text).unwrap();
        assert_eq!(a.entry(), &[2.5]);
        assert_eq!(a.exit(), &[-1.0]);
        assert_eq!(a.transition(0)[0][0], 0.125);
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = "alphabet = a\nstatez = 1\n";
        match parse_automaton(text) {
            Err(AlgebraError::FormatError { line, detail }) => {
                assert_eq!(line, 2);
                assert!(detail.contains("statez"));
            }
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn bad_number_reports_line() {
        let text = "alphabet = a\nstates = 1\nmode = general\nentry = x\nexit = 1\nmatrix a = 1\n";
        match parse_automaton(text) {
            Err(AlgebraError::FormatError { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn missing_matrix_rejected() {
        let text = "alphabet = a b\nstates = 1\nmode = general\nentry = 1\nexit = 1\nmatrix a = 1\n";
        match parse_automaton(text) {
            Err(AlgebraError::FormatError { detail, .. }) => assert!(detail.contains("matrix b")),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_dimension_rejected() {
        let text = "alphabet = a\nstates = 2\nmode = general\nentry = 1 0\nexit = 1 0\nmatrix a = 1 0\n";
        assert!(parse_automaton(text).is_err());
    }

    #[test]
    fn stochastic_file_is_validated() {
        let text = "alphabet = a\nstates = 1\nmode = stochastic\nentry = 1\nexit = 1\nmatrix a = 0.9\n";
        assert!(matches!(
            parse_automaton(text),
            Err(AlgebraError::StochasticityViolation { .. })
        ));
    }

    #[test]
    fn roundtrip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let a = crate::test_support::random_general(&mut rng, &['p', 'q'], 3);
            let text = format_automaton(&a);
            let back = parse_automaton(&text).unwrap();
            assert_eq!(a, back);
        }
    }
}
