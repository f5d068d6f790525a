//! Iterated prisoner's dilemma on automaton strategies.
//!
//! Two players move simultaneously each round, observing only the opponent's
//! previous action. Fixed strategies (tit-for-tat, vindictive, the two
//! constant players) coexist with a probabilistic two-state automaton whose
//! transition rows are probability distributions over its states; the state
//! reached encodes the action played (state 0 cooperates, state 1 betrays).
//! Training evolves a population of probabilistic strategies against a fixed
//! opponent, with fitness the summed match payoff.

use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, Mode, WeightedAutomaton, STOCHASTIC_TOLERANCE};
use crate::genetics::{evolve, GaConfig, GenerationSnapshot, GeneticsError};
use crate::stream::derive_stream;

#[derive(Debug, Error)]
pub enum DilemmaError {
    #[error("invalid strategy state: {detail}")]
    InvalidState { detail: String },
    #[error("invalid strategy: {detail}")]
    InvalidStrategy { detail: String },
    #[error("cannot parse strategy `{input}`: {detail}")]
    BadStrategySpec { input: String, detail: String },
    #[error("cannot parse payoff table: {detail}")]
    BadPayoffTable { detail: String },
    #[error("match config: {detail}")]
    InvalidMatch { detail: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Genetics(#[from] GeneticsError),
    #[error("reading strategy file: {0}")]
    Io(#[from] std::io::Error),
}

/// One move: cooperate or defect (betray).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    C,
    D,
}

impl Action {
    pub fn to_char(self) -> char {
        match self {
            Action::C => 'C',
            Action::D => 'D',
        }
    }

    fn index(self) -> usize {
        match self {
            Action::C => 0,
            Action::D => 1,
        }
    }

    /// The action encoded by a two-state strategy automaton state.
    fn of_state(state: usize) -> Action {
        if state == 0 {
            Action::C
        } else {
            Action::D
        }
    }
}

impl std::fmt::Display for Action {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// 2x2 bimatrix: `(my action, opponent action) -> (my payoff, their payoff)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffTable {
    cells: [[(i64, i64); 2]; 2],
}

impl PayoffTable {
    pub fn new(cells: [[(i64, i64); 2]; 2]) -> Self {
        PayoffTable { cells }
    }

    pub fn payoff(&self, mine: Action, theirs: Action) -> (i64, i64) {
        self.cells[mine.index()][theirs.index()]
    }

    /// Parse the table file format: lines `cc = 3 3`, `cd = 0 5`, `dc = 5 0`,
    /// `dd = 1 1` (first letter = row player's action), `#` comments.
    pub fn parse(text: &str) -> Result<Self, DilemmaError> {
        let mut cells: [[Option<(i64, i64)>; 2]; 2] = [[None; 2]; 2];
        for (line_index, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |detail: String| DilemmaError::BadPayoffTable {
                detail: format!("line {}: {detail}", line_index + 1),
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected `key = value`".into()))?;
            let key = key.trim();
            let (mine, theirs) = match key {
                "cc" => (0, 0),
                "cd" => (0, 1),
                "dc" => (1, 0),
                "dd" => (1, 1),
                other => return Err(bad(format!("unknown key `{other}`"))),
            };
            let numbers: Vec<i64> = value
                .split_whitespace()
                .map(|token| token.parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| bad(format!("bad integer: {e}")))?;
            if numbers.len() != 2 {
                return Err(bad(format!("expected two integers, got {}", numbers.len())));
            }
            if cells[mine][theirs].replace((numbers[0], numbers[1])).is_some() {
                return Err(bad(format!("duplicate key `{key}`")));
            }
        }
        let mut out = [[(0, 0); 2]; 2];
        for (mine, row) in cells.iter().enumerate() {
            for (theirs, cell) in row.iter().enumerate() {
                out[mine][theirs] = cell.ok_or(DilemmaError::BadPayoffTable {
                    detail: format!(
                        "missing key `{}{}`",
                        if mine == 0 { 'c' } else { 'd' },
                        if theirs == 0 { 'c' } else { 'd' }
                    ),
                })?;
            }
        }
        Ok(PayoffTable::new(out))
    }
}

impl Default for PayoffTable {
    /// (C,C) -> (3,3); (C,D) -> (0,5); (D,C) -> (5,0); (D,D) -> (1,1).
    fn default() -> Self {
        PayoffTable::new([[(3, 3), (0, 5)], [(5, 0), (1, 1)]])
    }
}

/// Two-state probabilistic strategy automaton over the alphabet {C, D}.
///
/// Its six parameters are the first components of the entry vector
/// (`p1`, 1-`p1`), the rows of the C matrix ((`p2`, 1-`p2`), (`p3`, 1-`p3`)),
/// the rows of the D matrix ((`p4`, 1-`p4`), (`p5`, 1-`p5`)), and the exit
/// vector (`p6`, 1-`p6`). The exit vector plays no role during match play; it
/// matters for agent-behavior evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilisticStrategy {
    automaton: WeightedAutomaton<f64>,
}

impl ProbabilisticStrategy {
    pub fn from_params(p: [f64; 6]) -> Result<Self, DilemmaError> {
        for (index, value) in p.iter().enumerate() {
            if !(0.0..=1.0).contains(value) {
                return Err(DilemmaError::InvalidStrategy {
                    detail: format!("p{} = {value} outside [0, 1]", index + 1),
                });
            }
        }
        let [p1, p2, p3, p4, p5, p6] = p;
        let automaton = WeightedAutomaton::new(
            vec!['C', 'D'],
            vec![p1, 1.0 - p1],
            vec![
                vec![vec![p2, 1.0 - p2], vec![p3, 1.0 - p3]],
                vec![vec![p4, 1.0 - p4], vec![p5, 1.0 - p5]],
            ],
            vec![p6, 1.0 - p6],
            Mode::RowStochastic,
        )?;
        Ok(ProbabilisticStrategy { automaton })
    }

    /// Wrap an automaton, validating the strategy shape: row-stochastic, two
    /// states, alphabet {C, D}, complementary exit vector.
    pub fn from_automaton(automaton: WeightedAutomaton<f64>) -> Result<Self, DilemmaError> {
        if automaton.mode() != Mode::RowStochastic {
            return Err(DilemmaError::InvalidStrategy {
                detail: "strategy automata must be row-stochastic".into(),
            });
        }
        if automaton.state_count() != 2 {
            return Err(DilemmaError::InvalidStrategy {
                detail: format!("strategy automata have 2 states, got {}", automaton.state_count()),
            });
        }
        if automaton.alphabet() != ['C', 'D'] {
            return Err(DilemmaError::InvalidStrategy {
                detail: format!("strategy alphabet must be C D, got {:?}", automaton.alphabet()),
            });
        }
        let exit = automaton.exit();
        if (exit[0] + exit[1] - 1.0).abs() > STOCHASTIC_TOLERANCE {
            return Err(DilemmaError::InvalidStrategy {
                detail: format!("exit vector ({}, {}) is not complementary", exit[0], exit[1]),
            });
        }
        Ok(ProbabilisticStrategy { automaton })
    }

    pub fn automaton(&self) -> &WeightedAutomaton<f64> {
        &self.automaton
    }

    pub fn params(&self) -> [f64; 6] {
        let a = &self.automaton;
        [
            a.entry()[0],
            a.transition(0)[0][0],
            a.transition(0)[1][0],
            a.transition(1)[0][0],
            a.transition(1)[1][0],
            a.exit()[0],
        ]
    }
}

/// A playable strategy.
#[derive(Debug, Clone, PartialEq)]
pub enum StrategySpec {
    /// Cooperates first, then repeats the opponent's previous action.
    TitForTat,
    /// Cooperates until the opponent first betrays, then betrays forever.
    Vindictive,
    AlwaysC,
    AlwaysD,
    Probabilistic(ProbabilisticStrategy),
}

impl StrategySpec {
    /// Parse the CLI syntax:
    /// `tft | vindictive | allc | alld | prob:p1,p2,p3,p4,p5,p6 | file:<path>`.
    pub fn parse(input: &str) -> Result<Self, DilemmaError> {
        let bad = |detail: String| DilemmaError::BadStrategySpec {
            input: input.to_string(),
            detail,
        };
        match input {
            "tft" => return Ok(StrategySpec::TitForTat),
            "vindictive" => return Ok(StrategySpec::Vindictive),
            "allc" => return Ok(StrategySpec::AlwaysC),
            "alld" => return Ok(StrategySpec::AlwaysD),
            _ => {}
        }
        if let Some(params) = input.strip_prefix("prob:") {
            let values: Vec<f64> = params
                .split(',')
                .map(|token| token.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| bad(format!("bad probability: {e}")))?;
            if values.len() != 6 {
                return Err(bad(format!("expected 6 probabilities, got {}", values.len())));
            }
            let mut p = [0.0; 6];
            p.copy_from_slice(&values);
            return Ok(StrategySpec::Probabilistic(ProbabilisticStrategy::from_params(p)?));
        }
        if let Some(path) = input.strip_prefix("file:") {
            let text = std::fs::read_to_string(Path::new(path))?;
            let automaton = crate::algebra::text::parse_automaton(&text)?;
            return Ok(StrategySpec::Probabilistic(ProbabilisticStrategy::from_automaton(automaton)?));
        }
        Err(bad("expected tft | vindictive | allc | alld | prob:... | file:<path>".into()))
    }
}

/// Per-player interaction state between rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyState {
    /// Before the first move.
    Fresh,
    /// Memoryless deterministic kinds after the first move.
    Stateless,
    /// Vindictive: whether the opponent has ever betrayed.
    Grudging(bool),
    /// Probabilistic: current automaton state.
    InState(usize),
}

/// Advance a strategy by one move. `opponent_last` is `None` only on the
/// first round. Deterministic kinds consume no randomness; the probabilistic
/// kind samples its next state from the entry vector (round 1) or from the
/// matrix row of the opponent's last action, and plays the action that state
/// encodes.
pub fn strategy_step(
    spec: &StrategySpec,
    state: StrategyState,
    opponent_last: Option<Action>,
    rng: &mut ChaCha8Rng,
) -> Result<(Action, StrategyState), DilemmaError> {
    let state_error = |detail: String| DilemmaError::InvalidState { detail };
    if (state == StrategyState::Fresh) != opponent_last.is_none() {
        return Err(state_error(format!(
            "state {state:?} inconsistent with opponent_last {opponent_last:?}"
        )));
    }
    match spec {
        StrategySpec::TitForTat => {
            let action = opponent_last.unwrap_or(Action::C);
            Ok((action, StrategyState::Stateless))
        }
        StrategySpec::AlwaysC => Ok((Action::C, StrategyState::Stateless)),
        StrategySpec::AlwaysD => Ok((Action::D, StrategyState::Stateless)),
        StrategySpec::Vindictive => {
            let grudge = match (state, opponent_last) {
                (StrategyState::Fresh, None) => false,
                (StrategyState::Grudging(g), Some(last)) => g || last == Action::D,
                (other, _) => {
                    return Err(state_error(format!("vindictive cannot resume from {other:?}")))
                }
            };
            let action = if grudge { Action::D } else { Action::C };
            Ok((action, StrategyState::Grudging(grudge)))
        }
        StrategySpec::Probabilistic(strategy) => {
            let automaton = strategy.automaton();
            let stay_probability = match (state, opponent_last) {
                (StrategyState::Fresh, None) => automaton.entry()[0],
                (StrategyState::InState(current), Some(last)) => {
                    if current >= 2 {
                        return Err(state_error(format!("state index {current} out of range")));
                    }
                    automaton.transition(last.index())[current][0]
                }
                (other, _) => {
                    return Err(state_error(format!("probabilistic cannot resume from {other:?}")))
                }
            };
            let next_state = if rng.gen::<f64>() < stay_probability { 0 } else { 1 };
            Ok((Action::of_state(next_state), StrategyState::InState(next_state)))
        }
    }
}

/// Outcome of one match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub rounds: usize,
    pub total_a: i64,
    pub total_b: i64,
    pub history_a: Vec<Action>,
    pub history_b: Vec<Action>,
}

impl MatchResult {
    /// Re-derive the totals from the stored histories.
    pub fn recompute_totals(&self, table: &PayoffTable) -> (i64, i64) {
        self.history_a
            .iter()
            .zip(&self.history_b)
            .fold((0, 0), |(a, b), (&act_a, &act_b)| {
                let (pa, pb) = table.payoff(act_a, act_b);
                (a + pa, b + pb)
            })
    }
}

/// Play `rounds` simultaneous rounds. Both players draw from the shared
/// stream in a fixed order (A first), so a run is reproducible from the
/// stream; deterministic strategies draw nothing.
pub fn play_match(
    spec_a: &StrategySpec,
    spec_b: &StrategySpec,
    rounds: usize,
    table: &PayoffTable,
    rng: &mut ChaCha8Rng,
) -> Result<MatchResult, DilemmaError> {
    if rounds == 0 {
        return Err(DilemmaError::InvalidMatch {
            detail: "a match needs at least one round".into(),
        });
    }
    let mut state_a = StrategyState::Fresh;
    let mut state_b = StrategyState::Fresh;
    let mut last_a: Option<Action> = None;
    let mut last_b: Option<Action> = None;
    let mut result = MatchResult {
        rounds,
        total_a: 0,
        total_b: 0,
        history_a: Vec::with_capacity(rounds),
        history_b: Vec::with_capacity(rounds),
    };
    for _ in 0..rounds {
        let (action_a, next_a) = strategy_step(spec_a, state_a, last_b, rng)?;
        let (action_b, next_b) = strategy_step(spec_b, state_b, last_a, rng)?;
        state_a = next_a;
        state_b = next_b;
        let (pay_a, pay_b) = table.payoff(action_a, action_b);
        result.total_a += pay_a;
        result.total_b += pay_b;
        result.history_a.push(action_a);
        result.history_b.push(action_b);
        last_a = Some(action_a);
        last_b = Some(action_b);
    }
    Ok(result)
}

/// Candidate's total payoff summed over `plays` independent matches of
/// `rounds` rounds against `s0`. Each play gets its own stream forked from
/// `rng`.
pub fn fitness_vs(
    s0: &StrategySpec,
    candidate: &StrategySpec,
    plays: usize,
    rounds: usize,
    table: &PayoffTable,
    rng: &mut ChaCha8Rng,
) -> Result<f64, DilemmaError> {
    if plays == 0 {
        return Err(DilemmaError::InvalidMatch {
            detail: "fitness needs at least one play".into(),
        });
    }
    let mut total = 0i64;
    for _ in 0..plays {
        let mut play_rng = ChaCha8Rng::from_seed(rng.gen());
        let result = play_match(candidate, s0, rounds, table, &mut play_rng)?;
        total += result.total_a;
    }
    Ok(total as f64)
}

/// Match-play side of a training run.
#[derive(Debug, Clone)]
pub struct MatchConfig {
    pub plays: usize,
    pub rounds: usize,
    pub table: PayoffTable,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            plays: 10,
            rounds: 50,
            table: PayoffTable::default(),
        }
    }
}

/// One generation of a training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainSnapshot {
    pub generation: usize,
    pub min_fitness: f64,
    pub mean_fitness: f64,
    pub max_fitness: f64,
    pub best_index: usize,
    pub best: ProbabilisticStrategy,
    /// Fraction of cooperative moves across the population, measured by
    /// replaying matches against the trainer on a dedicated stream.
    pub mean_coop_rate: f64,
    pub population: Vec<ProbabilisticStrategy>,
}

/// Evolve a population of probabilistic strategies against the fixed
/// opponent `s0`; fitness is the summed payoff of `match_cfg.plays` matches.
pub fn train(
    s0: &StrategySpec,
    initial: &[ProbabilisticStrategy],
    ga: &GaConfig,
    match_cfg: &MatchConfig,
) -> Result<Vec<TrainSnapshot>, DilemmaError> {
    if match_cfg.plays == 0 || match_cfg.rounds == 0 {
        return Err(DilemmaError::InvalidMatch {
            detail: "training needs at least one play of at least one round".into(),
        });
    }
    let automata: Vec<WeightedAutomaton<f64>> =
        initial.iter().map(|s| s.automaton().clone()).collect();
    let snapshots = evolve(&automata, ga, |automaton, rng| {
        let candidate = StrategySpec::Probabilistic(ProbabilisticStrategy {
            automaton: automaton.clone(),
        });
        fitness_vs(s0, &candidate, match_cfg.plays, match_cfg.rounds, &match_cfg.table, rng)
            .expect("play counts validated above")
    })?;
    snapshots
        .iter()
        .map(|snapshot| annotate_snapshot(s0, snapshot, ga, match_cfg))
        .collect()
}

fn annotate_snapshot(
    s0: &StrategySpec,
    snapshot: &GenerationSnapshot,
    ga: &GaConfig,
    match_cfg: &MatchConfig,
) -> Result<TrainSnapshot, DilemmaError> {
    let population: Vec<ProbabilisticStrategy> = snapshot
        .population
        .iter()
        .map(|automaton| ProbabilisticStrategy::from_automaton(automaton.clone()))
        .collect::<Result<_, _>>()?;
    let mut coop_total = 0usize;
    let mut move_total = 0usize;
    for (slot, strategy) in population.iter().enumerate() {
        let mut rng = derive_stream(
            ga.rng_seed,
            "coop",
            &[snapshot.generation as u64, slot as u64],
        );
        for _ in 0..match_cfg.plays {
            let mut play_rng = ChaCha8Rng::from_seed(rng.gen());
            let result = play_match(
                &StrategySpec::Probabilistic(strategy.clone()),
                s0,
                match_cfg.rounds,
                &match_cfg.table,
                &mut play_rng,
            )?;
            coop_total += result.history_a.iter().filter(|&&a| a == Action::C).count();
            move_total += result.history_a.len();
        }
    }
    Ok(TrainSnapshot {
        generation: snapshot.generation,
        min_fitness: snapshot.min_fitness,
        mean_fitness: snapshot.mean_fitness,
        max_fitness: snapshot.max_fitness,
        best_index: snapshot.best_index,
        best: population[snapshot.best_index].clone(),
        mean_coop_rate: coop_total as f64 / move_total as f64,
        population,
    })
}

/// Write a match history CSV: `round,action_a,action_b,pay_a,pay_b`.
pub fn write_history_csv<W: Write>(
    result: &MatchResult,
    table: &PayoffTable,
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "round,action_a,action_b,pay_a,pay_b")?;
    for (round, (&a, &b)) in result.history_a.iter().zip(&result.history_b).enumerate() {
        let (pay_a, pay_b) = table.payoff(a, b);
        writeln!(out, "{},{},{},{},{}", round + 1, a, b, pay_a, pay_b)?;
    }
    Ok(())
}

/// Write the training statistics CSV: the generation-statistics columns plus
/// the population mean cooperation rate.
pub fn write_train_csv<W: Write>(
    snapshots: &[TrainSnapshot],
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(
        out,
        "generation,min_fitness,mean_fitness,max_fitness,best_id,mean_coop_rate"
    )?;
    for snapshot in snapshots {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            snapshot.generation,
            snapshot.min_fitness,
            snapshot.mean_fitness,
            snapshot.max_fitness,
            snapshot.best_index,
            snapshot.mean_coop_rate
        )?;
    }
    Ok(())
}
