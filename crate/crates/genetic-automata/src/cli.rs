//! Command-line entry point: argument/config-file parsing, deterministic
//! seeding, dispatch, and CSV/report emission for all experiments.
//!
//! Subcommands: `dist` (distance between two automaton files), `play` (one
//! match), `evolve` (train strategies against a fixed opponent), `emerge`
//! (behavior clustering on a grid or graph), `eval` (evaluation matrix of an
//! automaton file). Exit codes: 0 success, 1 validation error, 2 runtime
//! error. Unseeded runs use seed 0, so they are reproducible.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::Rng;
use thiserror::Error;

use crate::algebra::{automaton_distance, text, Mode, NormSpec, WeightedAutomaton};
use crate::dilemma::{
    self, MatchConfig, PayoffTable, ProbabilisticStrategy, StrategySpec,
};
use crate::emergence::{
    self, Agent, AgentId, EmergenceConfig, GridPoint, NeighborhoodSpec,
};
use crate::genetics::{CrossoverRows, GaConfig, RowSampler};
pub use crate::stream::derive_stream;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("missing required key `{key}`")]
    MissingRequired { key: String },
    #[error("line {line}: {detail}")]
    ParseError { line: usize, detail: String },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// 1 for validation problems, 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Runtime(_) => 2,
            _ => 1,
        }
    }
}

fn input_error(error: impl std::fmt::Display) -> CliError {
    CliError::Input(error.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "genauto", version, about = "Automata with multiplicities: distances, dilemma matches, genetic training, and behavior-cluster emergence")]
struct Cli {
    /// Echo the fully resolved configuration and exit.
    #[arg(long, global = true)]
    print_config: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficient distance between two automaton files.
    Dist(DistArgs),
    /// Play one match and optionally write its history CSV.
    Play(PlayArgs),
    /// Evolve probabilistic strategies against a fixed opponent.
    Evolve(EvolveArgs),
    /// Run the behavior-cluster emergence experiment.
    Emerge(EmergeArgs),
    /// Print the evaluation matrix of an automaton file.
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
struct DistArgs {
    /// First automaton file.
    #[arg(long)]
    a: PathBuf,
    /// Second automaton file.
    #[arg(long)]
    b: PathBuf,
    /// Hölder exponent.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Use the max norm instead of a Hölder norm.
    #[arg(long)]
    max: bool,
}

#[derive(Args, Debug)]
struct PlayArgs {
    /// First strategy: tft | vindictive | allc | alld | prob:p1,..,p6 | file:<path>.
    #[arg(long)]
    a: String,
    /// Second strategy, same syntax.
    #[arg(long)]
    b: String,
    #[arg(long, default_value_t = 10)]
    rounds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Payoff table file, or `default` for the standard table.
    #[arg(long, default_value = "default")]
    table: String,
    /// Write the match history CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    /// Fixed opponent strategy (same syntax as `play`).
    #[arg(long)]
    s0: String,
    /// Population size (even).
    #[arg(long, default_value_t = 50)]
    pop: usize,
    #[arg(long, default_value_t = 100)]
    gens: usize,
    /// Matches per fitness evaluation.
    #[arg(long, default_value_t = 10)]
    plays: usize,
    /// Rounds per match.
    #[arg(long, default_value_t = 50)]
    rounds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Payoff table file, or `default`.
    #[arg(long, default_value = "default")]
    table: String,
    /// Training statistics CSV.
    #[arg(long)]
    out: PathBuf,
    /// Dump the best automaton every N generations (0 = never).
    #[arg(long, default_value_t = 0)]
    dump_every: usize,
}

#[derive(Args, Debug)]
struct EmergeArgs {
    /// Experiment config file.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for trend.csv and clusters.csv.
    #[arg(long)]
    out_dir: PathBuf,
    /// Override the config file's `agents`.
    #[arg(long)]
    agents: Option<usize>,
    /// Override `grid_w`.
    #[arg(long)]
    grid_w: Option<i64>,
    /// Override `grid_h`.
    #[arg(long)]
    grid_h: Option<i64>,
    /// Override `neighborhood` (radius:<r> | knearest:<k> | graph:<path>).
    #[arg(long)]
    neighborhood: Option<String>,
    /// Override `tau`.
    #[arg(long)]
    tau: Option<f64>,
    /// Override `gens`.
    #[arg(long)]
    gens: Option<usize>,
    /// Override `norm_alpha`.
    #[arg(long)]
    norm_alpha: Option<f64>,
    /// Override `task_weight`.
    #[arg(long)]
    task_weight: Option<f64>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Automaton file to evaluate.
    #[arg(long)]
    agent: PathBuf,
}

/// Payoff table source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableChoice {
    Default,
    File(PathBuf),
}

impl TableChoice {
    fn parse(raw: &str) -> Result<Self, CliError> {
        if raw == "default" {
            Ok(TableChoice::Default)
        } else {
            let path = PathBuf::from(raw);
            require_file(&path)?;
            Ok(TableChoice::File(path))
        }
    }

    fn load(&self) -> Result<PayoffTable, CliError> {
        match self {
            TableChoice::Default => Ok(PayoffTable::default()),
            TableChoice::File(path) => {
                let text = fs::read_to_string(path).map_err(input_error)?;
                PayoffTable::parse(&text).map_err(input_error)
            }
        }
    }

    fn echo(&self) -> String {
        match self {
            TableChoice::Default => "default".into(),
            TableChoice::File(path) => path.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NeighborhoodChoice {
    Radius(f64),
    KNearest(usize),
    Graph(PathBuf),
}

impl NeighborhoodChoice {
    fn parse(raw: &str, base_dir: &Path) -> Result<Self, CliError> {
        if let Some(radius) = raw.strip_prefix("radius:") {
            let radius: f64 = radius
                .parse()
                .map_err(|_| CliError::Input(format!("bad radius `{radius}`")))?;
            return Ok(NeighborhoodChoice::Radius(radius));
        }
        if let Some(k) = raw.strip_prefix("knearest:") {
            let k: usize = k
                .parse()
                .map_err(|_| CliError::Input(format!("bad neighbor count `{k}`")))?;
            return Ok(NeighborhoodChoice::KNearest(k));
        }
        if let Some(path) = raw.strip_prefix("graph:") {
            let resolved = base_dir.join(path);
            require_file(&resolved)?;
            return Ok(NeighborhoodChoice::Graph(resolved));
        }
        Err(CliError::Input(format!(
            "bad neighborhood `{raw}`, expected radius:<r> | knearest:<k> | graph:<path>"
        )))
    }

    fn echo(&self) -> String {
        match self {
            NeighborhoodChoice::Radius(r) => format!("radius:{r}"),
            NeighborhoodChoice::KNearest(k) => format!("knearest:{k}"),
            NeighborhoodChoice::Graph(path) => format!("graph:{}", path.display()),
        }
    }
}

/// Fully resolved run configuration of one subcommand invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Dist {
        a: PathBuf,
        b: PathBuf,
        norm: NormSpec,
    },
    Play {
        a: String,
        b: String,
        rounds: usize,
        seed: u64,
        table: TableChoice,
        out: Option<PathBuf>,
    },
    Evolve {
        s0: String,
        population: usize,
        generations: usize,
        plays: usize,
        rounds: usize,
        seed: u64,
        table: TableChoice,
        out: PathBuf,
        dump_every: usize,
    },
    Emerge(EmergeRunConfig),
    Eval {
        agent: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmergeRunConfig {
    pub agents: usize,
    pub grid_w: i64,
    pub grid_h: i64,
    pub neighborhood: NeighborhoodChoice,
    pub tau: f64,
    pub gens: usize,
    pub norm_alpha: f64,
    pub task_weight: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl RunConfig {
    /// `key = value` lines for `--print-config`.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        let mut line = |key: &str, value: String| {
            let _ = writeln!(out, "{key} = {value}");
        };
        match self {
            RunConfig::Dist { a, b, norm } => {
                line("subcommand", "dist".into());
                line("a", a.display().to_string());
                line("b", b.display().to_string());
                let norm_text = match norm {
                    NormSpec::Holder { alpha } => format!("holder:{alpha}"),
                    NormSpec::Max => "max".into(),
                };
                line("norm", norm_text);
            }
            RunConfig::Play {
                a,
                b,
                rounds,
                seed,
                table,
                out: out_path,
            } => {
                line("subcommand", "play".into());
                line("a", a.clone());
                line("b", b.clone());
                line("rounds", rounds.to_string());
                line("seed", seed.to_string());
                line("table", table.echo());
                if let Some(path) = out_path {
                    line("out", path.display().to_string());
                }
            }
            RunConfig::Evolve {
                s0,
                population,
                generations,
                plays,
                rounds,
                seed,
                table,
                out: out_path,
                dump_every,
            } => {
                line("subcommand", "evolve".into());
                line("s0", s0.clone());
                line("pop", population.to_string());
                line("gens", generations.to_string());
                line("plays", plays.to_string());
                line("rounds", rounds.to_string());
                line("seed", seed.to_string());
                line("table", table.echo());
                line("out", out_path.display().to_string());
                line("dump_every", dump_every.to_string());
            }
            RunConfig::Emerge(cfg) => {
                line("subcommand", "emerge".into());
                line("agents", cfg.agents.to_string());
                line("grid_w", cfg.grid_w.to_string());
                line("grid_h", cfg.grid_h.to_string());
                line("neighborhood", cfg.neighborhood.echo());
                line("tau", cfg.tau.to_string());
                line("gens", cfg.gens.to_string());
                line("norm_alpha", cfg.norm_alpha.to_string());
                line("task_weight", cfg.task_weight.to_string());
                line("seed", cfg.seed.to_string());
                line("out_dir", cfg.out_dir.display().to_string());
            }
            RunConfig::Eval { agent } => {
                line("subcommand", "eval".into());
                line("agent", agent.display().to_string());
            }
        }
        out
    }
}

/// What argument parsing decided.
pub enum ParseOutcome {
    Run {
        config: RunConfig,
        print_config: bool,
    },
    /// `--help` or `--version`: print the message and exit 0.
    Exit { message: String },
}

fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Input(format!("no such file: {}", path.display())))
    }
}

fn validate_strategy_paths(raw: &str) -> Result<(), CliError> {
    if let Some(path) = raw.strip_prefix("file:") {
        require_file(Path::new(path))?;
    }
    Ok(())
}

/// Parse argv (and, for `emerge`, the config file; flags override file
/// values) into a fully resolved [`RunConfig`]. Input paths are checked for
/// existence here, before any computation.
pub fn parse_config<I, T>(argv: I) -> Result<ParseOutcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(error) => {
            return match error.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(ParseOutcome::Exit {
                    message: error.to_string(),
                }),
                _ => Err(CliError::Usage(error.to_string())),
            };
        }
    };
    let config = match cli.command {
        Command::Dist(args) => {
            require_file(&args.a)?;
            require_file(&args.b)?;
            let norm = if args.max {
                NormSpec::Max
            } else {
                NormSpec::holder(args.alpha).map_err(input_error)?
            };
            RunConfig::Dist {
                a: args.a,
                b: args.b,
                norm,
            }
        }
        Command::Play(args) => {
            validate_strategy_paths(&args.a)?;
            validate_strategy_paths(&args.b)?;
            RunConfig::Play {
                a: args.a,
                b: args.b,
                rounds: args.rounds,
                seed: args.seed,
                table: TableChoice::parse(&args.table)?,
                out: args.out,
            }
        }
        Command::Evolve(args) => {
            validate_strategy_paths(&args.s0)?;
            RunConfig::Evolve {
                s0: args.s0,
                population: args.pop,
                generations: args.gens,
                plays: args.plays,
                rounds: args.rounds,
                seed: args.seed,
                table: TableChoice::parse(&args.table)?,
                out: args.out,
                dump_every: args.dump_every,
            }
        }
        Command::Emerge(args) => RunConfig::Emerge(resolve_emerge(&args)?),
        Command::Eval(args) => {
            require_file(&args.agent)?;
            RunConfig::Eval { agent: args.agent }
        }
    };
    Ok(ParseOutcome::Run {
        config,
        print_config: cli.print_config,
    })
}

/// Keys accepted in the emergence config file.
const EMERGE_KEYS: [&str; 8] = [
    "agents",
    "grid_w",
    "grid_h",
    "neighborhood",
    "tau",
    "gens",
    "norm_alpha",
    "task_weight",
];

fn resolve_emerge(args: &EmergeArgs) -> Result<EmergeRunConfig, CliError> {
    require_file(&args.config)?;
    let text = fs::read_to_string(&args.config).map_err(input_error)?;
    let mut file_values: std::collections::BTreeMap<&str, (usize, String)> =
        std::collections::BTreeMap::new();
    for (line_index, raw) in text.lines().enumerate() {
        let line_no = line_index + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(CliError::ParseError {
            line: line_no,
            detail: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        let value = value.trim().to_string();
        let canonical = EMERGE_KEYS
            .iter()
            .find(|&&k| k == key)
            .ok_or(CliError::UnknownKey {
                key: key.to_string(),
                line: line_no,
            })?;
        if file_values.insert(canonical, (line_no, value)).is_some() {
            return Err(CliError::ParseError {
                line: line_no,
                detail: format!("duplicate key `{key}`"),
            });
        }
    }

    fn resolve<V, F>(
        flag: Option<V>,
        file_value: Option<&(usize, String)>,
        parse: F,
    ) -> Result<Option<V>, CliError>
    where
        F: Fn(&str) -> Result<V, String>,
    {
        if let Some(v) = flag {
            return Ok(Some(v));
        }
        match file_value {
            Some((line, raw)) => parse(raw)
                .map(Some)
                .map_err(|detail| CliError::ParseError { line: *line, detail }),
            None => Ok(None),
        }
    }
    let missing = |key: &str| CliError::MissingRequired { key: key.into() };
    let parse_num = |raw: &str| -> Result<f64, String> {
        raw.parse::<f64>().map_err(|_| format!("bad number `{raw}`"))
    };
    let parse_usize =
        |raw: &str| -> Result<usize, String> { raw.parse().map_err(|_| format!("bad integer `{raw}`")) };
    let parse_i64 =
        |raw: &str| -> Result<i64, String> { raw.parse().map_err(|_| format!("bad integer `{raw}`")) };

    let base_dir = args.config.parent().unwrap_or(Path::new(".")).to_path_buf();
    let neighborhood_raw = match &args.neighborhood {
        Some(raw) => Some(raw.clone()),
        None => file_values.get("neighborhood").map(|(_, v)| v.clone()),
    };
    let neighborhood = NeighborhoodChoice::parse(
        &neighborhood_raw.ok_or_else(|| missing("neighborhood"))?,
        &base_dir,
    )?;

    Ok(EmergeRunConfig {
        agents: resolve(args.agents, file_values.get("agents"), parse_usize)?
            .ok_or_else(|| missing("agents"))?,
        grid_w: resolve(args.grid_w, file_values.get("grid_w"), parse_i64)?
            .ok_or_else(|| missing("grid_w"))?,
        grid_h: resolve(args.grid_h, file_values.get("grid_h"), parse_i64)?
            .ok_or_else(|| missing("grid_h"))?,
        neighborhood,
        tau: resolve(args.tau, file_values.get("tau"), parse_num)?
            .ok_or_else(|| missing("tau"))?,
        gens: resolve(args.gens, file_values.get("gens"), parse_usize)?
            .ok_or_else(|| missing("gens"))?,
        norm_alpha: resolve(args.norm_alpha, file_values.get("norm_alpha"), parse_num)?
            .unwrap_or(2.0),
        task_weight: resolve(args.task_weight, file_values.get("task_weight"), parse_num)?
            .unwrap_or(1.0),
        seed: args.seed.unwrap_or(0),
        out_dir: args.out_dir.clone(),
    })
}

/// Execute a resolved configuration. Returns the emitted files (also listed
/// on standard output).
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let emitted = match config {
        RunConfig::Dist { a, b, norm } => {
            let load = |path: &PathBuf| -> Result<WeightedAutomaton<f64>, CliError> {
                let text = fs::read_to_string(path).map_err(input_error)?;
                text::parse_automaton(&text).map_err(input_error)
            };
            let distance = automaton_distance(&load(a)?, &load(b)?, norm).map_err(input_error)?;
            println!("{distance}");
            Vec::new()
        }
        RunConfig::Play {
            a,
            b,
            rounds,
            seed,
            table,
            out,
        } => {
            let spec_a = StrategySpec::parse(a).map_err(input_error)?;
            let spec_b = StrategySpec::parse(b).map_err(input_error)?;
            let table = table.load()?;
            let mut rng = derive_stream(*seed, "match", &[]);
            let result = dilemma::play_match(&spec_a, &spec_b, *rounds, &table, &mut rng)
                .map_err(input_error)?;
            println!("payoff_a = {}", result.total_a);
            println!("payoff_b = {}", result.total_b);
            match out {
                Some(path) => {
                    let mut buffer = Vec::new();
                    dilemma::write_history_csv(&result, &table, &mut buffer)
                        .map_err(|e| CliError::Runtime(e.to_string()))?;
                    write_file(path, &buffer)?;
                    vec![path.clone()]
                }
                None => Vec::new(),
            }
        }
        RunConfig::Evolve {
            s0,
            population,
            generations,
            plays,
            rounds,
            seed,
            table,
            out,
            dump_every,
        } => {
            let s0 = StrategySpec::parse(s0).map_err(input_error)?;
            let table = table.load()?;
            let initial = random_strategies(*population, *seed).map_err(input_error)?;
            let ga = GaConfig {
                population_size: *population,
                generations: *generations,
                crossover_rows: CrossoverRows::UniformCount,
                row_sampler: RowSampler::Simplex,
                evolve_entry: false,
                rng_seed: *seed,
            };
            let match_cfg = MatchConfig {
                plays: *plays,
                rounds: *rounds,
                table,
            };
            let snapshots = dilemma::train(&s0, &initial, &ga, &match_cfg).map_err(input_error)?;
            let mut buffer = Vec::new();
            dilemma::write_train_csv(&snapshots, &mut buffer)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            write_file(out, &buffer)?;
            let mut files = vec![out.clone()];
            if *dump_every > 0 {
                let dir = out.parent().unwrap_or(Path::new("."));
                let last = snapshots.len() - 1;
                for (index, snapshot) in snapshots.iter().enumerate() {
                    if index % dump_every == 0 || index == last {
                        let path = dir.join(format!("best_gen{:04}.wa", snapshot.generation));
                        let contents = text::format_automaton(snapshot.best.automaton());
                        write_file(&path, contents.as_bytes())?;
                        files.push(path);
                    }
                }
            }
            files
        }
        RunConfig::Emerge(cfg) => run_emerge(cfg)?,
        RunConfig::Eval { agent } => {
            let text = fs::read_to_string(agent).map_err(input_error)?;
            let automaton = text::parse_automaton(&text).map_err(input_error)?;
            let eval = emergence::evaluate_behavior(&automaton).map_err(input_error)?;
            let n = eval.state_count();
            for i in 0..n {
                let row: Vec<String> = (0..n).map(|j| eval.get(i, j).to_string()).collect();
                println!("{}", row.join(" "));
            }
            Vec::new()
        }
    };
    for path in &emitted {
        println!("wrote {}", path.display());
    }
    Ok(emitted)
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| CliError::Runtime(e.to_string()))?;
        }
    }
    fs::write(path, contents).map_err(|e| CliError::Runtime(e.to_string()))
}

/// Random probabilistic strategies from the `init` stream of `seed`.
pub fn random_strategies(
    count: usize,
    seed: u64,
) -> Result<Vec<ProbabilisticStrategy>, dilemma::DilemmaError> {
    (0..count)
        .map(|index| {
            let mut rng = derive_stream(seed, "init", &[index as u64]);
            let params: [f64; 6] = std::array::from_fn(|_| rng.gen());
            ProbabilisticStrategy::from_params(params)
        })
        .collect()
}

/// Random two-state behaviors over {C, D} placed row-major on the grid, with
/// the shared designation: uniform entry cost, both states final.
pub fn grid_agents(cfg: &EmergeRunConfig) -> Result<Vec<Agent>, CliError> {
    if cfg.grid_w <= 0 || cfg.grid_h <= 0 {
        return Err(CliError::Input(format!(
            "grid {}x{} must be positive",
            cfg.grid_w, cfg.grid_h
        )));
    }
    if cfg.agents as i64 > cfg.grid_w * cfg.grid_h {
        return Err(CliError::Input(format!(
            "{} agents do not fit a {}x{} grid",
            cfg.agents, cfg.grid_w, cfg.grid_h
        )));
    }
    (0..cfg.agents)
        .map(|index| {
            let mut rng = derive_stream(cfg.seed, "agent", &[index as u64]);
            let mut simplex_row = || {
                let a = 1.0 - rng.gen::<f64>();
                let b = 1.0 - rng.gen::<f64>();
                vec![a / (a + b), b / (a + b)]
            };
            let transitions = vec![
                vec![simplex_row(), simplex_row()],
                vec![simplex_row(), simplex_row()],
            ];
            let behavior = WeightedAutomaton::new(
                vec!['C', 'D'],
                vec![0.5, 0.5],
                transitions,
                vec![1.0, 1.0],
                Mode::RowStochastic,
            )
            .map_err(input_error)?;
            Ok(Agent {
                id: AgentId(index),
                position: GridPoint {
                    x: index as i64 % cfg.grid_w,
                    y: index as i64 / cfg.grid_w,
                },
                behavior,
            })
        })
        .collect()
}

fn parse_graph_file(path: &Path) -> Result<NeighborhoodSpec, CliError> {
    let text = fs::read_to_string(path).map_err(input_error)?;
    let mut adjacency = std::collections::BTreeMap::new();
    for (line_index, raw) in text.lines().enumerate() {
        let line_no = line_index + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (node, neighbors) = line.split_once(':').ok_or(CliError::ParseError {
            line: line_no,
            detail: "expected `<id> : <id> <id> ...`".into(),
        })?;
        let parse_id = |token: &str| -> Result<AgentId, CliError> {
            token
                .trim()
                .parse::<usize>()
                .map(AgentId)
                .map_err(|_| CliError::ParseError {
                    line: line_no,
                    detail: format!("bad agent id `{}`", token.trim()),
                })
        };
        let node = parse_id(node)?;
        let neighbors: Vec<AgentId> = neighbors
            .split_whitespace()
            .map(parse_id)
            .collect::<Result<_, _>>()?;
        if adjacency.insert(node, neighbors).is_some() {
            return Err(CliError::ParseError {
                line: line_no,
                detail: format!("duplicate adjacency for agent {node}"),
            });
        }
    }
    Ok(NeighborhoodSpec::Graph { adjacency })
}

fn run_emerge(cfg: &EmergeRunConfig) -> Result<Vec<PathBuf>, CliError> {
    let agents = grid_agents(cfg)?;
    let neighborhood = match &cfg.neighborhood {
        NeighborhoodChoice::Radius(radius) => NeighborhoodSpec::GridRadius { radius: *radius },
        NeighborhoodChoice::KNearest(k) => NeighborhoodSpec::KNearest { k: *k },
        NeighborhoodChoice::Graph(path) => parse_graph_file(path)?,
    };
    let emergence_cfg = EmergenceConfig {
        neighborhood,
        ga: GaConfig {
            population_size: cfg.agents,
            generations: cfg.gens,
            crossover_rows: CrossoverRows::UniformCount,
            row_sampler: RowSampler::Simplex,
            evolve_entry: false,
            rng_seed: cfg.seed,
        },
        norm: NormSpec::holder(cfg.norm_alpha).map_err(input_error)?,
        tau: cfg.tau,
        task: None,
        task_weight: cfg.task_weight,
    };
    let outcome = emergence::emerge(agents, &emergence_cfg).map_err(input_error)?;

    let trend_path = cfg.out_dir.join("trend.csv");
    let mut buffer = Vec::new();
    emergence::write_trend_csv(&outcome.snapshots, &mut buffer)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    write_file(&trend_path, &buffer)?;

    let clusters_path = cfg.out_dir.join("clusters.csv");
    let mut buffer = Vec::new();
    emergence::write_clusters_csv(&outcome.snapshots, &mut buffer)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    write_file(&clusters_path, &buffer)?;

    Ok(vec![trend_path, clusters_path])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        match parse_config(args)? {
            ParseOutcome::Run { config, .. } => Ok(config),
            ParseOutcome::Exit { .. } => panic!("unexpected help/version"),
        }
    }

    #[test]
    fn play_flags_map_to_config() {
        let config = parse(&[
            "genauto", "play", "--a", "tft", "--b", "alld", "--rounds", "7", "--seed", "3",
        ])
        .unwrap();
        assert_eq!(
            config,
            RunConfig::Play {
                a: "tft".into(),
                b: "alld".into(),
                rounds: 7,
                seed: 3,
                table: TableChoice::Default,
                out: None,
            }
        );
    }

    #[test]
    fn dist_alpha_maps_to_holder() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.wa");
        std::fs::write(&path, "alphabet = a\nstates = 1\nmode = general\nentry = 1\nexit = 1\nmatrix a = 1\n").unwrap();
        let p = path.to_str().unwrap();
        let config = parse(&["genauto", "dist", "--a", p, "--b", p, "--alpha", "3"]).unwrap();
        match config {
            RunConfig::Dist { norm, .. } => assert_eq!(norm, NormSpec::Holder { alpha: 3.0 }),
            other => panic!("unexpected {other:?}"),
        }
        let config = parse(&["genauto", "dist", "--a", p, "--b", p, "--max"]).unwrap();
        match config {
            RunConfig::Dist { norm, .. } => assert_eq!(norm, NormSpec::Max),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_input_file_is_a_validation_error() {
        let error = parse(&["genauto", "dist", "--a", "/nope.wa", "--b", "/nope.wa"]).unwrap_err();
        assert_eq!(error.exit_code(), 1);
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let error = parse(&["genauto", "play", "--a", "tft", "--b", "tft", "--generatons", "5"])
            .unwrap_err();
        assert!(matches!(error, CliError::Usage(_)));
        assert_eq!(error.exit_code(), 1);
    }

    #[test]
    fn help_and_version_exit_cleanly() {
        assert!(matches!(
            parse_config(["genauto", "--help"]).unwrap(),
            ParseOutcome::Exit { .. }
        ));
        assert!(matches!(
            parse_config(["genauto", "--version"]).unwrap(),
            ParseOutcome::Exit { .. }
        ));
    }

    fn write_emerge_config(dir: &Path, body: &str) -> PathBuf {
        let path = dir.join("emerge.cfg");
        std::fs::write(&path, body).unwrap();
        path
    }

    const EMERGE_BODY: &str = "\
agents = 4
grid_w = 2
grid_h = 2
neighborhood = radius:1.5
tau = 0.1
gens = 100
";

    #[test]
    fn emerge_file_keys_resolve_with_flag_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_emerge_config(dir.path(), EMERGE_BODY);
        let p = path.to_str().unwrap();
        let config = parse(&[
            "genauto", "emerge", "--config", p, "--out-dir", "/tmp/out", "--gens", "50",
        ])
        .unwrap();
        match config {
            RunConfig::Emerge(cfg) => {
                assert_eq!(cfg.gens, 50); // flag wins over the file's 100
                assert_eq!(cfg.agents, 4);
                assert_eq!(cfg.tau, 0.1);
                assert_eq!(cfg.norm_alpha, 2.0); // default
                assert_eq!(cfg.task_weight, 1.0); // default
                assert_eq!(cfg.seed, 0); // default
                assert_eq!(cfg.neighborhood, NeighborhoodChoice::Radius(1.5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn emerge_unknown_key_names_the_offender() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_emerge_config(dir.path(), "agents = 4\ngeneratons = 5\n");
        let error = parse(&[
            "genauto",
            "emerge",
            "--config",
            path.to_str().unwrap(),
            "--out-dir",
            "/tmp/out",
        ])
        .unwrap_err();
        match error {
            CliError::UnknownKey { key, line } => {
                assert_eq!(key, "generatons");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn emerge_missing_key_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_emerge_config(dir.path(), "agents = 4\n");
        let error = parse(&[
            "genauto",
            "emerge",
            "--config",
            path.to_str().unwrap(),
            "--out-dir",
            "/tmp/out",
        ])
        .unwrap_err();
        assert!(matches!(error, CliError::MissingRequired { .. }));
    }

    #[test]
    fn print_config_echo_lists_resolved_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_emerge_config(dir.path(), EMERGE_BODY);
        let outcome = parse_config([
            "genauto",
            "--print-config",
            "emerge",
            "--config",
            path.to_str().unwrap(),
            "--out-dir",
            "/tmp/out",
            "--tau",
            "0.25",
        ])
        .unwrap();
        match outcome {
            ParseOutcome::Run {
                config,
                print_config,
            } => {
                assert!(print_config);
                let echo = config.echo();
                assert!(echo.contains("subcommand = emerge"));
                assert!(echo.contains("tau = 0.25"));
                assert!(echo.contains("gens = 100"));
            }
            ParseOutcome::Exit { .. } => panic!("unexpected exit"),
        }
    }

    #[test]
    fn random_strategies_are_deterministic_and_valid() {
        let one = random_strategies(10, 7).unwrap();
        let two = random_strategies(10, 7).unwrap();
        assert_eq!(one, two);
        let other = random_strategies(10, 8).unwrap();
        assert_ne!(one, other);
    }

    #[test]
    fn grid_agents_fit_and_positions_are_row_major() {
        let cfg = EmergeRunConfig {
            agents: 5,
            grid_w: 3,
            grid_h: 2,
            neighborhood: NeighborhoodChoice::Radius(1.5),
            tau: 0.1,
            gens: 1,
            norm_alpha: 2.0,
            task_weight: 1.0,
            seed: 0,
            out_dir: PathBuf::from("/tmp"),
        };
        let agents = grid_agents(&cfg).unwrap();
        assert_eq!(agents.len(), 5);
        assert_eq!(agents[4].position, GridPoint { x: 1, y: 1 });
        let too_many = EmergeRunConfig { agents: 7, ..cfg };
        assert!(grid_agents(&too_many).is_err());
    }

    #[test]
    fn graph_file_parses_adjacency() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.adj");
        std::fs::write(&path, "# pairs\n0 : 1\n1 : 0\n").unwrap();
        match parse_graph_file(&path).unwrap() {
            NeighborhoodSpec::Graph { adjacency } => {
                assert_eq!(adjacency[&AgentId(0)], vec![AgentId(1)]);
                assert_eq!(adjacency[&AgentId(1)], vec![AgentId(0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
        std::fs::write(&path, "0 1\n").unwrap();
        assert!(matches!(
            parse_graph_file(&path),
            Err(CliError::ParseError { line: 1, .. })
        ));
    }
}
