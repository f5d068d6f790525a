//! Behavior-driven agent clustering.
//!
//! Each agent carries an automaton behavior and a fixed position. The
//! evaluation matrix of a behavior sums, over cycle-free paths between state
//! pairs, the products of letter-collapsed transition weights, gated and
//! scaled by the entry and exit costs. The norm of the difference of two
//! evaluations is a semi-distance (it can vanish between distinct behaviors:
//! self-loops lie on no cycle-free path). Neighborhood fitness rewards being
//! behaviorally close to one's neighbors, so evolving behaviors under it
//! aggregates agents into clusters.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, NormSpec, Semiring, WeightedAutomaton};
use crate::genetics::{reproduce_pair, GaConfig, GeneticsError};
use crate::stream::derive_stream;

/// Path-enumeration guard for [`evaluate`].
pub const MAX_EVALUATE_STATES: usize = 12;
/// Guard for the explicit-enumeration oracle.
pub const MAX_BRUTEFORCE_STATES: usize = 8;

#[derive(Debug, Error)]
pub enum EmergenceError {
    #[error("{states} states exceed the {limit}-state evaluation guard")]
    TooManyStates { states: usize, limit: usize },
    #[error("incompatible shapes: {detail}")]
    IncompatibleShapes { detail: String },
    #[error("empty neighborhood for agent {id}")]
    EmptyNeighborhood { id: AgentId },
    #[error("invalid population: {detail}")]
    InvalidPopulation { detail: String },
    #[error("invalid config: {detail}")]
    InvalidConfig { detail: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Genetics(#[from] GeneticsError),
}

/// Identity of an agent, unique within a population.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub usize);

impl std::fmt::Display for AgentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position on the 2-D integer grid. Unused (but carried) when the
/// neighborhood comes from an explicit linkage graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub fn distance(&self, other: &GridPoint) -> f64 {
        let dx = (self.x - other.x) as f64;
        let dy = (self.y - other.y) as f64;
        (dx * dx + dy * dy).sqrt()
    }
}

/// An entity that perceives and acts: an automaton behavior plus an identity
/// and a position used for neighborhood construction. Positions stay fixed
/// across generations; only behaviors evolve.
#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub id: AgentId,
    pub position: GridPoint,
    pub behavior: WeightedAutomaton<f64>,
}

/// The acyclic-successful-path evaluation of a behavior: cell `(i, j)` is
/// `entry(i) * (sum over cycle-free paths i -> j of collapsed weights) *
/// exit(j)`, where the collapsed matrix sums the per-letter matrices and the
/// length-0 path contributes weight one to the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationMatrix {
    n: usize,
    cells: Vec<f64>,
}

impl EvaluationMatrix {
    pub fn state_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.n + j]
    }

    /// Row-major flattening.
    pub fn flat(&self) -> &[f64] {
        &self.cells
    }
}

fn collapsed_matrix<K: Semiring>(behavior: &WeightedAutomaton<K>) -> Vec<Vec<f64>> {
    let n = behavior.state_count();
    let mut collapsed = vec![vec![0.0; n]; n];
    for matrix in behavior.transitions() {
        for (i, row) in matrix.iter().enumerate() {
            for (j, value) in row.iter().enumerate() {
                collapsed[i][j] += value.to_real();
            }
        }
    }
    collapsed
}

/// Evaluation matrix of an agent's behavior via dynamic programming over
/// visited-state subsets (simple paths never revisit a state, so self-loops
/// contribute nothing).
pub fn evaluate(agent: &Agent) -> Result<EvaluationMatrix, EmergenceError> {
    evaluate_behavior(&agent.behavior)
}

/// [`evaluate`] on a bare behavior automaton.
pub fn evaluate_behavior<K: Semiring>(
    behavior: &WeightedAutomaton<K>,
) -> Result<EvaluationMatrix, EmergenceError> {
    let n = behavior.state_count();
    if n > MAX_EVALUATE_STATES {
        return Err(EmergenceError::TooManyStates {
            states: n,
            limit: MAX_EVALUATE_STATES,
        });
    }
    let collapsed = collapsed_matrix(behavior);
    let entry: Vec<f64> = behavior.entry().iter().map(Semiring::to_real).collect();
    let exit: Vec<f64> = behavior.exit().iter().map(Semiring::to_real).collect();

    let mut cells = vec![0.0; n * n];
    for source in 0..n {
        // path_sum[mask][v]: total weight of simple paths source -> v whose
        // visited set is exactly mask.
        let mut path_sum = vec![vec![0.0; n]; 1 << n];
        path_sum[1 << source][source] = 1.0;
        for mask in 0..(1usize << n) {
            if mask & (1 << source) == 0 {
                continue;
            }
            for v in 0..n {
                let weight = path_sum[mask][v];
                if weight == 0.0 || mask & (1 << v) == 0 {
                    continue;
                }
                for w in 0..n {
                    if mask & (1 << w) == 0 {
                        path_sum[mask | (1 << w)][w] += weight * collapsed[v][w];
                    }
                }
            }
        }
        for target in 0..n {
            let total: f64 = (0..(1usize << n)).map(|mask| path_sum[mask][target]).sum();
            cells[source * n + target] = entry[source] * total * exit[target];
        }
    }
    Ok(EvaluationMatrix { n, cells })
}

/// Independent oracle for [`evaluate`]: explicitly generates every state
/// sequence without repeats, filters by endpoints, and sums the products.
pub fn evaluate_bruteforce<K: Semiring>(
    behavior: &WeightedAutomaton<K>,
) -> Result<EvaluationMatrix, EmergenceError> {
    let n = behavior.state_count();
    if n > MAX_BRUTEFORCE_STATES {
        return Err(EmergenceError::TooManyStates {
            states: n,
            limit: MAX_BRUTEFORCE_STATES,
        });
    }
    let collapsed = collapsed_matrix(behavior);
    let entry: Vec<f64> = behavior.entry().iter().map(Semiring::to_real).collect();
    let exit: Vec<f64> = behavior.exit().iter().map(Semiring::to_real).collect();

    fn extend(
        collapsed: &[Vec<f64>],
        path: &mut Vec<usize>,
        weight: f64,
        sums: &mut [f64],
        n: usize,
    ) {
        let last = *path.last().unwrap();
        sums[path[0] * n + last] += weight;
        for next in 0..n {
            if path.contains(&next) {
                continue;
            }
            path.push(next);
            extend(collapsed, path, weight * collapsed[last][next], sums, n);
            path.pop();
        }
    }

    let mut sums = vec![0.0; n * n];
    for source in 0..n {
        let mut path = vec![source];
        extend(&collapsed, &mut path, 1.0, &mut sums, n);
    }
    let mut cells = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            cells[i * n + j] = entry[i] * sums[i * n + j] * exit[j];
        }
    }
    Ok(EvaluationMatrix { n, cells })
}

/// Norm of the difference of two evaluation matrices, flattened row-major.
pub fn semi_distance_evals(
    a: &EvaluationMatrix,
    b: &EvaluationMatrix,
    norm: &NormSpec,
) -> Result<f64, EmergenceError> {
    if a.state_count() != b.state_count() {
        return Err(EmergenceError::IncompatibleShapes {
            detail: format!("{} vs {} states", a.state_count(), b.state_count()),
        });
    }
    let diff: Vec<f64> = a.flat().iter().zip(b.flat()).map(|(x, y)| x - y).collect();
    Ok(norm.apply(&diff))
}

/// Behavior semi-distance between two agents. Symmetric and triangular but
/// not definite: distinct behaviors can be at distance zero.
pub fn semi_distance(x: &Agent, y: &Agent, norm: &NormSpec) -> Result<f64, EmergenceError> {
    semi_distance_evals(&evaluate(x)?, &evaluate(y)?, norm)
}

/// Fitness of an agent given its neighborhood: infinite when every neighbor
/// is at semi-distance zero, otherwise the neighbor count over the sum of
/// squared semi-distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AgentFitness {
    Finite(f64),
    Infinite,
}

impl AgentFitness {
    /// Value usable for top-2-of-4 selection: infinite sorts above every
    /// finite value.
    pub fn selection_value(&self) -> f64 {
        match self {
            AgentFitness::Finite(v) => *v,
            AgentFitness::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, AgentFitness::Infinite)
    }
}

/// `card(V_x) / sum of d(x, y)^2 over neighbors y`, or `Infinite` when the
/// sum vanishes.
pub fn agent_fitness(
    x: &Agent,
    neighbors: &[&Agent],
    norm: &NormSpec,
) -> Result<AgentFitness, EmergenceError> {
    if neighbors.is_empty() {
        return Err(EmergenceError::EmptyNeighborhood { id: x.id });
    }
    let x_eval = evaluate(x)?;
    let evals: Vec<EvaluationMatrix> = neighbors
        .iter()
        .map(|y| evaluate(y))
        .collect::<Result<_, _>>()?;
    fitness_from_evals(&x_eval, &evals, norm)
}

fn fitness_from_evals(
    x_eval: &EvaluationMatrix,
    neighbor_evals: &[EvaluationMatrix],
    norm: &NormSpec,
) -> Result<AgentFitness, EmergenceError> {
    let mut sum = 0.0;
    for eval in neighbor_evals {
        let d = semi_distance_evals(x_eval, eval, norm)?;
        sum += d * d;
    }
    if sum == 0.0 {
        Ok(AgentFitness::Infinite)
    } else {
        Ok(AgentFitness::Finite(neighbor_evals.len() as f64 / sum))
    }
}

/// How each agent's neighborhood is built. A neighborhood never contains the
/// agent itself and must be nonempty for every agent.
#[derive(Debug, Clone, PartialEq)]
pub enum NeighborhoodSpec {
    /// Every other agent within Euclidean distance `radius` of the position.
    GridRadius { radius: f64 },
    /// Explicit linkage network keyed by agent id.
    Graph {
        adjacency: BTreeMap<AgentId, Vec<AgentId>>,
    },
    /// The `k` nearest other agents by position, ties broken by id.
    KNearest { k: usize },
}

/// Neighbor id lists per agent, deterministic and sorted by id.
pub fn build_neighborhoods(
    agents: &[Agent],
    spec: &NeighborhoodSpec,
) -> Result<BTreeMap<AgentId, Vec<AgentId>>, EmergenceError> {
    let mut ids = BTreeSet::new();
    for agent in agents {
        if !ids.insert(agent.id) {
            return Err(EmergenceError::InvalidPopulation {
                detail: format!("duplicate agent id {}", agent.id),
            });
        }
    }
    let mut neighborhoods = BTreeMap::new();
    for agent in agents {
        let mut neighbors: Vec<AgentId> = match spec {
            NeighborhoodSpec::GridRadius { radius } => agents
                .iter()
                .filter(|other| {
                    other.id != agent.id && agent.position.distance(&other.position) <= *radius
                })
                .map(|other| other.id)
                .collect(),
            NeighborhoodSpec::Graph { adjacency } => {
                let listed = adjacency.get(&agent.id).cloned().unwrap_or_default();
                for id in &listed {
                    if *id == agent.id {
                        return Err(EmergenceError::InvalidPopulation {
                            detail: format!("agent {id} listed as its own neighbor"),
                        });
                    }
                    if !ids.contains(id) {
                        return Err(EmergenceError::InvalidPopulation {
                            detail: format!("neighbor {id} of {} does not exist", agent.id),
                        });
                    }
                }
                listed
            }
            NeighborhoodSpec::KNearest { k } => {
                let mut candidates: Vec<(f64, AgentId)> = agents
                    .iter()
                    .filter(|other| other.id != agent.id)
                    .map(|other| (agent.position.distance(&other.position), other.id))
                    .collect();
                candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
                candidates.into_iter().take(*k).map(|(_, id)| id).collect()
            }
        };
        neighbors.sort();
        if neighbors.is_empty() {
            return Err(EmergenceError::EmptyNeighborhood { id: agent.id });
        }
        neighborhoods.insert(agent.id, neighbors);
    }
    Ok(neighborhoods)
}

/// Agent-id groups: connected components of the graph with an edge where the
/// semi-distance is at most `tau`. Groups and members are ordered by id.
pub type ClusterReport = Vec<Vec<AgentId>>;

/// Cluster agents by thresholded semi-distance.
pub fn detect_clusters(
    agents: &[Agent],
    tau: f64,
    norm: &NormSpec,
) -> Result<ClusterReport, EmergenceError> {
    let evals: Vec<EvaluationMatrix> = agents
        .iter()
        .map(evaluate)
        .collect::<Result<_, _>>()?;
    detect_clusters_from_evals(agents, &evals, tau, norm)
}

fn detect_clusters_from_evals(
    agents: &[Agent],
    evals: &[EvaluationMatrix],
    tau: f64,
    norm: &NormSpec,
) -> Result<ClusterReport, EmergenceError> {
    if tau <= 0.0 {
        return Err(EmergenceError::InvalidConfig {
            detail: format!("tau must be positive, got {tau}"),
        });
    }
    let count = agents.len();
    let mut component = vec![usize::MAX; count];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for start in 0..count {
        if component[start] != usize::MAX {
            continue;
        }
        let label = clusters.len();
        let mut members = vec![start];
        component[start] = label;
        let mut frontier = vec![start];
        while let Some(current) = frontier.pop() {
            for candidate in 0..count {
                if component[candidate] != usize::MAX {
                    continue;
                }
                let d = semi_distance_evals(&evals[current], &evals[candidate], norm)?;
                if d <= tau {
                    component[candidate] = label;
                    members.push(candidate);
                    frontier.push(candidate);
                }
            }
        }
        members.sort();
        clusters.push(members);
    }
    let mut report: ClusterReport = clusters
        .into_iter()
        .map(|members| members.into_iter().map(|index| agents[index].id).collect())
        .collect();
    report.sort_by_key(|group: &Vec<AgentId>| group[0]);
    Ok(report)
}

/// Per-generation normalized combination of a base and a task fitness:
/// `w * normalized(base) + (1 - w) * normalized(task)`. Normalization maps
/// `Infinite` to the batch's finite maximum plus one, then rescales the batch
/// to [0, 1] (a constant batch maps to all zeros). `w = 1` reproduces the
/// base ranking, `w = 0` the task ranking.
pub fn composed_fitness(base: &[AgentFitness], task: &[AgentFitness], weight: f64) -> Vec<f64> {
    let normalize = |values: &[AgentFitness]| -> Vec<f64> {
        let finite_max = values
            .iter()
            .filter_map(|v| match v {
                AgentFitness::Finite(x) => Some(*x),
                AgentFitness::Infinite => None,
            })
            .fold(0.0f64, f64::max);
        let mapped: Vec<f64> = values
            .iter()
            .map(|v| match v {
                AgentFitness::Finite(x) => *x,
                AgentFitness::Infinite => finite_max + 1.0,
            })
            .collect();
        let min = mapped.iter().copied().fold(f64::INFINITY, f64::min);
        let max = mapped.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max - min == 0.0 {
            return vec![0.0; mapped.len()];
        }
        mapped.into_iter().map(|x| (x - min) / (max - min)).collect()
    };
    let base_normalized = normalize(base);
    let task_normalized = normalize(task);
    base_normalized
        .into_iter()
        .zip(task_normalized)
        .map(|(b, t)| weight * b + (1.0 - weight) * t)
        .collect()
}

/// Problem-specific fitness hook composed with the neighborhood fitness.
pub type TaskFitness = Box<dyn Fn(&Agent) -> AgentFitness>;

/// Configuration of an emergence run.
pub struct EmergenceConfig {
    pub neighborhood: NeighborhoodSpec,
    pub ga: GaConfig,
    pub norm: NormSpec,
    /// Cluster threshold for the per-generation reports.
    pub tau: f64,
    /// Optional task fitness composed with the neighborhood fitness.
    pub task: Option<TaskFitness>,
    /// Weight of the neighborhood fitness in the composition; 1 means
    /// neighborhood only. Ignored when `task` is `None`.
    pub task_weight: f64,
}

/// One observed generation: statistics are measured before the genetic step,
/// so generation 0 describes the initial population.
#[derive(Debug, Clone, PartialEq)]
pub struct EmergenceSnapshot {
    pub generation: usize,
    /// Mean semi-distance over ordered (agent, neighbor) pairs.
    pub mean_neighborhood_distance: f64,
    pub clusters: ClusterReport,
    /// Mean of the finite fitness values; `None` when every agent is at
    /// infinite fitness.
    pub mean_fitness_finite: Option<f64>,
    pub count_infinite: usize,
    pub behaviors: Vec<WeightedAutomaton<f64>>,
}

/// Result of an emergence run.
pub struct EmergeOutcome {
    pub snapshots: Vec<EmergenceSnapshot>,
    pub final_clusters: ClusterReport,
    pub agents: Vec<Agent>,
}

/// Run the emergence loop: per generation, evaluate all agents, measure
/// neighborhood distances / fitness / clusters, then apply one
/// reproduction-and-selection step to the behaviors. Agents keep their id and
/// position; candidate children are evaluated at the slot of the parent they
/// would replace, against the frozen evaluations of the current generation,
/// and each pair's two survivors are written back to the pair's slots (best
/// first).
pub fn emerge(mut agents: Vec<Agent>, cfg: &EmergenceConfig) -> Result<EmergeOutcome, EmergenceError> {
    if !(cfg.task_weight.is_finite() && (0.0..=1.0).contains(&cfg.task_weight)) {
        return Err(EmergenceError::InvalidConfig {
            detail: format!("task weight {} outside [0, 1]", cfg.task_weight),
        });
    }
    if agents.is_empty() || !agents.len().is_multiple_of(2) {
        return Err(EmergenceError::InvalidPopulation {
            detail: format!("population of {} agents must be even and nonempty", agents.len()),
        });
    }
    if agents.len() != cfg.ga.population_size {
        return Err(EmergenceError::InvalidPopulation {
            detail: format!(
                "{} agents but GA population size {}",
                agents.len(),
                cfg.ga.population_size
            ),
        });
    }
    cfg.ga.validate()?;
    let shape = (
        agents[0].behavior.alphabet().to_vec(),
        agents[0].behavior.state_count(),
    );
    for agent in &agents {
        if agent.behavior.alphabet() != shape.0 || agent.behavior.state_count() != shape.1 {
            return Err(EmergenceError::InvalidPopulation {
                detail: format!("agent {} behavior shape differs", agent.id),
            });
        }
    }
    // Positions never change, so neighborhoods are built once.
    let neighborhoods = build_neighborhoods(&agents, &cfg.neighborhood)?;
    let slot_of: BTreeMap<AgentId, usize> = agents
        .iter()
        .enumerate()
        .map(|(slot, agent)| (agent.id, slot))
        .collect();
    let neighbor_slots: Vec<Vec<usize>> = agents
        .iter()
        .map(|agent| neighborhoods[&agent.id].iter().map(|id| slot_of[id]).collect())
        .collect();

    let mut snapshots = Vec::with_capacity(cfg.ga.generations + 1);
    for generation in 0..=cfg.ga.generations {
        let evals: Vec<EvaluationMatrix> = agents
            .iter()
            .map(evaluate)
            .collect::<Result<_, _>>()?;

        // observed statistics
        let mut distance_sum = 0.0;
        let mut distance_count = 0usize;
        for (slot, neighbors) in neighbor_slots.iter().enumerate() {
            for &neighbor in neighbors {
                distance_sum += semi_distance_evals(&evals[slot], &evals[neighbor], &cfg.norm)?;
                distance_count += 1;
            }
        }
        let base_fitness: Vec<AgentFitness> = (0..agents.len())
            .map(|slot| {
                let neighbor_evals: Vec<EvaluationMatrix> = neighbor_slots[slot]
                    .iter()
                    .map(|&s| evals[s].clone())
                    .collect();
                fitness_from_evals(&evals[slot], &neighbor_evals, &cfg.norm)
            })
            .collect::<Result<_, _>>()?;
        let count_infinite = base_fitness.iter().filter(|f| f.is_infinite()).count();
        let finite: Vec<f64> = base_fitness
            .iter()
            .filter_map(|f| match f {
                AgentFitness::Finite(v) => Some(*v),
                AgentFitness::Infinite => None,
            })
            .collect();
        let mean_fitness_finite = if finite.is_empty() {
            None
        } else {
            Some(finite.iter().sum::<f64>() / finite.len() as f64)
        };
        snapshots.push(EmergenceSnapshot {
            generation,
            mean_neighborhood_distance: distance_sum / distance_count.max(1) as f64,
            clusters: detect_clusters_from_evals(&agents, &evals, cfg.tau, &cfg.norm)?,
            mean_fitness_finite,
            count_infinite,
            behaviors: agents.iter().map(|a| a.behavior.clone()).collect(),
        });
        if generation == cfg.ga.generations {
            break;
        }

        // genetic step (generation index in streams is the one being formed)
        let step = generation as u64 + 1;
        let mut order: Vec<usize> = (0..agents.len()).collect();
        {
            use rand::seq::SliceRandom;
            order.shuffle(&mut derive_stream(cfg.ga.rng_seed, "pairing", &[step]));
        }
        let mut next_behaviors: Vec<WeightedAutomaton<f64>> =
            agents.iter().map(|a| a.behavior.clone()).collect();
        for (pair_index, pair) in order.chunks(2).enumerate() {
            let (i, j) = (pair[0], pair[1]);
            let mut pair_rng: ChaCha8Rng =
                derive_stream(cfg.ga.rng_seed, "pair", &[step, pair_index as u64]);
            let (child_a, child_b) =
                reproduce_pair(&agents[i].behavior, &agents[j].behavior, &cfg.ga, &mut pair_rng)?;

            let candidate_fitness = |behavior: &WeightedAutomaton<f64>,
                                     slot: usize|
             -> Result<AgentFitness, EmergenceError> {
                let eval = evaluate_behavior(behavior)?;
                let neighbor_evals: Vec<EvaluationMatrix> = neighbor_slots[slot]
                    .iter()
                    .map(|&s| evals[s].clone())
                    .collect();
                fitness_from_evals(&eval, &neighbor_evals, &cfg.norm)
            };
            let quad_base = [
                base_fitness[i],
                base_fitness[j],
                candidate_fitness(&child_a, i)?,
                candidate_fitness(&child_b, j)?,
            ];
            let quad_values: Vec<f64> = match &cfg.task {
                None => quad_base.iter().map(AgentFitness::selection_value).collect(),
                Some(task) => {
                    let candidate_agent = |slot: usize, behavior: &WeightedAutomaton<f64>| Agent {
                        id: agents[slot].id,
                        position: agents[slot].position,
                        behavior: behavior.clone(),
                    };
                    let quad_task = [
                        task(&agents[i]),
                        task(&agents[j]),
                        task(&candidate_agent(i, &child_a)),
                        task(&candidate_agent(j, &child_b)),
                    ];
                    composed_fitness(&quad_base, &quad_task, cfg.task_weight)
                }
            };
            let quad = [
                &agents[i].behavior,
                &agents[j].behavior,
                &child_a,
                &child_b,
            ];
            let mut rank = [0usize, 1, 2, 3];
            rank.sort_by(|&a, &b| quad_values[b].partial_cmp(&quad_values[a]).unwrap());
            next_behaviors[i] = quad[rank[0]].clone();
            next_behaviors[j] = quad[rank[1]].clone();
        }
        for (agent, behavior) in agents.iter_mut().zip(next_behaviors) {
            agent.behavior = behavior;
        }
    }

    let final_clusters = snapshots.last().unwrap().clusters.clone();
    Ok(EmergeOutcome {
        snapshots,
        final_clusters,
        agents,
    })
}

/// Write the trend CSV:
/// `generation,mean_within_neighborhood_distance,num_clusters,mean_fitness_finite,count_infinite`.
pub fn write_trend_csv<W: Write>(
    snapshots: &[EmergenceSnapshot],
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(
        out,
        "generation,mean_within_neighborhood_distance,num_clusters,mean_fitness_finite,count_infinite"
    )?;
    for snapshot in snapshots {
        writeln!(
            out,
            "{},{},{},{},{}",
            snapshot.generation,
            snapshot.mean_neighborhood_distance,
            snapshot.clusters.len(),
            snapshot
                .mean_fitness_finite
                .map(|v| v.to_string())
                .unwrap_or_else(|| "nan".into()),
            snapshot.count_infinite
        )?;
    }
    Ok(())
}

/// Write the per-generation cluster membership CSV:
/// `generation,cluster_id,agent_id`.
pub fn write_clusters_csv<W: Write>(
    snapshots: &[EmergenceSnapshot],
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "generation,cluster_id,agent_id")?;
    for snapshot in snapshots {
        for (cluster_id, members) in snapshot.clusters.iter().enumerate() {
            for member in members {
                writeln!(out, "{},{},{}", snapshot.generation, cluster_id, member)?;
            }
        }
    }
    Ok(())
}
