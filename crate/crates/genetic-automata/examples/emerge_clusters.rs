//! Behavior clusters emerging on a grid of agents: neighborhood fitness
//! rewards behavioral proximity, so evolution aggregates the population.
//!
//! ```bash
//! cargo run --example emerge_clusters
//! ```

use std::path::PathBuf;

use genetic_automata::algebra::NormSpec;
use genetic_automata::cli::{grid_agents, EmergeRunConfig, NeighborhoodChoice};
use genetic_automata::emergence::{emerge, EmergenceConfig, NeighborhoodSpec};
use genetic_automata::genetics::GaConfig;

fn main() {
    let run_cfg = EmergeRunConfig {
        agents: 20,
        grid_w: 5,
        grid_h: 4,
        neighborhood: NeighborhoodChoice::Radius(1.5),
        tau: 0.1,
        gens: 200,
        norm_alpha: 2.0,
        task_weight: 1.0,
        seed: 3,
        out_dir: PathBuf::new(),
    };
    let agents = grid_agents(&run_cfg).unwrap();
    let cfg = EmergenceConfig {
        neighborhood: NeighborhoodSpec::GridRadius { radius: 1.5 },
        ga: GaConfig {
            population_size: run_cfg.agents,
            generations: run_cfg.gens,
            rng_seed: run_cfg.seed,
            ..GaConfig::default()
        },
        norm: NormSpec::euclidean(),
        tau: run_cfg.tau,
        task: None,
        task_weight: 1.0,
    };

    let outcome = emerge(agents, &cfg).unwrap();
    println!("20 agents on a 5x4 grid, radius-1.5 neighborhoods, tau = 0.1:\n");
    println!(
        "{:>12} {:>20} {:>10} {:>10}",
        "generation", "mean neighbor dist", "clusters", "infinite"
    );
    for snapshot in outcome.snapshots.iter().step_by(25) {
        println!(
            "{:>12} {:>20.4} {:>10} {:>10}",
            snapshot.generation,
            snapshot.mean_neighborhood_distance,
            snapshot.clusters.len(),
            snapshot.count_infinite
        );
    }

    println!("\nfinal clusters (agent ids):");
    for (index, members) in outcome.final_clusters.iter().enumerate() {
        let ids: Vec<String> = members.iter().map(|id| id.to_string()).collect();
        println!("  cluster {index}: {}", ids.join(" "));
    }
}
