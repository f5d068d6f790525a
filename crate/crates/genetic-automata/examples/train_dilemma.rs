//! Train probabilistic strategies against a fixed opponent: facing a
//! defector the population learns competition, facing tit-for-tat it learns
//! cooperation.
//!
//! ```bash
//! cargo run --example train_dilemma
//! ```

use genetic_automata::cli::random_strategies;
use genetic_automata::dilemma::{train, MatchConfig, StrategySpec};
use genetic_automata::genetics::GaConfig;

fn run(s0: &StrategySpec, label: &str) {
    let ga = GaConfig {
        population_size: 30,
        generations: 60,
        rng_seed: 11,
        ..GaConfig::default()
    };
    let match_cfg = MatchConfig {
        plays: 5,
        rounds: 30,
        ..MatchConfig::default()
    };
    let per_round = (match_cfg.plays * match_cfg.rounds) as f64;
    let initial = random_strategies(ga.population_size, ga.rng_seed).unwrap();
    let snapshots = train(s0, &initial, &ga, &match_cfg).unwrap();

    println!("training vs {label}:");
    println!("{:>12} {:>18} {:>16}", "generation", "best payoff/round", "mean coop rate");
    for snapshot in snapshots.iter().step_by(15) {
        println!(
            "{:>12} {:>18.3} {:>16.3}",
            snapshot.generation,
            snapshot.max_fitness / per_round,
            snapshot.mean_coop_rate
        );
    }
    let best = snapshots.last().unwrap().best.params();
    println!(
        "final best parameters: p1..p6 = {:.2}, {:.2}, {:.2}, {:.2}, {:.2}, {:.2}\n",
        best[0], best[1], best[2], best[3], best[4], best[5]
    );
}

fn main() {
    run(&StrategySpec::AlwaysD, "always-betray (cooperation dies out)");
    run(&StrategySpec::TitForTat, "tit-for-tat (cooperation takes over)");
}
