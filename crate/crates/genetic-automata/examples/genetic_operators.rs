//! The three genetic operators on automaton chromosomes, and a small
//! evolution run under a hand-picked fitness.
//!
//! ```bash
//! cargo run --example genetic_operators
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use genetic_automata::algebra::{Mode, WeightedAutomaton};
use genetic_automata::cli::random_strategies;
use genetic_automata::genetics::{
    crossover, duplicate, evolve, mutate, ChromosomeView, CrossoverRows, GaConfig, RowSampler,
};

fn show(label: &str, automaton: &WeightedAutomaton<f64>) {
    println!("{label}:");
    for (letter, matrix) in ChromosomeView::new(automaton).loci() {
        let rows: Vec<String> = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| format!("{x:.2}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        println!("  locus {letter}: [{}]", rows.join(" | "));
    }
}

fn main() {
    let a = WeightedAutomaton::new(
        vec!['C', 'D'],
        vec![1.0, 0.0],
        vec![
            vec![vec![1.0, 0.0], vec![1.0, 0.0]],
            vec![vec![0.0, 1.0], vec![0.0, 1.0]],
        ],
        vec![1.0, 0.0],
        Mode::RowStochastic,
    )
    .unwrap();
    let b = WeightedAutomaton::new(
        vec!['C', 'D'],
        vec![1.0, 0.0],
        vec![
            vec![vec![0.5, 0.5], vec![0.25, 0.75]],
            vec![vec![0.75, 0.25], vec![0.5, 0.5]],
        ],
        vec![1.0, 0.0],
        Mode::RowStochastic,
    )
    .unwrap();

    show("parent a", &a);
    show("parent b", &b);

    let clone = duplicate(&a);
    println!("\nduplicate(a) == a: {}", clone == a);

    // Swap row 0 of every letter matrix between the two parents.
    let (child_a, child_b) = crossover(&a, &b, &[0], false).unwrap();
    println!("\nafter crossover on row 0:");
    show("child a", &child_a);
    show("child b", &child_b);

    // One row per letter matrix is resampled on the probability simplex.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mutated = mutate(&child_a, &RowSampler::Simplex, false, &mut rng).unwrap();
    println!("\nafter mutation of child a:");
    show("mutant", &mutated);

    // Evolve a population toward "always cooperate after C": fitness is the
    // total mass the C matrix keeps in state 0.
    let population: Vec<WeightedAutomaton<f64>> = random_strategies(20, 7)
        .unwrap()
        .into_iter()
        .map(|s| s.automaton().clone())
        .collect();
    let cfg = GaConfig {
        population_size: 20,
        generations: 40,
        crossover_rows: CrossoverRows::UniformCount,
        row_sampler: RowSampler::Simplex,
        evolve_entry: false,
        rng_seed: 7,
    };
    let snapshots = evolve(&population, &cfg, |automaton, _| {
        automaton.transition(0).iter().map(|row| row[0]).sum()
    })
    .unwrap();
    println!("\nevolving 20 automata, fitness = mass kept in state 0 after C (max 2):");
    for snapshot in snapshots.iter().step_by(10) {
        println!(
            "  generation {:>3}: min {:.3}  mean {:.3}  max {:.3}",
            snapshot.generation, snapshot.min_fitness, snapshot.mean_fitness, snapshot.max_fitness
        );
    }
    let best = snapshots.last().unwrap().best();
    show("\nbest individual", best);
}
