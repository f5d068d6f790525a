//! Coefficient vectorization, norms, and the distance between automata;
//! shrinking coefficient distance shrinks every word weight difference.
//!
//! ```bash
//! cargo run --example distances
//! ```

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use genetic_automata::algebra::{automaton_distance, Mode, NormSpec, WeightedAutomaton};

fn random_automaton(rng: &mut ChaCha8Rng) -> WeightedAutomaton<f64> {
    let coefficients: Vec<f64> = (0..24).map(|_| rng.gen_range(-1.0..1.0)).collect();
    WeightedAutomaton::from_vector(vec!['a', 'b'], 3, &coefficients, Mode::General).unwrap()
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let a = random_automaton(&mut rng);
    let b = random_automaton(&mut rng);

    let vector = a.vectorize();
    println!(
        "coefficient vector has k*n^2 + 2n = {} entries (k = 2 letters, n = 3 states)",
        vector.len()
    );

    for norm in [
        NormSpec::holder(1.0).unwrap(),
        NormSpec::euclidean(),
        NormSpec::holder(4.0).unwrap(),
        NormSpec::Max,
    ] {
        println!("d(a, b) under {norm:?} = {:.6}", automaton_distance(&a, &b, &norm).unwrap());
    }

    // Perturb every coefficient of `a` by 1/n: as the automata converge in
    // coefficient space, the worst word-weight deviation converges too.
    println!("\n 1/n-perturbation family around a fixed automaton:");
    println!("{:>8} {:>14} {:>22}", "n", "coeff distance", "max |weight diff| (≤5)");
    let base_table = a.behavior_table(5).unwrap();
    for n in [10.0, 100.0, 1000.0] {
        let shifted: Vec<f64> = vector.iter().map(|x| x + 1.0 / n).collect();
        let perturbed =
            WeightedAutomaton::from_vector(a.alphabet().to_vec(), 3, &shifted, Mode::General)
                .unwrap();
        let coefficient_distance =
            automaton_distance(&a, &perturbed, &NormSpec::euclidean()).unwrap();
        let worst = base_table
            .iter()
            .zip(perturbed.behavior_table(5).unwrap())
            .map(|((_, w0), (_, w1))| (w0 - w1).abs())
            .fold(0.0f64, f64::max);
        println!("{n:>8} {coefficient_distance:>14.6} {worst:>22.6}");
    }
}
