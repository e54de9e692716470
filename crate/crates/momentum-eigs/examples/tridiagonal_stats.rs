//! Statistical comparison over a seeded ensemble of random symmetric
//! tridiagonal matrices, the shape of the randomized benchmark suites.
//!
//! Run with: cargo run --example tridiagonal_stats

use momentum_eigs::iterations::{iterate, IterationConfig, Method};
use momentum_eigs::matrices::{generate, MatrixSpec};

fn stats(counts: &[usize]) -> (f64, f64, usize, usize) {
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<usize>() as f64 / n;
    let var = counts
        .iter()
        .map(|c| (*c as f64 - mean).powi(2))
        .sum::<f64>()
        / n;
    let min = *counts.iter().min().unwrap();
    let max = *counts.iter().max().unwrap();
    (mean, var.sqrt(), min, max)
}

fn main() -> momentum_eigs::Result<()> {
    let seeds = 100u64;
    let mut power = Vec::new();
    let mut dynamic = Vec::new();
    for seed in 0..seeds {
        let a = generate(&MatrixSpec::RandomTridiagonal { n: 200, seed })?;
        power.push(iterate(&a, &IterationConfig::new(Method::Power))?.matvec_count);
        dynamic.push(iterate(&a, &IterationConfig::new(Method::DynamicMomentum))?.matvec_count);
    }
    println!("{seeds} seeded tridiagonal matrices (n = 200), all-ones start, tol 1e-12:");
    println!(
        "{:>18}  {:>9} {:>9} {:>6} {:>6}",
        "method", "mean", "std", "min", "max"
    );
    for (label, counts) in [("power", &power), ("dynamic momentum", &dynamic)] {
        let (mean, std, min, max) = stats(counts);
        println!("{label:>18}  {mean:>9.2} {std:>9.2} {min:>6} {max:>6}");
    }
    let wins = power
        .iter()
        .zip(dynamic.iter())
        .filter(|(p, d)| d <= p)
        .count();
    println!("\ndynamic momentum used no more products than power in {wins}/{seeds} runs");
    Ok(())
}
