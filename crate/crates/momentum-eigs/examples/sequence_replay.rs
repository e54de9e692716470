//! Replay a recorded momentum schedule through the explicit product of
//! augmented matrices, verifying that the iteration really is the first
//! block row of that product.
//!
//! Run with: cargo run --example sequence_replay

use momentum_eigs::iterations::{iterate, IterationConfig, Method};
use momentum_eigs::linalg::norm2;
use momentum_eigs::matrices::{generate, init_vector, InitPolicy, MatrixSpec};
use momentum_eigs::spectral::augmented_sequence_apply;

fn main() -> momentum_eigs::Result<()> {
    let a = generate(&MatrixSpec::DiagDescending { n: 10 })?;

    let run = iterate(&a, &IterationConfig::new(Method::DynamicMomentum))?;
    println!(
        "dynamic momentum on diag(10..1): {} steps to residual {:.2e}",
        run.iterations(),
        run.terminal_residual()
    );

    // factor f of the product applies the momentum parameter that built
    // iterate f+1; the first factor always has beta = 0
    let mut betas = vec![0.0];
    betas.extend(run.steps[1..].iter().map(|s| s.beta.unwrap_or(0.0)));

    let u0 = init_vector(10, &InitPolicy::Ones);
    let (x, y) = augmented_sequence_apply(&a, &betas, &u0)?;
    let align = x[0].abs() / norm2(&x);
    let angle = (1.0 - align * align).max(0.0).sqrt();
    println!(
        "explicit product of {} augmented matrices: first-component angle to e1 = {:.2e}",
        betas.len(),
        angle
    );
    println!(
        "second component tracks the previous iterate: |y| = {:.4}",
        norm2(&y)
    );

    let drift = run
        .eigenvector
        .iter()
        .zip(x.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("max deviation between the run's eigenvector and the replay: {drift:.2e}");
    Ok(())
}
