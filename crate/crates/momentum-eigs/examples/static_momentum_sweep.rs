//! Sweep the fixed momentum parameter across its convergence region and
//! compare the observed contraction with the closed-form prediction.
//!
//! Run with: cargo run --example static_momentum_sweep

use momentum_eigs::iterations::{iterate, IterationConfig, Method, StopReason};
use momentum_eigs::matrices::{generate, MatrixSpec};
use momentum_eigs::spectral::static_rate;

fn main() -> momentum_eigs::Result<()> {
    // diag(100..1): lambda1 = 100, lambda2 = 99, ratio 0.99
    let a = generate(&MatrixSpec::DiagDescending { n: 100 })?;
    let (l1, l2) = (100.0, 99.0);
    let optimal = l2 * l2 / 4.0;

    println!("fixed-parameter momentum on diag(100..1); optimal beta = {optimal}");
    println!(
        "{:>10}  {:>10}  {:>10}  {:>11}",
        "beta", "predicted", "observed", "iterations"
    );
    for factor in [0.0, 0.25, 0.5, 0.75, 1.0, 1.005, 1.01] {
        let beta = optimal * factor;
        let predicted = static_rate(l1, l2, beta)?.rate;
        let cfg = IterationConfig::new(Method::StaticMomentum { beta }).with_tol(1e-12);
        let res = iterate(&a, &cfg)?;
        let steps = &res.steps;
        let last = steps.len() - 1;
        let observed = steps[last].residual / steps[last - 1].residual;
        println!(
            "{beta:>10.3}  {predicted:>10.5}  {observed:>10.5}  {:>11}",
            res.iterations()
        );
    }

    // past lambda1^2/4 every augmented mode has the same modulus and the
    // iteration cannot converge
    let beta = l1 * l1 / 4.0 * 1.04;
    let res = iterate(&a, &IterationConfig::new(Method::StaticMomentum { beta }))?;
    assert_eq!(res.stop, StopReason::MaxIter);
    println!(
        "\nbeta = {beta} (4% past the region boundary): {}",
        res.stop
    );
    Ok(())
}
