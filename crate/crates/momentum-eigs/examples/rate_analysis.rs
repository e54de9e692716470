//! The convergence-rate function of the fixed-parameter method, the inverse
//! map used by the dynamic method, and its first-order stability gain.
//!
//! Run with: cargo run --example rate_analysis

use momentum_eigs::harness::rate_report;
use momentum_eigs::spectral::{invert_rate, perturbation_gain};

fn main() -> momentum_eigs::Result<()> {
    let (l1, l2) = (2.0, 1.0);
    let report = rate_report(l1, l2, 20)?;
    println!("rate of the fixed-parameter method for lambda = ({l1}, {l2}):");
    println!("{:>10}  {:>10}", "beta", "rate");
    for (beta, rate) in &report.grid {
        println!("{beta:>10.4}  {rate:>10.5}");
    }
    println!(
        "minimum at beta = {} with asymptotic rate {:.5}\n",
        report.optimal_beta, report.asymptotic_rate
    );

    println!("recovering the eigenvalue ratio from an observed residual ratio:");
    for rho in [0.1, 0.26795, 0.5, 0.9] {
        println!(
            "  rho = {rho:<8} ->  r = {:<8.5}  gain = {:.5}",
            invert_rate(rho),
            perturbation_gain(rho)
        );
    }
    println!("\nthe gain stays below 2 everywhere and below 1 past rho = 0.486,");
    println!("so detection noise is damped exactly where narrow gaps make the");
    println!("acceleration matter most.");
    Ok(())
}
