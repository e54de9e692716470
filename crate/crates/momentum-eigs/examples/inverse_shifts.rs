//! Shifted inverse iteration with and without momentum, for shifts at
//! increasing distance from the target eigenvalue. One LU factorization per
//! shift; every step is a pair of triangular solves.
//!
//! Run with: cargo run --example inverse_shifts

use momentum_eigs::iterations::{iterate, IterationConfig, Method};
use momentum_eigs::matrices::{generate, MatrixSpec};

fn main() -> momentum_eigs::Result<()> {
    let a = generate(&MatrixSpec::DiagDescending { n: 1000 })?;
    println!("hunting lambda = 1000 on diag(1000..1), all-ones start, tol 1e-15");
    println!(
        "{:>8}  {:>7}  {:>9}  {:>10}  (solve counts)",
        "shift", "plain", "dynamic", "beta_opt"
    );
    for sigma in [1000.5, 1001.0, 1002.0, 1004.0, 1009.0] {
        let plain = iterate(
            &a,
            &IterationConfig::new(Method::InversePower { shift: sigma }),
        )?;
        let dynamic = iterate(
            &a,
            &IterationConfig::new(Method::DynamicMomentumInverse { shift: sigma }),
        )?;
        // optimal fixed parameter from the second-closest eigenvalue (999)
        let beta = 1.0 / (4.0 * (999.0 - sigma) * (999.0 - sigma));
        let fixed = iterate(
            &a,
            &IterationConfig::new(Method::StaticMomentumInverse { shift: sigma, beta }),
        )?;
        println!(
            "{sigma:>8}  {:>7}  {:>9}  {:>10}",
            plain.solve_count,
            dynamic.solve_count,
            format!("{} (b={beta:.1e})", fixed.solve_count),
        );
        assert!((plain.eigenvalue() - 1000.0).abs() < 1e-8);
        assert!((dynamic.eigenvalue() - 1000.0).abs() < 1e-8);
    }
    println!("\nthe dynamic variant keeps its edge as the shift quality degrades,");
    println!("without re-factoring and without knowing the spectrum.");
    Ok(())
}
