//! Plain power iteration against the dynamic momentum acceleration on two
//! narrow-gap benchmark diagonals.
//!
//! Run with: cargo run --example power_vs_dynamic

use momentum_eigs::iterations::{iterate, IterationConfig, Method};
use momentum_eigs::matrices::{generate, MatrixSpec};

fn main() -> momentum_eigs::Result<()> {
    let benchmarks = [
        (
            "diag(1000..1), ratio 0.999",
            MatrixSpec::DiagDescending { n: 1000 },
        ),
        (
            "diag(10 - 10^t), ratio 0.9987",
            MatrixSpec::LogspaceDiag {
                offset: 10.0,
                exp_lo: 0.0,
                exp_hi: 1.0,
                n: 200,
            },
        ),
    ];

    for (label, spec) in benchmarks {
        let a = generate(&spec)?;
        println!("{label}");
        for method in [Method::Power, Method::DynamicMomentum] {
            let res = iterate(&a, &IterationConfig::new(method))?;
            println!(
                "  {:<18} {:>9}  {} products, terminal residual {:.2e}, eigenvalue {:.6}",
                method.label(),
                format!("[{}]", res.stop),
                res.matvec_count,
                res.terminal_residual(),
                res.eigenvalue()
            );
        }
        println!();
    }
    println!("the momentum parameter needs no spectral knowledge: it is");
    println!("re-estimated each step from the Rayleigh quotient and the ratio");
    println!("of the last two residuals.");
    Ok(())
}
