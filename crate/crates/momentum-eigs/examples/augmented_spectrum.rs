//! The block matrix [[A, -beta I], [I, 0]] behind the momentum iteration:
//! closed-form eigenvalues, the circle the subdominant modes land on, a
//! brute-force cross check, and the defectiveness certificate at the
//! optimal parameter.
//!
//! Run with: cargo run --example augmented_spectrum

use momentum_eigs::eig::dense_eigenvalues;
use momentum_eigs::harness::mu_ratio_points;
use momentum_eigs::linalg::Matrix;
use momentum_eigs::spectral::{
    augmented_eigenvalues, build_augmented, defect_certificate, DiscriminantCase,
};

fn main() -> momentum_eigs::Result<()> {
    let spectrum: Vec<f64> = (-9..=10).map(|v| v as f64).collect();
    let beta = 81.0 / 4.0; // second eigenvalue 9, squared over four

    println!("eigenvalue ratios mu(lambda)/mu(lambda_1) for diag(10..-9), beta = {beta}:");
    let points = mu_ratio_points(&spectrum, beta)?;
    for p in points.iter().rev().take(6) {
        let norm = (p.plus_re * p.plus_re + p.plus_im * p.plus_im).sqrt();
        println!(
            "  lambda {:>4}: {:>8.4} + {:>7.4}i   |ratio| = {:.4}",
            p.lambda, p.plus_re, p.plus_im, norm
        );
    }
    println!("  ... all modes with lambda^2 < 4 beta share the same modulus, so");
    println!("  they decay together while rotating at mode-dependent speeds.\n");

    // case tags over the three discriminant regimes
    for (lambda, beta) in [(10.0, 20.25), (9.0, 20.25), (2.0, 20.25)] {
        let pair = augmented_eigenvalues(lambda, beta);
        let case = match pair.case {
            DiscriminantCase::RealSplit => "real split",
            DiscriminantCase::Defective => "defective",
            DiscriminantCase::ComplexConjugate => "complex pair",
        };
        println!(
            "lambda = {lambda:>4}: {case:<12} mu = {:.4} and {:.4}",
            pair.mu_plus, pair.mu_minus
        );
    }

    // brute-force cross check on a small instance
    let a = Matrix::from_diag(&[3.0, 2.0, 1.0]);
    let aug = build_augmented(&a, 1.0)?;
    let mut brute = dense_eigenvalues(&aug)?;
    brute.sort_by(|x, y| y.norm().partial_cmp(&x.norm()).unwrap());
    println!("\nbrute-force spectrum of the 6x6 augmented matrix for diag(3,2,1), beta = 1:");
    for mu in &brute {
        println!("  {mu:.6}");
    }

    // at beta = lambda^2/4 the augmented matrix is defective: multiplicities (2m, m)
    let (alg, geo) = defect_certificate(&a, 2.0)?;
    println!("\ndefect certificate at lambda = 2, beta = 1: algebraic {alg}, geometric {geo}");
    Ok(())
}
