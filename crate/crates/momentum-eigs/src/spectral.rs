//! Spectral theory of the momentum-augmented matrix.
//!
//! The momentum iteration on `A` is the first block component of a plain
//! power iteration on the 2n x 2n matrix `[[A, -beta*I], [I, 0]]`. Each
//! eigenvalue `lambda` of `A` induces the pair of roots of
//! `mu^2 - lambda*mu + beta = 0` in the augmented spectrum. This module holds
//! the closed forms for those roots, the convergence-rate function of the
//! static method, the rate inversion used by the dynamic method, the
//! first-order stability gain of that inversion, and small-scale oracles
//! (explicit augmented products, defect certificates) that let all of it be
//! verified numerically.

use crate::eig::{dense_eigenvalues, singular_values};
use crate::error::{Error, Result};
use crate::linalg::{norm2, scale, Matrix, DEFAULT_DENSE_CAP};
use num_complex::Complex64;

/// Discriminant class of the root pair for one eigenvalue of `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscriminantCase {
    /// `lambda^2 > 4*beta`: two distinct real roots.
    RealSplit,
    /// `lambda^2 = 4*beta` to relative precision: a double real root, and the
    /// augmented matrix is defective there.
    Defective,
    /// `lambda^2 < 4*beta`: a conjugate pair of modulus `sqrt(beta)`.
    ComplexConjugate,
}

/// The two augmented eigenvalues induced by one eigenvalue of `A`.
#[derive(Debug, Clone, Copy)]
pub struct AugmentedEigenpair {
    pub lambda: f64,
    pub beta: f64,
    /// Larger-magnitude root when real, the positive-imaginary root when
    /// complex.
    pub mu_plus: Complex64,
    pub mu_minus: Complex64,
    pub case: DiscriminantCase,
    /// Argument of `mu_plus`, set in the complex case only (`pi/2` when
    /// `lambda` is zero).
    pub theta: Option<f64>,
}

/// Roots of `mu^2 - lambda*mu + beta = 0` with their case tag.
pub fn augmented_eigenvalues(lambda: f64, beta: f64) -> AugmentedEigenpair {
    assert!(beta >= 0.0, "momentum parameter must be nonnegative");
    let disc = lambda * lambda - 4.0 * beta;
    let tol = 1e-12 * (lambda * lambda).max(4.0 * beta);
    if disc.abs() <= tol {
        let mu = Complex64::new(lambda / 2.0, 0.0);
        AugmentedEigenpair {
            lambda,
            beta,
            mu_plus: mu,
            mu_minus: mu,
            case: DiscriminantCase::Defective,
            theta: None,
        }
    } else if disc > 0.0 {
        let root = disc.sqrt();
        let big = 0.5 * (lambda + lambda.signum() * root);
        let small = 0.5 * (lambda - lambda.signum() * root);
        AugmentedEigenpair {
            lambda,
            beta,
            mu_plus: Complex64::new(big, 0.0),
            mu_minus: Complex64::new(small, 0.0),
            case: DiscriminantCase::RealSplit,
            theta: None,
        }
    } else {
        let im = 0.5 * (-disc).sqrt();
        let re = 0.5 * lambda;
        let mu_plus = Complex64::new(re, im);
        AugmentedEigenpair {
            lambda,
            beta,
            mu_plus,
            mu_minus: mu_plus.conj(),
            case: DiscriminantCase::ComplexConjugate,
            theta: Some(im.atan2(re)),
        }
    }
}

/// Where a fixed momentum parameter sits relative to the optimal choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaRegime {
    BelowOptimal,
    AtOptimal,
    AboveOptimal,
}

/// Predicted convergence rate of the fixed-parameter momentum iteration.
#[derive(Debug, Clone, Copy)]
pub struct RatePrediction {
    /// Eigenvalue ratio `|lambda2 / lambda1|`.
    pub r: f64,
    pub beta: f64,
    /// `|mu_{lambda_2}| / |mu_{lambda_1}|`; asymptotic at the optimum.
    pub rate: f64,
    pub regime: BetaRegime,
}

/// Rate of the fixed-parameter momentum iteration as a function of `beta`.
///
/// Piecewise below and above `lambda2^2/4`; exactly at the optimum the two
/// branches meet at the asymptotic value `r / (1 + sqrt(1 - r^2))`.
/// `beta >= lambda1^2/4` leaves no convergent regime and is rejected.
pub fn static_rate(lambda1: f64, lambda2: f64, beta: f64) -> Result<RatePrediction> {
    let a1 = lambda1.abs();
    let a2 = lambda2.abs();
    if !(a2 < a1) {
        return Err(Error::OutOfRange(format!(
            "need |lambda2| < |lambda1|, got {a2} vs {a1}"
        )));
    }
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::OutOfRange("beta must be finite and >= 0".into()));
    }
    if beta >= a1 * a1 / 4.0 {
        return Err(Error::OutOfRange(format!(
            "beta = {beta} >= lambda1^2/4 = {}: every augmented mode has modulus sqrt(beta), no convergence",
            a1 * a1 / 4.0
        )));
    }
    let optimal = a2 * a2 / 4.0;
    let r = a2 / a1;
    let tol = 1e-12 * optimal.max(beta);
    let (rate, regime) = if (beta - optimal).abs() <= tol {
        (r / (1.0 + (1.0 - r * r).sqrt()), BetaRegime::AtOptimal)
    } else if beta < optimal {
        let num = a2 + (a2 * a2 - 4.0 * beta).sqrt();
        let den = a1 + (a1 * a1 - 4.0 * beta).sqrt();
        (num / den, BetaRegime::BelowOptimal)
    } else {
        let den = a1 + (a1 * a1 - 4.0 * beta).sqrt();
        (2.0 * beta.sqrt() / den, BetaRegime::AboveOptimal)
    };
    Ok(RatePrediction {
        r,
        beta,
        rate,
        regime,
    })
}

/// Invert the optimal-rate map: recover the eigenvalue ratio estimate
/// `r = 2*rho / (1 + rho^2)` from an observed residual ratio `rho`.
///
/// `rho` is clamped into `[0, 1]` first, mirroring the clamp in the dynamic
/// iteration.
pub fn invert_rate(rho: f64) -> f64 {
    let rho = rho.clamp(0.0, 1.0);
    2.0 * rho / (1.0 + rho * rho)
}

/// First-order gain of `invert_rate` at `rho`: a perturbation `eps` of the
/// observed ratio moves the recovered `r` by `eps * gain(rho)`, with
/// `gain(rho) = 2*(1 - rho^2) / (1 + rho^2)^2`.
pub fn perturbation_gain(rho: f64) -> f64 {
    let denom = 1.0 + rho * rho;
    2.0 * (1.0 - rho * rho) / (denom * denom)
}

/// Explicit 2n x 2n block matrix `[[A, -beta*I], [I, 0]]`.
pub fn build_augmented(a: &Matrix, beta: f64) -> Result<Matrix> {
    build_augmented_with_cap(a, beta, DEFAULT_DENSE_CAP)
}

pub fn build_augmented_with_cap(a: &Matrix, beta: f64, cap: usize) -> Result<Matrix> {
    let n = a.n();
    if 2 * n > cap {
        return Err(Error::DenseCapExceeded { n: 2 * n, cap });
    }
    let src = a.dense_entries(cap)?;
    let m = 2 * n;
    let mut out = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            out[i * m + j] = src[i * n + j];
        }
        out[i * m + (n + i)] = -beta;
        out[(n + i) * m + i] = 1.0;
    }
    Matrix::dense(m, out)
}

/// One multiplication by `[[A, -beta*I], [I, 0]]` followed by normalization
/// of the pair by the first component's norm.
fn augmented_step(a: &Matrix, beta: f64, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut u = a.matvec(x)?;
    if beta != 0.0 {
        for (ui, yi) in u.iter_mut().zip(y.iter()) {
            *ui -= beta * yi;
        }
    }
    let h = norm2(&u);
    if h == 0.0 || !h.is_finite() {
        return Err(Error::NumericalBreakdown(
            "augmented product lost the first component".into(),
        ));
    }
    let mut z = x.to_vec();
    scale(1.0 / h, &mut u);
    scale(1.0 / h, &mut z);
    Ok((u, z))
}

/// Multiply `(u0; 0)` through the sequence of augmented matrices: the
/// zero-momentum matrix first, then one factor per remaining entry of
/// `betas`, normalizing each step by the first component's norm. Returns the
/// final normalized `(x, y)` pair.
///
/// `betas[0]` is ignored; the first factor always uses `beta = 0`. This is
/// the small-scale oracle for replaying recorded momentum schedules.
pub fn augmented_sequence_apply(
    a: &Matrix,
    betas: &[f64],
    u0: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_sequence_input(a, betas, u0)?;
    let zero = vec![0.0; u0.len()];
    let (mut x, mut y) = augmented_step(a, 0.0, u0, &zero)?;
    for &beta in &betas[1..] {
        let (nx, ny) = augmented_step(a, beta, &x, &y)?;
        x = nx;
        y = ny;
    }
    Ok((x, y))
}

/// Like [`augmented_sequence_apply`] but keeping the normalized pair after
/// every factor; `out[k]` is the state after `k + 1` factors.
pub fn augmented_sequence_trace(
    a: &Matrix,
    betas: &[f64],
    u0: &[f64],
) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    check_sequence_input(a, betas, u0)?;
    let zero = vec![0.0; u0.len()];
    let mut trace = Vec::with_capacity(betas.len().max(1));
    let (mut x, mut y) = augmented_step(a, 0.0, u0, &zero)?;
    trace.push((x.clone(), y.clone()));
    for &beta in &betas[1..] {
        let (nx, ny) = augmented_step(a, beta, &x, &y)?;
        x = nx;
        y = ny;
        trace.push((x.clone(), y.clone()));
    }
    Ok(trace)
}

fn check_sequence_input(a: &Matrix, betas: &[f64], u0: &[f64]) -> Result<()> {
    if u0.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: u0.len(),
        });
    }
    if betas.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one factor in the augmented sequence".into(),
        ));
    }
    Ok(())
}

/// Algebraic and geometric multiplicity of `mu = lambda/2` in the augmented
/// matrix built with `beta = lambda^2/4`.
///
/// The eigenvalue `lambda` of multiplicity `m` in a diagonalizable `A` turns
/// into a defective eigenvalue of the augmented matrix with multiplicities
/// `(2m, m)`. Algebraic multiplicity is root clustering of the brute-force
/// spectrum within 1e-6; geometric multiplicity is the numerical nullity at
/// a `1e-8 * sigma_max` singular-value threshold. Returns `(0, 0)` when
/// `lambda` is not an eigenvalue.
pub fn defect_certificate(a: &Matrix, lambda: f64) -> Result<(usize, usize)> {
    let beta = lambda * lambda / 4.0;
    let aug = build_augmented(a, beta)?;
    let m = aug.n();
    let mu = lambda / 2.0;

    let eigs = dense_eigenvalues(&aug)?;
    let algebraic = eigs
        .iter()
        .filter(|e| (*e - Complex64::new(mu, 0.0)).norm() < 1e-6)
        .count();

    let mut shifted = aug.dense_entries(m)?;
    for i in 0..m {
        shifted[i * m + i] -= mu;
    }
    let sv = singular_values(&shifted, m);
    let sigma_max = sv[0];
    let geometric = if sigma_max == 0.0 {
        m
    } else {
        sv.iter().filter(|s| **s < 1e-8 * sigma_max).count()
    };
    Ok((algebraic, geometric))
}
