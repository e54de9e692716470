//! Momentum-accelerated power and shifted inverse eigeniterations.
//!
//! The dominant eigenpair of a real diagonalizable matrix can be found by
//! the plain power iteration, but its convergence degrades as the ratio of
//! the two leading eigenvalue magnitudes approaches one. Adding a heavy-ball
//! extrapolation term `-beta * h_k^{-1} * x_{k-1}` to the update shrinks the
//! effective ratio, and the best fixed choice of `beta` is known in closed
//! form from the second eigenvalue. This crate implements that accelerated
//! iteration together with a dynamic variant that needs no spectral
//! knowledge at all: each step re-estimates `beta` from the Rayleigh
//! quotient and the ratio of the last two residuals, at no extra
//! matrix-vector products. The same construction accelerates shifted
//! inverse iterations, reusing one LU factorization across all steps.
//!
//! Modules:
//!
//! - [`linalg`]: dense/CSR kernels, dot products, partial-pivoting LU.
//! - [`iterations`]: the five iteration algorithms with per-step traces.
//! - [`spectral`]: augmented-matrix spectral theory behind the momentum
//!   parameter choice, plus small-scale verification oracles.
//! - [`matrices`]: benchmark matrix generators and seeded initial vectors.
//! - [`matrix_market`]: Matrix Market exchange format I/O.
//! - [`eig`]: brute-force dense eigensolver used by the oracles.
//! - [`harness`]: experiment plans, benchmark suites, and trace/summary
//!   output for the CLI.
//!
//! The `examples/` directory demonstrates each capability end to end; the
//! `momentum-eigs` binary exposes the experiment harness as a CLI.
//!
//! ```
//! use momentum_eigs::{generate, iterate, IterationConfig, MatrixSpec, Method};
//!
//! let a = generate(&MatrixSpec::DiagDescending { n: 100 })?;
//! let result = iterate(&a, &IterationConfig::new(Method::DynamicMomentum))?;
//! assert!(result.converged());
//! assert!((result.eigenvalue() - 100.0).abs() < 1e-9);
//! # Ok::<(), momentum_eigs::Error>(())
//! ```

pub mod eig;
pub mod error;
pub mod harness;
pub mod iterations;
pub mod linalg;
pub mod matrices;
pub mod matrix_market;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use iterations::{
    iterate, IterationConfig, IterationResult, IterationStep, Method, StopReason,
};
pub use linalg::{Matrix, Vector};
pub use matrices::{generate, init_vector, InitPolicy, MatrixSpec};
