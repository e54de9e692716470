//! Benchmark matrix generators and seeded initial-vector construction.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::matrix_market;
use crate::rng::DeterministicRng;
use serde::Serialize;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// Recipe for a benchmark matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MatrixSpec {
    /// `diag(n, n-1, ..., 1)`.
    DiagDescending { n: usize },
    /// Diagonal with `n` uniformly spaced entries from `lo` to `hi` inclusive.
    LinspaceDiag { lo: f64, hi: f64, n: usize },
    /// Diagonal with entries `offset - 10^t` for `n` exponents `t` uniformly
    /// spaced on `[exp_lo, exp_hi]`.
    LogspaceDiag {
        offset: f64,
        exp_lo: f64,
        exp_hi: f64,
        n: usize,
    },
    /// Symmetric tridiagonal with unit diagonal and seeded standard-normal
    /// first off-diagonals.
    RandomTridiagonal { n: usize, seed: u64 },
    /// Load from a Matrix Market exchange file.
    MatrixMarketFile { path: PathBuf },
}

impl MatrixSpec {
    pub fn label(&self) -> String {
        match self {
            MatrixSpec::DiagDescending { n } => format!("diag-{n}"),
            MatrixSpec::LinspaceDiag { lo, hi, n } => format!("linspace-{lo}-{hi}-{n}"),
            MatrixSpec::LogspaceDiag {
                offset,
                exp_lo,
                exp_hi,
                n,
            } => format!("logspace-{offset}-{exp_lo}-{exp_hi}-{n}"),
            MatrixSpec::RandomTridiagonal { n, seed } => format!("tridiag-{n}-s{seed}"),
            MatrixSpec::MatrixMarketFile { path } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "mm".into()),
        }
    }
}

impl fmt::Display for MatrixSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixSpec::DiagDescending { n } => write!(f, "diag:{n}"),
            MatrixSpec::LinspaceDiag { lo, hi, n } => write!(f, "linspace:{lo}:{hi}:{n}"),
            MatrixSpec::LogspaceDiag {
                offset,
                exp_lo,
                exp_hi,
                n,
            } => write!(f, "logspace:{offset}:{exp_lo}:{exp_hi}:{n}"),
            MatrixSpec::RandomTridiagonal { n, seed } => write!(f, "tridiag:{n}:{seed}"),
            MatrixSpec::MatrixMarketFile { path } => write!(f, "{}", path.display()),
        }
    }
}

/// Parse the CLI matrix syntax: `diag:N`, `linspace:LO:HI:N`,
/// `logspace:OFFSET:ELO:EHI:N`, `tridiag:N:SEED`, or a Matrix Market path.
impl FromStr for MatrixSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParameter(format!("matrix spec `{s}`: {msg}"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["diag", n] => Ok(MatrixSpec::DiagDescending {
                n: n.parse().map_err(|_| bad("bad dimension"))?,
            }),
            ["linspace", lo, hi, n] => Ok(MatrixSpec::LinspaceDiag {
                lo: lo.parse().map_err(|_| bad("bad lo"))?,
                hi: hi.parse().map_err(|_| bad("bad hi"))?,
                n: n.parse().map_err(|_| bad("bad dimension"))?,
            }),
            ["logspace", offset, elo, ehi, n] => Ok(MatrixSpec::LogspaceDiag {
                offset: offset.parse().map_err(|_| bad("bad offset"))?,
                exp_lo: elo.parse().map_err(|_| bad("bad exp_lo"))?,
                exp_hi: ehi.parse().map_err(|_| bad("bad exp_hi"))?,
                n: n.parse().map_err(|_| bad("bad dimension"))?,
            }),
            ["tridiag", n, seed] => Ok(MatrixSpec::RandomTridiagonal {
                n: n.parse().map_err(|_| bad("bad dimension"))?,
                seed: seed.parse().map_err(|_| bad("bad seed"))?,
            }),
            _ => Ok(MatrixSpec::MatrixMarketFile {
                path: PathBuf::from(s),
            }),
        }
    }
}

/// Materialize a benchmark matrix from its spec.
pub fn generate(spec: &MatrixSpec) -> Result<Matrix> {
    match spec {
        MatrixSpec::DiagDescending { n } => {
            require_dim(*n)?;
            let diag: Vec<f64> = (1..=*n).rev().map(|v| v as f64).collect();
            Ok(Matrix::from_diag(&diag))
        }
        MatrixSpec::LinspaceDiag { lo, hi, n } => {
            require_dim(*n)?;
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidParameter("non-finite linspace bounds".into()));
            }
            let step = (hi - lo) / (*n as f64 - 1.0);
            let mut diag: Vec<f64> = (0..*n).map(|i| lo + i as f64 * step).collect();
            diag[*n - 1] = *hi; // endpoints exact
            Ok(Matrix::from_diag(&diag))
        }
        MatrixSpec::LogspaceDiag {
            offset,
            exp_lo,
            exp_hi,
            n,
        } => {
            require_dim(*n)?;
            let step = (exp_hi - exp_lo) / (*n as f64 - 1.0);
            let diag: Vec<f64> = (0..*n)
                .map(|i| {
                    let t = if i == *n - 1 {
                        *exp_hi
                    } else {
                        exp_lo + i as f64 * step
                    };
                    offset - 10f64.powf(t)
                })
                .collect();
            Ok(Matrix::from_diag(&diag))
        }
        MatrixSpec::RandomTridiagonal { n, seed } => {
            require_dim(*n)?;
            let n = *n;
            let mut rng = DeterministicRng::new(*seed);
            let off: Vec<f64> = (0..n - 1).map(|_| rng.standard_normal()).collect();
            let mut row_ptr = Vec::with_capacity(n + 1);
            let mut col_idx = Vec::new();
            let mut values = Vec::new();
            row_ptr.push(0);
            for i in 0..n {
                if i > 0 {
                    col_idx.push(i - 1);
                    values.push(off[i - 1]);
                }
                col_idx.push(i);
                values.push(1.0);
                if i + 1 < n {
                    col_idx.push(i + 1);
                    values.push(off[i]);
                }
                row_ptr.push(col_idx.len());
            }
            Ok(Matrix::csr(n, row_ptr, col_idx, values)?.with_symmetry_hint(true))
        }
        MatrixSpec::MatrixMarketFile { path } => matrix_market::mm_read(path),
    }
}

fn require_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "matrix dimension must be at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Initial-vector construction policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum InitPolicy {
    /// All-ones vector.
    Ones,
    /// i.i.d. uniform on `[-0.5, 0.5)` from the seeded generator.
    RandomUniform { seed: u64 },
    /// `(-1, 1, -1, 1, ...)`.
    Alternating,
}

impl fmt::Display for InitPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitPolicy::Ones => write!(f, "ones"),
            InitPolicy::RandomUniform { seed } => write!(f, "random:{seed}"),
            InitPolicy::Alternating => write!(f, "alternating"),
        }
    }
}

impl FromStr for InitPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ones" => Ok(InitPolicy::Ones),
            "alternating" => Ok(InitPolicy::Alternating),
            other => {
                if let Some(seed) = other.strip_prefix("random:") {
                    let seed = seed.parse().map_err(|_| {
                        Error::InvalidParameter(format!("bad seed in init `{other}`"))
                    })?;
                    Ok(InitPolicy::RandomUniform { seed })
                } else {
                    Err(Error::InvalidParameter(format!(
                        "unknown init policy `{other}` (expected ones|random:SEED|alternating)"
                    )))
                }
            }
        }
    }
}

pub fn init_vector(n: usize, policy: &InitPolicy) -> Vector {
    match policy {
        InitPolicy::Ones => vec![1.0; n],
        InitPolicy::RandomUniform { seed } => {
            let mut rng = DeterministicRng::new(*seed);
            (0..n).map(|_| rng.uniform() - 0.5).collect()
        }
        InitPolicy::Alternating => (0..n)
            .map(|i| if i % 2 == 0 { -1.0 } else { 1.0 })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_descending_small() {
        let a = generate(&MatrixSpec::DiagDescending { n: 3 }).unwrap();
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.get(1, 1), 2.0);
        assert_eq!(a.get(2, 2), 1.0);
        assert_eq!(a.get(0, 1), 0.0);
    }

    #[test]
    fn linspace_matches_benchmark_spectrum() {
        let a = generate(&MatrixSpec::LinspaceDiag {
            lo: -99.0,
            hi: 100.0,
            n: 200,
        })
        .unwrap();
        let mut diag: Vec<f64> = (0..200).map(|i| a.get(i, i)).collect();
        assert_eq!(diag[0], -99.0);
        assert_eq!(diag[199], 100.0);
        diag.sort_by(|x, y| y.abs().partial_cmp(&x.abs()).unwrap());
        assert_eq!(diag[0], 100.0);
        assert_eq!(diag[1].abs(), 99.0);
        assert_eq!(diag[2].abs(), 99.0);
        assert!((diag[1].abs() / diag[0] - 0.99).abs() < 1e-15);
    }

    #[test]
    fn logspace_matches_benchmark_spectrum() {
        let a = generate(&MatrixSpec::LogspaceDiag {
            offset: 10.0,
            exp_lo: 0.0,
            exp_hi: 1.0,
            n: 200,
        })
        .unwrap();
        let diag: Vec<f64> = (0..200).map(|i| a.get(i, i)).collect();
        let lambda1 = diag.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(lambda1, 9.0);
        // second-largest diagonal entry
        let lambda2 = diag
            .iter()
            .cloned()
            .filter(|v| *v < 9.0)
            .fold(f64::MIN, f64::max);
        assert!((lambda2 - 8.9884).abs() < 5e-5, "lambda2 {lambda2}");
        let ratio = lambda2 / lambda1;
        assert!((ratio - 0.9987).abs() < 1e-4, "r {ratio}");
        // last entry is exactly 10 - 10^1 = 0
        assert_eq!(diag[199], 0.0);
    }

    #[test]
    fn tridiagonal_structure_and_determinism() {
        let spec = MatrixSpec::RandomTridiagonal { n: 50, seed: 7 };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.symmetry_hint());
        for i in 0..50 {
            assert_eq!(a.get(i, i), 1.0);
            if i + 1 < 50 {
                assert_eq!(a.get(i, i + 1), a.get(i + 1, i));
                assert!(a.get(i, i + 1) != 0.0);
            }
            if i + 2 < 50 {
                assert_eq!(a.get(i, i + 2), 0.0);
            }
        }
    }

    #[test]
    fn init_vectors() {
        assert_eq!(init_vector(3, &InitPolicy::Ones), vec![1.0, 1.0, 1.0]);
        assert_eq!(
            init_vector(4, &InitPolicy::Alternating),
            vec![-1.0, 1.0, -1.0, 1.0]
        );
        let a = init_vector(5, &InitPolicy::RandomUniform { seed: 1 });
        let b = init_vector(5, &InitPolicy::RandomUniform { seed: 1 });
        assert_eq!(a, b);
        assert!(a.iter().all(|v| (-0.5..0.5).contains(v)));
    }

    #[test]
    fn random_uniform_mean_is_centered() {
        let v = init_vector(1_000_000, &InitPolicy::RandomUniform { seed: 2024 });
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!(mean.abs() < 0.002, "mean {mean}");
    }

    #[test]
    fn spec_parsing_round_trip() {
        for s in [
            "diag:1000",
            "linspace:-99:100:200",
            "logspace:10:0:1:200",
            "tridiag:200:7",
        ] {
            let spec: MatrixSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        let spec: MatrixSpec = "data/Kuu.mtx".parse().unwrap();
        assert!(matches!(spec, MatrixSpec::MatrixMarketFile { .. }));
    }

    #[test]
    fn ensemble_ratio_stays_in_band() {
        // eigenvalue ratio of the random tridiagonal ensemble, reduced size
        use crate::eig::dense_eigenvalues_real;
        let mut lo = f64::MAX;
        let mut hi = f64::MIN;
        for seed in 0..100 {
            let a = generate(&MatrixSpec::RandomTridiagonal { n: 50, seed }).unwrap();
            let eigs = dense_eigenvalues_real(&a).unwrap();
            let mut mags: Vec<f64> = eigs.iter().map(|v| v.abs()).collect();
            mags.sort_by(|x, y| y.partial_cmp(x).unwrap());
            let r = mags[1] / mags[0];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        // at this reduced size the observed range is [0.715, 0.998]; the
        // ensemble is dominated by narrow gaps, as at full size
        assert!(lo > 0.7 && hi < 1.0, "observed ratio range [{lo}, {hi}]");
        assert!(hi > 0.99, "max ratio {hi}");
    }
}
