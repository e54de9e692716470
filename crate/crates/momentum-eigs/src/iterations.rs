//! The five eigensolver iterations with full per-step trace recording:
//! plain power iteration, fixed and dynamic momentum acceleration, and the
//! shifted inverse counterparts.
//!
//! All five share one engine. A step applies the operator (a matrix-vector
//! product, or a pair of triangular solves against cached LU factors of
//! `A - sigma*I`), optionally subtracts the momentum correction
//! `(beta_k / h_k) * x_{k-1}`, normalizes, and evaluates the Rayleigh
//! quotient and residual of the new iterate. The dynamic methods take two
//! plain preliminary steps, seed the rate estimate with the raw residual
//! ratio, and from then on set `beta_k = nu_k^2 r_k^2 / 4` while updating
//! `r` through the inverted optimal-rate map `2*rho / (1 + rho^2)`.

use crate::error::{Error, Result};
use crate::linalg::{dot, lu_factor, norm2, LuFactors, Matrix, Vector};
use crate::matrices::{init_vector, InitPolicy};
use crate::spectral::invert_rate;
use serde::Serialize;
use std::fmt;

/// Default residual tolerance for the power-family methods.
pub const POWER_FAMILY_TOL: f64 = 1e-12;
/// Default residual tolerance for the inverse-family methods.
pub const INVERSE_FAMILY_TOL: f64 = 1e-15;
/// Default iteration budget.
pub const DEFAULT_MAX_ITER: usize = 2000;

/// Method selector. Momentum parameters ride along with the variants that
/// need them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Method {
    Power,
    StaticMomentum { beta: f64 },
    DynamicMomentum,
    InversePower { shift: f64 },
    StaticMomentumInverse { shift: f64, beta: f64 },
    DynamicMomentumInverse { shift: f64 },
}

impl Method {
    pub fn is_inverse_family(&self) -> bool {
        matches!(
            self,
            Method::InversePower { .. }
                | Method::StaticMomentumInverse { .. }
                | Method::DynamicMomentumInverse { .. }
        )
    }

    pub fn shift(&self) -> Option<f64> {
        match self {
            Method::InversePower { shift }
            | Method::StaticMomentumInverse { shift, .. }
            | Method::DynamicMomentumInverse { shift } => Some(*shift),
            _ => None,
        }
    }

    pub fn fixed_beta(&self) -> Option<f64> {
        match self {
            Method::StaticMomentum { beta } | Method::StaticMomentumInverse { beta, .. } => {
                Some(*beta)
            }
            _ => None,
        }
    }

    /// Number of plain steps taken before the momentum correction starts.
    fn preliminary_steps(&self) -> usize {
        match self {
            Method::Power | Method::InversePower { .. } => usize::MAX, // never
            Method::StaticMomentum { .. } => 1,
            // the fixed-beta inverse variant follows the dynamic loop shape
            Method::StaticMomentumInverse { .. } => 2,
            Method::DynamicMomentum | Method::DynamicMomentumInverse { .. } => 2,
        }
    }

    fn is_dynamic(&self) -> bool {
        matches!(
            self,
            Method::DynamicMomentum | Method::DynamicMomentumInverse { .. }
        )
    }

    pub fn label(&self) -> String {
        match self {
            Method::Power => "power".into(),
            Method::StaticMomentum { beta } => format!("static-momentum-b{beta}"),
            Method::DynamicMomentum => "dynamic-momentum".into(),
            Method::InversePower { shift } => format!("inverse-s{shift}"),
            Method::StaticMomentumInverse { shift, beta } => {
                format!("static-inverse-s{shift}-b{beta}")
            }
            Method::DynamicMomentumInverse { shift } => format!("dynamic-inverse-s{shift}"),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Which residual the stop test (and the dynamic rate detection) watches.
///
/// The power-family methods always measure `||A x - nu x||`, so the choice
/// only matters for the inverse family. There the natural convergence
/// measure for benchmark tables is the residual of the original
/// eigenproblem, `||A x - lambda x||` with `lambda` the Rayleigh quotient of
/// `A`; the classical alternative is the residual of the applied operator,
/// `||(A - sigma I)^{-1} x - nu x||`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResidualKind {
    /// Residual of the original eigenproblem (default).
    Eigenproblem,
    /// Residual of the operator the iteration actually applies.
    Operator,
}

/// Everything a single run needs besides the matrix.
#[derive(Debug, Clone, Serialize)]
pub struct IterationConfig {
    pub method: Method,
    /// Residual stop tolerance (strict `d < tol`).
    pub tol: f64,
    pub max_iter: usize,
    pub init: InitPolicy,
    pub residual: ResidualKind,
    /// Keep a copy of every iterate for trace replay.
    pub record_vectors: bool,
}

impl IterationConfig {
    /// Family defaults: tolerance 1e-12 (power) or 1e-15 (inverse), budget
    /// 2000, all-ones start, eigenproblem residual.
    pub fn new(method: Method) -> Self {
        let tol = if method.is_inverse_family() {
            INVERSE_FAMILY_TOL
        } else {
            POWER_FAMILY_TOL
        };
        IterationConfig {
            method,
            tol,
            max_iter: DEFAULT_MAX_ITER,
            init: InitPolicy::Ones,
            residual: ResidualKind::Eigenproblem,
            record_vectors: false,
        }
    }

    pub fn with_residual(mut self, residual: ResidualKind) -> Self {
        self.residual = residual;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_init(mut self, init: InitPolicy) -> Self {
        self.init = init;
        self
    }

    pub fn with_recorded_vectors(mut self, on: bool) -> Self {
        self.record_vectors = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive and finite, got {}",
                self.tol
            )));
        }
        if self.max_iter < 3 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 3 (dynamic methods take two preliminary steps)".into(),
            ));
        }
        if let Some(beta) = self.method.fixed_beta() {
            if !(beta >= 0.0) || !beta.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "momentum parameter must be nonnegative and finite, got {beta}"
                )));
            }
        }
        if let Some(shift) = self.method.shift() {
            if !shift.is_finite() {
                return Err(Error::InvalidParameter("shift must be finite".into()));
            }
        }
        Ok(())
    }
}

/// One recorded step. `k` is 1-based; entry `k` describes the iterate
/// produced by the k-th pass through the loop.
#[derive(Debug, Clone, Serialize)]
pub struct IterationStep {
    pub k: usize,
    /// Normalization scalar `h_k` (norm of the pre-normalization update).
    pub norm: f64,
    /// Rayleigh quotient `nu_k` of the applied operator at this iterate.
    pub rayleigh: f64,
    /// Residual `d_k = ||op(x_k) - nu_k x_k||`.
    pub residual: f64,
    /// Clamped ratio of the last two residuals (dynamic methods).
    pub detected_ratio: Option<f64>,
    /// Running eigenvalue-ratio estimate `r_k` (dynamic methods).
    pub rate_estimate: Option<f64>,
    /// Momentum parameter used to form this iterate (momentum steps only).
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    Converged,
    MaxIter,
    NumericalBreakdown,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopReason::Converged => write!(f, "converged"),
            StopReason::MaxIter => write!(f, "max-iter"),
            StopReason::NumericalBreakdown => write!(f, "breakdown"),
        }
    }
}

/// Outcome of a run, including the full step trace.
///
/// `matvec_count` and `solve_count` tally one operator application per loop
/// pass, the benchmark-table cost measure: reported iteration counts equal
/// the operation counts, preliminaries included. The single start-up
/// application used to prime the loop is not tallied.
#[derive(Debug, Clone, Serialize)]
pub struct IterationResult {
    pub steps: Vec<IterationStep>,
    pub eigenvector: Vector,
    /// Final Rayleigh quotient of the applied operator (for inverse-family
    /// runs this estimates `1 / (lambda_target - sigma)`).
    pub eigenvalue_estimate: f64,
    pub stop: StopReason,
    pub matvec_count: usize,
    pub solve_count: usize,
    /// Shift used by inverse-family runs.
    pub shift: Option<f64>,
    /// Per-step iterates when `record_vectors` was set.
    #[serde(skip)]
    pub vectors: Option<Vec<Vector>>,
}

impl IterationResult {
    /// Reported iteration count: number of loop passes, preliminaries
    /// included.
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }

    pub fn terminal_residual(&self) -> f64 {
        self.steps.last().map(|s| s.residual).unwrap_or(f64::NAN)
    }

    /// Eigenvalue estimate of the original matrix: the Rayleigh quotient
    /// itself for power-family runs, the back-transform `sigma + 1/nu` for
    /// inverse-family runs.
    pub fn eigenvalue(&self) -> f64 {
        match self.shift {
            Some(sigma) => sigma + 1.0 / self.eigenvalue_estimate,
            None => self.eigenvalue_estimate,
        }
    }

    pub fn converged(&self) -> bool {
        self.stop == StopReason::Converged
    }
}

/// Rayleigh quotient and residual of an iterate under one operator
/// application, returning the applied vector for reuse. Callers pass unit
/// vectors; the quotient is not normalized here.
pub fn rayleigh_residual<F>(mut apply: F, x: &[f64]) -> Result<(f64, f64, Vector)>
where
    F: FnMut(&[f64]) -> Result<Vector>,
{
    let v = apply(x)?;
    let nu = dot(&v, x);
    let mut resid = v.clone();
    for (ri, xi) in resid.iter_mut().zip(x.iter()) {
        *ri -= nu * xi;
    }
    let d = norm2(&resid);
    if !nu.is_finite() || !d.is_finite() {
        return Err(Error::NumericalBreakdown(
            "non-finite Rayleigh quotient or residual".into(),
        ));
    }
    Ok((nu, d, v))
}

enum Operator<'a> {
    Direct(&'a Matrix),
    ShiftedInverse(LuFactors),
}

impl Operator<'_> {
    fn apply(&self, x: &[f64]) -> Result<Vector> {
        match self {
            Operator::Direct(a) => a.matvec(x),
            Operator::ShiftedInverse(f) => f.solve(x),
        }
    }
}

/// Run the method selected by `cfg` on `A`, building the initial vector
/// from the configured policy.
pub fn iterate(a: &Matrix, cfg: &IterationConfig) -> Result<IterationResult> {
    cfg.validate()?;
    let v0 = init_vector(a.n(), &cfg.init);
    iterate_from(a, cfg, v0)
}

/// Like [`iterate`] but starting from a caller-supplied vector.
pub fn iterate_from(a: &Matrix, cfg: &IterationConfig, v0: Vector) -> Result<IterationResult> {
    cfg.validate()?;
    if v0.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: v0.len(),
        });
    }
    let op = match cfg.method.shift() {
        Some(sigma) => Operator::ShiftedInverse(lu_factor(a, sigma)?),
        None => Operator::Direct(a),
    };
    run_engine(a, &op, cfg, v0)
}

pub fn power_iterate(a: &Matrix, cfg: &IterationConfig) -> Result<IterationResult> {
    expect_method(cfg, matches!(cfg.method, Method::Power), "Power")?;
    iterate(a, cfg)
}

pub fn static_momentum_iterate(a: &Matrix, cfg: &IterationConfig) -> Result<IterationResult> {
    expect_method(
        cfg,
        matches!(cfg.method, Method::StaticMomentum { .. }),
        "StaticMomentum",
    )?;
    iterate(a, cfg)
}

pub fn dynamic_momentum_iterate(a: &Matrix, cfg: &IterationConfig) -> Result<IterationResult> {
    expect_method(
        cfg,
        matches!(cfg.method, Method::DynamicMomentum),
        "DynamicMomentum",
    )?;
    iterate(a, cfg)
}

pub fn inverse_iterate(a: &Matrix, cfg: &IterationConfig) -> Result<IterationResult> {
    expect_method(
        cfg,
        matches!(cfg.method, Method::InversePower { .. }),
        "InversePower",
    )?;
    iterate(a, cfg)
}

pub fn static_momentum_inverse_iterate(
    a: &Matrix,
    cfg: &IterationConfig,
) -> Result<IterationResult> {
    expect_method(
        cfg,
        matches!(cfg.method, Method::StaticMomentumInverse { .. }),
        "StaticMomentumInverse",
    )?;
    iterate(a, cfg)
}

pub fn dynamic_momentum_inverse_iterate(
    a: &Matrix,
    cfg: &IterationConfig,
) -> Result<IterationResult> {
    expect_method(
        cfg,
        matches!(cfg.method, Method::DynamicMomentumInverse { .. }),
        "DynamicMomentumInverse",
    )?;
    iterate(a, cfg)
}

fn expect_method(cfg: &IterationConfig, ok: bool, want: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "config selects {:?}, expected {want}",
            cfg.method
        )))
    }
}

struct EngineState {
    steps: Vec<IterationStep>,
    vectors: Option<Vec<Vector>>,
}

impl EngineState {
    fn finish(
        self,
        op: &Operator,
        shift: Option<f64>,
        stop: StopReason,
        x: Vector,
    ) -> IterationResult {
        let passes = self.steps.len();
        let (matvec_count, solve_count) = match op {
            Operator::Direct(_) => (passes, 0),
            Operator::ShiftedInverse(_) => (0, passes),
        };
        let eigenvalue_estimate = self.steps.last().map(|s| s.rayleigh).unwrap_or(f64::NAN);
        IterationResult {
            steps: self.steps,
            eigenvector: x,
            eigenvalue_estimate,
            stop,
            matvec_count,
            solve_count,
            shift,
            vectors: self.vectors,
        }
    }
}

fn run_engine(
    a: &Matrix,
    op: &Operator,
    cfg: &IterationConfig,
    v0: Vector,
) -> Result<IterationResult> {
    let shift = cfg.method.shift();
    let prelim = cfg.method.preliminary_steps();
    let dynamic = cfg.method.is_dynamic();
    let fixed_beta = cfg.method.fixed_beta();
    // For inverse runs under the eigenproblem convention the stop test
    // re-measures the iterate against A itself; this extra product is
    // convergence bookkeeping, not part of the iteration, and is not
    // tallied in matvec_count.
    let eigenproblem_residual =
        cfg.residual == ResidualKind::Eigenproblem && matches!(op, Operator::ShiftedInverse(_));

    let h0 = norm2(&v0);
    if h0 == 0.0 || !h0.is_finite() {
        return Err(Error::InvalidParameter(
            "initial vector must be nonzero and finite".into(),
        ));
    }
    let x0: Vector = v0.iter().map(|t| t / h0).collect();

    // Start-up application: the power family applies A to the raw initial
    // vector, the inverse family solves against the normalized one.
    let setup = match op {
        Operator::Direct(_) => op.apply(&v0),
        Operator::ShiftedInverse(_) => op.apply(&x0),
    };

    let mut state = EngineState {
        steps: Vec::new(),
        vectors: cfg.record_vectors.then(Vec::new),
    };

    let mut v = match setup {
        Ok(v) if v.iter().all(|t| t.is_finite()) => v,
        _ => return Ok(state.finish(op, shift, StopReason::NumericalBreakdown, x0)),
    };

    let mut x_prev = x0.clone();
    let mut x_cur = x0;
    let mut h_cur = h0;
    // running eigenvalue-ratio estimate r_k (dynamic methods)
    let mut rate_est = f64::NAN;

    loop {
        let pass = state.steps.len();
        let momentum_active = pass >= prelim;

        let beta = if momentum_active {
            let b = match fixed_beta {
                Some(b) => b,
                None => {
                    // beta_k = nu_k^2 r_k^2 / 4 from the previous step's
                    // Rayleigh quotient and the running rate estimate
                    let nu = state.steps[pass - 1].rayleigh;
                    nu * nu * rate_est * rate_est / 4.0
                }
            };
            Some(b)
        } else {
            None
        };

        let mut u = v;
        if let Some(b) = beta {
            let coeff = b / h_cur;
            for (ui, xi) in u.iter_mut().zip(x_prev.iter()) {
                *ui -= coeff * xi;
            }
        }

        let h_next = norm2(&u);
        if h_next == 0.0 || !h_next.is_finite() {
            return Ok(state.finish(op, shift, StopReason::NumericalBreakdown, x_cur));
        }
        let x_next: Vector = u.into_iter().map(|t| t / h_next).collect();

        let applied = rayleigh_residual(|x| op.apply(x), &x_next);
        let (nu, mut d, v_next) = match applied {
            Ok(triple) => triple,
            Err(_) => return Ok(state.finish(op, shift, StopReason::NumericalBreakdown, x_next)),
        };
        if eigenproblem_residual {
            match rayleigh_residual(|x| a.matvec(x), &x_next) {
                Ok((_, d_a, _)) => d = d_a,
                Err(_) => {
                    return Ok(state.finish(op, shift, StopReason::NumericalBreakdown, x_next))
                }
            }
        }

        state.steps.push(IterationStep {
            k: pass + 1,
            norm: h_next,
            rayleigh: nu,
            residual: d,
            detected_ratio: None,
            rate_estimate: None,
            beta,
        });
        if let Some(vs) = state.vectors.as_mut() {
            vs.push(x_next.clone());
        }

        // Stop test precedes the rate update, so an exact zero residual
        // never feeds the ratio.
        if d < cfg.tol {
            return Ok(state.finish(op, shift, StopReason::Converged, x_next));
        }

        if dynamic && state.steps.len() >= 2 {
            let len = state.steps.len();
            let d_prev = state.steps[len - 2].residual;
            let ratio = (d / d_prev).min(1.0);
            // the first estimate is seeded with the raw residual ratio;
            // afterwards the ratio goes through the inverted rate map
            rate_est = if len == 2 { ratio } else { invert_rate(ratio) };
            let last = state.steps.last_mut().unwrap();
            last.detected_ratio = Some(ratio);
            last.rate_estimate = Some(rate_est);
        }

        if state.steps.len() >= cfg.max_iter {
            return Ok(state.finish(op, shift, StopReason::MaxIter, x_next));
        }

        x_prev = x_cur;
        x_cur = x_next;
        h_cur = h_next;
        v = v_next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::dense_eigenvalues_real;
    use crate::matrices::{generate, MatrixSpec};
    use crate::rng::DeterministicRng;

    fn diag_descending(n: usize) -> Matrix {
        generate(&MatrixSpec::DiagDescending { n }).unwrap()
    }

    #[test]
    fn rayleigh_residual_exact_eigenvector() {
        let a = Matrix::from_diag(&[2.0, 1.0]);
        let (nu, d, _) = rayleigh_residual(|x| a.matvec(x), &[1.0, 0.0]).unwrap();
        assert_eq!(nu, 2.0);
        assert_eq!(d, 0.0);
    }

    #[test]
    fn rayleigh_residual_mixed_direction() {
        let a = Matrix::from_diag(&[2.0, 1.0]);
        let s = 1.0 / 2.0f64.sqrt();
        let (nu, d, v) = rayleigh_residual(|x| a.matvec(x), &[s, s]).unwrap();
        assert!((nu - 1.5).abs() < 1e-15);
        assert!((d - 0.5).abs() < 1e-15);
        assert!((v[0] - 2.0 * s).abs() < 1e-15);
    }

    #[test]
    fn rayleigh_residual_bounded_by_spectrum() {
        let mut rng = DeterministicRng::new(17);
        for _ in 0..20 {
            let mut e = vec![0.0; 9];
            for i in 0..3 {
                for j in 0..=i {
                    let v = rng.uniform() - 0.5;
                    e[i * 3 + j] = v;
                    e[j * 3 + i] = v;
                }
            }
            let a = Matrix::dense(3, e).unwrap();
            let eigs = dense_eigenvalues_real(&a).unwrap();
            let (lo, hi) = (eigs[0], eigs[2]);
            let mut x: Vec<f64> = (0..3).map(|_| rng.uniform() - 0.5).collect();
            let nx = norm2(&x);
            x.iter_mut().for_each(|t| *t /= nx);
            let (nu, d, _) = rayleigh_residual(|y| a.matvec(y), &x).unwrap();
            assert!(nu >= lo - 1e-12 && nu <= hi + 1e-12);
            assert!(d <= hi - lo + 1e-12);
        }
    }

    #[test]
    fn power_converges_on_clean_gap() {
        let a = Matrix::from_diag(&[2.0, 0.0]);
        let cfg = IterationConfig::new(Method::Power);
        let res = power_iterate(&a, &cfg).unwrap();
        assert!(res.converged());
        assert!((res.eigenvalue() - 2.0).abs() < 1e-12);
        assert!(res.terminal_residual() < cfg.tol);
        assert!(res.iterations() <= 3);
    }

    #[test]
    fn power_hits_budget_on_narrow_gap() {
        let a = diag_descending(1000);
        let cfg = IterationConfig::new(Method::Power);
        let res = power_iterate(&a, &cfg).unwrap();
        assert_eq!(res.stop, StopReason::MaxIter);
        assert_eq!(res.iterations(), 2000);
        assert_eq!(res.matvec_count, 2000);
    }

    #[test]
    fn power_two_cycle_never_converges() {
        // eigenvalues +-1: the iterate alternates between two directions
        let a = Matrix::dense(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let cfg = IterationConfig::new(Method::Power).with_max_iter(50);
        let res = iterate_from(&a, &cfg, vec![1.0, 2.0]).unwrap();
        assert_eq!(res.stop, StopReason::MaxIter);
        // closed form: directions (1,2)/sqrt(5) and (2,1)/sqrt(5) alternate,
        // nu stays at 4/5 and the residual never decays
        for step in &res.steps {
            assert!((step.rayleigh - 0.8).abs() < 1e-12);
            assert!((step.residual - 0.6).abs() < 1e-12);
        }
    }

    #[test]
    fn static_beta_zero_matches_power_exactly() {
        let mut rng = DeterministicRng::new(3);
        for trial in 0..10 {
            let n = 4 + trial;
            let diag: Vec<f64> = (0..n).map(|_| rng.uniform() * 5.0 + 0.5).collect();
            let a = Matrix::from_diag(&diag);
            let v0: Vec<f64> = (0..n).map(|_| rng.uniform() - 0.5).collect();
            let power = iterate_from(
                &a,
                &IterationConfig::new(Method::Power).with_max_iter(200),
                v0.clone(),
            )
            .unwrap();
            let momentum = iterate_from(
                &a,
                &IterationConfig::new(Method::StaticMomentum { beta: 0.0 }).with_max_iter(200),
                v0,
            )
            .unwrap();
            assert_eq!(power.iterations(), momentum.iterations());
            for (p, m) in power.steps.iter().zip(momentum.steps.iter()) {
                let scale = p.residual.abs().max(1e-300);
                assert!((p.residual - m.residual).abs() <= 1e-14 * scale);
            }
        }
    }

    #[test]
    fn static_momentum_reaches_predicted_tail_rate() {
        // optimal parameter on diag(2,1): asymptotic ratio 1/(2+sqrt(3))
        let a = Matrix::from_diag(&[2.0, 1.0]);
        let cfg = IterationConfig::new(Method::StaticMomentum { beta: 0.25 })
            .with_tol(1e-16)
            .with_max_iter(80);
        let res = iterate_from(&a, &cfg, vec![1.0, 1.0]).unwrap();
        let steps = &res.steps;
        assert!(steps.len() >= 20, "ran {} steps", steps.len());
        let last = steps.len() - 1;
        let tail = steps[last].residual / steps[last - 1].residual;
        let predicted = 0.5 / (1.0 + 0.75f64.sqrt());
        assert!(
            (tail - predicted).abs() < 0.02,
            "tail ratio {tail} vs predicted {predicted}"
        );
    }

    #[test]
    fn static_momentum_tail_agrees_with_augmented_power() {
        // running plain power on the explicit augmented matrix shows the
        // same tail contraction as the momentum iteration on A
        use crate::spectral::build_augmented;
        let a = Matrix::from_diag(&[2.0, 1.0]);
        let aug = build_augmented(&a, 0.25).unwrap();
        // the augmented residual bottoms out near machine precision, so
        // stop above the floor and read the contraction there
        let cfg = IterationConfig::new(Method::Power)
            .with_tol(1e-13)
            .with_max_iter(80);
        let res = iterate_from(&aug, &cfg, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(res.converged());
        let steps = &res.steps;
        assert!(steps.len() >= 15);
        let last = steps.len() - 1;
        let tail = steps[last].residual / steps[last - 1].residual;
        let predicted = 0.5 / (1.0 + 0.75f64.sqrt());
        assert!(
            (tail - predicted).abs() < 0.02,
            "augmented tail {tail} vs {predicted}"
        );
    }

    #[test]
    fn static_momentum_diverges_past_the_convergence_region() {
        // beta above lambda1^2/4 = 250000 leaves no dominant augmented mode
        let a = diag_descending(1000);
        let cfg = IterationConfig::new(Method::StaticMomentum { beta: 260_000.0 });
        let res = static_momentum_iterate(&a, &cfg).unwrap();
        assert_eq!(res.stop, StopReason::MaxIter);
    }

    #[test]
    fn dynamic_converges_immediately_on_exact_eigenvector() {
        let mut diag = vec![0.0; 6];
        diag[0] = 2.0;
        let a = Matrix::from_diag(&diag);
        let cfg = IterationConfig::new(Method::DynamicMomentum);
        let mut v0 = vec![0.0; 6];
        v0[0] = 1.0;
        let res = iterate_from(&a, &cfg, v0).unwrap();
        assert!(res.converged());
        assert!(res.iterations() <= 2, "stopped in the preliminaries");
    }

    #[test]
    fn dynamic_beats_power_on_narrow_gap() {
        let a = diag_descending(1000);
        let res =
            dynamic_momentum_iterate(&a, &IterationConfig::new(Method::DynamicMomentum)).unwrap();
        assert!(res.converged());
        assert!(res.terminal_residual() < 1e-12);
        assert!(res.iterations() < 2000);
        // regression pin for the deterministic all-ones start
        assert_eq!(res.iterations(), DYNAMIC_DIAG1000_ITERS);
    }

    /// Deterministic iteration count for dynamic momentum on
    /// diag(1000..1) from the all-ones start; recorded from this
    /// implementation and pinned as a regression value.
    const DYNAMIC_DIAG1000_ITERS: usize = 682;

    #[test]
    fn dynamic_trace_respects_clamps() {
        let a = diag_descending(200);
        let res =
            dynamic_momentum_iterate(&a, &IterationConfig::new(Method::DynamicMomentum)).unwrap();
        for step in &res.steps {
            if let Some(rho) = step.detected_ratio {
                assert!((0.0..=1.0).contains(&rho));
            }
            if let Some(r) = step.rate_estimate {
                assert!((0.0..=1.0).contains(&r));
            }
            if let (Some(beta), Some(_)) = (step.beta, step.rate_estimate) {
                let nu = step.rayleigh;
                assert!(beta <= nu * nu / 4.0 + 1e-12);
            }
        }
    }

    #[test]
    fn dynamic_with_forced_zero_beta_matches_power() {
        // a dynamic-shaped run whose momentum is zeroed is a power run
        let a = diag_descending(50);
        let v0 = init_vector(50, &InitPolicy::RandomUniform { seed: 5 });
        let power = iterate_from(
            &a,
            &IterationConfig::new(Method::Power).with_max_iter(300),
            v0.clone(),
        )
        .unwrap();
        let zeroed = iterate_from(
            &a,
            &IterationConfig::new(Method::StaticMomentum { beta: 0.0 }).with_max_iter(300),
            v0,
        )
        .unwrap();
        for (p, z) in power.steps.iter().zip(zeroed.steps.iter()) {
            let scale = p.residual.abs().max(1e-300);
            assert!((p.residual - z.residual).abs() <= 1e-14 * scale);
        }
    }

    #[test]
    fn inverse_finds_the_target_eigenpair() {
        let a = Matrix::from_diag(&[2.0, 1.0]);
        let cfg = IterationConfig::new(Method::InversePower { shift: 1.9 });
        let res = iterate_from(&a, &cfg, vec![1.0, 1.0]).unwrap();
        assert!(res.converged());
        assert!((res.eigenvalue() - 2.0).abs() < 1e-10);
        let align = res.eigenvector[0].abs() / norm2(&res.eigenvector);
        assert!(1.0 - align < 1e-10);
        assert_eq!(res.matvec_count, 0);
        assert_eq!(res.solve_count, res.iterations());
    }

    #[test]
    fn residual_conventions_agree_on_the_eigenpair() {
        // same iterates either way; only the watched residual differs
        let a = diag_descending(200);
        let sigma = 201.0;
        let mut counts = Vec::new();
        for residual in [ResidualKind::Eigenproblem, ResidualKind::Operator] {
            let cfg =
                IterationConfig::new(Method::InversePower { shift: sigma }).with_residual(residual);
            let res = iterate(&a, &cfg).unwrap();
            assert!(res.converged());
            assert!((res.eigenvalue() - 200.0).abs() < 1e-9);
            counts.push(res.iterations());
        }
        // the eigenproblem residual carries the |lambda2 - sigma||lambda1 - sigma|
        // amplification, so it stops a little later
        assert!(counts[0] >= counts[1]);
        assert!(counts[0] - counts[1] < 10);
    }

    #[test]
    fn deterministic_inverse_counts_regression() {
        // pinned counts for the all-ones start at tol 1e-15 under the
        // eigenproblem residual (the benchmark-table convention)
        let a = diag_descending(1000);
        let cases = [
            (Method::InversePower { shift: 1001.0 }, 50),
            (Method::InversePower { shift: 1002.0 }, 86),
            (Method::DynamicMomentumInverse { shift: 1001.0 }, 28),
            (Method::InversePower { shift: 0.0 }, 50),
            (Method::InversePower { shift: -15.0 }, 570),
        ];
        for (method, want) in cases {
            let res = iterate(&a, &IterationConfig::new(method)).unwrap();
            assert!(res.converged());
            assert_eq!(res.iterations(), want, "{method:?}");
        }
    }

    #[test]
    fn inverse_rejects_exact_eigenvalue_shift() {
        let a = Matrix::from_diag(&[2.0, 1.0]);
        let cfg = IterationConfig::new(Method::InversePower { shift: 2.0 });
        assert!(matches!(
            iterate(&a, &cfg),
            Err(Error::SingularShift { .. })
        ));
    }

    #[test]
    fn inverse_matches_power_on_explicit_inverse() {
        // same trace as running power iteration on an explicitly formed
        // (A - sigma I)^{-1}, up to rounding in the explicit inverse
        let n = 30;
        let mut rng = DeterministicRng::new(9);
        let diag: Vec<f64> = (0..n)
            .map(|i| i as f64 + 1.0 + rng.uniform() * 0.25)
            .collect();
        let a = Matrix::from_diag(&diag);
        let sigma = 0.2;

        let factors = lu_factor(&a, sigma).unwrap();
        let mut inv = vec![0.0; n * n];
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = factors.solve(&e).unwrap();
            for i in 0..n {
                inv[i * n + j] = col[i];
            }
        }
        let inv = Matrix::dense(n, inv).unwrap();

        let tol = 1e-12;
        let inv_run = iterate_from(
            &a,
            &IterationConfig::new(Method::InversePower { shift: sigma })
                .with_tol(tol)
                .with_residual(ResidualKind::Operator),
            vec![1.0; n],
        )
        .unwrap();
        let pow_run = iterate_from(
            &inv,
            &IterationConfig::new(Method::Power).with_tol(tol),
            vec![1.0; n],
        )
        .unwrap();
        assert_eq!(inv_run.iterations(), pow_run.iterations());
        for (a_, b_) in inv_run.steps.iter().zip(pow_run.steps.iter()) {
            assert!((a_.rayleigh - b_.rayleigh).abs() <= 1e-12 * a_.rayleigh.abs().max(1.0));
            assert!((a_.residual - b_.residual).abs() <= 1e-12 * a_.residual.max(1e-9));
        }
    }

    #[test]
    fn rayleigh_quotients_stay_in_symmetric_range() {
        let mut rng = DeterministicRng::new(23);
        let n = 20;
        let mut e = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = rng.uniform() - 0.5;
                e[i * n + j] = v;
                e[j * n + i] = v;
            }
        }
        let a = Matrix::dense(n, e).unwrap();
        let eigs = dense_eigenvalues_real(&a).unwrap();
        let (lo, hi) = (eigs[0], eigs[n - 1]);
        for method in [Method::Power, Method::DynamicMomentum] {
            let cfg = IterationConfig::new(method).with_max_iter(400);
            let res = iterate(&a, &cfg).unwrap();
            for step in &res.steps {
                assert!(step.rayleigh >= lo - 1e-10 && step.rayleigh <= hi + 1e-10);
            }
        }
    }

    #[test]
    fn converged_certificate_recomputes_below_tol() {
        let a = diag_descending(100);
        for method in [
            Method::DynamicMomentum,
            Method::StaticMomentum {
                beta: 99.0 * 99.0 / 4.0,
            },
        ] {
            let cfg = IterationConfig::new(method).with_tol(1e-10);
            let res = iterate(&a, &cfg).unwrap();
            assert!(res.converged());
            let (nu, d, _) = rayleigh_residual(|x| a.matvec(x), &res.eigenvector).unwrap();
            assert!((nu - res.eigenvalue_estimate).abs() <= 1e-12 * nu.abs());
            assert!(d < cfg.tol * 1.01);
        }
    }

    #[test]
    fn cost_accounting_is_one_apply_per_step() {
        let a = diag_descending(100);
        let res = iterate(&a, &IterationConfig::new(Method::DynamicMomentum)).unwrap();
        assert_eq!(res.matvec_count, res.iterations());
        assert_eq!(res.solve_count, 0);

        let res = iterate(
            &a,
            &IterationConfig::new(Method::DynamicMomentumInverse { shift: 101.0 }),
        )
        .unwrap();
        assert_eq!(res.solve_count, res.iterations());
        assert_eq!(res.matvec_count, 0);
    }

    #[test]
    fn config_validation() {
        let bad_tol = IterationConfig::new(Method::Power).with_tol(0.0);
        assert!(bad_tol.validate().is_err());
        let bad_iter = IterationConfig::new(Method::Power).with_max_iter(2);
        assert!(bad_iter.validate().is_err());
        let bad_beta = IterationConfig::new(Method::StaticMomentum { beta: -1.0 });
        assert!(bad_beta.validate().is_err());
        assert!(IterationConfig::new(Method::DynamicMomentum)
            .validate()
            .is_ok());
    }
}
