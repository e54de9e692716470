//! Minimal dense/CSR linear-algebra kernels: matrix-vector products, dot
//! products and norms, and a partial-pivoting LU factorization with
//! triangular solves for the shifted inverse iterations.

use crate::error::{Error, Result};

/// Default cap on the dimension a matrix may be densified to.
///
/// The inverse iterations factor `A - sigma*I` with a dense LU; sparse inputs
/// are expanded to dense storage only up to this dimension.
pub const DEFAULT_DENSE_CAP: usize = 5000;

/// Vectors are plain `Vec<f64>`; all kernels operate on slices.
pub type Vector = Vec<f64>;

/// A real square matrix in dense row-major or CSR storage.
///
/// The `symmetry_hint` flag is metadata only; no kernel trusts it for math.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    storage: Storage,
    symmetry_hint: bool,
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    /// Row-major `n * n` entries.
    Dense(Vec<f64>),
    /// Compressed sparse rows: `row_ptr` has length `n + 1`, column indices
    /// are strictly increasing within each row.
    Csr {
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    },
}

impl Matrix {
    /// Build a dense matrix from row-major entries.
    pub fn dense(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "dense storage needs {} entries for n = {}, got {}",
                n * n,
                n,
                entries.len()
            )));
        }
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite dense entry".into()));
        }
        Ok(Matrix {
            n,
            storage: Storage::Dense(entries),
            symmetry_hint: false,
        })
    }

    /// Build a CSR matrix, validating the storage invariants.
    pub fn csr(
        n: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_ptr.len() != n + 1 {
            return Err(Error::InvalidMatrix(format!(
                "row_ptr length {} != n + 1 = {}",
                row_ptr.len(),
                n + 1
            )));
        }
        if row_ptr[0] != 0 || row_ptr[n] != col_idx.len() || col_idx.len() != values.len() {
            return Err(Error::InvalidMatrix("inconsistent CSR lengths".into()));
        }
        for i in 0..n {
            if row_ptr[i] > row_ptr[i + 1] {
                return Err(Error::InvalidMatrix(format!(
                    "row_ptr decreases at row {i}"
                )));
            }
            let row = &col_idx[row_ptr[i]..row_ptr[i + 1]];
            for (pos, &j) in row.iter().enumerate() {
                if j >= n {
                    return Err(Error::InvalidMatrix(format!(
                        "column index {j} out of range in row {i}"
                    )));
                }
                if pos > 0 && row[pos - 1] >= j {
                    return Err(Error::InvalidMatrix(format!(
                        "column indices not strictly increasing in row {i}"
                    )));
                }
            }
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite CSR value".into()));
        }
        Ok(Matrix {
            n,
            storage: Storage::Csr {
                row_ptr,
                col_idx,
                values,
            },
            symmetry_hint: false,
        })
    }

    /// Diagonal matrix stored as CSR.
    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let row_ptr = (0..=n).collect();
        let col_idx = (0..n).collect();
        Matrix::csr(n, row_ptr, col_idx, diag.to_vec())
            .expect("diagonal CSR is always valid")
            .with_symmetry_hint(true)
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_diag(&vec![1.0; n])
    }

    pub fn with_symmetry_hint(mut self, hint: bool) -> Self {
        self.symmetry_hint = hint;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn symmetry_hint(&self) -> bool {
        self.symmetry_hint
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    /// Number of explicitly stored entries.
    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(e) => e.len(),
            Storage::Csr { values, .. } => values.len(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "index out of range");
        match &self.storage {
            Storage::Dense(e) => e[i * self.n + j],
            Storage::Csr {
                row_ptr,
                col_idx,
                values,
            } => {
                let row = &col_idx[row_ptr[i]..row_ptr[i + 1]];
                match row.binary_search(&j) {
                    Ok(pos) => values[row_ptr[i] + pos],
                    Err(_) => 0.0,
                }
            }
        }
    }

    /// CSR views: `(row_ptr, col_idx, values)` when the storage is CSR.
    pub fn csr_parts(&self) -> Option<(&[usize], &[usize], &[f64])> {
        match &self.storage {
            Storage::Csr {
                row_ptr,
                col_idx,
                values,
            } => Some((row_ptr, col_idx, values)),
            Storage::Dense(_) => None,
        }
    }

    /// Row-major dense entries, expanding CSR storage up to `cap`.
    pub fn dense_entries(&self, cap: usize) -> Result<Vec<f64>> {
        if self.n > cap {
            return Err(Error::DenseCapExceeded { n: self.n, cap });
        }
        match &self.storage {
            Storage::Dense(e) => Ok(e.clone()),
            Storage::Csr {
                row_ptr,
                col_idx,
                values,
            } => {
                let mut out = vec![0.0; self.n * self.n];
                for i in 0..self.n {
                    for k in row_ptr[i]..row_ptr[i + 1] {
                        out[i * self.n + col_idx[k]] = values[k];
                    }
                }
                Ok(out)
            }
        }
    }

    /// Convert to dense storage (same cap rules as [`Matrix::dense_entries`]).
    pub fn to_dense(&self, cap: usize) -> Result<Matrix> {
        let entries = self.dense_entries(cap)?;
        Ok(Matrix {
            n: self.n,
            storage: Storage::Dense(entries),
            symmetry_hint: self.symmetry_hint,
        })
    }

    /// Matrix-vector product `A * x`.
    ///
    /// Pure function; callers wanting cost accounting count invocations.
    pub fn matvec(&self, x: &[f64]) -> Result<Vector> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        let mut y = vec![0.0; self.n];
        match &self.storage {
            Storage::Dense(e) => {
                for i in 0..self.n {
                    let row = &e[i * self.n..(i + 1) * self.n];
                    let mut acc = 0.0;
                    for (a, b) in row.iter().zip(x.iter()) {
                        acc += a * b;
                    }
                    y[i] = acc;
                }
            }
            Storage::Csr {
                row_ptr,
                col_idx,
                values,
            } => {
                for i in 0..self.n {
                    let mut acc = 0.0;
                    for k in row_ptr[i]..row_ptr[i + 1] {
                        acc += values[k] * x[col_idx[k]];
                    }
                    y[i] = acc;
                }
            }
        }
        Ok(y)
    }

    /// Frobenius norm of the stored entries.
    pub fn frobenius_norm(&self) -> f64 {
        let sq: f64 = match &self.storage {
            Storage::Dense(e) => e.iter().map(|v| v * v).sum(),
            Storage::Csr { values, .. } => values.iter().map(|v| v * v).sum(),
        };
        sq.sqrt()
    }
}

/// Euclidean inner product. Panics on length mismatch.
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "dot: length mismatch");
    x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
}

/// Euclidean norm.
pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    for v in x.iter_mut() {
        *v *= alpha;
    }
}

/// Packed LU factors of `A - sigma*I` with partial pivoting.
///
/// `lu` stores the unit-lower factor strictly below the diagonal and the
/// upper factor on and above it; `perm[i]` is the original row moved to
/// position `i`, so `P(A - sigma*I) = L*U`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    perm: Vec<usize>,
    lu: Vec<f64>,
    sigma: f64,
}

/// Relative pivot threshold below which the shifted matrix is declared
/// singular (the shift equals an eigenvalue to working precision).
const SINGULAR_PIVOT_REL: f64 = 1e-14;

/// Factor `A - sigma*I` with partial pivoting, densifying sparse input up to
/// the default cap.
pub fn lu_factor(a: &Matrix, sigma: f64) -> Result<LuFactors> {
    lu_factor_with_cap(a, sigma, DEFAULT_DENSE_CAP)
}

pub fn lu_factor_with_cap(a: &Matrix, sigma: f64, cap: usize) -> Result<LuFactors> {
    if !sigma.is_finite() {
        return Err(Error::InvalidParameter("shift must be finite".into()));
    }
    let n = a.n();
    let mut m = a.dense_entries(cap)?;
    for i in 0..n {
        m[i * n + i] -= sigma;
    }
    let max_abs = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if max_abs == 0.0 {
        return Err(Error::SingularShift {
            sigma,
            pivot: 0.0,
            column: 0,
        });
    }
    let threshold = SINGULAR_PIVOT_REL * max_abs;

    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        // pivot search in the current column
        let mut p = col;
        let mut best = m[col * n + col].abs();
        for i in col + 1..n {
            let v = m[i * n + col].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best < threshold {
            return Err(Error::SingularShift {
                sigma,
                pivot: best,
                column: col,
            });
        }
        if p != col {
            perm.swap(col, p);
            for j in 0..n {
                m.swap(col * n + j, p * n + j);
            }
        }
        let pivot = m[col * n + col];
        for i in col + 1..n {
            let l = m[i * n + col] / pivot;
            m[i * n + col] = l;
            if l != 0.0 {
                for j in col + 1..n {
                    m[i * n + j] -= l * m[col * n + j];
                }
            }
        }
    }
    Ok(LuFactors {
        n,
        perm,
        lu: m,
        sigma,
    })
}

impl LuFactors {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Solve `(A - sigma*I) v = b` via the stored factors (one forward and
    /// one backward triangular solve).
    pub fn solve(&self, b: &[f64]) -> Result<Vector> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        // forward substitution on the permuted right-hand side
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = b[self.perm[i]];
            for j in 0..i {
                acc -= self.lu[i * n + j] * y[j];
            }
            y[i] = acc;
        }
        // backward substitution
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NumericalBreakdown(
                "non-finite triangular solve result".into(),
            ));
        }
        Ok(x)
    }

    /// Recompute `L * U` (rows in pivoted order). Test support for the
    /// reconstruction invariant.
    pub fn factor_product(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                // (L*U)[i][j] = sum_k L[i][k] U[k][j]; L unit-lower, U upper
                let kmax = i.min(j);
                let mut acc = 0.0;
                for k in 0..kmax {
                    acc += self.lu[i * n + k] * self.lu[k * n + j];
                }
                acc += if i <= j {
                    self.lu[i * n + j] // L[i][i] = 1
                } else {
                    self.lu[i * n + j] * self.lu[j * n + j]
                };
                out[i * n + j] = acc;
            }
        }
        out
    }
}

/// Free-function form of [`LuFactors::solve`].
pub fn lu_solve(factors: &LuFactors, b: &[f64]) -> Result<Vector> {
    factors.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::DeterministicRng;
    use proptest::prelude::*;

    fn csr_swap2() -> Matrix {
        // [[0,1],[1,0]]
        Matrix::csr(2, vec![0, 1, 2], vec![1, 0], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn matvec_identity() {
        let a = Matrix::identity(3);
        let y = a.matvec(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(y, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn matvec_diagonal() {
        let a = Matrix::from_diag(&[2.0, 1.0]);
        let y = a.matvec(&[1.0, 1.0]).unwrap();
        assert_eq!(y, vec![2.0, 1.0]);
    }

    #[test]
    fn matvec_csr_permutation() {
        let a = csr_swap2();
        let y = a.matvec(&[3.0, 4.0]).unwrap();
        assert_eq!(y, vec![4.0, 3.0]);
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let a = Matrix::identity(3);
        assert!(matches!(
            a.matvec(&[1.0, 2.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn dot_and_norm_basics() {
        assert_eq!(dot(&[1.0, 0.0], &[0.0, 1.0]), 0.0);
        assert_eq!(norm2(&[3.0, 4.0]), 5.0);
        assert_eq!(dot(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]), 32.0);
    }

    #[test]
    fn csr_invariants_rejected() {
        // decreasing columns within a row
        assert!(Matrix::csr(2, vec![0, 2, 2], vec![1, 0], vec![1.0, 2.0]).is_err());
        // column out of range
        assert!(Matrix::csr(2, vec![0, 1, 1], vec![2], vec![1.0]).is_err());
        // bad row_ptr length
        assert!(Matrix::csr(2, vec![0, 1], vec![0], vec![1.0]).is_err());
        // non-finite value
        assert!(Matrix::csr(1, vec![0, 1], vec![0], vec![f64::NAN]).is_err());
    }

    #[test]
    fn dense_rejects_non_finite() {
        assert!(Matrix::dense(1, vec![f64::INFINITY]).is_err());
        assert!(Matrix::dense(2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn lu_diagonal_no_pivoting() {
        let a = Matrix::from_diag(&[2.0, 1.0]);
        let f = lu_factor(&a, 0.0).unwrap();
        assert_eq!(f.perm(), &[0, 1]);
        let p = f.factor_product();
        assert_eq!(p, vec![2.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn lu_singular_on_exact_eigenvalue_shift() {
        let diag: Vec<f64> = (1..=1000).rev().map(|v| v as f64).collect();
        let a = Matrix::from_diag(&diag);
        match lu_factor(&a, 1000.0) {
            Err(Error::SingularShift { .. }) => {}
            other => panic!("expected SingularShift, got {other:?}"),
        }
    }

    #[test]
    fn lu_pivoting_reconstructs_swap_matrix() {
        let a = Matrix::dense(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let f = lu_factor(&a, 0.0).unwrap();
        assert_eq!(f.perm(), &[1, 0]);
        // P*A must equal L*U entrywise
        let p = f.factor_product();
        let n = 2;
        for i in 0..n {
            for j in 0..n {
                let want = a.get(f.perm()[i], j);
                assert!((p[i * n + j] - want).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn lu_solve_identity_and_diagonal() {
        let f = lu_factor(&Matrix::identity(2), 0.0).unwrap();
        assert_eq!(f.solve(&[5.0, 6.0]).unwrap(), vec![5.0, 6.0]);

        let f = lu_factor(&Matrix::from_diag(&[2.0, 4.0]), 0.0).unwrap();
        assert_eq!(f.solve(&[2.0, 4.0]).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn lu_solve_roundtrip_residual() {
        let a = Matrix::dense(2, vec![4.0, 3.0, 6.0, 3.0]).unwrap();
        let f = lu_factor(&a, 0.0).unwrap();
        let b = [10.0, 12.0];
        let v = f.solve(&b).unwrap();
        let av = a.matvec(&v).unwrap();
        let resid = norm2(&[av[0] - b[0], av[1] - b[1]]);
        assert!(resid <= 1e-12, "residual {resid}");
    }

    fn random_dense(n: usize, rng: &mut DeterministicRng) -> Matrix {
        // diagonally dominant so the factorization stays well conditioned
        let mut e = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                e[i * n + j] = rng.uniform() - 0.5;
            }
            e[i * n + i] += n as f64;
        }
        Matrix::dense(n, e).unwrap()
    }

    #[test]
    fn lu_roundtrip_random_well_conditioned() {
        let mut rng = DeterministicRng::new(42);
        for trial in 0..20 {
            let n = 2 + (trial % 7) * 7; // up to 44
            let a = random_dense(n, &mut rng);
            let sigma = rng.uniform() - 0.5;
            let f = lu_factor(&a, sigma).unwrap();
            let p = f.factor_product();
            let mut diff_sq = 0.0;
            let mut ref_sq = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let shifted =
                        a.get(f.perm()[i], j) - if f.perm()[i] == j { sigma } else { 0.0 };
                    diff_sq += (p[i * n + j] - shifted).powi(2);
                    ref_sq += shifted * shifted;
                }
            }
            assert!(diff_sq.sqrt() <= 1e-11 * ref_sq.sqrt());
        }
    }

    #[test]
    fn dense_and_csr_matvec_agree() {
        let mut rng = DeterministicRng::new(7);
        let n: usize = 30;
        // random tridiagonal-ish CSR
        let mut row_ptr = vec![0usize];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for i in 0..n {
            for j in i.saturating_sub(1)..(i + 2).min(n) {
                col_idx.push(j);
                values.push(rng.uniform() - 0.5);
            }
            row_ptr.push(col_idx.len());
        }
        let sparse = Matrix::csr(n, row_ptr, col_idx, values).unwrap();
        let dense = sparse.to_dense(DEFAULT_DENSE_CAP).unwrap();
        let x: Vec<f64> = (0..n).map(|_| rng.uniform() - 0.5).collect();
        let ys = sparse.matvec(&x).unwrap();
        let yd = dense.matvec(&x).unwrap();
        for (a, b) in ys.iter().zip(yd.iter()) {
            let scale = a.abs().max(b.abs()).max(1.0);
            assert!((a - b).abs() <= 1e-14 * scale);
        }
    }

    proptest! {
        #[test]
        fn matvec_linearity(seed in 0u64..500) {
            let mut rng = DeterministicRng::new(seed);
            let n = 8;
            let a = random_dense(n, &mut rng);
            let x: Vec<f64> = (0..n).map(|_| rng.uniform() - 0.5).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.uniform() - 0.5).collect();
            let alpha = rng.uniform() * 2.0 - 1.0;
            let beta = rng.uniform() * 2.0 - 1.0;
            let combo: Vec<f64> = x.iter().zip(y.iter()).map(|(a_, b_)| alpha * a_ + beta * b_).collect();
            let lhs = a.matvec(&combo).unwrap();
            let ax = a.matvec(&x).unwrap();
            let ay = a.matvec(&y).unwrap();
            for i in 0..n {
                let rhs = alpha * ax[i] + beta * ay[i];
                let scale = lhs[i].abs().max(rhs.abs()).max(1.0);
                prop_assert!((lhs[i] - rhs).abs() <= 1e-12 * scale);
            }
        }
    }
}
