//! Brute-force dense eigensolver used as an oracle for the spectral theory
//! and for small verification problems.
//!
//! Householder reduction to Hessenberg form followed by the classic
//! implicit double-shift QR sweep, eigenvalues only. Not a production
//! eigensolver: it exists so the closed-form spectral predictions can be
//! checked against an independent computation.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use num_complex::Complex64;

/// All `n` eigenvalues of a real square matrix, unordered.
pub fn dense_eigenvalues(a: &Matrix) -> Result<Vec<Complex64>> {
    let n = a.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = a.dense_entries(n)?;
    hessenberg(&mut h, n);
    francis_qr(&mut h, n)
}

/// Real eigenvalues of a matrix expected to have a real spectrum (for
/// example a symmetric one), sorted ascending. Errors if any eigenvalue has
/// a non-negligible imaginary part.
pub fn dense_eigenvalues_real(a: &Matrix) -> Result<Vec<f64>> {
    let eigs = dense_eigenvalues(a)?;
    let scale = eigs.iter().fold(1e-300f64, |acc, e| acc.max(e.norm()));
    let mut out = Vec::with_capacity(eigs.len());
    for e in eigs {
        if e.im.abs() > 1e-8 * scale {
            return Err(Error::NumericalBreakdown(format!(
                "expected a real spectrum, found eigenvalue {e}"
            )));
        }
        out.push(e.re);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Householder similarity reduction to upper Hessenberg form, in place.
fn hessenberg(a: &mut [f64], n: usize) {
    for k in 0..n.saturating_sub(2) {
        let mut norm_sq = 0.0;
        for i in k + 1..n {
            norm_sq += a[i * n + k] * a[i * n + k];
        }
        if norm_sq == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        // sign chosen to avoid cancellation in v[0]
        let alpha = if x0 >= 0.0 {
            -norm_sq.sqrt()
        } else {
            norm_sq.sqrt()
        };
        let mut v = vec![0.0; n - k - 1];
        v[0] = x0 - alpha;
        for i in k + 2..n {
            v[i - k - 1] = a[i * n + k];
        }
        let v_sq: f64 = v.iter().map(|t| t * t).sum();
        if v_sq == 0.0 {
            continue;
        }
        let tau = 2.0 / v_sq;

        // left update: rows k+1..n, all columns k..n
        for j in k..n {
            let mut s = 0.0;
            for i in k + 1..n {
                s += v[i - k - 1] * a[i * n + j];
            }
            s *= tau;
            for i in k + 1..n {
                a[i * n + j] -= s * v[i - k - 1];
            }
        }
        // right update: all rows, columns k+1..n
        for i in 0..n {
            let mut s = 0.0;
            for j in k + 1..n {
                s += a[i * n + j] * v[j - k - 1];
            }
            s *= tau;
            for j in k + 1..n {
                a[i * n + j] -= s * v[j - k - 1];
            }
        }
        // the reflector annihilates these entries exactly
        a[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            a[i * n + k] = 0.0;
        }
    }
}

/// Implicit double-shift QR on an upper Hessenberg matrix; returns all
/// eigenvalues. The matrix is destroyed.
fn francis_qr(a: &mut [f64], n: usize) -> Result<Vec<Complex64>> {
    let eps = f64::EPSILON;
    let mut eigs: Vec<Complex64> = Vec::with_capacity(n);

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i * n + j].abs();
        }
    }
    if anorm == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); n]);
    }

    let mut t = 0.0;
    let mut nn = n as isize - 1;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let nnu = nn as usize;
            // look for a negligible subdiagonal entry
            let mut l = nnu;
            while l >= 1 {
                let s = a[(l - 1) * n + (l - 1)].abs() + a[l * n + l].abs();
                let s = if s == 0.0 { anorm } else { s };
                if a[l * n + (l - 1)].abs() <= eps * s {
                    a[l * n + (l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nnu * n + nnu];
            if l == nnu {
                // single real eigenvalue deflated
                eigs.push(Complex64::new(x + t, 0.0));
                nn -= 1;
                break;
            }
            let mut y = a[(nnu - 1) * n + (nnu - 1)];
            let mut w = a[nnu * n + (nnu - 1)] * a[(nnu - 1) * n + nnu];
            if l == nnu - 1 {
                // 2x2 block: quadratic formula
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + z.copysign(p);
                    let r1 = x + z;
                    let r2 = if z != 0.0 { x - w / z } else { r1 };
                    eigs.push(Complex64::new(r1, 0.0));
                    eigs.push(Complex64::new(r2, 0.0));
                } else {
                    eigs.push(Complex64::new(x + p, z));
                    eigs.push(Complex64::new(x + p, -z));
                }
                nn -= 2;
                break;
            }

            if its == 100 {
                return Err(Error::NumericalBreakdown(
                    "QR eigensolver failed to converge".into(),
                ));
            }
            if its > 0 && its % 10 == 0 {
                // exceptional shift
                t += x;
                for i in 0..=nnu {
                    a[i * n + i] -= x;
                }
                let s = a[nnu * n + (nnu - 1)].abs() + a[(nnu - 1) * n + (nnu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // find two consecutive small subdiagonals
            let mut m = nnu - 2;
            let mut p;
            let mut q;
            let mut r;
            loop {
                let z = a[m * n + m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[(m + 1) * n + m] + a[m * n + (m + 1)];
                q = a[(m + 1) * n + (m + 1)] - z - rr - ss;
                r = a[(m + 2) * n + (m + 1)];
                let scale = p.abs() + q.abs() + r.abs();
                p /= scale;
                q /= scale;
                r /= scale;
                if m == l {
                    break;
                }
                let u = a[m * n + (m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs()
                    * (a[(m - 1) * n + (m - 1)].abs() + z.abs() + a[(m + 1) * n + (m + 1)].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nnu {
                a[i * n + (i - 2)] = 0.0;
            }
            for i in m + 3..=nnu {
                a[i * n + (i - 3)] = 0.0;
            }

            // double QR sweep: chase the bulge from m to nn-1
            for k in m..nnu {
                if k != m {
                    p = a[k * n + (k - 1)];
                    q = a[(k + 1) * n + (k - 1)];
                    r = if k != nnu - 1 {
                        a[(k + 2) * n + (k - 1)]
                    } else {
                        0.0
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[k * n + (k - 1)] = -a[k * n + (k - 1)];
                    }
                } else {
                    a[k * n + (k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;

                // row modification
                for j in k..=nnu {
                    let mut pp = a[k * n + j] + q * a[(k + 1) * n + j];
                    if k != nnu - 1 {
                        pp += r * a[(k + 2) * n + j];
                        a[(k + 2) * n + j] -= pp * z;
                    }
                    a[(k + 1) * n + j] -= pp * y;
                    a[k * n + j] -= pp * x;
                }
                // column modification
                let imax = nnu.min(k + 3);
                for i in l..=imax {
                    let mut pp = x * a[i * n + k] + y * a[i * n + (k + 1)];
                    if k != nnu - 1 {
                        pp += z * a[i * n + (k + 2)];
                        a[i * n + (k + 2)] -= pp * r;
                    }
                    a[i * n + (k + 1)] -= pp * q;
                    a[i * n + k] -= pp;
                }
            }
        }
    }
    Ok(eigs)
}

/// Singular values of a dense row-major matrix via one-sided Jacobi
/// rotations, sorted descending. Accurate for the small singular values
/// needed by rank and nullity decisions.
pub fn singular_values(entries: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(entries.len(), n * n, "singular_values: not an n*n matrix");
    let mut a = entries.to_vec();
    let tol = 1e-14;
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..n {
                    let vp = a[i * n + p];
                    let vq = a[i * n + q];
                    app += vp * vp;
                    aqq += vq * vq;
                    apq += vp * vq;
                }
                if apq == 0.0 || apq.abs() <= tol * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let tan = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cos = 1.0 / (1.0 + tan * tan).sqrt();
                let sin = cos * tan;
                for i in 0..n {
                    let vp = a[i * n + p];
                    let vq = a[i * n + q];
                    a[i * n + p] = cos * vp - sin * vq;
                    a[i * n + q] = sin * vp + cos * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n)
        .map(|j| {
            let mut s = 0.0;
            for i in 0..n {
                s += a[i * n + j] * a[i * n + j];
            }
            s.sqrt()
        })
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}
