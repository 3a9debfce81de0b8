//! One-sided (Hestenes) Jacobi SVD.
//!
//! The tall orientation of the input (transposed when `m < n`) has its
//! columns orthogonalised by plane rotations; the rotations accumulate into
//! the right factor. A pair `(p, q)` is rotated while
//! `|b_p·b_q| > rows·eps·‖b_p‖‖b_q‖`, and the sweep loop ends once a full
//! sweep applies no rotation.

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Absolute off-diagonal criterion, relative to `‖A‖_F²`, accepted as a
/// fallback when the relative pair test stalls at round-off.
const ABS_OFFDIAG_TOL: f64 = 1e-14;

/// Thin SVD `A = U·diag(sigma)·Vᵀ` truncated to the numerical rank.
#[derive(Debug, Clone)]
pub struct ThinSvd {
    u: DenseMatrix,
    sigma: Vec<f64>,
    v: DenseMatrix,
}

impl ThinSvd {
    /// Left singular vectors, `m x k`.
    pub fn u(&self) -> &DenseMatrix {
        &self.u
    }

    /// Singular values, positive and non-increasing.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Right singular vectors, `n x k`.
    pub fn v(&self) -> &DenseMatrix {
        &self.v
    }

    /// Numerical rank `k`.
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// Rebuilds `U·Σ·Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let (m, n, k) = (self.u.rows(), self.v.rows(), self.rank());
        let mut out = DenseMatrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..k {
                    acc += self.u[(i, l)] * self.sigma[l] * self.v[(j, l)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}

/// Default relative rank threshold `max(m, n)·2.2e-16`.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * 2.2e-16
}

/// Thin SVD with the default rank threshold.
pub fn thin_svd(a: &DenseMatrix) -> Result<ThinSvd> {
    thin_svd_with_tol(a, default_rank_tol(a.rows(), a.cols()))
}

/// Thin SVD keeping singular values `σ_i > tol·σ_1`.
pub fn thin_svd_with_tol(a: &DenseMatrix, tol: f64) -> Result<ThinSvd> {
    if a.frobenius_norm_sq() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let full = jacobi(a)?;
    let sigma_max = full.sigma[0];
    if sigma_max == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let k = full
        .sigma
        .iter()
        .take_while(|&&s| s > tol * sigma_max)
        .count()
        .max(1);

    let (m, n) = a.shape();
    let (left, right) = if full.transposed {
        (&full.right, &full.left)
    } else {
        (&full.left, &full.right)
    };
    let mut u = DenseMatrix::zeros(m, k);
    let mut v = DenseMatrix::zeros(n, k);
    for l in 0..k {
        let s = full.sigma[l];
        let (lcol, rcol) = (&left[l], &right[l]);
        // The rotated columns carry the factor sigma; the rotations do not.
        if full.transposed {
            for (i, x) in lcol.iter().enumerate() {
                u[(i, l)] = *x;
            }
            for (j, x) in rcol.iter().enumerate() {
                v[(j, l)] = x / s;
            }
        } else {
            for (i, x) in lcol.iter().enumerate() {
                u[(i, l)] = x / s;
            }
            for (j, x) in rcol.iter().enumerate() {
                v[(j, l)] = *x;
            }
        }
    }
    Ok(ThinSvd {
        u,
        sigma: full.sigma[..k].to_vec(),
        v,
    })
}

/// All `min(m, n)` singular values in non-increasing order, zeros included.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    if a.frobenius_norm_sq() == 0.0 {
        return Ok(vec![0.0; a.rows().min(a.cols())]);
    }
    Ok(jacobi(a)?.sigma)
}

struct JacobiOutput {
    /// Rotated columns of the tall orientation, sorted by norm.
    left: Vec<Vec<f64>>,
    /// Accumulated rotations, columns sorted alongside `left`.
    right: Vec<Vec<f64>>,
    sigma: Vec<f64>,
    transposed: bool,
}

fn jacobi(a: &DenseMatrix) -> Result<JacobiOutput> {
    let transposed = a.rows() < a.cols();
    let (rows, cols) = if transposed {
        (a.cols(), a.rows())
    } else {
        (a.rows(), a.cols())
    };
    let mut b: Vec<Vec<f64>> = (0..cols)
        .map(|j| {
            if transposed {
                a.row(j).to_vec()
            } else {
                a.column(j)
            }
        })
        .collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| {
            let mut e = vec![0.0; cols];
            e[j] = 1.0;
            e
        })
        .collect();

    let rel_tol = rows as f64 * f64::EPSILON;
    let abs_tol = ABS_OFFDIAG_TOL * a.frobenius_norm_sq();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        let mut max_off = 0.0f64;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (alpha, beta, gamma) = gram_entries(&b[p], &b[q]);
                max_off = max_off.max(gamma.abs());
                if alpha == 0.0 || beta == 0.0 || gamma.abs() <= rel_tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate(&mut b, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated || max_off == 0.0 {
            converged = true;
            break;
        }
    }
    if !converged {
        let max_off = (0..cols)
            .flat_map(|p| ((p + 1)..cols).map(move |q| (p, q)))
            .map(|(p, q)| gram_entries(&b[p], &b[q]).2.abs())
            .fold(0.0, f64::max);
        if max_off >= abs_tol {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let norms: Vec<f64> = b.iter().map(|col| norm2(col)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma = order.iter().map(|&i| norms[i]).collect();
    let left = order.iter().map(|&i| std::mem::take(&mut b[i])).collect();
    let right = order.iter().map(|&i| std::mem::take(&mut v[i])).collect();
    Ok(JacobiOutput {
        left,
        right,
        sigma,
        transposed,
    })
}

#[inline]
fn gram_entries(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        alpha += a * a;
        beta += b * b;
        gamma += a * b;
    }
    (alpha, beta, gamma)
}

#[inline]
fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

fn norm2(x: &[f64]) -> f64 {
    // scaled to avoid overflow on large entries
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * x.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

/// Moore–Penrose inverse through the thin SVD; singular values at or below
/// `rtol·σ_1` are treated as zero. The zero matrix maps to the zero matrix.
pub fn pseudo_inverse(a: &DenseMatrix, rtol: f64) -> Result<DenseMatrix> {
    let (m, n) = a.shape();
    let svd = match thin_svd_with_tol(a, rtol) {
        Ok(svd) => svd,
        Err(Error::ZeroMatrix) => return Ok(DenseMatrix::zeros(n, m)),
        Err(e) => return Err(e),
    };
    let mut out = DenseMatrix::zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            let mut acc = 0.0;
            for l in 0..svd.rank() {
                acc += svd.v[(i, l)] * svd.u[(j, l)] / svd.sigma[l];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        let a = DenseMatrix::diag(&[3.0, 2.0]).unwrap();
        let svd = thin_svd(&a).unwrap();
        assert_eq!(svd.rank(), 2);
        assert!((svd.sigma()[0] - 3.0).abs() < 1e-15);
        assert!((svd.sigma()[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rank_one_ones() {
        let a = DenseMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        let svd = thin_svd(&a).unwrap();
        assert_eq!(svd.rank(), 1);
        assert!((svd.sigma()[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix_is_an_error() {
        let a = DenseMatrix::zeros(3, 2);
        assert!(matches!(thin_svd(&a), Err(Error::ZeroMatrix)));
        assert_eq!(singular_values(&a).unwrap(), vec![0.0, 0.0]);
        assert_eq!(pseudo_inverse(&a, 1e-12).unwrap(), DenseMatrix::zeros(2, 3));
    }

    #[test]
    fn wide_and_tall_agree() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0, 0.5, -1.0], [0.0, 3.0, 1.0, 2.0]]).unwrap();
        let s1 = singular_values(&a).unwrap();
        let s2 = singular_values(&a.transpose()).unwrap();
        for (x, y) in s1.iter().zip(&s2) {
            assert!((x - y).abs() < 1e-13);
        }
        let rec = thin_svd(&a).unwrap().reconstruct();
        assert!(rec.sub(&a).unwrap().frobenius_norm() < 1e-13 * a.frobenius_norm());
    }

    #[test]
    fn pseudo_inverse_of_full_column_rank() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 2.0], [0.0, 0.0]]).unwrap();
        let p = pseudo_inverse(&a, 1e-12).unwrap();
        let expect = DenseMatrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 0.5, 0.0]]).unwrap();
        assert!(p.sub(&expect).unwrap().max_abs() < 1e-15);
    }
}
