//! Cyclic Jacobi eigenvalue solver for symmetric matrices.

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of the symmetric part `(G + Gᵀ)/2`, sorted non-increasing.
pub fn symmetric_eigenvalues(g: &DenseMatrix) -> Result<Vec<f64>> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenvalues need a square matrix, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    let n = g.rows();
    let mut a = g.clone();
    a.symmetrize();
    let fro = a.frobenius_norm();
    if fro == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let target = n as f64 * f64::EPSILON * fro;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].powi(2))
            .sum::<f64>()
            .sqrt()
            * std::f64::consts::SQRT_2;
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + theta.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

/// Two-norm of a symmetric matrix, `max |λ|`.
pub fn symmetric_spectral_norm(g: &DenseMatrix) -> Result<f64> {
    let eig = symmetric_eigenvalues(g)?;
    Ok(eig.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
}
