//! Deterministic reconstruction of `AAᵀ` from a set of selected columns.
//!
//! Exactness is decided with tolerances since the computations run in
//! floating point; [`DEFAULT_TOL`] is the default relative tolerance.

use crate::error::{Error, Result};
use crate::matcore::{gram, pseudo_inverse, singular_values, DenseMatrix};

/// Default relative tolerance for exactness and rank decisions.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Relative singular value cutoff used for pseudo-inverses here.
const PINV_RTOL: f64 = 1e-10;

/// Weights in `(AS)·W·(AS)ᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightMatrix {
    Diagonal(Vec<f64>),
    Full(DenseMatrix),
}

impl WeightMatrix {
    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            WeightMatrix::Diagonal(w) => DenseMatrix::diag(w).expect("finite weights"),
            WeightMatrix::Full(w) => w.clone(),
        }
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        match self {
            WeightMatrix::Diagonal(w) => w.iter().map(|x| x * x).sum(),
            WeightMatrix::Full(w) => w.frobenius_norm_sq(),
        }
    }

    /// `(AS)·W·(AS)ᵀ` for the unscaled selection `AS`.
    pub fn reconstruct(&self, selected: &DenseMatrix) -> Result<DenseMatrix> {
        let w = self.to_dense();
        let mut out = selected.matmul(&w)?.matmul(&selected.transpose())?;
        out.symmetrize();
        Ok(out)
    }
}

/// Minimal-Frobenius-norm `W` minimising `‖AAᵀ − (AS)W(AS)ᵀ‖_F`:
/// `W_opt = (AS)^† AAᵀ ((AS)^†)ᵀ`, with `S` the unscaled selector of
/// `indices` (repeats allowed).
pub fn optimal_weight_matrix(a: &DenseMatrix, indices: &[usize]) -> Result<WeightMatrix> {
    if a.frobenius_norm_sq() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let selected = a.select_columns(indices)?;
    let pinv = pseudo_inverse(&selected, PINV_RTOL)?;
    let mut w = pinv.matmul(&gram(a))?.matmul(&pinv.transpose())?;
    w.symmetrize();
    Ok(WeightMatrix::Full(w))
}

/// Residual `‖AAᵀ − (AS)W(AS)ᵀ‖_F / ‖AAᵀ‖_F`.
pub fn reconstruction_residual(
    a: &DenseMatrix,
    indices: &[usize],
    w: &WeightMatrix,
) -> Result<f64> {
    let g = gram(a);
    let denom = g.frobenius_norm();
    if denom == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let selected = a.select_columns(indices)?;
    Ok(w.reconstruct(&selected)?.sub(&g)?.frobenius_norm() / denom)
}

/// Whether `Σ w_j A_{t_j}A_{t_j}ᵀ = AAᵀ`, decided through the equivalent
/// condition that `M = Vᵀ[√w_1 e_{t_1}, …, √w_c e_{t_c}]` has orthonormal
/// rows: `‖MMᵀ − I_k‖_max ≤ tol`.
///
/// `v` is the `n x k` right singular factor. Requires `c ≥ k`.
pub fn exactness_check(v: &DenseMatrix, indices: &[usize], weights: &[f64], tol: f64) -> Result<bool> {
    let (n, k) = v.shape();
    let c = indices.len();
    if weights.len() != c {
        return Err(Error::DimensionMismatch(format!(
            "{c} indices with {} weights",
            weights.len()
        )));
    }
    if c < k {
        return Err(Error::BadShape(format!(
            "need at least k = {k} columns, got {c}"
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::RangeViolation {
            name: "weight",
            value: *w,
            range: "[0, inf)",
        });
    }
    if let Some(&bad) = indices.iter().find(|&&t| t >= n) {
        return Err(Error::IndexOutOfRange { index: bad, len: n });
    }
    // (MMᵀ)_{rs} = Σ_j w_j V[t_j, r] V[t_j, s]
    let mut mmt = vec![0.0; k * k];
    for (&t, &w) in indices.iter().zip(weights) {
        let row = v.row(t);
        for r in 0..k {
            let wr = w * row[r];
            for s in 0..k {
                mmt[r * k + s] += wr * row[s];
            }
        }
    }
    let dev = (0..k)
        .flat_map(|r| (0..k).map(move |s| (r, s)))
        .map(|(r, s)| (mmt[r * k + s] - if r == s { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    Ok(dev <= tol)
}

/// Weights `1/ℓ_{t_j}` for a subset of exactly `k` distinct columns, and
/// whether they reproduce `AAᵀ`. When `c = k` these are the only candidate
/// weights, so `valid == false` means no diagonal weighting of this subset
/// is exact.
pub fn subset_weights(v: &DenseMatrix, indices: &[usize], tol: f64) -> Result<(Vec<f64>, bool)> {
    let (n, k) = v.shape();
    if indices.len() != k {
        return Err(Error::BadShape(format!(
            "need exactly k = {k} indices, got {}",
            indices.len()
        )));
    }
    let mut seen = vec![false; n];
    for &t in indices {
        if t >= n {
            return Err(Error::IndexOutOfRange { index: t, len: n });
        }
        if std::mem::replace(&mut seen[t], true) {
            return Err(Error::BadShape(format!("index {t} repeated")));
        }
    }
    let mut weights = Vec::with_capacity(k);
    for &t in indices {
        let lev: f64 = v.row(t).iter().map(|x| x * x).sum();
        if lev == 0.0 {
            return Err(Error::ZeroLeverage(t));
        }
        weights.push(1.0 / lev);
    }
    let valid = exactness_check(v, indices, &weights, tol)?;
    Ok((weights, valid))
}

/// Weights `‖A‖_F² / (c·‖A_{t_j}‖²)` that reproduce `AAᵀ` exactly for a
/// rank-one `A` and any non-zero selected columns.
pub fn rank_one_weights(a: &DenseMatrix, indices: &[usize]) -> Result<Vec<f64>> {
    if a.frobenius_norm_sq() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    // rank one iff σ₂ ≤ tol·σ₁
    let sv = singular_values(a)?;
    let ratio = sv.get(1).copied().unwrap_or(0.0) / sv[0];
    if ratio > DEFAULT_TOL {
        return Err(Error::NotRankOne(ratio));
    }
    if indices.is_empty() {
        return Err(Error::BadCount("need at least one column".into()));
    }
    let c = indices.len() as f64;
    let fro_sq = a.frobenius_norm_sq();
    indices
        .iter()
        .map(|&t| {
            if t >= a.cols() {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    len: a.cols(),
                });
            }
            let norm_sq = a.column_norm_sq(t);
            if norm_sq == 0.0 {
                return Err(Error::ZeroColumnSelected(t));
            }
            Ok(fro_sq / (c * norm_sq))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vt_2x4_paired() -> DenseMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DenseMatrix::from_rows(&[[h, 0.0, h, 0.0], [0.0, h, 0.0, h]]).unwrap()
    }

    fn vt_2x4_no_pair() -> DenseMatrix {
        let r = 14f64.sqrt();
        DenseMatrix::from_rows(&[
            [0.5, 0.5, 0.5, 0.5],
            [-1.0 / r, -2.0 / r, 3.0 / r, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn non_diagonal_minimal_weights() {
        let a = vt_2x4_paired();
        let w = optimal_weight_matrix(&a, &[0, 1, 2]).unwrap();
        let expect =
            DenseMatrix::from_rows(&[[0.5, 0.0, 0.5], [0.0, 2.0, 0.0], [0.5, 0.0, 0.5]]).unwrap();
        assert!(w.to_dense().sub(&expect).unwrap().max_abs() < 1e-12);
        assert!((w.frobenius_norm_sq() - 5.0).abs() < 1e-12);
        assert!(reconstruction_residual(&a, &[0, 1, 2], &w).unwrap() < 1e-12);
        // diag(1, 2, 1) is also exact but has larger norm
        let d = WeightMatrix::Diagonal(vec![1.0, 2.0, 1.0]);
        assert!(reconstruction_residual(&a, &[0, 1, 2], &d).unwrap() < 1e-12);
        assert!((d.frobenius_norm_sq() - 6.0).abs() < 1e-15);
    }

    #[test]
    fn identity_weights() {
        let w = optimal_weight_matrix(&DenseMatrix::identity(2), &[0, 1]).unwrap();
        assert!(w.to_dense().sub(&DenseMatrix::identity(2)).unwrap().max_abs() < 1e-14);
        assert!(matches!(
            optimal_weight_matrix(&DenseMatrix::zeros(2, 2), &[0]),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn repeated_column_example() {
        let v = DenseMatrix::from_rows(&[[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
            .unwrap()
            .transpose();
        assert!(exactness_check(&v, &[0, 0, 1], &[0.5, 0.5, 1.0], DEFAULT_TOL).unwrap());
    }

    #[test]
    fn three_column_example() {
        let v = vt_2x4_no_pair().transpose();
        assert!(exactness_check(&v, &[0, 1, 2], &[2.5, 0.4, 1.1], DEFAULT_TOL).unwrap());
        // the square roots of those weights are not exact
        let roots = [2.5f64.sqrt(), 0.4f64.sqrt(), 1.1f64.sqrt()];
        assert!(!exactness_check(&v, &[0, 1, 2], &roots, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn unequal_weights_fail() {
        let v = DenseMatrix::identity(2);
        assert!(!exactness_check(&v, &[0, 1], &[1.0, 2.0], DEFAULT_TOL).unwrap());
        assert!(matches!(
            exactness_check(&v, &[0], &[1.0], DEFAULT_TOL),
            Err(Error::BadShape(_))
        ));
        assert!(exactness_check(&v, &[0, 1], &[1.0, -1.0], DEFAULT_TOL).is_err());
    }

    #[test]
    fn subset_examples() {
        let (w, ok) = subset_weights(&DenseMatrix::identity(2), &[0, 1], DEFAULT_TOL).unwrap();
        assert_eq!(w, vec![1.0, 1.0]);
        assert!(ok);

        let v = vt_2x4_no_pair().transpose();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let (_, ok) = subset_weights(&v, &[i, j], DEFAULT_TOL).unwrap();
                assert!(!ok, "columns {i},{j}");
            }
        }

        let v = DenseMatrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
            .unwrap()
            .transpose();
        let (w, ok) = subset_weights(&v, &[0, 1], DEFAULT_TOL).unwrap();
        assert_eq!(w, vec![1.0, 1.0]);
        assert!(ok);
        assert!(matches!(
            subset_weights(&v, &[0, 2], DEFAULT_TOL),
            Err(Error::ZeroLeverage(2))
        ));
    }

    #[test]
    fn rank_one_examples() {
        let a = DenseMatrix::from_rows(&[[3.0, 4.0]]).unwrap();
        let w = rank_one_weights(&a, &[1]).unwrap();
        assert!((w[0] - 25.0 / 16.0).abs() < 1e-15);
        let w = rank_one_weights(&a, &[0, 1]).unwrap();
        assert!((w[0] - 25.0 / 18.0).abs() < 1e-15);
        assert!((w[1] - 25.0 / 32.0).abs() < 1e-15);
        assert!((w[0] * 9.0 + w[1] * 16.0 - 25.0).abs() < 1e-13);

        // single largest column: weight is 1/coherence
        let w = rank_one_weights(&a, &[1]).unwrap();
        assert!((w[0] - 1.0 / 0.64).abs() < 1e-14);

        let z = DenseMatrix::from_rows(&[[1.0, 0.0], [2.0, 0.0]]).unwrap();
        assert!(matches!(rank_one_weights(&z, &[1]), Err(Error::ZeroColumnSelected(1))));
        assert!(matches!(
            rank_one_weights(&DenseMatrix::identity(2), &[0]),
            Err(Error::NotRankOne(_))
        ));
    }
}
