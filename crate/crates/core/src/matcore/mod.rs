//! Dense matrices and the spectral quantities the rest of the crate consumes.

mod dense;
mod eigen;
mod svd;

pub use dense::DenseMatrix;
pub use eigen::{symmetric_eigenvalues, symmetric_spectral_norm};
pub use svd::{
    default_rank_tol, pseudo_inverse, singular_values, thin_svd, thin_svd_with_tol, ThinSvd,
};

use crate::error::{Error, Result};

/// Norms, stable rank and leverage scores derived from a thin SVD.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub spectral_norm: f64,
    pub frobenius_norm: f64,
    pub stable_rank: f64,
    pub rank: usize,
    /// `ℓ_j = ‖Vᵀe_j‖²`, one per column of `A`.
    pub leverage_scores: Vec<f64>,
    /// Largest leverage score.
    pub coherence: f64,
}

/// `AAᵀ`, symmetrized.
pub fn gram(a: &DenseMatrix) -> DenseMatrix {
    let mut g = a.outer_gram();
    g.symmetrize();
    g
}

pub fn spectral_summary(svd: &ThinSvd) -> SpectralSummary {
    let sigma = svd.sigma();
    let spectral_norm = sigma[0];
    let fro_sq: f64 = sigma.iter().map(|s| s * s).sum();
    let v = svd.v();
    let leverage_scores: Vec<f64> = (0..v.rows())
        .map(|j| v.row(j).iter().map(|x| x * x).sum())
        .collect();
    let coherence = leverage_scores.iter().copied().fold(0.0, f64::max);
    SpectralSummary {
        spectral_norm,
        frobenius_norm: fro_sq.sqrt(),
        stable_rank: fro_sq / (spectral_norm * spectral_norm),
        rank: svd.rank(),
        leverage_scores,
        coherence,
    }
}

/// `‖X − G‖₂ / ‖G‖₂` for symmetric `X`, `G`.
pub fn relative_error_2norm(x: &DenseMatrix, g: &DenseMatrix) -> Result<f64> {
    if x.shape() != g.shape() || !g.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected equal square matrices, got {}x{} and {}x{}",
            x.rows(),
            x.cols(),
            g.rows(),
            g.cols()
        )));
    }
    let denom = symmetric_spectral_norm(g)?;
    if denom == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(symmetric_spectral_norm(&x.sub(g)?)? / denom)
}
