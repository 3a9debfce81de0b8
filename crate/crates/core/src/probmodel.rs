//! Column-sampling distributions: "optimal" (squared column norms), leverage
//! score, uniform, and nearly optimal β-mixtures.
//!
//! Columns with zero norm get probability zero under the optimal family and
//! are never drawn; they are kept in place so indices stay aligned with `A`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{default_rank_tol, spectral_summary, thin_svd_with_tol, DenseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbabilityKind {
    Optimal,
    Leverage,
    Uniform,
    NearlyOptimal,
}

/// A distribution over the `n` columns of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
    kind: ProbabilityKind,
    beta: f64,
}

impl ProbabilityVector {
    /// Validates simplex membership: entries finite and non-negative, sum
    /// equal to one within `1e-12·n`.
    pub fn new(probs: Vec<f64>, kind: ProbabilityKind, beta: f64) -> Result<Self> {
        let n = probs.len();
        if n == 0 {
            return Err(Error::InvalidProbabilities("empty".into()));
        }
        if let Some(j) = probs.iter().position(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidProbabilities(format!(
                "entry {j} = {} is not a non-negative number",
                probs[j]
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 * n as f64 {
            return Err(Error::InvalidProbabilities(format!("sum is {sum}, not 1")));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::BadBeta(beta));
        }
        Ok(Self { probs, kind, beta })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn kind(&self) -> ProbabilityKind {
        self.kind
    }

    /// β recorded at construction (1 for optimal, leverage and uniform).
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// `p_j = ‖A_j‖² / ‖A‖_F²`.
pub fn optimal_probs(a: &DenseMatrix) -> Result<ProbabilityVector> {
    let norms = a.column_norms_sq();
    let total: f64 = norms.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    ProbabilityVector::new(
        norms.into_iter().map(|x| x / total).collect(),
        ProbabilityKind::Optimal,
        1.0,
    )
}

/// Leverage-score probabilities with the default rank threshold.
pub fn leverage_probs(a: &DenseMatrix) -> Result<ProbabilityVector> {
    leverage_probs_with_tol(a, default_rank_tol(a.rows(), a.cols()))
}

/// `p_j = ℓ_j / k` where `ℓ_j` are the leverage scores of the `k`-dimensional
/// right singular subspace.
pub fn leverage_probs_with_tol(a: &DenseMatrix, tol: f64) -> Result<ProbabilityVector> {
    let svd = thin_svd_with_tol(a, tol)?;
    let summary = spectral_summary(&svd);
    let k = summary.rank as f64;
    ProbabilityVector::new(
        summary.leverage_scores.iter().map(|l| l / k).collect(),
        ProbabilityKind::Leverage,
        1.0,
    )
}

pub fn uniform_probs(n: usize) -> Result<ProbabilityVector> {
    if n == 0 {
        return Err(Error::BadCount("uniform distribution needs n >= 1".into()));
    }
    ProbabilityVector::new(vec![1.0 / n as f64; n], ProbabilityKind::Uniform, 1.0)
}

/// `β·p^opt + (1 − β)·uniform`, which satisfies `p_j ≥ β·p_j^opt`.
pub fn nearly_optimal_mix(a: &DenseMatrix, beta: f64) -> Result<ProbabilityVector> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::BadBeta(beta));
    }
    let opt = optimal_probs(a)?;
    let u = 1.0 / a.cols() as f64;
    let probs = opt
        .probs
        .iter()
        .map(|&p| beta * p + (1.0 - beta) * u)
        .collect();
    ProbabilityVector::new(probs, ProbabilityKind::NearlyOptimal, beta)
}

/// Largest β with `p_j ≥ β·p_j^opt` over the non-zero columns of `A`.
///
/// Zero when `p` puts no mass on some non-zero column.
pub fn effective_beta(p: &ProbabilityVector, a: &DenseMatrix) -> Result<f64> {
    if p.len() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{} probabilities for {} columns",
            p.len(),
            a.cols()
        )));
    }
    let norms = a.column_norms_sq();
    let total: f64 = norms.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(norms
        .iter()
        .zip(&p.probs)
        .filter(|(&nj, _)| nj > 0.0)
        .map(|(&nj, &pj)| pj * total / nj)
        .fold(f64::INFINITY, f64::min))
}
