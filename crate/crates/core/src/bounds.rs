//! Sample-count requirements and error bounds for column sampling.
//!
//! Gram approximation (two-norm relative error at most `ε` with probability
//! at least `1 − δ`):
//!
//! | theorem | required `c` |
//! |---------|--------------|
//! | [`GramTheorem::Thm41`] | `c₀(ε)·sr·ln(rank/δ) / (β ε²)` |
//! | [`GramTheorem::Thm42`] | `c₀(ε)·sr·ln(4 sr/δ) / (β ε²)` |
//! | [`GramTheorem::Thm51`] | `c₀(ε)·rank·ln(rank/δ) / ε²` (leverage sampling) |
//!
//! Sampled row-orthonormal `Q` (`m x n`, coherence `μ`): smallest singular
//! value at least `√(1−ε)`, or condition number at most `√(1+ε)/√(1−ε)`,
//! with `c = C(ε)·m·ln(L/δ)/(β ε²)`, where `m/β` becomes `nμ` for uniform
//! sampling, `C` is `c₀` (matrix multiplication route), `c₁` (σ_min,
//! Chernoff) or `c₂` (κ, Chernoff), and `L` is `2m` only for the κ Chernoff
//! bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `c₀(ε) = 2 + 2ε/3`, for `0 < ε ≤ 1`.
pub fn const_c0(eps: f64) -> Result<f64> {
    check_open_closed("epsilon", eps)?;
    Ok(2.0 + 2.0 * eps / 3.0)
}

/// `c₁(ε) = ε² / ((1−ε)ln(1−ε) + ε)`, for `0 < ε < 1`; `ε = 1` gives the
/// limit value 1.
pub fn const_c1(eps: f64) -> Result<f64> {
    check_open_closed("epsilon", eps)?;
    if eps == 1.0 {
        return Ok(1.0);
    }
    // ln_1p keeps the denominator accurate for small ε
    let denom = (1.0 - eps) * (-eps).ln_1p() + eps;
    Ok(eps * eps / denom)
}

/// `c₂(ε) = ε² / ((1+ε)ln(1+ε) − ε)`, for `0 < ε ≤ 1`.
pub fn const_c2(eps: f64) -> Result<f64> {
    check_open_closed("epsilon", eps)?;
    let denom = (1.0 + eps) * eps.ln_1p() - eps;
    Ok(eps * eps / denom)
}

/// `γ + √(γ(6 + γ))`, the relative error level implied by a given `γ`.
pub fn epsilon_from_gamma(gamma: f64) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 || gamma.is_infinite() {
        return Err(Error::RangeViolation {
            name: "gamma",
            value: gamma,
            range: "[0, inf)",
        });
    }
    Ok(gamma + (gamma * (6.0 + gamma)).sqrt())
}

/// Matrix summaries and probability parameters consumed by the bounds.
///
/// Each bound validates only the fields it reads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub epsilon: f64,
    pub delta: f64,
    pub beta: f64,
    pub stable_rank: f64,
    pub rank: usize,
    pub m: usize,
    pub mu: f64,
    pub n: usize,
}

impl Default for BoundQuery {
    fn default() -> Self {
        Self {
            epsilon: 0.5,
            delta: 0.01,
            beta: 1.0,
            stable_rank: 1.0,
            rank: 1,
            m: 1,
            mu: 1.0,
            n: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GramTheorem {
    /// Stable rank and rank, nearly optimal probabilities.
    Thm41,
    /// Stable rank only, nearly optimal probabilities.
    Thm42,
    /// Leverage score probabilities.
    Thm51,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMethod {
    MatMult,
    Chernoff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingKind {
    NearlyOptimal,
    Uniform,
}

/// Which bound produced a [`BoundResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremTag {
    GramThm41,
    GramThm42,
    GramThm51,
    SminMatMult,
    SminChernoff,
    CondMatMult,
    CondChernoff,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundValue {
    RequiredSamples(u64),
    ErrorBound(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: BoundValue,
    /// Real-valued right-hand side before rounding up (sample-count bounds)
    /// or `γ` (error bounds).
    pub raw: f64,
    /// `c₀`, `c₁` or `c₂` at `ε`; 0 for error bounds, which need none.
    pub constant_used: f64,
    pub theorem: TheoremTag,
}

impl BoundResult {
    pub fn required_c(&self) -> Option<u64> {
        match self.value {
            BoundValue::RequiredSamples(c) => Some(c),
            BoundValue::ErrorBound(_) => None,
        }
    }

    pub fn error_bound(&self) -> Option<f64> {
        match self.value {
            BoundValue::ErrorBound(e) => Some(e),
            BoundValue::RequiredSamples(_) => None,
        }
    }
}

fn check_open_closed(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::RangeViolation {
            name,
            value: v,
            range: "(0, 1]",
        })
    }
}

fn check_open(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::RangeViolation {
            name,
            value: v,
            range: "(0, 1)",
        })
    }
}

fn check_positive_count(name: &'static str, v: usize) -> Result<()> {
    if v >= 1 {
        Ok(())
    } else {
        Err(Error::RangeViolation {
            name,
            value: v as f64,
            range: "[1, inf)",
        })
    }
}

impl BoundQuery {
    fn check_stable_rank(&self) -> Result<()> {
        check_positive_count("rank", self.rank)?;
        let sr = self.stable_rank;
        // sr ≤ rank up to round-off in the caller's sr
        if !(sr >= 1.0 && sr <= self.rank as f64 * (1.0 + 1e-12)) {
            return Err(Error::RangeViolation {
                name: "stable_rank",
                value: sr,
                range: "[1, rank]",
            });
        }
        Ok(())
    }

    fn gram_gamma_numerator(&self, theorem: GramTheorem) -> Result<f64> {
        check_open("delta", self.delta)?;
        match theorem {
            GramTheorem::Thm41 => {
                self.check_stable_rank()?;
                check_open_closed("beta", self.beta)?;
                Ok(self.stable_rank * (self.rank as f64 / self.delta).ln() / self.beta)
            }
            GramTheorem::Thm42 => {
                self.check_stable_rank()?;
                check_open_closed("beta", self.beta)?;
                Ok(self.stable_rank * (4.0 * self.stable_rank / self.delta).ln() / self.beta)
            }
            GramTheorem::Thm51 => {
                check_positive_count("rank", self.rank)?;
                let k = self.rank as f64;
                Ok(k * (k / self.delta).ln())
            }
        }
    }

    /// `m/β` for nearly optimal sampling, `nμ` for uniform sampling.
    fn orthonormal_scale(&self, sampling: SamplingKind) -> Result<f64> {
        check_positive_count("m", self.m)?;
        match sampling {
            SamplingKind::NearlyOptimal => {
                check_open_closed("beta", self.beta)?;
                Ok(self.m as f64 / self.beta)
            }
            SamplingKind::Uniform => {
                check_positive_count("n", self.n)?;
                check_open_closed("mu", self.mu)?;
                Ok(self.n as f64 * self.mu)
            }
        }
    }
}

fn gram_tag(theorem: GramTheorem) -> TheoremTag {
    match theorem {
        GramTheorem::Thm41 => TheoremTag::GramThm41,
        GramTheorem::Thm42 => TheoremTag::GramThm42,
        GramTheorem::Thm51 => TheoremTag::GramThm51,
    }
}

fn ceil_count(raw: f64) -> u64 {
    (raw.ceil() as u64).max(1)
}

/// `γ` such that the two-norm relative error is at most
/// `γ + √(γ(6+γ))` with probability `1 − δ` after `c` samples.
pub fn gram_gamma(q: &BoundQuery, theorem: GramTheorem, c: usize) -> Result<f64> {
    check_positive_count("c", c)?;
    Ok(q.gram_gamma_numerator(theorem)? / (3.0 * c as f64))
}

/// Error bound after `c` samples for the given Gram theorem.
pub fn gram_error_bound(q: &BoundQuery, theorem: GramTheorem, c: usize) -> Result<BoundResult> {
    let gamma = gram_gamma(q, theorem, c)?;
    Ok(BoundResult {
        value: BoundValue::ErrorBound(epsilon_from_gamma(gamma)?),
        raw: gamma,
        constant_used: 0.0,
        theorem: gram_tag(theorem),
    })
}

/// `γ₁ + √(γ₁(6+γ₁))` with `γ₁ = sr·ln(rank/δ)/(3βc)`.
pub fn gram_error_bound_thm41(q: &BoundQuery, c: usize) -> Result<f64> {
    epsilon_from_gamma(gram_gamma(q, GramTheorem::Thm41, c)?)
}

/// `γ₂ + √(γ₂(6+γ₂))` with `γ₂ = sr·ln(4 sr/δ)/(3βc)`.
pub fn gram_error_bound_thm42(q: &BoundQuery, c: usize) -> Result<f64> {
    epsilon_from_gamma(gram_gamma(q, GramTheorem::Thm42, c)?)
}

/// Samples needed for relative Gram error at most `ε` with probability
/// at least `1 − δ`.
pub fn samples_for_gram(q: &BoundQuery, theorem: GramTheorem) -> Result<BoundResult> {
    let c0 = const_c0(q.epsilon)?;
    let raw = c0 * q.gram_gamma_numerator(theorem)? / (q.epsilon * q.epsilon);
    Ok(BoundResult {
        value: BoundValue::RequiredSamples(ceil_count(raw)),
        raw,
        constant_used: c0,
        theorem: gram_tag(theorem),
    })
}

/// Samples needed for `σ_min(QS) ≥ √(1−ε)`.
pub fn samples_for_smin(
    q: &BoundQuery,
    method: BoundMethod,
    sampling: SamplingKind,
) -> Result<BoundResult> {
    check_open("delta", q.delta)?;
    let (constant, theorem) = match method {
        BoundMethod::MatMult => (const_c0(q.epsilon)?, TheoremTag::SminMatMult),
        BoundMethod::Chernoff => {
            check_open("epsilon", q.epsilon)?;
            (const_c1(q.epsilon)?, TheoremTag::SminChernoff)
        }
    };
    let scale = q.orthonormal_scale(sampling)?;
    let raw = constant * scale * (q.m as f64 / q.delta).ln() / (q.epsilon * q.epsilon);
    Ok(BoundResult {
        value: BoundValue::RequiredSamples(ceil_count(raw)),
        raw,
        constant_used: constant,
        theorem,
    })
}

/// Samples needed for `κ(QS) ≤ √(1+ε)/√(1−ε)`.
pub fn samples_for_cond(
    q: &BoundQuery,
    method: BoundMethod,
    sampling: SamplingKind,
) -> Result<BoundResult> {
    check_open("delta", q.delta)?;
    let m = q.m as f64;
    let (constant, log_arg, theorem) = match method {
        BoundMethod::MatMult => (const_c0(q.epsilon)?, m / q.delta, TheoremTag::CondMatMult),
        BoundMethod::Chernoff => (
            const_c2(q.epsilon)?,
            2.0 * m / q.delta,
            TheoremTag::CondChernoff,
        ),
    };
    let scale = q.orthonormal_scale(sampling)?;
    let raw = constant * scale * log_arg.ln() / (q.epsilon * q.epsilon);
    Ok(BoundResult {
        value: BoundValue::RequiredSamples(ceil_count(raw)),
        raw,
        constant_used: constant,
        theorem,
    })
}

/// Singular value bounds of `QS` implied by `‖QQᵀ − (QS)(QS)ᵀ‖₂ ≤ err`:
/// `(√max(0, 1−err), √(1+err))`.
pub fn sigma_bounds_from_gram_error(err: f64) -> Result<(f64, f64)> {
    if err.is_nan() || err < 0.0 || err.is_infinite() {
        return Err(Error::RangeViolation {
            name: "err",
            value: err,
            range: "[0, inf)",
        });
    }
    Ok(((1.0 - err).max(0.0).sqrt(), (1.0 + err).sqrt()))
}

/// `√(1+err)/√(1−err)` when `err < 1`; no finite bound otherwise.
pub fn kappa_bound_from_gram_error(err: f64) -> Result<Option<f64>> {
    let (lo, hi) = sigma_bounds_from_gram_error(err)?;
    Ok((err < 1.0).then(|| hi / lo))
}
