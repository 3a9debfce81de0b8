//! Repeated-trial error experiments: for each sampling strategy and each
//! sample count `c`, run independent Monte Carlo approximations and record
//! the smallest, mean and largest two-norm relative error, alongside the
//! Gram error bounds evaluated at `c`.

use std::fmt;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::io::read_matrix;
use super::synth::synth_matrix;
use crate::bounds::{gram_error_bound_thm41, gram_error_bound_thm42, BoundQuery};
use crate::error::{Error, Result};
use crate::matcore::{gram, relative_error_2norm, spectral_summary, thin_svd, DenseMatrix};
use crate::probmodel::{
    effective_beta, leverage_probs, nearly_optimal_mix, optimal_probs, uniform_probs,
    ProbabilityVector,
};
use crate::sampler::{approximate_gram, RandomStream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Optimal,
    Leverage,
    Uniform,
    NearlyOptimal { beta: f64 },
}

impl Strategy {
    pub fn probabilities(&self, a: &DenseMatrix) -> Result<ProbabilityVector> {
        match *self {
            Strategy::Optimal => optimal_probs(a),
            Strategy::Leverage => leverage_probs(a),
            Strategy::Uniform => uniform_probs(a.cols()),
            Strategy::NearlyOptimal { beta } => nearly_optimal_mix(a, beta),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Optimal => write!(f, "optimal"),
            Strategy::Leverage => write!(f, "leverage"),
            Strategy::Uniform => write!(f, "uniform"),
            Strategy::NearlyOptimal { beta } => write!(f, "nearly-optimal:{beta}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixSource {
    /// `.mtx` (Matrix Market) or dense CSV file.
    Path(PathBuf),
    Synthetic {
        m: usize,
        n: usize,
        spectrum: Vec<f64>,
        #[serde(default)]
        seed: u64,
    },
}

impl MatrixSource {
    pub fn load(&self) -> Result<DenseMatrix> {
        match self {
            MatrixSource::Path(p) => read_matrix(p),
            MatrixSource::Synthetic {
                m,
                n,
                spectrum,
                seed,
            } => synth_matrix(*m, *n, spectrum, *seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_trials() -> usize {
    100
}

fn default_delta() -> f64 {
    0.01
}

fn default_strategies() -> Vec<Strategy> {
    vec![Strategy::Optimal, Strategy::Leverage]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub matrix: MatrixSource,
    pub c_grid: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Failure probability used for the bound overlays.
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// When set, each row reports the fraction of trials with error `≤ ε`.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<Strategy>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.c_grid.is_empty() || self.c_grid.contains(&0) {
            return Err(Error::BadCount("c grid must be non-empty with entries >= 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::BadCount("trials must be >= 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::RangeViolation {
                name: "delta",
                value: self.delta,
                range: "(0, 1)",
            });
        }
        if self.strategies.is_empty() {
            return Err(Error::BadCount("no strategies".into()));
        }
        Ok(())
    }
}

/// Aggregated errors for one `(strategy, c)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub strategy: String,
    pub c: usize,
    pub trials: usize,
    pub min_error: f64,
    pub mean_error: f64,
    pub max_error: f64,
    /// `+inf` when the bound is undefined; written as `null` in JSON.
    #[serde(with = "finite_or_null")]
    pub bound_thm41: f64,
    #[serde(with = "finite_or_null")]
    pub bound_thm42: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub empirical_success_rate: Option<f64>,
}

mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Loads the configured matrix and runs the experiment on it.
pub fn run_error_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialStats>> {
    cfg.validate()?;
    let a = cfg.matrix.load()?;
    run_error_experiment_on(&a, cfg)
}

/// Runs the experiment on an in-memory matrix; `cfg.matrix` is ignored.
///
/// Trial `t` uses `RandomStream::new(cfg.seed, t)` for every strategy and
/// every `c`, and reductions run in trial order, so the output does not
/// depend on thread scheduling.
pub fn run_error_experiment_on(a: &DenseMatrix, cfg: &ExperimentConfig) -> Result<Vec<TrialStats>> {
    cfg.validate()?;
    let g = gram(a);
    let summary = spectral_summary(&thin_svd(a)?);
    let mut out = Vec::with_capacity(cfg.strategies.len() * cfg.c_grid.len());

    for strategy in &cfg.strategies {
        let p = strategy.probabilities(a)?;
        let beta = effective_beta(&p, a)?.min(1.0);
        let query = BoundQuery {
            delta: cfg.delta,
            beta,
            stable_rank: summary.stable_rank.min(summary.rank as f64),
            rank: summary.rank,
            ..BoundQuery::default()
        };
        let label = strategy.to_string();

        for &c in &cfg.c_grid {
            let errors: Vec<f64> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let mut stream = RandomStream::new(cfg.seed, t as u64);
                    approximate_gram(a, &p, c, &mut stream)
                        .and_then(|(x, _)| relative_error_2norm(&x, &g))
                        .map_err(|e| Error::Trial {
                            strategy: label.clone(),
                            c,
                            trial: t,
                            seed: cfg.seed,
                            source: Box::new(e),
                        })
                })
                .collect::<Result<_>>()?;

            let (bound_thm41, bound_thm42) = if beta > 0.0 {
                (
                    gram_error_bound_thm41(&query, c)?,
                    gram_error_bound_thm42(&query, c)?,
                )
            } else {
                (f64::INFINITY, f64::INFINITY)
            };
            out.push(aggregate(&label, c, &errors, cfg.epsilon, bound_thm41, bound_thm42));
        }
    }
    Ok(out)
}

fn aggregate(
    label: &str,
    c: usize,
    errors: &[f64],
    epsilon: Option<f64>,
    bound_thm41: f64,
    bound_thm42: f64,
) -> TrialStats {
    let min_error = errors.iter().copied().fold(f64::INFINITY, f64::min);
    let max_error = errors.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    TrialStats {
        strategy: label.to_string(),
        c,
        trials: errors.len(),
        min_error,
        mean_error: mean.clamp(min_error, max_error),
        max_error,
        bound_thm41,
        bound_thm42,
        empirical_success_rate: epsilon.map(|eps| {
            errors.iter().filter(|&&e| e <= eps).count() as f64 / errors.len() as f64
        }),
    }
}

/// Sorted ratios `p_j^lev / p_j^opt` over the non-zero columns of `A`.
pub fn probability_ratio_report(a: &DenseMatrix) -> Result<Vec<f64>> {
    let opt = optimal_probs(a)?;
    let lev = leverage_probs(a)?;
    let mut ratios: Vec<f64> = opt
        .probs()
        .iter()
        .zip(lev.probs())
        .filter(|(&po, _)| po > 0.0)
        .map(|(&po, &pl)| pl / po)
        .collect();
    ratios.sort_by(f64::total_cmp);
    Ok(ratios)
}
