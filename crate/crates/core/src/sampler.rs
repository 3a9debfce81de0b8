//! Seeded index drawing, sampling matrices and the Monte Carlo Gram estimate
//! `X = (AS)(AS)ᵀ = Σ_j A_{t_j}A_{t_j}ᵀ / (c·p_{t_j})`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;
use crate::probmodel::ProbabilityVector;

/// Deterministic random source keyed by `(seed, stream_id)`.
///
/// Backed by ChaCha8, whose output depends only on key, stream and word
/// position, so sequences are identical on every platform.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform deviate in `[0, 1)`.
    pub fn next_unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform integer in `[0, bound)`; sampled through `u64` so the result
    /// does not depend on the platform's `usize` width.
    pub fn next_below(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound as u64) as usize
    }

    pub(crate) fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Drawn column indices (zero-based) with the probability each was drawn at.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleDraw {
    indices: Vec<usize>,
    /// `p_{t_j}` per draw; `1/n` for uniform draws without replacement.
    probs: Vec<f64>,
    n: usize,
    replacement: bool,
}

impl SampleDraw {
    /// A draw with explicit indices and the probabilities they were drawn with.
    pub fn from_parts(
        indices: Vec<usize>,
        probs: Vec<f64>,
        n: usize,
        replacement: bool,
    ) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::BadCount("a draw needs at least one index".into()));
        }
        if indices.len() != probs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} indices with {} probabilities",
                indices.len(),
                probs.len()
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&j| j >= n) {
            return Err(Error::IndexOutOfRange { index: bad, len: n });
        }
        if !replacement {
            let mut seen = vec![false; n];
            for &j in &indices {
                if std::mem::replace(&mut seen[j], true) {
                    return Err(Error::BadShape(format!(
                        "index {j} repeated in a draw without replacement"
                    )));
                }
            }
        }
        Ok(Self {
            indices,
            probs,
            n,
            replacement,
        })
    }

    /// Selection with the given indices, scaled as draws from `p`.
    pub fn from_indices(indices: Vec<usize>, p: &ProbabilityVector) -> Result<Self> {
        let n = p.len();
        if let Some(&bad) = indices.iter().find(|&&j| j >= n) {
            return Err(Error::IndexOutOfRange { index: bad, len: n });
        }
        let probs = indices.iter().map(|&j| p.probs()[j]).collect();
        Self::from_parts(indices, probs, n, true)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of samples `c`.
    pub fn c(&self) -> usize {
        self.indices.len()
    }

    /// Number of columns of the sampled matrix.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn replacement(&self) -> bool {
        self.replacement
    }
}

/// `c` i.i.d. categorical draws from `p` by inverse CDF.
///
/// Each deviate `u ∈ [0, 1)` selects the lowest index whose cumulative mass
/// strictly exceeds `u`, so zero-probability indices are never selected.
pub fn draw_with_replacement(
    p: &ProbabilityVector,
    c: usize,
    stream: &mut RandomStream,
) -> Result<SampleDraw> {
    if c < 1 {
        return Err(Error::BadCount("c must be at least 1".into()));
    }
    let mut cdf = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for &pj in p.probs() {
        acc += pj;
        cdf.push(acc);
    }
    let total = acc;
    let last_positive = p
        .probs()
        .iter()
        .rposition(|&x| x > 0.0)
        .expect("probability vector has positive mass");

    let mut indices = Vec::with_capacity(c);
    for _ in 0..c {
        let u = stream.next_unit() * total;
        let j = cdf.partition_point(|&cj| cj <= u).min(last_positive);
        indices.push(j);
    }
    let probs = indices.iter().map(|&j| p.probs()[j]).collect();
    Ok(SampleDraw {
        indices,
        probs,
        n: p.len(),
        replacement: true,
    })
}

/// Uniformly random `c`-subset of `0..n` in random order (partial
/// Fisher–Yates).
pub fn draw_uniform_without_replacement(
    n: usize,
    c: usize,
    stream: &mut RandomStream,
) -> Result<SampleDraw> {
    if c < 1 || c > n {
        return Err(Error::BadCount(format!("need 1 <= c <= n, got c = {c}, n = {n}")));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..c {
        let j = i + stream.next_below(n - i);
        perm.swap(i, j);
    }
    perm.truncate(c);
    Ok(SampleDraw {
        indices: perm,
        probs: vec![1.0 / n as f64; c],
        n,
        replacement: false,
    })
}

/// The `n x c` matrix with columns `e_{t_j} / √(c·p_{t_j})`, stored as
/// `(row index, scale)` per column.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingMatrix {
    n: usize,
    indices: Vec<usize>,
    scales: Vec<f64>,
}

impl SamplingMatrix {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> usize {
        self.indices.len()
    }

    pub fn materialize_dense(&self) -> DenseMatrix {
        let mut s = DenseMatrix::zeros(self.n, self.c());
        for (j, (&t, &w)) in self.indices.iter().zip(&self.scales).enumerate() {
            s[(t, j)] = w;
        }
        s
    }

    /// `A·S`: column `j` is `A_{t_j}` times its scale.
    pub fn apply(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        if a.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, sampling matrix has {} rows",
                a.cols(),
                self.n
            )));
        }
        let c = self.c();
        let mut out = a.select_columns(&self.indices)?;
        let data = out.data_mut();
        for row in data.chunks_exact_mut(c) {
            for (x, w) in row.iter_mut().zip(&self.scales) {
                *x *= w;
            }
        }
        Ok(out)
    }
}

/// Builds `S` for a draw. Draws without replacement carry `p = 1/n`, giving
/// the scale `√(n/c)` per column.
pub fn sampling_matrix(draw: &SampleDraw) -> Result<SamplingMatrix> {
    let c = draw.c() as f64;
    let mut scales = Vec::with_capacity(draw.c());
    for (&t, &p) in draw.indices.iter().zip(&draw.probs) {
        if p <= 0.0 {
            return Err(Error::ZeroProbabilitySampled(t));
        }
        scales.push(1.0 / (c * p).sqrt());
    }
    Ok(SamplingMatrix {
        n: draw.n,
        indices: draw.indices.clone(),
        scales,
    })
}

/// Unscaled selected columns `A_{t_1}, …, A_{t_c}`.
pub fn sampled_submatrix(a: &DenseMatrix, draw: &SampleDraw) -> Result<DenseMatrix> {
    a.select_columns(&draw.indices)
}

/// `X = (AS)(AS)ᵀ` for an existing draw.
pub fn gram_from_draw(a: &DenseMatrix, draw: &SampleDraw) -> Result<DenseMatrix> {
    if a.cols() != draw.n {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} columns, draw is over {}",
            a.cols(),
            draw.n
        )));
    }
    let s = sampling_matrix(draw)?;
    let as_ = s.apply(a)?;
    let mut x = as_.outer_gram();
    x.symmetrize();
    Ok(x)
}

/// Monte Carlo approximation of `AAᵀ` from `c` columns drawn with
/// replacement according to `p`.
pub fn approximate_gram(
    a: &DenseMatrix,
    p: &ProbabilityVector,
    c: usize,
    stream: &mut RandomStream,
) -> Result<(DenseMatrix, SampleDraw)> {
    if a.cols() != p.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} columns, probability vector has {}",
            a.cols(),
            p.len()
        )));
    }
    let draw = draw_with_replacement(p, c, stream)?;
    let x = gram_from_draw(a, &draw)?;
    Ok((x, draw))
}
