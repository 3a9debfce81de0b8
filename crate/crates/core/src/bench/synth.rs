use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;
use crate::sampler::RandomStream;

/// `rows x cols` matrix of independent standard normal entries.
pub fn gaussian_matrix(rows: usize, cols: usize, stream: &mut RandomStream) -> DenseMatrix {
    let data = (0..rows * cols)
        .map(|_| StandardNormal.sample(stream.rng_mut()))
        .collect();
    DenseMatrix::new(rows, cols, data).expect("finite gaussian entries")
}

/// `rows x k` matrix with orthonormal columns: Gram–Schmidt, applied twice,
/// on a Gaussian matrix.
pub fn random_orthonormal_columns(
    rows: usize,
    k: usize,
    stream: &mut RandomStream,
) -> Result<DenseMatrix> {
    if k == 0 || k > rows {
        return Err(Error::BadShape(format!(
            "cannot build {k} orthonormal columns in dimension {rows}"
        )));
    }
    let g = gaussian_matrix(rows, k, stream);
    let mut cols: Vec<Vec<f64>> = (0..k).map(|j| g.column(j)).collect();
    for j in 0..k {
        for _ in 0..2 {
            for i in 0..j {
                let d: f64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
                let (done, rest) = cols.split_at_mut(j);
                for (x, y) in rest[0].iter_mut().zip(&done[i]) {
                    *x -= d * y;
                }
            }
        }
        let norm = cols[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::BadShape("degenerate gaussian sample".into()));
        }
        cols[j].iter_mut().for_each(|x| *x /= norm);
    }
    DenseMatrix::from_columns(rows, &cols)
}

/// `m x n` matrix with orthonormal rows (the row space of a Gaussian matrix).
pub fn random_orthonormal_rows(m: usize, n: usize, stream: &mut RandomStream) -> Result<DenseMatrix> {
    Ok(random_orthonormal_columns(n, m, stream)?.transpose())
}

/// `A = U·diag(spectrum)·Vᵀ` with random orthonormal `U` (`m x k`) and
/// `V` (`n x k`), `k = spectrum.len()`.
///
/// The spectrum must be non-empty, non-negative, non-increasing, with a
/// positive leading entry and at most `min(m, n)` entries.
pub fn synth_matrix(m: usize, n: usize, spectrum: &[f64], seed: u64) -> Result<DenseMatrix> {
    let k = spectrum.len();
    if k == 0 || k > m.min(n) {
        return Err(Error::BadSpectrum(format!(
            "need 1..={} values, got {k}",
            m.min(n)
        )));
    }
    if spectrum.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(Error::BadSpectrum("values must be finite and non-negative".into()));
    }
    if spectrum.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::BadSpectrum("values must be non-increasing".into()));
    }
    if spectrum[0] == 0.0 {
        return Err(Error::BadSpectrum("leading value must be positive".into()));
    }
    let mut stream = RandomStream::new(seed, 0);
    let u = random_orthonormal_columns(m, k, &mut stream)?;
    let v = random_orthonormal_columns(n, k, &mut stream)?;
    let mut us = u;
    for i in 0..m {
        for (l, s) in spectrum.iter().enumerate() {
            us[(i, l)] *= s;
        }
    }
    us.matmul(&v.transpose())
}
