#![allow(dead_code)]

use gramsketch::bench::gaussian_matrix;
use gramsketch::{DenseMatrix, RandomStream};
use nalgebra::DMatrix;

pub fn to_na(a: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

pub fn from_na(a: &DMatrix<f64>) -> DenseMatrix {
    let rows: Vec<Vec<f64>> = (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect())
        .collect();
    DenseMatrix::from_rows(&rows).unwrap()
}

pub fn gaussian(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    gaussian_matrix(rows, cols, &mut RandomStream::new(seed, 1000))
}

/// Two-norm of a symmetric matrix from nalgebra's eigensolver.
pub fn na_sym_norm(g: &DMatrix<f64>) -> f64 {
    let s = (g + g.transpose()) * 0.5;
    s.symmetric_eigenvalues().iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Right singular vectors for the numerically non-zero singular values.
pub fn na_right_factor(a: &DenseMatrix) -> DenseMatrix {
    let svd = to_na(a).svd(true, true);
    let vt = svd.v_t.unwrap();
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > 1e-10 * smax)
        .collect();
    let cols: Vec<Vec<f64>> = keep
        .iter()
        .map(|&i| (0..a.cols()).map(|j| vt[(i, j)]).collect())
        .collect();
    DenseMatrix::from_columns(a.cols(), &cols).unwrap()
}

pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        for (rank, &i) in idx.iter().enumerate() {
            r[i] = rank as f64;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// `A = U·diag(s)·Vᵀ` for random `U` with `k` orthonormal columns.
pub fn with_right_factor(v: &DenseMatrix, m: usize, stream: &mut RandomStream) -> DenseMatrix {
    let k = v.cols();
    let mut u = gramsketch::bench::random_orthonormal_columns(m, k, stream).unwrap();
    for j in 0..k {
        let s = 0.5 + 2.0 * stream.next_unit();
        for i in 0..m {
            u[(i, j)] *= s;
        }
    }
    u.matmul(&v.transpose()).unwrap()
}

pub struct ExactnessTriple {
    pub v: DenseMatrix,
    pub a: DenseMatrix,
    pub indices: Vec<usize>,
    pub weights: Vec<f64>,
}

impl ExactnessTriple {
    /// `‖Σ w_j A_{t_j}A_{t_j}ᵀ − AAᵀ‖_F ≤ 1e-8 ‖AAᵀ‖_F`, computed with nalgebra.
    pub fn direct_exact(&self) -> bool {
        let na = to_na(&self.a);
        let g = &na * na.transpose();
        let mut sum = DMatrix::<f64>::zeros(self.a.rows(), self.a.rows());
        for (&t, &w) in self.indices.iter().zip(&self.weights) {
            let col = na.column(t);
            sum += w * col * col.transpose();
        }
        (sum - &g).norm() <= 1e-8 * g.norm()
    }
}

/// Random `(V, indices, weights)` with `A = UΣVᵀ`. A quarter of the cases
/// are exact by construction (every column covered, repeats split); the rest
/// perturb, halve or randomize the weights.
pub fn exactness_triple(trial: u64) -> ExactnessTriple {
    let mut s = RandomStream::new(trial, 7);
    let k = 1 + s.next_below(4);
    let n = k + 1 + s.next_below(8);
    let m = k + s.next_below(3);
    let v = gramsketch::bench::random_orthonormal_columns(n, k, &mut s).unwrap();
    let a = with_right_factor(&v, m, &mut s);

    let mut indices = Vec::new();
    let mut weights = Vec::new();
    for t in 0..n {
        if s.next_unit() < 0.3 {
            let f = 0.1 + 0.8 * s.next_unit();
            indices.extend([t, t]);
            weights.extend([f, 1.0 - f]);
        } else {
            indices.push(t);
            weights.push(1.0);
        }
    }
    match trial % 4 {
        0 => {}
        1 => {
            let j = s.next_below(weights.len());
            weights[j] += 0.01 + 0.1 * s.next_unit();
        }
        2 => {
            let j = s.next_below(weights.len());
            weights[j] *= 0.5;
        }
        _ => weights.iter_mut().for_each(|w| *w = 2.0 * s.next_unit()),
    }
    for i in (1..indices.len()).rev() {
        let j = s.next_below(i + 1);
        indices.swap(i, j);
        weights.swap(i, j);
    }
    ExactnessTriple { v, a, indices, weights }
}
