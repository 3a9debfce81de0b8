//! Randomized approximation of `AAᵀ` by sampling and rescaling columns of
//! `A`, with tools to decide when a column subset reproduces `AAᵀ` exactly
//! and to evaluate sample-count bounds.
//!
//! ```
//! use gramsketch::{approximate_gram, gram, optimal_probs, relative_error_2norm};
//! use gramsketch::{DenseMatrix, RandomStream};
//!
//! let a = DenseMatrix::from_rows(&[[1.0, 2.0, 0.0, 1.0], [0.0, 1.0, 3.0, 1.0]]).unwrap();
//! let p = optimal_probs(&a).unwrap();
//! let mut stream = RandomStream::new(7, 0);
//! let (x, _) = approximate_gram(&a, &p, 50, &mut stream).unwrap();
//! assert!(relative_error_2norm(&x, &gram(&a)).unwrap() < 1.0);
//! ```

pub mod bench;
pub mod bounds;
pub mod error;
pub mod exactrep;
pub mod matcore;
pub mod probmodel;
pub mod sampler;

pub use error::{Error, Result};
pub use matcore::{gram, relative_error_2norm, spectral_summary, DenseMatrix, SpectralSummary, ThinSvd};
pub use probmodel::{
    effective_beta, leverage_probs, nearly_optimal_mix, optimal_probs, uniform_probs,
    ProbabilityKind, ProbabilityVector,
};
pub use sampler::{approximate_gram, RandomStream, SampleDraw};
