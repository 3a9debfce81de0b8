//! Matrix loading, synthetic test matrices and repeated-trial experiments.

pub mod emit;
pub mod experiment;
pub mod io;
pub mod synth;

pub use emit::{emit_results, emit_results_to_path, parse_results_csv, write_csv, write_json};
pub use experiment::{
    probability_ratio_report, run_error_experiment, run_error_experiment_on, ExperimentConfig,
    MatrixSource, OutputFormat, OutputSpec, Strategy, TrialStats,
};
pub use io::{parse_dense_csv, parse_matrix_market, read_dense_csv, read_matrix, read_matrix_market, write_dense_csv};
pub use synth::{gaussian_matrix, random_orthonormal_columns, random_orthonormal_rows, synth_matrix};
