mod common;

use std::io::Write;

use common::spearman;
use gramsketch::bench::{
    emit_results, parse_results_csv, probability_ratio_report, random_orthonormal_rows,
    read_dense_csv, read_matrix, read_matrix_market, run_error_experiment,
    run_error_experiment_on, synth_matrix, write_dense_csv, ExperimentConfig, MatrixSource,
    OutputFormat, Strategy,
};
use gramsketch::bounds::{samples_for_gram, BoundQuery, GramTheorem};
use gramsketch::matcore::{spectral_summary, thin_svd};
use gramsketch::{DenseMatrix, RandomStream};

fn file_with(suffix: &str, text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn config(matrix: MatrixSource, c_grid: Vec<usize>, trials: usize, strategies: Vec<Strategy>) -> ExperimentConfig {
    ExperimentConfig {
        matrix,
        c_grid,
        trials,
        seed: 42,
        delta: 0.01,
        epsilon: None,
        strategies,
        output: None,
    }
}

#[test]
fn matrix_market_files() {
    let f = file_with(".mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
    let a = read_matrix_market(f.path()).unwrap();
    assert_eq!(a, DenseMatrix::from_rows(&[[1.0, 3.0], [2.0, 4.0]]).unwrap());

    let f = file_with(".mtx", "%%MatrixMarket matrix coordinate real general\n% c\n2 3 1\n1 2 5.0\n");
    let a = read_matrix(f.path()).unwrap();
    assert_eq!(a, DenseMatrix::from_rows(&[[0.0, 5.0, 0.0], [0.0, 0.0, 0.0]]).unwrap());

    let f = file_with(".mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 7\n");
    let a = read_matrix(f.path()).unwrap();
    assert_eq!((a[(0, 1)], a[(1, 0)]), (7.0, 7.0));

    let f = file_with(".mtx", "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n");
    assert!(read_matrix(f.path()).is_err());
    let f = file_with(".mtx", "%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n");
    assert!(read_matrix(f.path()).is_err());
}

#[test]
fn dense_csv_files() {
    let f = file_with(".csv", "1,2\n3,4\n");
    assert_eq!(read_dense_csv(f.path()).unwrap(), DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap());
    assert!(read_dense_csv(file_with(".csv", "").path()).is_err());
    assert!(read_dense_csv(file_with(".csv", "1,2\n3\n").path()).is_err());
    assert!(read_dense_csv(file_with(".csv", "1,x\n").path()).is_err());

    let a = synth_matrix(3, 5, &[2.0, 1.0], 1).unwrap();
    let mut buf = Vec::new();
    write_dense_csv(&a, &mut buf).unwrap();
    let back = read_matrix(file_with(".csv", std::str::from_utf8(&buf).unwrap()).path()).unwrap();
    assert_eq!(back, a);
}

#[test]
fn synthetic_rank_matches_spectrum_length() {
    for k in 1..=6 {
        let spectrum: Vec<f64> = (0..k).map(|i| 10.0 - i as f64).collect();
        let a = synth_matrix(8, 20, &spectrum, k as u64).unwrap();
        assert_eq!(thin_svd(&a).unwrap().rank(), k);
    }
}

#[test]
fn rank_one_experiment_is_exact() {
    let cfg = config(
        MatrixSource::Synthetic { m: 6, n: 30, spectrum: vec![3.0], seed: 5 },
        vec![1, 2, 5, 10],
        20,
        vec![Strategy::Optimal],
    );
    for row in run_error_experiment(&cfg).unwrap() {
        assert!(row.max_error <= 1e-12, "{row:?}");
    }
}

#[test]
fn experiment_is_deterministic_across_thread_counts() {
    let a = synth_matrix(6, 40, &[3.0, 2.0, 1.0, 0.5], 8).unwrap();
    let cfg = config(
        MatrixSource::Path("unused".into()),
        vec![2, 8, 16],
        30,
        vec![Strategy::Optimal, Strategy::Leverage, Strategy::Uniform, Strategy::NearlyOptimal { beta: 0.4 }],
    );
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let stats = pool.install(|| run_error_experiment_on(&a, &cfg)).unwrap();
        let mut buf = Vec::new();
        emit_results(&stats, OutputFormat::Csv, &mut buf).unwrap();
        buf
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(1));
}

#[test]
fn file_to_emitted_bytes_is_reproducible() {
    let a = synth_matrix(5, 25, &[2.0, 1.0, 0.5], 3).unwrap();
    let mut text = Vec::new();
    write_dense_csv(&a, &mut text).unwrap();
    let f = file_with(".csv", std::str::from_utf8(&text).unwrap());
    let cfg = config(MatrixSource::Path(f.path().to_path_buf()), vec![3, 9], 25, vec![Strategy::Optimal]);
    let emit = |format| {
        let mut buf = Vec::new();
        emit_results(&run_error_experiment(&cfg).unwrap(), format, &mut buf).unwrap();
        buf
    };
    assert_eq!(emit(OutputFormat::Csv), emit(OutputFormat::Csv));
    assert_eq!(emit(OutputFormat::Json), emit(OutputFormat::Json));
}

#[test]
fn emitted_rows_are_ordered_and_round_trip() {
    let cfg = config(
        MatrixSource::Synthetic { m: 6, n: 50, spectrum: vec![3.0, 2.0, 1.0], seed: 2 },
        vec![1, 4, 16],
        25,
        vec![Strategy::Optimal, Strategy::Uniform],
    );
    let stats = run_error_experiment(&cfg).unwrap();
    for s in &stats {
        assert!(s.min_error <= s.mean_error && s.mean_error <= s.max_error);
        assert!(s.bound_thm41 >= 0.0 && s.bound_thm42 >= 0.0);
    }
    let mut buf = Vec::new();
    emit_results(&stats, OutputFormat::Csv, &mut buf).unwrap();
    assert_eq!(parse_results_csv(std::str::from_utf8(&buf).unwrap()).unwrap(), stats);

    let mut buf = Vec::new();
    emit_results(&[], OutputFormat::Csv, &mut buf).unwrap();
    assert_eq!(
        String::from_utf8(buf).unwrap(),
        "strategy,c,trials,min_error,mean_error,max_error,bound_thm41,bound_thm42\n"
    );

    let mut buf = Vec::new();
    emit_results(&stats, OutputFormat::Json, &mut buf).unwrap();
    let json: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), stats.len());
    for row in rows {
        let obj = row.as_object().unwrap();
        assert!(obj["strategy"].is_string());
        for key in ["c", "trials"] {
            assert!(obj[key].is_u64());
        }
        for key in ["min_error", "mean_error", "max_error", "bound_thm41", "bound_thm42"] {
            assert!(obj[key].is_f64() || obj[key].is_null(), "{key}");
        }
    }
}

#[test]
fn mean_error_decreases_with_c() {
    let cfg = config(
        MatrixSource::Synthetic { m: 10, n: 200, spectrum: vec![1.0, 0.8, 0.5, 0.3, 0.2, 0.1], seed: 17 },
        vec![2, 4, 6, 10, 15, 20, 30, 45, 60, 80],
        50,
        vec![Strategy::Optimal],
    );
    let a = cfg.matrix.load().unwrap();
    let sr = spectral_summary(&thin_svd(&a).unwrap()).stable_rank;
    assert!((sr - 2.03).abs() < 0.01, "{sr}");
    let stats = run_error_experiment(&cfg).unwrap();
    let cs: Vec<f64> = stats.iter().map(|s| s.c as f64).collect();
    let means: Vec<f64> = stats.iter().map(|s| s.mean_error).collect();
    assert!(spearman(&cs, &means) < 0.0);
}

#[test]
fn bound_dominates_where_count_is_met() {
    let cfg = config(
        MatrixSource::Synthetic { m: 10, n: 200, spectrum: vec![1.0, 1.0, 0.8, 0.6, 0.4, 0.3, 0.2, 0.1], seed: 4 },
        vec![50, 100, 200, 400, 800],
        100,
        vec![Strategy::Optimal],
    );
    let a = cfg.matrix.load().unwrap();
    let summary = spectral_summary(&thin_svd(&a).unwrap());
    for row in run_error_experiment(&cfg).unwrap() {
        let eps = row.bound_thm41;
        if !(eps > 0.0 && eps <= 1.0) {
            continue;
        }
        let q = BoundQuery {
            epsilon: eps,
            delta: 0.01,
            beta: 1.0,
            stable_rank: summary.stable_rank,
            rank: summary.rank,
            ..BoundQuery::default()
        };
        let needed = samples_for_gram(&q, GramTheorem::Thm41).unwrap().required_c().unwrap();
        if row.c as u64 >= needed {
            assert!(eps >= row.max_error, "{row:?}");
        }
    }
}

#[test]
fn ratio_reports() {
    let q = random_orthonormal_rows(4, 20, &mut RandomStream::new(3, 0)).unwrap();
    assert!(probability_ratio_report(&q).unwrap().iter().all(|r| (r - 1.0).abs() < 1e-9));
    let a = synth_matrix(3, 12, &[2.0], 6).unwrap();
    assert!(probability_ratio_report(&a).unwrap().iter().all(|r| (r - 1.0).abs() < 1e-9));
    let r = probability_ratio_report(&DenseMatrix::diag(&[3.0, 1.0]).unwrap()).unwrap();
    assert!((r[0] - 5.0 / 9.0).abs() < 1e-14 && (r[1] - 5.0).abs() < 1e-14);
    assert!(r.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn config_round_trips_through_json() {
    let cfg = config(
        MatrixSource::Synthetic { m: 3, n: 9, spectrum: vec![1.0], seed: 0 },
        vec![1, 2],
        5,
        vec![Strategy::NearlyOptimal { beta: 0.25 }],
    );
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
}
