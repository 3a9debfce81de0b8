use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gramsketch::bench::{
    emit_results, emit_results_to_path, read_matrix, run_error_experiment, write_dense_csv,
    ExperimentConfig, OutputFormat, Strategy,
};
use gramsketch::bounds::{
    gram_error_bound, samples_for_cond, samples_for_gram, samples_for_smin, BoundMethod,
    BoundQuery, BoundResult, GramTheorem, SamplingKind,
};
use gramsketch::exactrep::{
    exactness_check, optimal_weight_matrix, reconstruction_residual, subset_weights, DEFAULT_TOL,
};
use gramsketch::matcore::thin_svd;
use gramsketch::{approximate_gram, effective_beta, gram, relative_error_2norm, RandomStream};

#[derive(Parser)]
#[command(name = "gramsketch", version, about = "Column sampling approximations of AAᵀ")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print column sampling probabilities, one per line.
    Probs {
        matrix: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
    },
    /// Draw one sample and report the relative two-norm error of (AS)(AS)ᵀ.
    Approx {
        matrix: PathBuf,
        #[arg(short)]
        c: usize,
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// Write the approximation as dense CSV.
        #[arg(long)]
        emit_x: Option<PathBuf>,
    },
    /// Evaluate sample-count or error bounds.
    Bounds(BoundsArgs),
    /// Check whether weighted columns reproduce AAᵀ exactly.
    ExactCheck {
        matrix: PathBuf,
        /// 1-based column indices, comma separated; repeats allowed.
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
        /// Diagonal weights, one per index. Without them the minimal-norm
        /// weight matrix is reported.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Run a repeated-trial error experiment from a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the output path in the config.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

#[derive(Args)]
struct KindArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Optimal)]
    kind: KindArg,
    /// Mixing weight for `nearly-optimal`.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

impl KindArgs {
    fn strategy(&self) -> Strategy {
        match self.kind {
            KindArg::Optimal => Strategy::Optimal,
            KindArg::Leverage => Strategy::Leverage,
            KindArg::Uniform => Strategy::Uniform,
            KindArg::NearlyOptimal => Strategy::NearlyOptimal { beta: self.beta },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Optimal,
    Leverage,
    Uniform,
    NearlyOptimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Target {
    Gram,
    Smin,
    Cond,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Thm41,
    Thm42,
    Thm51,
    Matmult,
    Chernoff,
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplingArg {
    NearlyOptimal,
    Uniform,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(value_enum)]
    target: Target,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    sr: f64,
    #[arg(long, default_value_t = 1)]
    rank: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, value_enum, default_value_t = SamplingArg::NearlyOptimal)]
    sampling: SamplingArg,
    /// For `gram`: report the error bound at this many samples instead of
    /// the required count.
    #[arg(long)]
    c: Option<usize>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Probs { matrix, kind } => probs(matrix, &kind),
        Command::Approx {
            matrix,
            c,
            kind,
            seed,
            stream,
            emit_x,
        } => approx(matrix, c, &kind, seed, stream, emit_x),
        Command::Bounds(args) => bounds(&args),
        Command::ExactCheck {
            matrix,
            indices,
            weights,
            tol,
        } => exact_check(matrix, &indices, weights, tol),
        Command::Experiment {
            config,
            output,
            format,
        } => experiment(config, output, format),
    }
}

fn load(path: &PathBuf) -> Result<gramsketch::DenseMatrix> {
    read_matrix(path).with_context(|| format!("reading {}", path.display()))
}

fn probs(path: PathBuf, kind: &KindArgs) -> Result<()> {
    let a = load(&path)?;
    let p = kind.strategy().probabilities(&a)?;
    let out = io::stdout();
    let mut out = out.lock();
    for x in p.probs() {
        writeln!(out, "{x:.16e}")?;
    }
    Ok(())
}

fn approx(
    path: PathBuf,
    c: usize,
    kind: &KindArgs,
    seed: u64,
    stream: u64,
    emit_x: Option<PathBuf>,
) -> Result<()> {
    let a = load(&path)?;
    let p = kind.strategy().probabilities(&a)?;
    let mut rng = RandomStream::new(seed, stream);
    let (x, draw) = approximate_gram(&a, &p, c, &mut rng)?;
    let err = relative_error_2norm(&x, &gram(&a))?;
    let one_based: Vec<String> = draw.indices().iter().map(|t| (t + 1).to_string()).collect();
    println!("indices: {}", one_based.join(","));
    println!("effective_beta: {:.16e}", effective_beta(&p, &a)?);
    println!("relative_error: {err:.16e}");
    if let Some(out) = emit_x {
        let f = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
        write_dense_csv(&x, BufWriter::new(f))?;
    }
    Ok(())
}

fn print_bound(r: &BoundResult) {
    match (r.required_c(), r.error_bound()) {
        (Some(c), _) => println!("required_c: {c}"),
        (_, Some(e)) => println!("error_bound: {e:.16e}"),
        _ => unreachable!(),
    }
    println!("raw: {:.16e}", r.raw);
    println!("constant: {:.16e}", r.constant_used);
}

fn bounds(args: &BoundsArgs) -> Result<()> {
    let q = BoundQuery {
        epsilon: args.eps,
        delta: args.delta,
        beta: args.beta,
        stable_rank: args.sr,
        rank: args.rank,
        m: args.m,
        mu: args.mu,
        n: args.n,
    };
    let sampling = match args.sampling {
        SamplingArg::NearlyOptimal => SamplingKind::NearlyOptimal,
        SamplingArg::Uniform => SamplingKind::Uniform,
    };
    let result = match (args.target, args.method) {
        (Target::Gram, m @ (MethodArg::Thm41 | MethodArg::Thm42 | MethodArg::Thm51)) => {
            let theorem = match m {
                MethodArg::Thm41 => GramTheorem::Thm41,
                MethodArg::Thm42 => GramTheorem::Thm42,
                _ => GramTheorem::Thm51,
            };
            match args.c {
                Some(c) => gram_error_bound(&q, theorem, c)?,
                None => samples_for_gram(&q, theorem)?,
            }
        }
        (Target::Smin | Target::Cond, m @ (MethodArg::Matmult | MethodArg::Chernoff)) => {
            let method = match m {
                MethodArg::Matmult => BoundMethod::MatMult,
                _ => BoundMethod::Chernoff,
            };
            if args.target == Target::Smin {
                samples_for_smin(&q, method, sampling)?
            } else {
                samples_for_cond(&q, method, sampling)?
            }
        }
        (Target::Gram, _) => bail!("gram bounds take --method thm41, thm42 or thm51"),
        _ => bail!("smin and cond bounds take --method matmult or chernoff"),
    };
    print_bound(&result);
    Ok(())
}

fn exact_check(path: PathBuf, indices: &[usize], weights: Option<Vec<f64>>, tol: f64) -> Result<()> {
    let a = load(&path)?;
    let idx = indices
        .iter()
        .map(|&t| {
            if t == 0 || t > a.cols() {
                bail!("index {t} outside 1..={}", a.cols())
            }
            Ok(t - 1)
        })
        .collect::<Result<Vec<_>>>()?;
    let svd = thin_svd(&a)?;
    match weights {
        Some(w) => {
            let exact = exactness_check(svd.v(), &idx, &w, tol)?;
            println!("exact: {exact}");
        }
        None => {
            let w = optimal_weight_matrix(&a, &idx)?;
            let res = reconstruction_residual(&a, &idx, &w)?;
            println!("minimal_weight_residual: {res:.16e}");
            println!("minimal_weight_norm_sq: {:.16e}", w.frobenius_norm_sq());
            if idx.len() == svd.rank() {
                let distinct = {
                    let mut s = idx.clone();
                    s.sort_unstable();
                    s.windows(2).all(|p| p[0] != p[1])
                };
                if distinct {
                    let (w, ok) = subset_weights(svd.v(), &idx, tol)?;
                    let w: Vec<String> = w.iter().map(|x| format!("{x:.16e}")).collect();
                    println!("inverse_leverage_weights: {}", w.join(","));
                    println!("exact: {ok}");
                }
            }
        }
    }
    Ok(())
}

fn experiment(config: PathBuf, output: Option<PathBuf>, format: Option<FormatArg>) -> Result<()> {
    let text = std::fs::read_to_string(&config)
        .with_context(|| format!("reading {}", config.display()))?;
    let cfg = ExperimentConfig::from_json(&text)?;
    let stats = run_error_experiment(&cfg)?;
    let spec_format = cfg.output.as_ref().map(|o| o.format).unwrap_or_default();
    let format = match format {
        Some(FormatArg::Csv) => OutputFormat::Csv,
        Some(FormatArg::Json) => OutputFormat::Json,
        None => spec_format,
    };
    match output.or_else(|| cfg.output.as_ref().map(|o| o.path.clone())) {
        Some(path) => emit_results_to_path(&stats, format, &path)
            .with_context(|| format!("writing {}", path.display()))?,
        None => emit_results(&stats, format, io::stdout().lock())?,
    }
    Ok(())
}
