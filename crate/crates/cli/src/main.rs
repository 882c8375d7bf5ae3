//! `cesaro` command line: emit closed-form matrices, compute spectra, run
//! the exact verification suites, tabulate norm bounds and benchmark the
//! closed forms against the reference eigensolver.
//!
//! Exit codes: 0 success, 1 verification/runtime failure, 2 usage error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};

use cesaro_core::bounds::NormReport;
use cesaro_core::spectra::{self, SpectralDecomposition};
use cesaro_core::verify::{self, Fault, Suite, VerifyOptions};
use cesaro_core::{bounds, make_matrix, DenseMatrix, ExactScalar, MatrixKind, Scalar, ScalarMode};

#[derive(Parser)]
#[command(
    name = "cesaro",
    version,
    about = "Closed-form spectra, kernel certificates and norm bounds for structured Cesàro matrices"
)]
struct Cli {
    /// Seed for the randomized oracles (power-iteration start vectors).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one closed-form matrix (kinds: P, Pinv, C, J, Lnil, V, Vinv, B,
    /// Mcoef, S, Zrev, Mmin, Kmax, Lones, MminInv, W, Dinv).
    Emit {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        /// exact | float; default exact for n <= 100, float above.
        #[arg(long)]
        mode: Option<String>,
        /// json | csv | pretty
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Print a closed-form spectral decomposition (kinds: P, Pinv, C, B,
    /// Zrev in either mode; Mmin in float mode).
    Spectrum {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        /// exact | float; default exact for n <= 100, float above.
        #[arg(long)]
        mode: Option<String>,
        /// json | csv | pretty
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Run the exact identity suites; exits 0 iff every check passes.
    Verify {
        /// all | diagonalization | kernels | bounds
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest matrix order to sweep.
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        /// Add +1 to one matrix entry, e.g. `P:2,3`; the run must then fail.
        #[arg(long)]
        perturb: Option<String>,
    },
    /// Tabulate the norm bounds and their oracle values per order.
    Norms {
        /// Comma-separated orders, e.g. 10,100,1000.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// csv | pretty
        #[arg(long, default_value = "pretty")]
        format: String,
    },
    /// Time the closed-form Mmin spectrum against the reference eigensolver
    /// and emit CSV. The reference runs only for n <= 512.
    Bench {
        /// Only Mmin has both a closed form and a reference path.
        #[arg(long)]
        kind: String,
        /// Comma-separated orders, e.g. 256,1024,4096.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// Timing repetitions per row; the median is reported.
        #[arg(long, default_value_t = 5)]
        repeat: usize,
    },
}

enum AppError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<cesaro_core::Error> for AppError {
    fn from(e: cesaro_core::Error) -> Self {
        AppError::Runtime(e.into())
    }
}

impl From<anyhow::Error> for AppError {
    fn from(e: anyhow::Error) -> Self {
        AppError::Runtime(e)
    }
}

type AppResult<T> = Result<T, AppError>;

fn usage<T>(msg: impl Into<String>) -> AppResult<T> {
    Err(AppError::Usage(msg.into()))
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(AppError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn run(cli: Cli) -> AppResult<i32> {
    let seed = cli.seed;
    let output = cli.output.clone();
    match cli.command {
        Command::Emit {
            kind,
            n,
            mode,
            format,
        } => {
            let text = emit(&kind, n, mode.as_deref(), &format)?;
            write_out(output.as_ref(), &text)?;
            Ok(0)
        }
        Command::Spectrum {
            kind,
            n,
            mode,
            format,
        } => {
            let text = spectrum(&kind, n, mode.as_deref(), &format)?;
            write_out(output.as_ref(), &text)?;
            Ok(0)
        }
        Command::Verify {
            suite,
            n_max,
            perturb,
        } => {
            let (text, ok) = run_verify(&suite, n_max, perturb.as_deref(), seed)?;
            write_out(output.as_ref(), &text)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Norms { n_list, format } => {
            let text = norms(&n_list, &format, seed)?;
            write_out(output.as_ref(), &text)?;
            Ok(0)
        }
        Command::Bench {
            kind,
            n_list,
            repeat,
        } => {
            let text = bench(&kind, &n_list, repeat)?;
            write_out(output.as_ref(), &text)?;
            Ok(0)
        }
    }
}

fn write_out(path: Option<&PathBuf>, text: &str) -> AppResult<()> {
    match path {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(AppError::Runtime),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Json,
    Csv,
    Pretty,
}

fn parse_format(s: &str) -> AppResult<Format> {
    match s.to_ascii_lowercase().as_str() {
        "json" => Ok(Format::Json),
        "csv" => Ok(Format::Csv),
        "pretty" => Ok(Format::Pretty),
        other => usage(format!(
            "unknown format {other:?}; expected json, csv or pretty"
        )),
    }
}

fn parse_kind(s: &str) -> AppResult<MatrixKind> {
    s.parse::<MatrixKind>()
        .map_err(|e| AppError::Usage(e.to_string()))
}

/// Default mode keeps exact arithmetic at desk scale and switches to float
/// above it.
fn resolve_mode(mode: Option<&str>, n: usize) -> AppResult<ScalarMode> {
    match mode {
        None => Ok(if n <= 100 {
            ScalarMode::Exact
        } else {
            ScalarMode::Float
        }),
        Some(s) => match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(ScalarMode::Exact),
            "float" => Ok(ScalarMode::Float),
            other => usage(format!("unknown mode {other:?}; expected exact or float")),
        },
    }
}

fn require_order(n: usize) -> AppResult<()> {
    if n < 1 {
        return usage("--n must be >= 1");
    }
    Ok(())
}

fn emit(kind: &str, n: usize, mode: Option<&str>, format: &str) -> AppResult<String> {
    let kind = parse_kind(kind)?;
    require_order(n)?;
    let format = parse_format(format)?;
    let mode = resolve_mode(mode, n)?;
    let text = match mode {
        ScalarMode::Exact => {
            let m = make_matrix::<ExactScalar>(kind, n)?;
            render_matrix(&m, kind, format)
        }
        ScalarMode::Float => {
            let m = make_matrix::<f64>(kind, n)?;
            render_matrix(&m, kind, format)
        }
    };
    Ok(text)
}

fn render_matrix<S: Scalar>(m: &DenseMatrix<S>, kind: MatrixKind, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", m.to_json(Some(kind))),
        Format::Csv => m.to_csv(),
        Format::Pretty => m.to_pretty(),
    }
}

fn spectrum(kind: &str, n: usize, mode: Option<&str>, format: &str) -> AppResult<String> {
    let kind = parse_kind(kind)?;
    require_order(n)?;
    let format = parse_format(format)?;
    match kind {
        MatrixKind::Mmin => {
            if resolve_mode(mode, n)? == ScalarMode::Exact && mode.is_some() {
                return usage(
                    "the Mmin spectrum has transcendental entries; only --mode float is supported",
                );
            }
            let dec = spectra::min_kernel_spectrum(n)?;
            Ok(render_spectrum(&dec, format))
        }
        MatrixKind::P | MatrixKind::Pinv | MatrixKind::C | MatrixKind::B | MatrixKind::Zrev => {
            match resolve_mode(mode, n)? {
                ScalarMode::Exact => {
                    let dec = spectra::diagonalize::<ExactScalar>(kind, n)?;
                    Ok(render_spectrum(&dec, format))
                }
                ScalarMode::Float => {
                    let dec = spectra::diagonalize::<f64>(kind, n)?;
                    Ok(render_spectrum(&dec, format))
                }
            }
        }
        other => usage(format!(
            "spectrum supports P, Pinv, C, B, Zrev and Mmin; got {other}"
        )),
    }
}

fn render_spectrum<S: Scalar>(dec: &SpectralDecomposition<S>, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", dec.to_json()),
        Format::Csv => {
            let mut out = String::new();
            let eigs: Vec<String> = dec
                .eigenvalues
                .iter()
                .map(|e| e.to_f64().to_string())
                .collect();
            out.push_str(&eigs.join(","));
            out.push('\n');
            out.push_str(&dec.diagonalizer.to_csv());
            out
        }
        Format::Pretty => {
            let eigs: Vec<String> = dec.eigenvalues.iter().map(|e| e.to_string()).collect();
            let residual = match &dec.residual {
                None => "not computed".to_string(),
                Some(r) => r.to_string(),
            };
            format!(
                "matrix: {} (n={}, mode={})\neigenvalues: {}\nresidual: {}\nleft eigenvector rows:\n{}",
                dec.matrix,
                dec.n,
                S::MODE,
                eigs.join(", "),
                residual,
                dec.diagonalizer.to_pretty()
            )
        }
    }
}

fn run_verify(
    suite: &str,
    n_max: usize,
    perturb: Option<&str>,
    seed: u64,
) -> AppResult<(String, bool)> {
    let suite: Suite = suite
        .parse()
        .map_err(|e: cesaro_core::Error| AppError::Usage(e.to_string()))?;
    if n_max < 1 {
        return usage("--n-max must be >= 1");
    }
    let fault = match perturb {
        None => None,
        Some(spec) => Some(
            spec.parse::<Fault>()
                .map_err(|e| AppError::Usage(e.to_string()))?,
        ),
    };
    let opts = VerifyOptions {
        n_max,
        seed,
        fault,
    };
    let report = verify::run_suite(suite, &opts)?;

    let mut out = String::new();
    if let Some(f) = &opts.fault {
        let _ = writeln!(out, "fault injection: +1 at {f}");
    }
    for check in &report.checks {
        let _ = writeln!(out, "{}", check.describe());
    }
    for note in &report.notes {
        let _ = writeln!(out, "{note}");
    }
    let ok = report.all_pass();
    if ok {
        let _ = writeln!(out, "verify: all {} checks passed", report.checks.len());
    } else {
        let failing = report.first_failure().expect("failing check");
        let _ = writeln!(out, "verify: FAILED — {}", failing.describe());
    }
    Ok((out, ok))
}

fn norms(n_list: &[usize], format: &str, seed: u64) -> AppResult<String> {
    let format = parse_format(format)?;
    if format == Format::Json {
        return usage("norms supports csv or pretty output");
    }
    for &n in n_list {
        if n < 1 {
            return usage("--n-list entries must be >= 1");
        }
    }
    let reports: Vec<NormReport> = n_list
        .iter()
        .map(|&n| bounds::norm_report(n, seed))
        .collect::<Result<_, _>>()?;

    let mut out = String::new();
    match format {
        Format::Csv => {
            let _ = writeln!(
                out,
                "n,harmonic,lambda_max_K,k_bound_ok,gershgorin_W,paper_bound_W,lambda_max_M_closed,paper_approx_M"
            );
            for r in &reports {
                let k_ok = r.flags.k_oracle_within_upper && r.flags.k_upper_within_four;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.n,
                    Scalar::to_f64(&r.trace_bound),
                    r.oracle_lambda_max_k,
                    k_ok,
                    r.gershgorin_w,
                    r.paper_bound_w,
                    r.min_kernel_norm,
                    r.min_kernel_paper_approx
                );
            }
        }
        Format::Pretty => {
            let _ = writeln!(
                out,
                "{:>6} {:>14} {:>14} {:>7} {:>14} {:>14} {:>16} {:>16}",
                "n",
                "H_n",
                "λmax(K)",
                "K≤4",
                "gersh(W)",
                "4n²-6n+3",
                "λmax(M)",
                "4n²/π²"
            );
            for r in &reports {
                let k_ok = r.flags.k_oracle_within_upper && r.flags.k_upper_within_four;
                let _ = writeln!(
                    out,
                    "{:>6} {:>14.6} {:>14.9} {:>7} {:>14} {:>14} {:>16.6} {:>16.6}",
                    r.n,
                    Scalar::to_f64(&r.trace_bound),
                    r.oracle_lambda_max_k,
                    if k_ok { "ok" } else { "FAIL" },
                    r.gershgorin_w.to_string(),
                    r.paper_bound_w.to_string(),
                    r.min_kernel_norm,
                    r.min_kernel_paper_approx
                );
            }
            let all = reports.iter().all(|r| r.flags.all());
            let _ = writeln!(
                out,
                "norm flags: {}",
                if all { "all inequalities hold" } else { "FAILURES present" }
            );
        }
        Format::Json => unreachable!(),
    }
    Ok(out)
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        0.5 * (samples[n / 2 - 1] + samples[n / 2])
    }
}

/// `max_i |(M v)_i - lambda v_i|` for the top eigenpair, using the O(n)
/// closed-form matvec.
fn top_pair_residual(lambda: f64, v: &[f64]) -> f64 {
    let mv = spectra::min_kernel_matvec(v);
    mv.iter()
        .zip(v)
        .map(|(m, x)| (m - lambda * x).abs())
        .fold(0.0, f64::max)
}

const BENCH_REFERENCE_MAX_N: usize = 512;

fn bench(kind: &str, n_list: &[usize], repeat: usize) -> AppResult<String> {
    let kind = parse_kind(kind)?;
    if kind != MatrixKind::Mmin {
        return usage("bench supports --kind Mmin (closed form vs reference eigensolver)");
    }
    if repeat < 1 {
        return usage("--repeat must be >= 1");
    }
    for &n in n_list {
        if n < 1 {
            return usage("--n-list entries must be >= 1");
        }
    }

    let mut out = String::from("kind,n,method,median_seconds,residual\n");
    for &n in n_list {
        let mut times = Vec::with_capacity(repeat);
        let mut closed = None;
        for _ in 0..repeat {
            let start = Instant::now();
            let pair = spectra::min_kernel_eigensystem(n)?;
            times.push(start.elapsed().as_secs_f64());
            closed = Some(pair);
        }
        let (eigs, t) = closed.expect("repeat >= 1");
        let residual = top_pair_residual(eigs[n - 1], t.row(n));
        let _ = writeln!(
            out,
            "Mmin,{n},closed,{},{}",
            median(&mut times),
            residual
        );

        if n <= BENCH_REFERENCE_MAX_N {
            let mmin = make_matrix::<f64>(MatrixKind::Mmin, n)?;
            let mut times = Vec::with_capacity(repeat);
            let mut reference = None;
            for _ in 0..repeat {
                let start = Instant::now();
                let pair = cesaro_core::oracle::symmetric_eig_reference(&mmin, 1e-12, 60)?;
                times.push(start.elapsed().as_secs_f64());
                reference = Some(pair);
            }
            let (eigs, q) = reference.expect("repeat >= 1");
            let v: Vec<f64> = (1..=n).map(|i| *q.at(i, n)).collect();
            let residual = top_pair_residual(eigs[n - 1], &v);
            let _ = writeln!(
                out,
                "Mmin,{n},reference,{},{}",
                median(&mut times),
                residual
            );
        }
    }
    Ok(out)
}
