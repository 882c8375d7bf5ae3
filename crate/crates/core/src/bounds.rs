//! Operator-norm identities and bounds, each returned as a certificate
//! pairing the closed-form bound with an independently computed oracle
//! value, so a regression on either side is caught.

use std::f64::consts::PI;

use crate::error::Result;
use crate::matrix::{make_matrix, DenseMatrix, MatrixKind};
use crate::oracle::power_iteration_max;
use crate::scalar::{harmonic, ExactScalar, Scalar};

/// All float comparisons against paper bounds give the oracle this much
/// relative slack.
pub const ORACLE_RELATIVE_SLACK: f64 = 1e-9;

const POWER_TOL: f64 = 3e-7;
const POWER_MAX_ITERS: usize = 2_000_000;

/// Gershgorin disk reach per row: `a_ii + sum_{j != i} |a_ij|`.
pub fn gershgorin_disks<S: Scalar>(a: &DenseMatrix<S>) -> Vec<S> {
    let n = a.order();
    (1..=n)
        .map(|i| {
            let mut acc = a.at(i, i).clone();
            for j in 1..=n {
                if j != i {
                    acc = acc + a.at(i, j).abs();
                }
            }
            acc
        })
        .collect()
}

/// `trace(P P^T)` computed exactly, checked against the harmonic number
/// `H_n`.
pub fn trace_harmonic_check(n: usize) -> Result<(ExactScalar, bool)> {
    let p = make_matrix::<ExactScalar>(MatrixKind::P, n)?;
    let trace = p.matmul(&p.transpose())?.trace();
    let pass = trace == harmonic(n as u64)?;
    Ok((trace, pass))
}

/// `(I - JP)(I - JP)^T` computed exactly, checked against
/// `Diag((n-j)/(n-j+1))`.
pub fn contraction_identity_check(n: usize) -> Result<(DenseMatrix<ExactScalar>, bool)> {
    let p = make_matrix::<ExactScalar>(MatrixKind::P, n)?;
    let j = make_matrix::<ExactScalar>(MatrixKind::J, n)?;
    let shrink = DenseMatrix::identity(n)?.sub(&j.matmul(&p)?)?;
    let product = shrink.matmul(&shrink.transpose())?;
    let ni = n as i64;
    let expected = DenseMatrix::from_fn(n, |r, c| {
        if r == c {
            ExactScalar::from_ratio(ni - r as i64, ni - r as i64 + 1)
        } else {
            Scalar::zero()
        }
    })?;
    let pass = product == expected;
    Ok((product, pass))
}

/// Dimension-independent bound on the reciprocal-max kernel:
/// `(upper, oracle, pass)` with `upper = (1 + sqrt(1 - 1/n))^2 <= 4` and
/// `oracle = λ_max(Kmax)` from power iteration.
pub fn norm_k_certificate(n: usize, seed: u64) -> Result<(f64, f64, bool)> {
    let upper = (1.0 + (1.0 - 1.0 / n as f64).sqrt()).powi(2);
    let k = make_matrix::<f64>(MatrixKind::Kmax, n)?;
    let oracle = power_iteration_max(&k, POWER_TOL, POWER_MAX_ITERS, seed)?;
    let pass = oracle <= upper * (1.0 + ORACLE_RELATIVE_SLACK) && upper <= 4.0;
    Ok((upper, oracle, pass))
}

/// Largest Gershgorin disk of `W = P^{-1} P^{-T}` (an exact integer) checked
/// against the closed cap `4n^2 - 6n + 3` and against the oracle
/// `λ_max(W)`.
pub fn gershgorin_w(n: usize, seed: u64) -> Result<(ExactScalar, bool)> {
    let w = make_matrix::<ExactScalar>(MatrixKind::W, n)?;
    let bound = gershgorin_disks(&w)
        .into_iter()
        .max()
        .expect("n >= 1 row disks");
    let cap = paper_bound_w(n);
    let wf = make_matrix::<f64>(MatrixKind::W, n)?;
    let oracle = power_iteration_max(&wf, POWER_TOL, POWER_MAX_ITERS, seed)?;
    let pass = bound <= cap
        && oracle <= Scalar::to_f64(&bound) * (1.0 + ORACLE_RELATIVE_SLACK);
    Ok((bound, pass))
}

/// `4n^2 - 6n + 3`.
pub fn paper_bound_w(n: usize) -> ExactScalar {
    let ni = n as i64;
    ExactScalar::from_integer(4 * ni * ni - 6 * ni + 3)
}

/// Norm of the min kernel: the closed cosine formula next to its two
/// polynomial approximants. `ratio -> 1` from above as `n` grows; it is
/// reported, not asserted at a fixed tolerance.
#[derive(Debug, Clone, Copy)]
pub struct MinKernelNorm {
    /// `1/(2 + 2 cos(2nπ/(2n+1)))`, the exact largest eigenvalue.
    pub closed_form: f64,
    /// `4n²/π²`.
    pub paper_approx: f64,
    /// `closed_form / paper_approx`.
    pub ratio: f64,
    /// `(2n+1)²/π²`, the tighter approximant suggested by the closed form.
    pub refined_approx: f64,
}

pub fn min_kernel_norm(n: usize) -> Result<MinKernelNorm> {
    if n < 1 {
        return Err(crate::error::Error::Domain("order must be >= 1".into()));
    }
    let nf = n as f64;
    let theta_n = 2.0 * nf * PI / (2.0 * nf + 1.0);
    let closed_form = 1.0 / (2.0 + 2.0 * theta_n.cos());
    let paper_approx = 4.0 * nf * nf / (PI * PI);
    let refined_approx = (2.0 * nf + 1.0).powi(2) / (PI * PI);
    Ok(MinKernelNorm {
        closed_form,
        paper_approx,
        ratio: closed_form / paper_approx,
        refined_approx,
    })
}

/// Pass/fail flags for the inequalities a [`NormReport`] certifies.
#[derive(Debug, Clone, Copy)]
pub struct NormFlags {
    pub k_oracle_within_upper: bool,
    pub k_upper_within_four: bool,
    pub k_oracle_within_trace: bool,
    pub w_oracle_within_gershgorin: bool,
    pub gershgorin_within_paper: bool,
    pub paper_within_4n2: bool,
}

impl NormFlags {
    pub fn all(&self) -> bool {
        self.k_oracle_within_upper
            && self.k_upper_within_four
            && self.k_oracle_within_trace
            && self.w_oracle_within_gershgorin
            && self.gershgorin_within_paper
            && self.paper_within_4n2
    }
}

/// Named bound values for one order, with oracle comparisons.
#[derive(Debug, Clone)]
pub struct NormReport {
    pub n: usize,
    /// Harmonic number `H_n`, the trace bound on `λ_max(K)`.
    pub trace_bound: ExactScalar,
    /// `(n-j)/(n-j+1)` for `j = 1..n`, the contraction diagonal.
    pub contraction_diag: Vec<ExactScalar>,
    /// `(1 + sqrt(1 - 1/n))^2`.
    pub norm_k_upper: f64,
    /// Largest Gershgorin disk of `W` (exact integer).
    pub gershgorin_w: ExactScalar,
    /// `4n^2 - 6n + 3`.
    pub paper_bound_w: ExactScalar,
    /// Closed-form `λ_max(Mmin)`.
    pub min_kernel_norm: f64,
    /// `4n²/π²`.
    pub min_kernel_paper_approx: f64,
    /// `(2n+1)²/π²`.
    pub min_kernel_refined_approx: f64,
    pub oracle_lambda_max_k: f64,
    pub oracle_lambda_max_w: f64,
    pub flags: NormFlags,
}

/// Assemble the full report for one order. Formula fields are evaluated
/// directly; the exact product identities behind them are the verification
/// suite's job, so large orders stay affordable here.
pub fn norm_report(n: usize, seed: u64) -> Result<NormReport> {
    let trace_bound = harmonic(n as u64)?;
    let ni = n as i64;
    let contraction_diag: Vec<ExactScalar> = (1..=ni)
        .map(|j| ExactScalar::from_ratio(ni - j, ni - j + 1))
        .collect();
    let norm_k_upper = (1.0 + (1.0 - 1.0 / n as f64).sqrt()).powi(2);

    let w = make_matrix::<ExactScalar>(MatrixKind::W, n)?;
    let gershgorin = gershgorin_disks(&w)
        .into_iter()
        .max()
        .expect("n >= 1 row disks");
    let paper_w = paper_bound_w(n);

    let mk = min_kernel_norm(n)?;

    let kf = make_matrix::<f64>(MatrixKind::Kmax, n)?;
    let oracle_k = power_iteration_max(&kf, POWER_TOL, POWER_MAX_ITERS, seed)?;
    let wf = make_matrix::<f64>(MatrixKind::W, n)?;
    let oracle_w = power_iteration_max(&wf, POWER_TOL, POWER_MAX_ITERS, seed)?;

    let slack = 1.0 + ORACLE_RELATIVE_SLACK;
    let four_n2 = ExactScalar::from_integer(4 * ni * ni);
    let flags = NormFlags {
        k_oracle_within_upper: oracle_k <= norm_k_upper * slack,
        k_upper_within_four: norm_k_upper <= 4.0,
        k_oracle_within_trace: oracle_k <= Scalar::to_f64(&trace_bound) * slack,
        w_oracle_within_gershgorin: oracle_w <= Scalar::to_f64(&gershgorin) * slack,
        gershgorin_within_paper: gershgorin <= paper_w,
        paper_within_4n2: paper_w <= four_n2,
    };

    Ok(NormReport {
        n,
        trace_bound,
        contraction_diag,
        norm_k_upper,
        gershgorin_w: gershgorin,
        paper_bound_w: paper_w,
        min_kernel_norm: mk.closed_form,
        min_kernel_paper_approx: mk.paper_approx,
        min_kernel_refined_approx: mk.refined_approx,
        oracle_lambda_max_k: oracle_k,
        oracle_lambda_max_w: oracle_w,
        flags,
    })
}
