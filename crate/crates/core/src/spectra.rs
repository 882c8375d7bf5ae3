//! Closed-form eigenvalues and diagonalizers for the structured matrices,
//! plus the stationary distribution of the averaging Markov chain.
//!
//! Eigenvector convention: decompositions carry LEFT eigenvectors as the
//! rows of `T`, so `T * A * T^{-1} = Λ` with `Λ` diagonal in the listed
//! eigenvalue order. Right eigenvectors are the columns of `T^{-1}`.

use std::f64::consts::PI;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::matrix::{make_matrix, mcoef_entry, scalar_json, DenseMatrix, MatrixKind};
use crate::scalar::{binomial, ExactScalar, Scalar, ScalarMode};

/// Eigenvalues plus a left diagonalizer, with the conjugation residual.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<S: Scalar> {
    /// Which closed-form matrix this diagonalizes.
    pub matrix: MatrixKind,
    pub n: usize,
    /// Eigenvalues in row order of the diagonalizer.
    pub eigenvalues: Vec<S>,
    /// Rows are left eigenvectors: `diagonalizer * A * diagonalizer^{-1} = Λ`.
    pub diagonalizer: DenseMatrix<S>,
    /// Largest off-diagonal `|entry|` of the conjugation, when it was
    /// computed; identically zero in exact mode.
    pub residual: Option<S>,
}

impl<S: Scalar> SpectralDecomposition<S> {
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("matrix".into(), json!(self.matrix.name()));
        map.insert("n".into(), json!(self.n));
        map.insert(
            "eigenvalues".into(),
            Value::Array(self.eigenvalues.iter().map(scalar_json::<S>).collect()),
        );
        map.insert(
            "diagonalizer".into(),
            self.diagonalizer.to_json(None)["entries"].clone(),
        );
        let residual = match &self.residual {
            None => Value::Null,
            Some(r) if S::MODE == ScalarMode::Exact && r.is_zero() => json!(0),
            Some(r) => scalar_json::<S>(r),
        };
        map.insert("residual".into(), residual);
        Value::Object(map)
    }
}

/// Non-negative weights summing to one with `π P = π`.
#[derive(Debug, Clone)]
pub struct StationaryDistribution<S: Scalar> {
    pub n: usize,
    pub weights: Vec<S>,
}

/// Eigenvalues of `P`: `1, -1/2, 1/3, ..., (-1)^{n+1}/n` in index order.
pub fn closed_eigenvalues_p(n: usize) -> Result<Vec<ExactScalar>> {
    require_order(n)?;
    Ok(closed_eigenvalue_list(MatrixKind::P, n))
}

fn require_order(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::Domain("order must be >= 1".into()));
    }
    Ok(())
}

fn sign(i: usize) -> i64 {
    if i % 2 == 1 {
        1
    } else {
        -1
    }
}

fn closed_eigenvalue_list<S: Scalar>(kind: MatrixKind, n: usize) -> Vec<S> {
    (1..=n)
        .map(|i| match kind {
            MatrixKind::P | MatrixKind::Zrev => S::from_ratio(sign(i), i as i64),
            MatrixKind::Pinv => S::from_int(sign(i) * i as i64),
            MatrixKind::C => S::from_ratio(1, i as i64),
            MatrixKind::B => S::from_int((i * i) as i64),
            _ => unreachable!("no closed eigenvalue list for {kind}"),
        })
        .collect()
}

/// The left diagonalizer `T = S * V` of `P` (and of `P^{-1}`, `P^{-2}`).
pub fn diagonalizer_t<S: Scalar>(n: usize) -> Result<DenseMatrix<S>> {
    let s = make_matrix::<S>(MatrixKind::S, n)?;
    let v = make_matrix::<S>(MatrixKind::V, n)?;
    s.matmul(&v)
}

/// Closed-form diagonalization of one of `P`, `Pinv`, `C`, `B`, `Zrev`.
///
/// In exact mode the conjugation `T A T^{-1}` is recomputed and compared to
/// the expected diagonal before returning; a mismatch is an internal
/// inconsistency (a library bug), never a property of valid input. In float
/// mode the residual is reported as-is.
pub fn diagonalize<S: Scalar>(kind: MatrixKind, n: usize) -> Result<SpectralDecomposition<S>> {
    require_order(n)?;
    let t = match kind {
        MatrixKind::P | MatrixKind::Pinv => diagonalizer_t::<S>(n)?,
        MatrixKind::C => make_matrix::<S>(MatrixKind::V, n)?,
        MatrixKind::B => make_matrix::<S>(MatrixKind::S, n)?,
        MatrixKind::Zrev => {
            diagonalizer_t::<S>(n)?.matmul(&make_matrix::<S>(MatrixKind::J, n)?)?
        }
        other => {
            return Err(Error::Domain(format!(
                "diagonalize supports P, Pinv, C, B, Zrev; got {other}"
            )))
        }
    };
    let eigenvalues = closed_eigenvalue_list::<S>(kind, n);
    let a = make_matrix::<S>(kind, n)?;
    let conj = t.matmul(&a)?.matmul(&t.invert()?)?;
    let residual = conj.off_diagonal_max_abs();
    if S::MODE == ScalarMode::Exact {
        if !residual.is_zero() {
            return Err(Error::Inconsistency(format!(
                "T*{kind}*T^-1 at n={n} has nonzero off-diagonal {residual}"
            )));
        }
        let diag = conj.diagonal();
        if diag != eigenvalues {
            return Err(Error::Inconsistency(format!(
                "T*{kind}*T^-1 at n={n} has unexpected diagonal"
            )));
        }
    }
    Ok(SpectralDecomposition {
        matrix: kind,
        n,
        eigenvalues,
        diagonalizer: t,
        residual: Some(residual),
    })
}

/// Closed-form eigensystem of the min kernel `[min(i,j)]`, without the
/// conjugation residual (cheap enough to time at large orders).
///
/// Eigenvalues are `λ_k = 1/(2 + 2 cos θ_k)`, `θ_k = 2kπ/(2n+1)`, ascending
/// in `k`. Row `k` of the returned matrix is the unit eigenvector paired
/// with `λ_k`; it equals column `n+1-k` of the sine table
/// `[2/sqrt(2n+1) * sin((c - 1/2) θ_j)]_{j,c}`. The column reversal is
/// forced by the eigenproblem itself: the sine table's column `c` satisfies
/// `M v = λ_{n+1-c} v`, which the oracle eigensolver confirms and the naive
/// pairing fails.
pub fn min_kernel_eigensystem(n: usize) -> Result<(Vec<f64>, DenseMatrix<f64>)> {
    require_order(n)?;
    let m = (2 * n + 1) as f64;
    let theta = |k: usize| 2.0 * PI * k as f64 / m;
    let eigenvalues: Vec<f64> = (1..=n).map(|k| 1.0 / (2.0 + 2.0 * theta(k).cos())).collect();
    let norm = 2.0 / m.sqrt();
    let t = DenseMatrix::from_fn(n, |k, j| {
        norm * (((n - k) as f64 + 0.5) * theta(j)).sin()
    })?;
    Ok((eigenvalues, t))
}

/// Min-kernel spectrum with the conjugation residual `max |off(T M T^T)|`
/// filled in (the rows of `T` are orthonormal, so `T^T` stands in for
/// `T^{-1}` up to roundoff).
pub fn min_kernel_spectrum(n: usize) -> Result<SpectralDecomposition<f64>> {
    let (eigenvalues, t) = min_kernel_eigensystem(n)?;
    let mmin = make_matrix::<f64>(MatrixKind::Mmin, n)?;
    let conj = t.matmul(&mmin)?.matmul(&t.transpose())?;
    Ok(SpectralDecomposition {
        matrix: MatrixKind::Mmin,
        n,
        eigenvalues,
        diagonalizer: t,
        residual: Some(conj.off_diagonal_max_abs()),
    })
}

/// `[min(i,j)] * x` in `O(n)` via prefix sums, without materializing the
/// kernel: `(Mx)_i = sum_{j<=i} j x_j + i sum_{j>i} x_j`.
pub fn min_kernel_matvec(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut weighted_prefix = 0.0;
    let mut suffix: f64 = x.iter().sum();
    let mut out = Vec::with_capacity(n);
    for (idx, &xi) in x.iter().enumerate() {
        let i = (idx + 1) as f64;
        weighted_prefix += i * xi;
        suffix -= xi;
        out.push(weighted_prefix + i * suffix);
    }
    out
}

/// `max_k ||A v_k - λ_k v_k||_∞` over the decomposition's eigenpairs
/// (rows of the diagonalizer).
pub fn eigenpair_residual_max(
    dec: &SpectralDecomposition<f64>,
    a: &DenseMatrix<f64>,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 1..=dec.n {
        let row = dec.diagonalizer.row(k);
        let av = a.vec_mul(row)?;
        let lambda = dec.eigenvalues[k - 1];
        for (j, value) in av.iter().enumerate() {
            worst = worst.max((value - lambda * row[j]).abs());
        }
    }
    Ok(worst)
}

/// `max |T T^T - I|`: how far the rows of the diagonalizer are from an
/// orthonormal system.
pub fn orthogonality_defect(dec: &SpectralDecomposition<f64>) -> Result<f64> {
    let t = &dec.diagonalizer;
    let gram = t.matmul(&t.transpose())?;
    let id = DenseMatrix::identity(dec.n)?;
    Ok(gram.sub(&id)?.max_abs().to_f64())
}

/// Stationary distribution of the chain: the top row of `T = S*V`
/// normalized to sum one. Computed exactly (it is `(m_{k1})_k * V`, an
/// `O(n^2)` sum), verified against `π P = π` with zero tolerance, then
/// converted into the requested scalar mode.
pub fn stationary_distribution<S: Scalar>(n: usize) -> Result<StationaryDistribution<S>> {
    require_order(n)?;
    let mut weights: Vec<ExactScalar> = Vec::with_capacity(n);
    for j in 1..=n {
        let mut acc: ExactScalar = Scalar::zero();
        for k in j..=n {
            let mut term = mcoef_entry(n, k, 1) * binomial(k as u64 - 1, j as u64 - 1);
            if (k - j) % 2 == 1 {
                term = -term;
            }
            acc = acc + term;
        }
        weights.push(acc);
    }
    let mut total: ExactScalar = Scalar::zero();
    for w in &weights {
        total = total + w.clone();
    }
    let total_inv = total.try_recip().map_err(|_| {
        Error::Inconsistency(format!("stationary weights at n={n} sum to zero"))
    })?;
    let pi: Vec<ExactScalar> = weights
        .into_iter()
        .map(|w| w * total_inv.clone())
        .collect();

    for (i, w) in pi.iter().enumerate() {
        if !w.is_positive() {
            return Err(Error::Inconsistency(format!(
                "stationary weight {} at n={n} is not positive",
                i + 1
            )));
        }
    }
    let p = make_matrix::<ExactScalar>(MatrixKind::P, n)?;
    if p.vec_mul(&pi)? != pi {
        return Err(Error::Inconsistency(format!(
            "stationary candidate at n={n} fails pi*P = pi"
        )));
    }

    Ok(StationaryDistribution {
        n,
        weights: pi.iter().map(|w| S::from_exact(w)).collect(),
    })
}
