//! Dense square matrices over a scalar mode, closed-form constructors for
//! every named structured matrix, and exact dense linear algebra (multiply,
//! invert, transpose, nilpotent exponential).
//!
//! Logical indexing is 1-based throughout, matching the closed forms; the
//! row-major 0-based storage never leaks past the accessors. The source
//! material overloads several letters, so the constructor names pin one
//! object each: `Lnil` (nilpotent subdiagonal) vs `Lones` (all-ones Cholesky
//! factor), `Mcoef` (eigenvector coefficients) vs `Mmin` (min kernel), and
//! `Zrev` (the reversed chain `J*P*J`).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalar::{binomial, pochhammer, ExactScalar, Scalar, ScalarMode};

/// Orders beyond this are rejected up front; dense storage and `i64` entry
/// arithmetic are both comfortable below it.
pub const MAX_ORDER: usize = 1 << 20;

/// Square matrix of order `n >= 1` with row-major entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S: Scalar> {
    n: usize,
    entries: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    /// Build from a 1-based entry function.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Result<Self> {
        check_order(n)?;
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                entries.push(f(i, j));
            }
        }
        Ok(DenseMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("rows of unequal length".into()));
        }
        Ok(DenseMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_fn(n, |_, _| S::zero())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> ScalarMode {
        S::MODE
    }

    /// Entry at 1-based `(i, j)`. Panics outside `1..=n`.
    pub fn at(&self, i: usize, j: usize) -> &S {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "index ({i},{j}) outside 1..={}",
            self.n
        );
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    /// Row `i` (1-based) as a slice.
    pub fn row(&self, i: usize) -> &[S] {
        assert!((1..=self.n).contains(&i), "row {i} outside 1..={}", self.n);
        &self.entries[(i - 1) * self.n..i * self.n]
    }

    /// Copy with entry `(i, j)` replaced; used by fault injection in the
    /// verification suites.
    pub fn with_entry(mut self, i: usize, j: usize, v: S) -> Self {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        self.entries[(i - 1) * self.n + (j - 1)] = v;
        self
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.entries[j * n + i].clone());
            }
        }
        DenseMatrix { n, entries }
    }

    fn check_same_order(&self, rhs: &Self, op: &str) -> Result<()> {
        if self.n != rhs.n {
            return Err(Error::Shape(format!(
                "{op}: orders {} and {} differ",
                self.n, rhs.n
            )));
        }
        Ok(())
    }

    /// Matrix product. Exact in exact mode; operand modes always agree
    /// because they share the scalar type.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_order(rhs, "matmul")?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = S::zero();
                for k in 0..n {
                    let a = &self.entries[i * n + k];
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc + a.clone() * rhs.entries[k * n + j].clone();
                }
                entries.push(acc);
            }
        }
        Ok(DenseMatrix { n, entries })
    }

    /// `A * x` for a length-`n` vector.
    pub fn mul_vec(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.n {
            return Err(Error::Shape(format!(
                "mul_vec: vector length {} vs order {}",
                x.len(),
                self.n
            )));
        }
        let n = self.n;
        Ok((0..n)
            .map(|i| {
                let mut acc = S::zero();
                for (a, b) in self.entries[i * n..(i + 1) * n].iter().zip(x) {
                    acc = acc + a.clone() * b.clone();
                }
                acc
            })
            .collect())
    }

    /// `x^T * A` for a length-`n` vector.
    pub fn vec_mul(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.n {
            return Err(Error::Shape(format!(
                "vec_mul: vector length {} vs order {}",
                x.len(),
                self.n
            )));
        }
        let n = self.n;
        Ok((0..n)
            .map(|j| {
                let mut acc = S::zero();
                for (k, b) in x.iter().enumerate() {
                    acc = acc + b.clone() * self.entries[k * n + j].clone();
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_order(rhs, "add")?;
        Ok(DenseMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_order(rhs, "sub")?;
        Ok(DenseMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, s: &S) -> Self {
        DenseMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e.clone() * s.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        DenseMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| -e.clone()).collect(),
        }
    }

    pub fn trace(&self) -> S {
        let mut acc = S::zero();
        for i in 0..self.n {
            acc = acc + self.entries[i * self.n + i].clone();
        }
        acc
    }

    pub fn diagonal(&self) -> Vec<S> {
        (0..self.n)
            .map(|i| self.entries[i * self.n + i].clone())
            .collect()
    }

    /// Largest `|entry|`.
    pub fn max_abs(&self) -> S {
        let mut best = S::zero();
        for e in &self.entries {
            if e.abs_cmp(&best) == Ordering::Greater {
                best = e.abs();
            }
        }
        best
    }

    /// Largest `|entry|` off the main diagonal; zero iff the matrix is
    /// diagonal (exactly, in exact mode).
    pub fn off_diagonal_max_abs(&self) -> S {
        let mut best = S::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let e = &self.entries[i * self.n + j];
                if e.abs_cmp(&best) == Ordering::Greater {
                    best = e.abs();
                }
            }
        }
        best
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn symmetry_defect(&self) -> S {
        let mut best = S::zero();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let d = (self.entries[i * self.n + j].clone()
                    - self.entries[j * self.n + i].clone())
                .abs();
                if d.abs_cmp(&best) == Ordering::Greater {
                    best = d;
                }
            }
        }
        best
    }

    pub fn is_upper_triangular(&self) -> bool {
        for i in 0..self.n {
            for j in 0..i {
                if !self.entries[i * self.n + j].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Inverse by Gauss-Jordan elimination with full pivoting. Exact in
    /// exact mode; the error carries the 1-based step with no usable pivot.
    pub fn invert(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = DenseMatrix::<S>::identity(n)?.entries;
        // col_of[t] = original column currently sitting at position t
        let mut col_of: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let mut best: Option<(usize, usize)> = None;
            for r in k..n {
                for c in k..n {
                    let v = &a[r * n + c];
                    if v.is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((br, bc)) => v.abs_cmp(&a[br * n + bc]) == Ordering::Greater,
                    };
                    if better {
                        best = Some((r, c));
                    }
                }
            }
            let (pr, pc) = best.ok_or(Error::Singular { step: k + 1 })?;
            if pr != k {
                for j in 0..n {
                    a.swap(k * n + j, pr * n + j);
                    inv.swap(k * n + j, pr * n + j);
                }
            }
            if pc != k {
                for i in 0..n {
                    a.swap(i * n + k, i * n + pc);
                }
                col_of.swap(k, pc);
            }
            let piv_inv = a[k * n + k]
                .try_recip()
                .map_err(|_| Error::Singular { step: k + 1 })?;
            for j in 0..n {
                a[k * n + j] = a[k * n + j].clone() * piv_inv.clone();
                inv[k * n + j] = inv[k * n + j].clone() * piv_inv.clone();
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[i * n + k].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a[i * n + j] = a[i * n + j].clone() - f.clone() * a[k * n + j].clone();
                    inv[i * n + j] = inv[i * n + j].clone() - f.clone() * inv[k * n + j].clone();
                }
            }
        }

        // Column swaps on A permute the rows of A^{-1}: position t of the
        // reduced augment is row col_of[t] of the inverse.
        let mut out = vec![S::zero(); n * n];
        for t in 0..n {
            for j in 0..n {
                out[col_of[t] * n + j] = inv[t * n + j].clone();
            }
        }
        Ok(DenseMatrix { n, entries: out })
    }

    /// `exp(A) = sum_k A^k / k!` for a strictly lower-triangular `A`; the
    /// series terminates at `k = n-1`. Any nonzero entry on or above the
    /// diagonal is a domain error.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        let n = self.n;
        for i in 1..=n {
            for j in i..=n {
                if !self.at(i, j).is_zero() {
                    return Err(Error::Domain(format!(
                        "exp_nilpotent: nonzero entry at ({i},{j}) on or above the diagonal"
                    )));
                }
            }
        }
        let mut acc = DenseMatrix::<S>::identity(n)?;
        let mut term = DenseMatrix::<S>::identity(n)?;
        for k in 1..n as i64 {
            term = term.matmul(self)?.scale(&S::from_ratio(1, k));
            if term.max_abs().is_zero() {
                break;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// JSON form: `{"kind": ..., "n": ..., "mode": ..., "entries": [[...]]}`
    /// with rationals as `"num/den"` strings in exact mode and plain numbers
    /// in float mode.
    pub fn to_json(&self, kind: Option<MatrixKind>) -> Value {
        let rows: Vec<Value> = (1..=self.n)
            .map(|i| Value::Array(self.row(i).iter().map(scalar_json::<S>).collect()))
            .collect();
        let mut map = Map::new();
        if let Some(k) = kind {
            map.insert("kind".into(), json!(k.name()));
        }
        map.insert("n".into(), json!(self.n));
        map.insert("mode".into(), json!(S::MODE.to_string()));
        map.insert("entries".into(), Value::Array(rows));
        Value::Object(map)
    }

    /// CSV form: one row per line, entries as floats.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 1..=self.n {
            let line: Vec<String> = self.row(i).iter().map(|e| e.to_f64().to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Human-readable aligned form.
    pub fn to_pretty(&self) -> String {
        let cells: Vec<Vec<String>> = (1..=self.n)
            .map(|i| self.row(i).iter().map(|e| e.to_string()).collect())
            .collect();
        let mut widths = vec![0usize; self.n];
        for row in &cells {
            for (j, c) in row.iter().enumerate() {
                widths[j] = widths[j].max(c.len());
            }
        }
        let mut out = String::new();
        for row in &cells {
            out.push('[');
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    out.push_str("  ");
                }
                out.push_str(&" ".repeat(widths[j] - c.len()));
                out.push_str(c);
            }
            out.push_str("]\n");
        }
        out
    }
}

pub(crate) fn scalar_json<S: Scalar>(e: &S) -> Value {
    match S::MODE {
        ScalarMode::Exact => Value::String(e.to_string()),
        ScalarMode::Float => serde_json::Number::from_f64(e.to_f64())
            .map(Value::Number)
            .unwrap_or(Value::Null),
    }
}

fn check_order(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::Domain("matrix order must be >= 1".into()));
    }
    if n > MAX_ORDER {
        return Err(Error::Domain(format!(
            "matrix order {n} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    Ok(())
}

/// Tags for the closed-form constructors in [`make_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    /// Anti-triangular averaging transition matrix: row `i` is `1/i` on its
    /// last `i` columns.
    P,
    /// Closed-form anti-bidiagonal inverse of `P`.
    Pinv,
    /// Lower-triangular averaging matrix: row `i` is `1/i` on its first `i`
    /// columns.
    C,
    /// Reverse identity (ones on the anti-diagonal).
    J,
    /// Nilpotent subdiagonal `-1, -2, ..., 1-n`.
    Lnil,
    /// Signed Pascal lower triangle `(-1)^{i-j} C(i-1, j-1)`, `exp(Lnil)`.
    V,
    /// Unsigned Pascal lower triangle, `exp(-Lnil)`.
    Vinv,
    /// Upper-bidiagonal conjugate of `P^{-2}`: diagonal `k^2`, superdiagonal
    /// `-(k+1)(n-k)`.
    B,
    /// Unit lower-triangular eigenvector coefficients of `B^T` (Pochhammer
    /// quotients).
    Mcoef,
    /// `Mcoef` transposed.
    S,
    /// Reversed chain `J*P*J`: row `i` is `1/(n-i+1)` on its first `n-i+1`
    /// columns.
    Zrev,
    /// Brownian-bridge kernel `[min(i,j)]`.
    Mmin,
    /// Reciprocal-max kernel `[1/max(i,j)] = P*P^T`.
    Kmax,
    /// All-ones lower triangle, the Cholesky factor of `Mmin`.
    Lones,
    /// Tridiagonal inverse of `Mmin`: diagonal `2, ..., 2, 1`, off-diagonal
    /// `-1`.
    MminInv,
    /// Tridiagonal `P^{-1} P^{-T}`: diagonal `2(n-i)(n-i+1)+1`, off-diagonal
    /// `-(n-i)^2`.
    W,
    /// `Diag(1/i)`.
    Dinv,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 17] = [
        MatrixKind::P,
        MatrixKind::Pinv,
        MatrixKind::C,
        MatrixKind::J,
        MatrixKind::Lnil,
        MatrixKind::V,
        MatrixKind::Vinv,
        MatrixKind::B,
        MatrixKind::Mcoef,
        MatrixKind::S,
        MatrixKind::Zrev,
        MatrixKind::Mmin,
        MatrixKind::Kmax,
        MatrixKind::Lones,
        MatrixKind::MminInv,
        MatrixKind::W,
        MatrixKind::Dinv,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MatrixKind::P => "P",
            MatrixKind::Pinv => "Pinv",
            MatrixKind::C => "C",
            MatrixKind::J => "J",
            MatrixKind::Lnil => "Lnil",
            MatrixKind::V => "V",
            MatrixKind::Vinv => "Vinv",
            MatrixKind::B => "B",
            MatrixKind::Mcoef => "Mcoef",
            MatrixKind::S => "S",
            MatrixKind::Zrev => "Zrev",
            MatrixKind::Mmin => "Mmin",
            MatrixKind::Kmax => "Kmax",
            MatrixKind::Lones => "Lones",
            MatrixKind::MminInv => "MminInv",
            MatrixKind::W => "W",
            MatrixKind::Dinv => "Dinv",
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MatrixKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<&str> = MatrixKind::ALL.iter().map(|k| k.name()).collect();
                Error::Domain(format!(
                    "unknown matrix kind {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Entry `m_{kj}` of `Mcoef` for `k >= j` (1-based): a quotient of rising
/// factorials, `(j+1)_{k-j} (n-k+1)_{k-j} / ((2j+1)_{k-j} (k-j)!)`.
pub(crate) fn mcoef_entry(n: usize, k: usize, j: usize) -> ExactScalar {
    debug_assert!(k >= j && k <= n);
    let d = (k - j) as u32;
    let (ni, ki, ji) = (n as i64, k as i64, j as i64);
    let num = pochhammer(ji + 1, d) * pochhammer(ni - ki + 1, d);
    let den = pochhammer(2 * ji + 1, d) * pochhammer(1, d);
    num / den
}

/// Construct the named matrix of order `n` from its closed-form entries.
pub fn make_matrix<S: Scalar>(kind: MatrixKind, n: usize) -> Result<DenseMatrix<S>> {
    check_order(n)?;
    let ni = n as i64;
    DenseMatrix::from_fn(n, |i, j| {
        let (ii, ji) = (i as i64, j as i64);
        match kind {
            MatrixKind::P => {
                if ji > ni - ii {
                    S::from_ratio(1, ii)
                } else {
                    S::zero()
                }
            }
            MatrixKind::Pinv => {
                if ji == ni - ii + 1 {
                    S::from_int(ni - ii + 1)
                } else if ji == ni - ii {
                    S::from_int(ii - ni)
                } else {
                    S::zero()
                }
            }
            MatrixKind::C => {
                if ji <= ii {
                    S::from_ratio(1, ii)
                } else {
                    S::zero()
                }
            }
            MatrixKind::J => {
                if ji == ni - ii + 1 {
                    S::one()
                } else {
                    S::zero()
                }
            }
            MatrixKind::Lnil => {
                if ii == ji + 1 {
                    S::from_int(-ji)
                } else {
                    S::zero()
                }
            }
            MatrixKind::V => {
                if i >= j {
                    let b = S::from_exact(&binomial(i as u64 - 1, j as u64 - 1));
                    if (i - j) % 2 == 1 {
                        -b
                    } else {
                        b
                    }
                } else {
                    S::zero()
                }
            }
            MatrixKind::Vinv => {
                if i >= j {
                    S::from_exact(&binomial(i as u64 - 1, j as u64 - 1))
                } else {
                    S::zero()
                }
            }
            MatrixKind::B => {
                if i == j {
                    S::from_int(ii * ii)
                } else if ji == ii + 1 {
                    S::from_int(-(ii + 1) * (ni - ii))
                } else {
                    S::zero()
                }
            }
            MatrixKind::Mcoef => {
                if i >= j {
                    S::from_exact(&mcoef_entry(n, i, j))
                } else {
                    S::zero()
                }
            }
            MatrixKind::S => {
                if j >= i {
                    S::from_exact(&mcoef_entry(n, j, i))
                } else {
                    S::zero()
                }
            }
            MatrixKind::Zrev => {
                if ji <= ni - ii + 1 {
                    S::from_ratio(1, ni - ii + 1)
                } else {
                    S::zero()
                }
            }
            MatrixKind::Mmin => S::from_int(ii.min(ji)),
            MatrixKind::Kmax => S::from_ratio(1, ii.max(ji)),
            MatrixKind::Lones => {
                if j <= i {
                    S::one()
                } else {
                    S::zero()
                }
            }
            MatrixKind::MminInv => {
                if i == j {
                    S::from_int(if i < n { 2 } else { 1 })
                } else if ii.abs_diff(ji) == 1 {
                    S::from_int(-1)
                } else {
                    S::zero()
                }
            }
            MatrixKind::W => {
                if i == j {
                    S::from_int(2 * (ni - ii) * (ni - ii + 1) + 1)
                } else if ii.abs_diff(ji) == 1 {
                    let a = ni - ii.min(ji);
                    S::from_int(-a * a)
                } else {
                    S::zero()
                }
            }
            MatrixKind::Dinv => {
                if i == j {
                    S::from_ratio(1, ii)
                } else {
                    S::zero()
                }
            }
        }
    })
}
