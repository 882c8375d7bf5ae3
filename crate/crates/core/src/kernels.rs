//! Schur (entrywise) powers, positive-semidefiniteness certification via a
//! pivoted symmetric factorization, and the infinite-divisibility and
//! Gram-representation checks for the kernel matrices.

use serde_json::{json, Map, Value};
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::{make_matrix, scalar_json, DenseMatrix, MatrixKind};
use crate::scalar::{Scalar, ScalarMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdVerdict {
    Psd,
    NotPsd,
}

/// Outcome of the pivoted `L D L^T` factorization of a symmetric matrix.
///
/// PSD iff every pivot is `>= -tolerance`, where `tolerance` is the absolute
/// threshold actually used (the relative input times the largest diagonal
/// entry; zero in exact mode). A `NotPsd` verdict carries a witness `x` whose
/// quadratic form `x^T A x` is negative; the form is re-evaluated against the
/// input before the certificate is returned.
#[derive(Debug, Clone)]
pub struct PsdCertificate<S: Scalar> {
    pub verdict: PsdVerdict,
    /// Diagonal pivot sequence; for a PSD matrix with a rank-deficient tail
    /// the trailing entries are the (near-)zero leftover diagonal.
    pub pivots: Vec<S>,
    pub witness: Option<Vec<S>>,
    /// `x^T A x` for the witness.
    pub witness_value: Option<S>,
    /// Absolute pivot threshold used; 0 in exact mode.
    pub tolerance: f64,
}

impl<S: Scalar> PsdCertificate<S> {
    pub fn is_psd(&self) -> bool {
        self.verdict == PsdVerdict::Psd
    }

    pub fn min_pivot(&self) -> Option<&S> {
        self.pivots
            .iter()
            .min_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
    }

    /// All pivots strictly positive: the factorization certifies definiteness,
    /// not just semidefiniteness.
    pub fn is_strictly_positive_definite(&self) -> bool {
        self.is_psd()
            && !self.pivots.is_empty()
            && self
                .pivots
                .iter()
                .all(|p| p.partial_cmp(&S::zero()) == Some(Ordering::Greater))
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert(
            "verdict".into(),
            json!(match self.verdict {
                PsdVerdict::Psd => "PSD",
                PsdVerdict::NotPsd => "NotPSD",
            }),
        );
        map.insert(
            "min_pivot".into(),
            self.min_pivot().map(scalar_json::<S>).unwrap_or(Value::Null),
        );
        map.insert(
            "witness".into(),
            match &self.witness {
                Some(x) => Value::Array(x.iter().map(scalar_json::<S>).collect()),
                None => Value::Null,
            },
        );
        map.insert("tolerance".into(), json!(self.tolerance));
        Value::Object(map)
    }
}

/// Entrywise power `A^{∘r}`; `r = 0` gives the all-ones matrix. Integer `r`
/// stays exact in exact mode; fractional `r` requires float mode and strictly
/// positive entries.
pub fn schur_power<S: Scalar>(a: &DenseMatrix<S>, r: f64) -> Result<DenseMatrix<S>> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::Domain(format!("Schur exponent {r} must be >= 0")));
    }
    let n = a.order();
    let mut rows = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row = Vec::with_capacity(n);
        for j in 1..=n {
            row.push(a.at(i, j).schur_pow(r)?);
        }
        rows.push(row);
    }
    DenseMatrix::from_rows(rows)
}

struct Factorizer<S: Scalar> {
    n: usize,
    /// Working Schur complement, kept symmetric.
    w: Vec<S>,
    /// Unit lower-triangular factor in permuted coordinates.
    l: Vec<S>,
    /// `perm[t]` = original index currently at permuted position `t`.
    perm: Vec<usize>,
}

impl<S: Scalar> Factorizer<S> {
    fn new(a: &DenseMatrix<S>) -> Self {
        let n = a.order();
        let w = (1..=n).flat_map(|i| a.row(i).to_vec()).collect();
        let mut l = vec![S::zero(); n * n];
        for i in 0..n {
            l[i * n + i] = S::one();
        }
        Factorizer {
            n,
            w,
            l,
            perm: (0..n).collect(),
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.n;
        for j in 0..n {
            self.w.swap(a * n + j, b * n + j);
            self.l.swap(a * n + j, b * n + j);
        }
        for i in 0..n {
            self.w.swap(i * n + a, i * n + b);
            self.l.swap(i * n + a, i * n + b);
        }
        self.perm.swap(a, b);
    }

    /// Solve `L^T y = u` and map back through the permutation: the returned
    /// `x` satisfies `x^T A x = u^T W u` for the current Schur complement `W`.
    fn witness(&self, u: Vec<S>) -> Vec<S> {
        let n = self.n;
        let mut y = u;
        for t in (0..n).rev() {
            let mut acc = y[t].clone();
            for (i, yi) in y.iter().enumerate().skip(t + 1) {
                let lit = &self.l[i * n + t];
                if lit.is_zero() {
                    continue;
                }
                acc = acc - lit.clone() * yi.clone();
            }
            y[t] = acc;
        }
        let mut x = vec![S::zero(); n];
        for t in 0..n {
            x[self.perm[t]] = y[t].clone();
        }
        x
    }
}

fn quadratic_form<S: Scalar>(a: &DenseMatrix<S>, x: &[S]) -> Result<S> {
    let ax = a.mul_vec(x)?;
    let mut acc = S::zero();
    for (xi, axi) in x.iter().zip(ax) {
        acc = acc + xi.clone() * axi;
    }
    Ok(acc)
}

/// Certify positive semidefiniteness of a symmetric matrix by `L D L^T`
/// factorization with diagonal pivoting (largest remaining diagonal entry
/// first). Symmetry is checked entrywise in exact mode and to `1e-12`
/// relative in float mode.
pub fn psd_certificate<S: Scalar>(a: &DenseMatrix<S>, tol: f64) -> Result<PsdCertificate<S>> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::Domain(format!("tolerance {tol} must be >= 0")));
    }
    let n = a.order();
    let defect = a.symmetry_defect();
    match S::MODE {
        ScalarMode::Exact => {
            if !defect.is_zero() {
                return Err(Error::Domain("matrix is not symmetric".into()));
            }
        }
        ScalarMode::Float => {
            let scale = a.max_abs().to_f64().max(f64::MIN_POSITIVE);
            if defect.to_f64() > 1e-12 * scale {
                return Err(Error::Domain("matrix is not symmetric".into()));
            }
        }
    }

    let diag_scale = a
        .diagonal()
        .iter()
        .map(|d| d.to_f64().abs())
        .fold(0.0f64, f64::max);
    let threshold = match S::MODE {
        ScalarMode::Exact => 0.0,
        ScalarMode::Float => tol * diag_scale,
    };
    // pivot < -threshold means indefinite; |values| <= threshold count as zero
    let is_negative = |v: &S| v.to_f64() < -threshold;
    let is_positive = |v: &S| v.to_f64() > threshold;

    let mut f = Factorizer::new(a);
    let mut pivots: Vec<S> = Vec::with_capacity(n);

    let finish_not_psd = |f: &Factorizer<S>, pivots: Vec<S>, u: Vec<S>| -> Result<PsdCertificate<S>> {
        let x = f.witness(u);
        let value = quadratic_form(a, &x)?;
        if value.partial_cmp(&S::zero()) != Some(Ordering::Less) {
            return Err(Error::Inconsistency(format!(
                "NotPSD witness rechecked to a non-negative form {value}"
            )));
        }
        Ok(PsdCertificate {
            verdict: PsdVerdict::NotPsd,
            pivots,
            witness: Some(x),
            witness_value: Some(value),
            tolerance: threshold,
        })
    };

    let mut k = 0usize;
    while k < n {
        let mut imin = k;
        let mut imax = k;
        for t in k + 1..n {
            let d = &f.w[t * n + t];
            if d.partial_cmp(&f.w[imin * n + imin]) == Some(Ordering::Less) {
                imin = t;
            }
            if d.partial_cmp(&f.w[imax * n + imax]) == Some(Ordering::Greater) {
                imax = t;
            }
        }

        if is_negative(&f.w[imin * n + imin]) {
            let mut pivots = pivots;
            pivots.push(f.w[imin * n + imin].clone());
            let mut u = vec![S::zero(); n];
            u[imin] = S::one();
            return finish_not_psd(&f, pivots, u);
        }

        if !is_positive(&f.w[imax * n + imax]) {
            // every remaining diagonal is (numerically) zero: PSD iff the
            // whole trailing block vanishes
            let mut worst: Option<(usize, usize)> = None;
            for p in k..n {
                for q in p + 1..n {
                    let better = match worst {
                        None => true,
                        Some((wp, wq)) => {
                            f.w[p * n + q].abs_cmp(&f.w[wp * n + wq]) == Ordering::Greater
                        }
                    };
                    if better && !f.w[p * n + q].is_zero() {
                        worst = Some((p, q));
                    }
                }
            }
            let significant = match S::MODE {
                ScalarMode::Exact => worst,
                ScalarMode::Float => {
                    worst.filter(|&(p, q)| f.w[p * n + q].to_f64().abs() > threshold)
                }
            };
            if let Some((p, q)) = significant {
                // [ ~0  b; b  ~0 ] block with b != 0 is indefinite
                let b = f.w[p * n + q].clone();
                let mut u = vec![S::zero(); n];
                u[p] = S::one();
                u[q] = if b.partial_cmp(&S::zero()) == Some(Ordering::Greater) {
                    -S::one()
                } else {
                    S::one()
                };
                let mut pivots = pivots;
                pivots.push(f.w[p * n + p].clone());
                return finish_not_psd(&f, pivots, u);
            }
            for t in k..n {
                pivots.push(f.w[t * n + t].clone());
            }
            break;
        }

        f.swap(k, imax);
        let d = f.w[k * n + k].clone();
        pivots.push(d.clone());
        let d_inv = d.try_recip().expect("positive pivot");
        for i in k + 1..n {
            f.l[i * n + k] = f.w[i * n + k].clone() * d_inv.clone();
        }
        for i in k + 1..n {
            let lik = f.l[i * n + k].clone();
            if lik.is_zero() {
                continue;
            }
            for j in k + 1..n {
                f.w[i * n + j] = f.w[i * n + j].clone() - lik.clone() * f.w[k * n + j].clone();
            }
        }
        k += 1;
    }

    Ok(PsdCertificate {
        verdict: PsdVerdict::Psd,
        pivots,
        witness: None,
        witness_value: None,
        tolerance: threshold,
    })
}

/// One PSD certificate per exponent for the Schur powers of the
/// reciprocal-max kernel; infinite divisibility predicts all-PSD.
pub fn infinite_divisibility_sweep<S: Scalar>(
    n: usize,
    exponents: &[f64],
    tol: f64,
) -> Result<Vec<PsdCertificate<S>>> {
    if exponents.is_empty() {
        return Err(Error::Domain("exponent list must be non-empty".into()));
    }
    let kmax = make_matrix::<S>(MatrixKind::Kmax, n)?;
    exponents
        .iter()
        .map(|&r| psd_certificate(&schur_power(&kmax, r)?, tol))
        .collect()
}

/// Certify `[min(f_i, f_j)]` for a strictly positive, strictly increasing
/// sequence; the Gram representation predicts PSD for every such `f`.
pub fn gram_min_check<S: Scalar>(f_values: &[S], tol: f64) -> Result<PsdCertificate<S>> {
    if f_values.is_empty() {
        return Err(Error::Domain("f_values must be non-empty".into()));
    }
    for (idx, v) in f_values.iter().enumerate() {
        if v.partial_cmp(&S::zero()) != Some(Ordering::Greater) {
            return Err(Error::Domain(format!(
                "f_values[{idx}] = {v} is not strictly positive"
            )));
        }
        if idx > 0 && f_values[idx - 1].partial_cmp(v) != Some(Ordering::Less) {
            return Err(Error::Domain(format!(
                "f_values is not strictly increasing at index {idx}"
            )));
        }
    }
    let g = DenseMatrix::from_fn(f_values.len(), |i, j| f_values[i.min(j) - 1].clone())?;
    psd_certificate(&g, tol)
}

/// Pass/fail record for the three exact kernel factorizations.
#[derive(Debug, Clone, Copy)]
pub struct FactorizationReport {
    pub n: usize,
    /// `K = P P^T`
    pub k_equals_p_pt: bool,
    /// `K = D M D` with `D = Diag(1/i)`, `M = [min(i,j)]`
    pub k_equals_dmd: bool,
    /// `M = L L^T` with `L` the all-ones lower triangle
    pub m_equals_l_lt: bool,
}

impl FactorizationReport {
    pub fn all_pass(&self) -> bool {
        self.k_equals_p_pt && self.k_equals_dmd && self.m_equals_l_lt
    }
}

/// Verify the three kernel factorizations entrywise in exact arithmetic.
/// A failed identity is a report outcome (and would indicate a bug in the
/// closed-form constructors), not an error.
pub fn kernel_factorization_check(n: usize) -> Result<FactorizationReport> {
    use crate::scalar::ExactScalar;
    let p = make_matrix::<ExactScalar>(MatrixKind::P, n)?;
    let kmax = make_matrix::<ExactScalar>(MatrixKind::Kmax, n)?;
    let mmin = make_matrix::<ExactScalar>(MatrixKind::Mmin, n)?;
    let d = make_matrix::<ExactScalar>(MatrixKind::Dinv, n)?;
    let lones = make_matrix::<ExactScalar>(MatrixKind::Lones, n)?;
    Ok(FactorizationReport {
        n,
        k_equals_p_pt: kmax == p.matmul(&p.transpose())?,
        k_equals_dmd: kmax == d.matmul(&mmin)?.matmul(&d)?,
        m_equals_l_lt: mmin == lones.matmul(&lones.transpose())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    type Exact = DenseMatrix<ExactScalar>;

    fn rat(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    #[test]
    fn schur_power_examples() {
        let k2: Exact = make_matrix(MatrixKind::Kmax, 2).unwrap();
        assert_eq!(schur_power(&k2, 1.0).unwrap(), k2);

        let ones = schur_power(&k2, 0.0).unwrap();
        assert_eq!(ones, DenseMatrix::from_fn(2, |_, _| rat(1, 1)).unwrap());

        let squared = schur_power(&k2, 2.0).unwrap();
        assert_eq!(squared.at(1, 1), &rat(1, 1));
        assert_eq!(squared.at(1, 2), &rat(1, 4));
        assert_eq!(squared.at(2, 2), &rat(1, 4));

        assert!(schur_power(&k2, 0.5).is_err()); // fractional in exact mode
        assert!(schur_power(&k2, -1.0).is_err());

        let neg = DenseMatrix::from_rows(vec![vec![-1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(schur_power(&neg, 0.5).is_err());
    }

    #[test]
    fn psd_certificate_exact_examples() {
        let k3: Exact = make_matrix(MatrixKind::Kmax, 3).unwrap();
        let cert = psd_certificate(&k3, 0.0).unwrap();
        assert!(cert.is_psd());
        assert!(cert.is_strictly_positive_definite());
        assert_eq!(cert.tolerance, 0.0);

        let ones: Exact = DenseMatrix::from_fn(3, |_, _| rat(1, 1)).unwrap();
        let cert = psd_certificate(&ones, 0.0).unwrap();
        assert!(cert.is_psd());
        assert_eq!(cert.pivots, vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert!(!cert.is_strictly_positive_definite());
    }

    #[test]
    fn psd_certificate_rejects_indefinite() {
        let a: Exact =
            DenseMatrix::from_rows(vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(1, 1)]])
                .unwrap();
        let cert = psd_certificate(&a, 0.0).unwrap();
        assert_eq!(cert.verdict, PsdVerdict::NotPsd);
        let value = cert.witness_value.clone().unwrap();
        assert!(value.is_negative());
        // the spec's illustrative witness is valid too: (1,-1) gives -2
        let x = vec![rat(1, 1), rat(-1, 1)];
        assert_eq!(quadratic_form(&a, &x).unwrap(), rat(-2, 1));

        // zero diagonal with nonzero coupling
        let b: Exact =
            DenseMatrix::from_rows(vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]])
                .unwrap();
        let cert = psd_certificate(&b, 0.0).unwrap();
        assert_eq!(cert.verdict, PsdVerdict::NotPsd);
        assert!(cert.witness_value.unwrap().is_negative());
    }

    #[test]
    fn psd_certificate_requires_symmetry() {
        let a: Exact =
            DenseMatrix::from_rows(vec![vec![rat(1, 1), rat(2, 1)], vec![rat(0, 1), rat(1, 1)]])
                .unwrap();
        assert!(matches!(psd_certificate(&a, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn psd_certificate_float_semidefinite_tail() {
        // rank-1 Gram matrix of (1,2,3): one positive pivot, near-zero tail
        let a = DenseMatrix::from_fn(3, |i, j| (i * j) as f64).unwrap();
        let cert = psd_certificate(&a, 1e-9).unwrap();
        assert!(cert.is_psd());
        assert_eq!(cert.pivots.len(), 3);
        assert!(!cert.is_strictly_positive_definite());
    }

    #[test]
    fn divisibility_sweep_examples() {
        let exact = infinite_divisibility_sweep::<ExactScalar>(3, &[1.0], 0.0).unwrap();
        assert_eq!(exact.len(), 1);
        assert!(exact[0].is_psd());

        let single = infinite_divisibility_sweep::<f64>(1, &[0.5], 1e-9).unwrap();
        assert!(single[0].is_psd());

        let certs = infinite_divisibility_sweep::<f64>(8, &[0.1, 0.5, 2.5], 1e-9).unwrap();
        assert!(certs.iter().all(|c| c.is_psd()));

        assert!(infinite_divisibility_sweep::<f64>(3, &[], 1e-9).is_err());
    }

    #[test]
    fn divisibility_float_exponent_grid() {
        for n in [1usize, 2, 5, 16, 24] {
            let certs =
                infinite_divisibility_sweep::<f64>(n, &[0.1, 0.5, 1.0, 1.5, 2.5, PI], 1e-9)
                    .unwrap();
            for (idx, c) in certs.iter().enumerate() {
                assert!(c.is_psd(), "n={n} exponent #{idx}");
                let min = *c.min_pivot().unwrap();
                assert!(min >= -c.tolerance, "n={n} exponent #{idx}: pivot {min}");
            }
        }
    }

    #[test]
    fn gram_min_examples() {
        let cert = gram_min_check(&[rat(1, 1), rat(2, 1), rat(3, 1)], 0.0).unwrap();
        assert!(cert.is_psd());
        // that matrix is Mmin(3)
        let m3: Exact = make_matrix(MatrixKind::Mmin, 3).unwrap();
        let direct = psd_certificate(&m3, 0.0).unwrap();
        assert!(direct.is_psd());

        assert!(gram_min_check(&[rat(7, 2)], 0.0).unwrap().is_psd());
        assert!(gram_min_check(&[1.0f64, 4.0, 9.0], 1e-9).unwrap().is_psd());

        assert!(gram_min_check(&[1.0f64, 1.0], 1e-9).is_err());
        assert!(gram_min_check(&[-1.0f64, 2.0], 1e-9).is_err());
        assert!(gram_min_check::<f64>(&[], 1e-9).is_err());
    }

    #[test]
    fn gram_min_random_monotone_sequences() {
        // 100 seeded monotone positive sequences of order <= 32
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..100 {
            let n = 1 + (trial % 32);
            let mut f = Vec::with_capacity(n);
            let mut acc = rng.random_range(0.01..1.0);
            for _ in 0..n {
                acc += rng.random_range(0.01..10.0);
                f.push(acc);
            }
            let cert = gram_min_check(&f, 1e-9).unwrap();
            assert!(cert.is_psd(), "trial {trial} n={n}");
        }
    }

    #[test]
    fn factorization_report_examples() {
        for n in [1usize, 2, 5, 12] {
            let report = kernel_factorization_check(n).unwrap();
            assert!(report.all_pass(), "n={n}");
        }
        let k2: Exact = make_matrix(MatrixKind::Kmax, 2).unwrap();
        assert_eq!(k2.at(1, 1), &rat(1, 1));
        assert_eq!(k2.at(1, 2), &rat(1, 2));
        assert_eq!(k2.at(2, 2), &rat(1, 2));
    }

    #[test]
    fn certificate_json_shape() {
        let k3: Exact = make_matrix(MatrixKind::Kmax, 3).unwrap();
        let v = psd_certificate(&k3, 0.0).unwrap().to_json();
        assert_eq!(v["verdict"], "PSD");
        assert!(v["witness"].is_null());
        assert!(v["min_pivot"].is_string());
    }
}
