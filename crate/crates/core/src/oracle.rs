//! Independent verification machinery: exact similarity checks for the
//! closed-form diagonalizers, a reference symmetric eigensolver, and a
//! seeded power iteration for top eigenvalues.
//!
//! The exact checker is the primary oracle; the float eigensolver exists for
//! transcendental-entry spectra and large orders, where it supplies the
//! reference values the closed forms are compared against.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{ExactScalar, Scalar, ScalarMode};

/// Outcome of conjugating `A` by a candidate diagonalizer `T`.
#[derive(Debug, Clone)]
pub struct SimilarityReport<S: Scalar> {
    /// Largest `|entry|` of `T A T^{-1}` off the diagonal.
    pub off_diagonal_max: S,
    /// Diagonal of `T A T^{-1}` in row order.
    pub diagonal: Vec<S>,
    /// True iff the computation ran in exact arithmetic and the off-diagonal
    /// maximum is identically zero.
    pub exact: bool,
}

impl<S: Scalar> SimilarityReport<S> {
    pub fn to_json(&self) -> serde_json::Value {
        use crate::matrix::scalar_json;
        serde_json::json!({
            "off_diagonal_max": scalar_json::<S>(&self.off_diagonal_max),
            "diagonal": self.diagonal.iter().map(scalar_json::<S>).collect::<Vec<_>>(),
            "exact": self.exact,
        })
    }
}

/// Compute `T A T^{-1}` and report how diagonal it is.
pub fn similarity_check<S: Scalar>(
    t: &DenseMatrix<S>,
    a: &DenseMatrix<S>,
) -> Result<SimilarityReport<S>> {
    let conj = t.matmul(a)?.matmul(&t.invert()?)?;
    let off = conj.off_diagonal_max_abs();
    Ok(SimilarityReport {
        exact: S::MODE == ScalarMode::Exact && off.is_zero(),
        diagonal: conj.diagonal(),
        off_diagonal_max: off,
    })
}

/// Exact-arithmetic similarity check: a valid diagonalizer must come back
/// with `off_diagonal_max` identically zero.
pub fn exact_similarity_check(
    t: &DenseMatrix<ExactScalar>,
    a: &DenseMatrix<ExactScalar>,
) -> Result<SimilarityReport<ExactScalar>> {
    similarity_check(t, a)
}

fn require_symmetric(a: &DenseMatrix<f64>, what: &str) -> Result<()> {
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    if a.symmetry_defect() > 1e-12 * scale {
        return Err(Error::Domain(format!("{what}: matrix is not symmetric")));
    }
    Ok(())
}

/// Reference symmetric eigensolver: cyclic Jacobi rotations (Numerical
/// Recipes §11.1 scheme) run to exact annihilation of the off-diagonal.
///
/// Returns eigenvalues sorted ascending and an orthogonal `Q` whose columns
/// are the matching eigenvectors, with `max |Q^T A Q - Λ| <= tol * max |A|`.
/// Exact eigenvalue ties are broken by lexicographic order of the
/// sign-normalized eigenvector columns, so the output is reproducible.
pub fn symmetric_eig_reference(
    a: &DenseMatrix<f64>,
    tol: f64,
    max_sweeps: usize,
) -> Result<(Vec<f64>, DenseMatrix<f64>)> {
    require_symmetric(a, "symmetric_eig_reference")?;
    let n = a.order();
    let amax = a.max_abs();

    let mut m: Vec<f64> = (1..=n).flat_map(|i| a.row(i).to_vec()).collect();
    let mut q = vec![0.0f64; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let mut d: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0f64; n];

    let mut converged = false;
    for sweep in 1..=max_sweeps {
        let mut off_sum = 0.0;
        for p in 0..n {
            for qq in p + 1..n {
                off_sum += m[p * n + qq].abs();
            }
        }
        if off_sum == 0.0 {
            converged = true;
            break;
        }
        // threshold rotations early on, then sweep everything
        let tresh = if sweep < 4 {
            0.2 * off_sum / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n.saturating_sub(1) {
            for qq in p + 1..n {
                let apq = m[p * n + qq];
                let g = 100.0 * apq.abs();
                // negligible relative to both diagonals: annihilate outright
                if sweep > 4 && d[p].abs() + g == d[p].abs() && d[qq].abs() + g == d[qq].abs() {
                    m[p * n + qq] = 0.0;
                } else if apq.abs() > tresh {
                    let h = d[qq] - d[p];
                    let t = if h.abs() + g == h.abs() {
                        apq / h
                    } else {
                        let theta = 0.5 * h / apq;
                        let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                        if theta < 0.0 {
                            -t
                        } else {
                            t
                        }
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let tau = s / (1.0 + c);
                    let h = t * apq;
                    z[p] -= h;
                    z[qq] += h;
                    d[p] -= h;
                    d[qq] += h;
                    m[p * n + qq] = 0.0;
                    let rot = |i1: usize, j1: usize, i2: usize, j2: usize,
                                   mat: &mut Vec<f64>| {
                        let g = mat[i1 * n + j1];
                        let h = mat[i2 * n + j2];
                        mat[i1 * n + j1] = g - s * (h + g * tau);
                        mat[i2 * n + j2] = h + s * (g - h * tau);
                    };
                    for j in 0..p {
                        rot(j, p, j, qq, &mut m);
                    }
                    for j in p + 1..qq {
                        rot(p, j, j, qq, &mut m);
                    }
                    for j in qq + 1..n {
                        rot(p, j, qq, j, &mut m);
                    }
                    for j in 0..n {
                        rot(j, p, j, qq, &mut q);
                    }
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }

    let mut residual = 0.0f64;
    if !converged {
        for p in 0..n {
            for qq in p + 1..n {
                residual = residual.max(m[p * n + qq].abs());
            }
        }
        if residual > tol * amax.max(f64::MIN_POSITIVE) {
            return Err(Error::NoConvergence {
                method: "jacobi eigensolver",
                limit: max_sweeps,
                residual,
            });
        }
    }

    // sign convention: largest-magnitude component of each column positive
    for col in 0..n {
        let mut best = 0usize;
        for r in 1..n {
            if q[r * n + col].abs() > q[best * n + col].abs() {
                best = r;
            }
        }
        if q[best * n + col] < 0.0 {
            for r in 0..n {
                q[r * n + col] = -q[r * n + col];
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        d[x].total_cmp(&d[y]).then_with(|| {
            for r in 0..n {
                let c = q[r * n + x].total_cmp(&q[r * n + y]);
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let qm = DenseMatrix::from_fn(n, |i, j| q[(i - 1) * n + order[j - 1]])?;
    Ok((eigenvalues, qm))
}

/// Largest eigenvalue of a symmetric PSD matrix by seeded power iteration
/// with a Rayleigh-quotient residual stop: returns `rho` once
/// `||A x - rho x||_2 <= tol * rho`.
pub fn power_iteration_max(
    a: &DenseMatrix<f64>,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<f64> {
    require_symmetric(a, "power_iteration_max")?;
    let n = a.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            x[0] = 1.0;
        } else {
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    };
    let mut x = draw(&mut rng);

    let mut last_residual = f64::INFINITY;
    for _ in 0..max_iters {
        let y = a.mul_vec(&x)?;
        let rho: f64 = x.iter().zip(&y).map(|(xi, yi)| xi * yi).sum();
        let residual = x
            .iter()
            .zip(&y)
            .map(|(xi, yi)| (yi - rho * xi).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol * rho.abs().max(f64::MIN_POSITIVE) {
            return Ok(rho);
        }
        last_residual = residual;
        let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if ny == 0.0 {
            // landed in the kernel; restart from a fresh direction
            x = draw(&mut rng);
            continue;
        }
        x = y.into_iter().map(|v| v / ny).collect();
    }
    Err(Error::NoConvergence {
        method: "power iteration",
        limit: max_iters,
        residual: last_residual,
    })
}
