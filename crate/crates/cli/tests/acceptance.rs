//! Acceptance suite: one pass/fail line per criterion (run with
//! `cargo test -p cesaro-cli --test acceptance -- --nocapture` to see them).
//!
//! The criteria run sequentially inside a single test so the wall-clock
//! limits are measured without contention from sibling tests.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use cesaro_core::spectra::{
    diagonalizer_t, eigenpair_residual_max, min_kernel_eigensystem, min_kernel_spectrum,
    orthogonality_defect, stationary_distribution,
};
use cesaro_core::{
    bounds, kernels, make_matrix, oracle, DenseMatrix, ExactScalar, MatrixKind, Scalar,
};

type Exact = DenseMatrix<ExactScalar>;
type CriterionResult = Result<String, String>;
type CriterionFn = fn() -> CriterionResult;

fn rat(n: i64, d: i64) -> ExactScalar {
    ExactScalar::from_ratio(n, d)
}

fn mk(kind: MatrixKind, n: usize) -> Exact {
    make_matrix(kind, n).expect("constructor")
}

fn alt_sign(i: usize) -> i64 {
    if i % 2 == 1 {
        1
    } else {
        -1
    }
}

fn expect_diagonal(what: &str, n: usize, got: &Exact, diag: impl Fn(usize) -> ExactScalar) -> Result<(), String> {
    for i in 1..=n {
        for j in 1..=n {
            let want = if i == j { diag(i) } else { Scalar::zero() };
            if got.at(i, j) != &want {
                return Err(format!("{what} at n={n}: entry ({i},{j}) is {}, expected {want}", got.at(i, j)));
            }
        }
    }
    Ok(())
}

fn expect_eq(what: &str, n: usize, got: &Exact, want: &Exact) -> Result<(), String> {
    if got != want {
        return Err(format!("{what} fails at n={n}"));
    }
    Ok(())
}

/// Criterion 1: exact diagonalization identities for n = 1..40, zero
/// tolerance, under 60 s.
fn criterion_1() -> CriterionResult {
    let start = Instant::now();
    for n in 1..=40usize {
        let p = mk(MatrixKind::P, n);
        let v = mk(MatrixKind::V, n);
        let vinv = v.invert().map_err(|e| e.to_string())?;
        let pinv = p.invert().map_err(|e| e.to_string())?;

        let tri = v.matmul(&pinv).unwrap().matmul(&vinv).unwrap();
        if !tri.is_upper_triangular() {
            return Err(format!("V*P^-1*V^-1 not upper triangular at n={n}"));
        }
        for (i, d) in tri.diagonal().into_iter().enumerate() {
            let want = rat(alt_sign(i + 1) * (i as i64 + 1), 1);
            if d != want {
                return Err(format!("V*P^-1*V^-1 diagonal {} at n={n}: {d} != {want}", i + 1));
            }
        }

        let psq = pinv.matmul(&pinv).unwrap();
        let b = v.matmul(&psq).unwrap().matmul(&vinv).unwrap();
        expect_eq("V*P^-2*V^-1 = B", n, &b, &mk(MatrixKind::B, n))?;

        let s = mk(MatrixKind::S, n);
        let sinv = s.invert().map_err(|e| e.to_string())?;
        let sbs = s.matmul(&mk(MatrixKind::B, n)).unwrap().matmul(&sinv).unwrap();
        expect_diagonal("S*B*S^-1 = Diag(i^2)", n, &sbs, |i| rat((i * i) as i64, 1))?;

        let t = diagonalizer_t::<ExactScalar>(n).unwrap();
        let tinv = t.invert().map_err(|e| e.to_string())?;
        let tpt = t.matmul(&p).unwrap().matmul(&tinv).unwrap();
        expect_diagonal("T*P*T^-1 = Diag((-1)^{i+1}/i)", n, &tpt, |i| {
            rat(alt_sign(i), i as i64)
        })?;

        let c = mk(MatrixKind::C, n);
        let vcv = v.matmul(&c).unwrap().matmul(&vinv).unwrap();
        expect_diagonal("V*C*V^-1 = Diag(1/i)", n, &vcv, |i| rat(1, i as i64))?;

        let j = mk(MatrixKind::J, n);
        let tj = t.matmul(&j).unwrap();
        let tjinv = tj.invert().map_err(|e| e.to_string())?;
        let z = mk(MatrixKind::Zrev, n);
        let tzt = tj.matmul(&z).unwrap().matmul(&tjinv).unwrap();
        expect_diagonal("(T*J)*Zrev*(T*J)^-1 = Diag((-1)^{i+1}/i)", n, &tzt, |i| {
            rat(alt_sign(i), i as i64)
        })?;
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 60.0 {
        return Err(format!("suite took {elapsed:?}, budget is 60 s"));
    }
    Ok(format!("six conjugation identities, n=1..40, in {elapsed:.2?}"))
}

/// Criterion 2: exact kernel and bound identities for n = 1..40, zero
/// tolerance.
fn criterion_2() -> CriterionResult {
    let start = Instant::now();
    for n in 1..=40usize {
        let report = kernels::kernel_factorization_check(n).map_err(|e| e.to_string())?;
        if !report.all_pass() {
            return Err(format!("kernel factorization report fails at n={n}: {report:?}"));
        }

        let mmin = mk(MatrixKind::Mmin, n);
        expect_eq(
            "Mmin^-1 = closed tridiagonal",
            n,
            &mmin.invert().map_err(|e| e.to_string())?,
            &mk(MatrixKind::MminInv, n),
        )?;

        let (trace, pass) = bounds::trace_harmonic_check(n).map_err(|e| e.to_string())?;
        if !pass {
            return Err(format!("trace(PP^T) = {trace} != H_n at n={n}"));
        }

        let (_, pass) = bounds::contraction_identity_check(n).map_err(|e| e.to_string())?;
        if !pass {
            return Err(format!("(I-JP)(I-JP)^T != Diag((n-j)/(n-j+1)) at n={n}"));
        }

        let pinv = mk(MatrixKind::P, n).invert().map_err(|e| e.to_string())?;
        expect_eq(
            "P^-1*P^-T = closed W",
            n,
            &pinv.matmul(&pinv.transpose()).unwrap(),
            &mk(MatrixKind::W, n),
        )?;
    }
    Ok(format!("kernel and bound identities, n=1..40, in {:.2?}", start.elapsed()))
}

/// Criterion 3: min-kernel closed spectrum vs the reference eigensolver at
/// n = 200 (relative 1e-10) and residuals at n = 1000, under 120 s.
fn criterion_3() -> CriterionResult {
    let start = Instant::now();

    let n = 200usize;
    let m = make_matrix::<f64>(MatrixKind::Mmin, n).unwrap();
    let (ref_eigs, _) = oracle::symmetric_eig_reference(&m, 1e-13, 80).map_err(|e| e.to_string())?;
    let (closed, _) = min_kernel_eigensystem(n).unwrap();
    let mut worst_rel = 0.0f64;
    for k in 0..n {
        let rel = (closed[k] - ref_eigs[k]).abs() / closed[k].abs();
        worst_rel = worst_rel.max(rel);
        if rel > 1e-10 {
            return Err(format!(
                "eigenvalue {k} at n=200: closed {} vs reference {} (rel {rel:e})",
                closed[k], ref_eigs[k]
            ));
        }
    }

    let n = 1000usize;
    let dec = min_kernel_spectrum(n).unwrap();
    let m = make_matrix::<f64>(MatrixKind::Mmin, n).unwrap();
    let residual = eigenpair_residual_max(&dec, &m).unwrap();
    if residual > 1e-8 * n as f64 {
        return Err(format!("eigenpair residual {residual:e} exceeds 1e-8*n at n=1000"));
    }
    let orth = orthogonality_defect(&dec).unwrap();
    if orth > 1e-10 {
        return Err(format!("orthogonality defect {orth:e} exceeds 1e-10 at n=1000"));
    }

    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 120.0 {
        return Err(format!("suite took {elapsed:?}, budget is 120 s"));
    }
    Ok(format!(
        "n=200 worst relative {worst_rel:.2e}; n=1000 residual {residual:.2e}, orthogonality {orth:.2e}, in {elapsed:.2?}"
    ))
}

/// Criterion 4: norm bounds at n in {10, 100, 1000}: λ_max(K) in [1,4] and
/// λ_max(W) <= gershgorin <= 4n^2-6n+3 <= 4n^2.
fn criterion_4() -> CriterionResult {
    let mut details = Vec::new();
    for n in [10usize, 100, 1000] {
        let (upper, oracle_k, pass) = bounds::norm_k_certificate(n, 0).map_err(|e| e.to_string())?;
        if !pass {
            return Err(format!("norm_k certificate fails at n={n}"));
        }
        if !(1.0 - 1e-9..=4.0).contains(&oracle_k) {
            return Err(format!("lambda_max(K) = {oracle_k} outside [1,4] at n={n}"));
        }
        if upper > 4.0 {
            return Err(format!("(1+sqrt(1-1/n))^2 = {upper} exceeds 4 at n={n}"));
        }

        let (bound, pass) = bounds::gershgorin_w(n, 0).map_err(|e| e.to_string())?;
        if !pass {
            return Err(format!("gershgorin certificate fails at n={n}"));
        }
        let ni = n as i64;
        let cap = bounds::paper_bound_w(n);
        let four_n2 = ExactScalar::from_integer(4 * ni * ni);
        if !(bound <= cap && cap <= four_n2) {
            return Err(format!("gershgorin chain fails at n={n}: {bound} vs {cap} vs {four_n2}"));
        }
        details.push(format!("n={n}: λK={oracle_k:.6}"));
    }
    Ok(details.join(", "))
}

/// Criterion 5: infinite divisibility. Float pivots for n <= 64 over the
/// exponent grid; exact rational certificates for integer exponents, n <= 16.
fn criterion_5() -> CriterionResult {
    for n in 1..=64usize {
        let certs = kernels::infinite_divisibility_sweep::<f64>(
            n,
            &[0.1, 0.5, 1.0, 1.5, 2.5, PI],
            1e-9,
        )
        .map_err(|e| e.to_string())?;
        for (idx, cert) in certs.iter().enumerate() {
            if !cert.is_psd() {
                return Err(format!("float Schur power #{idx} NotPSD at n={n}"));
            }
            let min = *cert.min_pivot().expect("pivots");
            if min < -cert.tolerance {
                return Err(format!("min pivot {min} below -1e-9*scale at n={n}"));
            }
        }
    }
    for n in 1..=16usize {
        for r in [0.0, 1.0, 2.0, 3.0] {
            let kmax = make_matrix::<ExactScalar>(MatrixKind::Kmax, n).unwrap();
            let powered = kernels::schur_power(&kmax, r).map_err(|e| e.to_string())?;
            let cert = kernels::psd_certificate(&powered, 0.0).map_err(|e| e.to_string())?;
            if !cert.is_psd() {
                return Err(format!("exact Schur power r={r} NotPSD at n={n}"));
            }
            if cert.tolerance != 0.0 {
                return Err("exact certificate used a nonzero tolerance".to_string());
            }
        }
    }
    Ok("float grid r∈{0.1,0.5,1,1.5,2.5,π} for n<=64; exact r∈{0,1,2,3} for n<=16".to_string())
}

/// Criterion 6: stationary distribution. `π P = π` and `Σπ = 1` exactly for
/// n <= 100; frozen values at n = 2, 3.
fn criterion_6() -> CriterionResult {
    for n in 1..=100usize {
        let pi = stationary_distribution::<ExactScalar>(n)
            .map_err(|e| e.to_string())?
            .weights;
        let p = mk(MatrixKind::P, n);
        let pi_p = p.vec_mul(&pi).unwrap();
        if pi_p != pi {
            return Err(format!("pi*P != pi at n={n}"));
        }
        let mut total: ExactScalar = Scalar::zero();
        for w in &pi {
            total = total + w.clone();
        }
        if total != rat(1, 1) {
            return Err(format!("sum(pi) = {total} at n={n}"));
        }
    }
    let pi2 = stationary_distribution::<ExactScalar>(2).unwrap().weights;
    if pi2 != vec![rat(1, 3), rat(2, 3)] {
        return Err(format!("pi(2) = {pi2:?}"));
    }
    let pi3 = stationary_distribution::<ExactScalar>(3).unwrap().weights;
    if pi3 != vec![rat(1, 6), rat(1, 3), rat(1, 2)] {
        return Err(format!("pi(3) = {pi3:?}"));
    }
    Ok("exact fixed point for n<=100; pinned values at n=2,3".to_string())
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cesaro"))
        .args(args)
        .output()
        .expect("spawn cesaro");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

/// Criterion 7: fault injection. Adding +1 to any entry of P, B, Mcoef or V
/// makes `verify` exit 1 and name a failed identity.
fn criterion_7() -> CriterionResult {
    let (code, text) = run_cli(&["verify", "--suite", "all", "--n-max", "4"]);
    if code != 0 {
        return Err(format!("clean verify exited {code}: {text}"));
    }

    let mut trials = 0;
    for kind in ["P", "B", "Mcoef", "V"] {
        for i in 1..=4usize {
            for j in 1..=4usize {
                let spec = format!("{kind}:{i},{j}");
                let (code, text) =
                    run_cli(&["verify", "--suite", "all", "--n-max", "4", "--perturb", &spec]);
                if code != 1 {
                    return Err(format!("perturbation {spec} exited {code}, expected 1"));
                }
                if !text.contains("[FAIL]") || !text.contains("verify: FAILED") {
                    return Err(format!("perturbation {spec} did not name a failed identity"));
                }
                trials += 1;
            }
        }
    }
    Ok(format!("all {trials} single-entry perturbations detected, exit code 1"))
}

/// Criterion 8: bench. Closed-form Mmin spectrum at n = 4096 under 5 s with
/// well-formed CSV; reference timing recorded at n <= 512.
fn criterion_8() -> CriterionResult {
    let (code, text) = run_cli(&[
        "bench", "--kind", "Mmin", "--n-list", "256,4096", "--repeat", "3",
    ]);
    if code != 0 {
        return Err(format!("bench exited {code}"));
    }
    let lines: Vec<&str> = text.lines().collect();
    if lines.first() != Some(&"kind,n,method,median_seconds,residual") {
        return Err(format!("unexpected CSV header: {:?}", lines.first()));
    }
    let mut closed_4096 = None;
    let mut reference_256 = None;
    let mut reference_4096 = false;
    for row in &lines[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        if cols.len() != 5 {
            return Err(format!("malformed CSV row: {row}"));
        }
        let n: usize = cols[1].parse().map_err(|_| format!("bad n in {row}"))?;
        let median: f64 = cols[3].parse().map_err(|_| format!("bad median in {row}"))?;
        let residual: f64 = cols[4].parse().map_err(|_| format!("bad residual in {row}"))?;
        if !(median >= 0.0 && residual.is_finite()) {
            return Err(format!("non-finite measurements in {row}"));
        }
        match (cols[2], n) {
            ("closed", 4096) => closed_4096 = Some(median),
            ("reference", 256) => reference_256 = Some(median),
            ("reference", 4096) => reference_4096 = true,
            _ => {}
        }
    }
    if reference_4096 {
        return Err("reference eigensolver ran beyond n=512".to_string());
    }
    let closed = closed_4096.ok_or("missing closed@4096 row")?;
    let reference = reference_256.ok_or("missing reference@256 row")?;
    if closed >= 5.0 {
        return Err(format!("closed-form spectrum at n=4096 took {closed} s, budget 5 s"));
    }
    Ok(format!("closed@4096 median {closed:.3} s; reference@256 median {reference:.3} s recorded"))
}

#[test]
fn acceptance() {
    let criteria: &[(&str, CriterionFn)] = &[
        ("1 exact diagonalization suite", criterion_1),
        ("2 exact kernel/bound identities", criterion_2),
        ("3 min-kernel closed spectrum", criterion_3),
        ("4 norm bounds", criterion_4),
        ("5 infinite divisibility", criterion_5),
        ("6 stationary distribution", criterion_6),
        ("7 fault injection", criterion_7),
        ("8 bench", criterion_8),
    ];
    let mut failures = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("[criterion {name}] PASS — {detail}"),
            Err(reason) => {
                println!("[criterion {name}] FAIL — {reason}");
                failures.push(*name);
            }
        }
    }
    assert!(failures.is_empty(), "failed acceptance criteria: {failures:?}");
}
