//! Acceptance gate. Each criterion is one test that prints a single
//! `criterion NN name: PASS|FAIL detail` line and then asserts. The
//! tolerances below are fixed; a criterion that cannot be met fails.

use hartogs::coeff::{
    coeff_function_with, hartogs_closed_form, reciprocal_power_coeffs, Assembly, ReciprocalMethod,
};
use hartogs::geometry::{phi_inverse, polydisc_radii};
use hartogs::hereditary::{
    hereditary_eval, reciprocal_kernel_polynomial, toral_lift, triangle_defect, triangle_defect_classify,
    pick_verify, CMatrix, DefectClass, MatrixTuple, PSD_TOL,
};
use hartogs::kernel::{gram_psd_check, hardy_norm_check, bergman_norm_check, kernel_eval, kernel_series_eval, KernelContext};
use hartogs::quadrature::beta_integral_check;
use hartogs::shiftops::{
    circularity_check, det_commutator_and_trace, factorization_and_commutation_probe, polydisc_intertwining_check,
    spectral_radius_estimate, DetTrace, WeightTable,
};
use hartogs::subnormality::{complete_monotonicity_check, hartogs_certify, MomentSequence, Verdict};
use hartogs::{LatticeWindow, MultiIndex, PolyTuple, Polynomial, UnivariatePoly};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod tol {
    /// Kernel partial sum at cutoff 60 against the closed form.
    pub const KERNEL_SERIES_REL: f64 = 1e-8;
    pub const KERNEL_CUTOFF: u32 = 60;
    pub const KERNEL_PHI_RADIUS: f64 = 0.7;
    pub const DETTRACE_K: usize = 998;
    pub const DETTRACE_ABS: f64 = 1e-3;
    pub const CIRCULARITY: f64 = 1e-12;
    pub const RADIUS_ABS: f64 = 1e-4;
    /// Truncation length for the spectral radius approximants.
    pub const RADIUS_N: usize = 2000;
    pub const RADIUS_K: usize = 50;
    pub const HEREDITARY_ABS: f64 = 1e-12;
    pub const BETA_ABS: f64 = 1e-6;
    pub const HARDY_ABS: f64 = 1e-6;
    pub const BERGMAN_ABS: f64 = 1e-3;
    /// Gram PSD: min eigenvalue >= -GRAM_REL * max diagonal.
    pub const GRAM_REL: f64 = 1e-10;
    pub const SUBNORMAL_ORDER: u32 = 4;
}

fn verdict(id: u32, name: &str, pass: bool, detail: String) {
    println!(
        "criterion {id:02} {name}: {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id:02} {name} failed: {detail}");
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn idx(v: &[u32]) -> MultiIndex {
    MultiIndex(v.to_vec())
}

fn univariate(coeffs: &[(u32, BigRational)]) -> PolyTuple {
    PolyTuple::new(vec![UnivariatePoly::from_terms(coeffs.iter().cloned()).to_polynomial()]).unwrap()
}

/// Random admissible 2-tuple: `P_j = a z_j + b z_j^2 + c z_j^3`, `a > 0`.
fn random_admissible(rng: &mut ChaCha8Rng) -> PolyTuple {
    let polys = (0..2)
        .map(|j| {
            let mut p = Polynomial::zero(2);
            for d in 1..=3u32 {
                let num = if d == 1 { rng.gen_range(1..=4) } else { rng.gen_range(0..=3) };
                if num > 0 {
                    let mut e = vec![0; 2];
                    e[j] = d;
                    p.add_term(MultiIndex(e), q(num, rng.gen_range(1..=3)));
                }
            }
            p
        })
        .collect();
    PolyTuple::new(polys).unwrap()
}

/// Random positive regular tuple with cross terms of total degree <= 3.
fn random_regular(rng: &mut ChaCha8Rng, n: usize) -> PolyTuple {
    let polys = (0..n)
        .map(|j| {
            let mut p = Polynomial::zero(n);
            p.add_term(MultiIndex::unit(n, j), q(rng.gen_range(1..=4), rng.gen_range(1..=3)));
            for _ in 0..rng.gen_range(0..=3) {
                let e: Vec<u32> = loop {
                    let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
                    let t: u32 = e.iter().sum();
                    if (1..=3).contains(&t) {
                        break e;
                    }
                };
                p.add_term(MultiIndex(e), q(rng.gen_range(1..=3), rng.gen_range(1..=4)));
            }
            p
        })
        .collect();
    PolyTuple::new(polys).unwrap()
}

fn disc_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

#[test]
fn criterion_01_fibonacci() {
    let fib_q = UnivariatePoly::from_terms([(1, q(1, 1)), (2, q(1, 1))]).to_polynomial();
    let window = LatticeWindow::new(idx(&[30])).unwrap();
    let mut expected = vec![1u64, 1];
    while expected.len() < 31 {
        let k = expected.len();
        expected.push(expected[k - 1] + expected[k - 2]);
    }
    let mut bad = None;
    for method in [ReciprocalMethod::Recursion, ReciprocalMethod::BinomialSeries] {
        let t = reciprocal_power_coeffs(&fib_q, 1, &window, method).unwrap();
        for (l, &f) in expected.iter().enumerate() {
            if *t.get(&idx(&[l as u32])).unwrap() != q(f as i64, 1) && bad.is_none() {
                bad = Some((method, l));
            }
        }
    }
    verdict(
        1,
        "fibonacci",
        bad.is_none(),
        format!("l <= 30, both expansion modes, first mismatch {bad:?}"),
    );
}

#[test]
fn criterion_02_recursion_matches_binomial_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let trials = 54;
    let mut mismatches = Vec::new();
    for trial in 0..trials {
        let n = trial % 3 + 1;
        let k = rng.gen_range(1..=3);
        let mut qp = Polynomial::zero(n);
        for _ in 0..rng.gen_range(1..=4) {
            let e: Vec<u32> = loop {
                let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
                let t: u32 = e.iter().sum();
                if (1..=3).contains(&t) {
                    break e;
                }
            };
            qp.add_term(MultiIndex(e), q(rng.gen_range(1..=5), rng.gen_range(1..=4)));
        }
        let window = LatticeWindow::cube(n, 8).unwrap();
        let a = reciprocal_power_coeffs(&qp, k, &window, ReciprocalMethod::Recursion).unwrap();
        let b = reciprocal_power_coeffs(&qp, k, &window, ReciprocalMethod::BinomialSeries).unwrap();
        let same = a
            .iter()
            .zip(b.iter())
            .filter(|((al, _), _)| al.total() <= 8)
            .all(|((_, x), (_, y))| x == y);
        if !same {
            mismatches.push(trial);
        }
    }
    verdict(
        2,
        "recursion_vs_binomial_series",
        mismatches.is_empty(),
        format!("{trials} random Q (n <= 3, deg <= 3, k <= 3), |α| <= 8, mismatching trials {mismatches:?}"),
    );
}

#[test]
fn criterion_03_hartogs_closed_form() {
    let mut checked = 0usize;
    let mut bad = None;
    for n in 1..=3usize {
        let window = LatticeWindow::cube(n, 8).unwrap();
        let p0 = PolyTuple::hartogs(n);
        for mm in LatticeWindow::cube(n, 2).unwrap().iter() {
            let m: Vec<u32> = mm.0.iter().map(|x| x + 1).collect();
            for assembly in [Assembly::Convolution, Assembly::Auto] {
                let t = coeff_function_with(&p0, &m, &window, assembly).unwrap();
                for (alpha, v) in t.iter() {
                    // ∏ C(α_j + m_j - 1, m_j - 1) with an integer product formula
                    let oracle: u64 = alpha
                        .0
                        .iter()
                        .zip(&m)
                        .map(|(&a, &mj)| {
                            (1..mj as u64).fold(1u64, |acc, i| acc * (a as u64 + i) / i)
                        })
                        .product();
                    checked += 1;
                    if *v != q(oracle as i64, 1) || *v != hartogs_closed_form(&m, &alpha) {
                        bad.get_or_insert((m.clone(), alpha));
                    }
                }
            }
        }
    }
    verdict(
        3,
        "hartogs_closed_form",
        bad.is_none(),
        format!("{checked} cells, n <= 3, m <= (3,3,3), α <= (8,8,8), first mismatch {bad:?}"),
    );
}

#[test]
fn criterion_04_kernel_series_convergence() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for a in [0i64, 1] {
        let p = PolyTuple::family(2, &q(a, 1));
        let ctx = KernelContext::with_cutoff(p, vec![1, 1], tol::KERNEL_CUTOFF).unwrap();
        let pts: Vec<Vec<Complex64>> = (0..10)
            .map(|_| {
                let w = [
                    disc_point(&mut rng, tol::KERNEL_PHI_RADIUS),
                    disc_point(&mut rng, tol::KERNEL_PHI_RADIUS),
                ];
                phi_inverse(&w)
            })
            .collect();
        for i in 0..pts.len() {
            for w in [&pts[i], &pts[(i + 1) % pts.len()]] {
                let exact = kernel_eval(&ctx, &pts[i], w).unwrap();
                let series = kernel_series_eval(&ctx, &pts[i], w, tol::KERNEL_CUTOFF).unwrap();
                let rel = (series - exact).norm() / exact.norm();
                if rel > worst {
                    worst = rel;
                    worst_at = format!("a = {a}, |φ(z)| = {:.3?}", hartogs::geometry::phi(&pts[i])
                        .unwrap()
                        .iter()
                        .map(|c| c.norm())
                        .collect::<Vec<_>>());
                }
            }
        }
    }
    verdict(
        4,
        "kernel_series_convergence",
        worst <= tol::KERNEL_SERIES_REL,
        format!(
            "cutoff {}, max rel err {worst:.3e} ({worst_at}), tol {:e}",
            tol::KERNEL_CUTOFF,
            tol::KERNEL_SERIES_REL
        ),
    );
}

#[test]
fn criterion_05_norm_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cases: Vec<(PolyTuple, Vec<u32>)> = vec![
        (PolyTuple::hartogs(2), vec![2, 3]),
        (PolyTuple::family(2, &q(1, 1)), vec![1, 1]),
        (PolyTuple::family(3, &q(1, 2)), vec![1, 2, 1]),
    ];
    for n in 1..=3 {
        for _ in 0..3 {
            let m = (0..n).map(|_| rng.gen_range(1..=3)).collect();
            cases.push((random_regular(&mut rng, n), m));
        }
    }
    let mut checked = 0usize;
    let mut violation = None;
    for (p, m) in &cases {
        let n = p.dim();
        let w = WeightTable::new(p, m, &LatticeWindow::cube(n, if n == 3 { 3 } else { 5 }).unwrap()).unwrap();
        for j in 0..n {
            let bound = BigRational::one() / (j..n).fold(BigRational::one(), |acc, l| acc * p.linear_coeff(l));
            for alpha in w.window().iter() {
                checked += 1;
                if w.omega_sq(j, &alpha).unwrap() > bound {
                    violation.get_or_insert((p.to_json_value().to_string(), j, alpha));
                }
            }
        }
    }
    let mut unit = true;
    for n in 1..=3 {
        let w = WeightTable::new(&PolyTuple::hartogs(n), &vec![1; n], &LatticeWindow::cube(n, 4).unwrap()).unwrap();
        for alpha in w.window().iter() {
            for j in 0..n {
                unit &= w.omega_sq(j, &alpha).unwrap().is_one() && w.sigma_sq(j, &alpha).unwrap().is_one();
            }
        }
    }
    verdict(
        5,
        "norm_bounds",
        violation.is_none() && unit,
        format!(
            "{checked} squared weights vs 1/∏ a_l, first violation {violation:?}; hartogs m = 1 weights all exactly 1: {unit}"
        ),
    );
}

#[test]
fn criterion_06_determinant_trace() {
    let p0 = PolyTuple::hartogs(2);
    let r = det_commutator_and_trace(&p0, &[2, 2], tol::DETTRACE_K).unwrap();
    let gap = (r.partial_trace - 1.0).abs();
    let part_a = r.positive && gap <= tol::DETTRACE_ABS;

    let d = DetTrace::new(&p0, &[1, 1], tol::DETTRACE_K).unwrap();
    let win = LatticeWindow::cube(2, tol::DETTRACE_K as u32).unwrap();
    let mut diag_ok = true;
    let mut sum = BigRational::zero();
    for alpha in win.iter() {
        let v = d.diagonal(&alpha);
        diag_ok &= if alpha.is_zero() { v.is_one() } else { v.is_zero() };
        sum += v;
    }
    let part_b = diag_ok && sum.is_one() && d.report().partial_trace_exact == "1";
    verdict(
        6,
        "determinant_trace",
        part_a && part_b,
        format!(
            "m = (2,2): positive {}, partial trace at K = {} is {} = {:.9}, |1 - trace| = {gap:.3e} (tol {:e}); m = (1,1): unit diagonal at origin only {diag_ok}, trace {sum}",
            r.positive,
            r.k,
            r.partial_trace_exact,
            r.partial_trace,
            tol::DETTRACE_ABS
        ),
    );
}

#[test]
fn criterion_07_doubly_commuting_dichotomy() {
    let p0 = PolyTuple::hartogs(2);
    let win = LatticeWindow::cube(2, 4).unwrap();
    let mut tri_nonzero = true;
    let mut poly_zero = true;
    let mut detail = Vec::new();
    for m in [[1u32, 1], [2, 3]] {
        let w = WeightTable::new(&p0, &m, &win).unwrap();
        let mut e = vec![Complex64::zero(); win.len()];
        e[win.index_of(&idx(&[1, 0])).unwrap()] = Complex64::one();
        // [M*_{z_1}, M_{z_2}] e_(1,0)
        let a = w.apply_adjoint(0, &w.apply_mult(1, &e).unwrap()).unwrap();
        let b = w.apply_mult(1, &w.apply_adjoint(0, &e).unwrap()).unwrap();
        let norm: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        tri_nonzero &= norm > 0.0;
        let probe = factorization_and_commutation_probe(&p0, &m, &win).unwrap();
        let witness = probe.commutator_witness.as_ref().map(|c| c.alpha.clone());
        tri_nonzero &= witness.is_some();
        poly_zero &= probe.polydisc_commutators_vanish;
        detail.push(format!("m = {m:?}: ‖[M*_1, M_2] e_(1,0)‖ = {norm:.6}, probe witness {witness:?}"));
    }
    verdict(
        7,
        "doubly_commuting_dichotomy",
        tri_nonzero && poly_zero,
        format!("{}; polydisc commutators vanish on all interior cells: {poly_zero}", detail.join("; ")),
    );
}

#[test]
fn criterion_08_circularity() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let win = LatticeWindow::cube(2, 6).unwrap();
    let tables = [
        WeightTable::new(&PolyTuple::hartogs(2), &[1, 1], &win).unwrap(),
        WeightTable::new(&PolyTuple::hartogs(2), &[2, 3], &win).unwrap(),
        WeightTable::new(&PolyTuple::family(2, &q(1, 1)), &[1, 1], &win).unwrap(),
    ];
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let theta = [
            rng.gen_range(0.0..std::f64::consts::TAU),
            rng.gen_range(0.0..std::f64::consts::TAU),
        ];
        for w in &tables {
            worst = worst.max(circularity_check(w, &theta).unwrap());
        }
    }
    verdict(
        8,
        "circularity",
        worst <= tol::CIRCULARITY,
        format!("20 random θ, window (6,6), 3 weight tables, max deviation {worst:.3e} (tol {:e})", tol::CIRCULARITY),
    );
}

#[test]
fn criterion_09_intertwining() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let win = LatticeWindow::cube(2, 6).unwrap();
    let mut failures = Vec::new();
    let mut checked = 0;
    for trial in 0..10 {
        let p = random_admissible(&mut rng);
        let m = [rng.gen_range(1..=3), rng.gen_range(1..=3)];
        let r = polydisc_intertwining_check(&p, &m, &win).unwrap();
        checked += r.checked;
        if !r.holds {
            failures.push((trial, r.first_failure));
        }
    }
    verdict(
        9,
        "intertwining",
        failures.is_empty(),
        format!("10 random admissible P, m <= (3,3), {checked} exact weight identities, failures {failures:?}"),
    );
}

#[test]
fn criterion_10_spectral_radius() {
    let mut unit = true;
    for n in 1..=3 {
        for j in 0..n {
            let r = spectral_radius_estimate(&PolyTuple::hartogs(n), &vec![1; n], j, 10, 50).unwrap();
            unit &= r.estimate == 1.0;
        }
    }
    let fib = univariate(&[(1, q(1, 1)), (2, q(1, 1))]);
    let r = spectral_radius_estimate(&fib, &[1], 0, tol::RADIUS_K, tol::RADIUS_N).unwrap();
    let target = ((5f64.sqrt() - 1.0) / 2.0).sqrt();
    let radius = polydisc_radii(&fib)[0];
    let fib_gap = (r.estimate - target).abs();
    let cross_gap = (r.estimate - radius).abs();
    let linear = univariate(&[(1, q(4, 1))]);
    let lin = spectral_radius_estimate(&linear, &[1], 0, 10, 50).unwrap();
    let lin_gap = (lin.estimate - 0.5).abs();
    verdict(
        10,
        "spectral_radius",
        unit && fib_gap <= tol::RADIUS_ABS && cross_gap <= tol::RADIUS_ABS && lin_gap <= 1e-12,
        format!(
            "hartogs m = 1 all exactly 1: {unit}; t + t^2: estimate {:.7} vs {target:.7} (gap {fib_gap:.2e}), polydisc radius {radius:.7} (gap {cross_gap:.2e}), tol {:e}; 4t: {:.12}",
            r.estimate,
            tol::RADIUS_ABS,
            lin.estimate
        ),
    );
}

#[test]
fn criterion_11_subnormality() {
    let mut runs = 0;
    let mut failed = None;
    for n in 1..=3usize {
        for mm in LatticeWindow::cube(n, 2).unwrap().iter() {
            let m: Vec<u32> = mm.0.iter().map(|x| x + 1).collect();
            let rep = hartogs_certify(&m, &MultiIndex(vec![3; n]), tol::SUBNORMAL_ORDER).unwrap();
            runs += 1;
            if rep.verdict != Verdict::Pass {
                failed.get_or_insert((m, rep.witnesses.first().cloned()));
            }
        }
    }
    let mut synthetic_ok = true;
    for n in 1..=3usize {
        let two = q(2, 1);
        let seq = MomentSequence::from_fn(
            LatticeWindow::cube(n, tol::SUBNORMAL_ORDER).unwrap(),
            BigRational::one(),
            |b| two.pow(b.0[0] as i32),
        )
        .unwrap();
        let rep = complete_monotonicity_check(&seq, tol::SUBNORMAL_ORDER).unwrap();
        synthetic_ok &= rep.verdict == Verdict::Fail
            && rep.witnesses.first().map(|w| w.k.clone()) == Some(MultiIndex::unit(n, 0));
    }
    verdict(
        11,
        "subnormality",
        failed.is_none() && synthetic_ok,
        format!(
            "hartogs_certify over {runs} multiplicities, γ <= (3,..,3), order {}: first failure {failed:?}; 2^β1 fails with witness k = ε_1: {synthetic_ok}",
            tol::SUBNORMAL_ORDER
        ),
    );
}

fn cmat(rows: &[&[Complex64]]) -> CMatrix {
    let r = rows.len();
    CMatrix::from_fn(r, r, |i, j| rows[i][j])
}

#[test]
fn criterion_12_hereditary() {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    // cyclic shift on C^3 (unitary) and a polynomial in it
    let s = cmat(&[&[o, o, one], &[one, o, o], &[o, one, o]]);
    let id = CMatrix::identity(3, 3);
    let s2 = &s * &s;
    let any = &s2 * c(0.5, 0.2) + &id * c(0.3, 0.0);
    let u = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0, 1.0), c(-1.0, 0.0), c(0.6, 0.8)]));
    let b = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.5, 0.0), c(0.9, 0.0), c(0.2, 0.0)]));
    // (T_1, T_2) with T_2 an isometry; (A, B) with A*A = B*B; (T, A, B) likewise
    let isometries = vec![
        vec![any.clone(), s.clone()],
        vec![CMatrix::zeros(3, 3), id.clone()],
        vec![&u * &b, b.clone()],
        vec![b.clone() * c(0.7, 0.0), &u * &b, b.clone()],
        vec![any, s.clone(), s],
    ];
    let mut worst_iso = 0.0f64;
    let mut all_iso = true;
    for mats in isometries {
        let t = MatrixTuple::new(mats).unwrap();
        let rep = triangle_defect_classify(&t, PSD_TOL);
        worst_iso = worst_iso.max(rep.defect_norm);
        all_iso &= rep.class == DefectClass::Isometry;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut lifts_ok = 0;
    for trial in 0..100 {
        let n = 2 + trial % 2;
        let diags: Vec<Vec<Complex64>> = (0..n).map(|_| (0..3).map(|_| disc_point(&mut rng, 1.0)).collect()).collect();
        let t = MatrixTuple::from_diagonals(&diags).unwrap();
        let lifted = toral_lift(&t).unwrap();
        if triangle_defect_classify(&lifted, PSD_TOL).class != DefectClass::Neither {
            lifts_ok += 1;
        }
    }

    let hp = reciprocal_kernel_polynomial(&PolyTuple::hartogs(2), &[1, 1]).unwrap();
    let mut worst_eval = 0.0f64;
    for _ in 0..50 {
        let a = CMatrix::from_fn(3, 3, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let a = &a * c(0.9 / hartogs::hereditary::op_norm(&a), 0.0);
        let t1 = &a * &a * c(rng.gen_range(-1.0..1.0), 0.0) + &a * c(0.2, 0.1);
        let t2 = &a * c(0.8, 0.0) + &a * &a * c(0.0, 0.1);
        let t = MatrixTuple::new(vec![t1, t2]).unwrap();
        let diff = hereditary_eval(&hp, &t).value - triangle_defect(&t);
        worst_eval = worst_eval.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    verdict(
        12,
        "hereditary",
        all_iso && worst_iso <= tol::HEREDITARY_ABS && lifts_ok == 100 && worst_eval <= tol::HEREDITARY_ABS,
        format!(
            "isometry examples classified isometry {all_iso}, max defect norm {worst_iso:.2e}; {lifts_ok}/100 diagonal lifts are contractions; hereditary_eval vs defect max entry gap {worst_eval:.2e} (tol {:e})",
            tol::HEREDITARY_ABS
        ),
    );
}

#[test]
fn criterion_13_quadrature() {
    let mut beta_worst = 0.0f64;
    for l in 0..=5 {
        for k in 0..=5 {
            beta_worst = beta_worst.max(beta_integral_check(l, k, 12).abs_err);
        }
    }
    let simplex = |n: usize, d: u32| -> Vec<MultiIndex> {
        LatticeWindow::cube(n, d)
            .unwrap()
            .iter()
            .filter(|a| a.total() <= u64::from(d))
            .collect()
    };
    let hardy_worst = simplex(2, 4)
        .iter()
        .map(|a| (hardy_norm_check(2, a, 1.0) - 1.0).abs())
        .fold(0.0, f64::max);
    let bergman_worst = simplex(2, 3)
        .iter()
        .map(|a| (bergman_norm_check(&[2, 2], a).unwrap() - 1.0).abs())
        .fold(0.0, f64::max);
    verdict(
        13,
        "quadrature",
        beta_worst <= tol::BETA_ABS && hardy_worst <= tol::HARDY_ABS && bergman_worst <= tol::BERGMAN_ABS,
        format!(
            "beta k,l <= 5: {beta_worst:.2e} (tol {:e}); hardy n = 2, |α| <= 4: {hardy_worst:.2e} (tol {:e}); bergman m = (2,2), |α| <= 3: {bergman_worst:.2e} (tol {:e})",
            tol::BETA_ABS,
            tol::HARDY_ABS,
            tol::BERGMAN_ABS
        ),
    );
}

#[test]
fn criterion_14_gram_psd() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let pts: Vec<Vec<Complex64>> = (0..20)
        .map(|_| phi_inverse(&[disc_point(&mut rng, 1.0), disc_point(&mut rng, 1.0)]))
        .collect();
    let mut ok = true;
    let mut detail = Vec::new();
    for m in [vec![1, 1], vec![2, 2]] {
        let ctx = KernelContext::new(PolyTuple::hartogs(2), m.clone()).unwrap();
        let g = gram_psd_check(&ctx, &pts).unwrap();
        let pass = g.min_eigenvalue >= -tol::GRAM_REL * g.max_diagonal;
        ok &= pass;
        detail.push(format!(
            "m = {m:?}: min eig {:.3e}, max diag {:.3e}",
            g.min_eigenvalue, g.max_diagonal
        ));
    }
    verdict(14, "gram_psd", ok, format!("20 random points in the triangle; {}", detail.join("; ")));
}

#[test]
fn criterion_15_pick_verification() {
    let c = |x: f64| Complex64::new(x, 0.0);
    let m1 = |x: f64| CMatrix::from_element(1, 1, c(x));
    let lam = [[c(0.0), c(0.5)]];
    let got = [
        pick_verify(&lam, &[c(0.0)], &m1(0.0), &m1(4.0 / 3.0)).unwrap(),
        pick_verify(&lam, &[c(1.0)], &m1(0.0), &m1(4.0 / 3.0)).unwrap(),
        pick_verify(&lam, &[c(0.0)], &m1(-1.0), &m1(4.0 / 3.0)).unwrap(),
    ];
    verdict(
        15,
        "pick_verification",
        got == [true, false, false],
        format!("certificates (valid, wrong target, non-PSD A1) gave {got:?}"),
    );
}
