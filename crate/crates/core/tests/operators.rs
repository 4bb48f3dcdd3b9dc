use hartogs::geometry::phi_inverse;
use hartogs::kernel::{basis_eval, kernel_eval, KernelContext};
use hartogs::shiftops::WeightTable;
use hartogs::{LatticeWindow, MultiIndex, PolyTuple};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn tuples() -> Vec<(PolyTuple, Vec<u32>)> {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    vec![
        (PolyTuple::hartogs(2), vec![1, 1]),
        (PolyTuple::hartogs(2), vec![2, 3]),
        (PolyTuple::family(2, &BigRational::from_integer(BigInt::from(1))), vec![1, 1]),
        (PolyTuple::family(3, &half), vec![1, 1, 2]),
    ]
}

/// Coefficients of the kernel section `k_w = Σ conj(e_α(w)) e_α` over a window.
fn kernel_section(ctx: &KernelContext, window: &LatticeWindow, w: &[Complex64]) -> Vec<Complex64> {
    window.iter().map(|a| basis_eval(ctx, &a, w).unwrap().conj()).collect()
}

#[test]
fn adjoint_multiplication_has_kernel_eigenvectors() {
    for (p, m) in tuples() {
        let n = p.dim();
        let bound = if n == 3 { 5 } else { 8 };
        let window = LatticeWindow::cube(n, bound).unwrap();
        let ctx = KernelContext::with_cutoff(p.clone(), m.clone(), bound + 1).unwrap();
        let weights = WeightTable::new(&p, &m, &window).unwrap();
        let w = phi_inverse(&vec![c(0.3, 0.2); n]);
        let kw = kernel_section(&ctx, &window, &w);
        for (j, wj) in w.iter().enumerate() {
            let lhs = weights.apply_adjoint(j, &kw).unwrap();
            let tail = MultiIndex::tail(n, j);
            for (i, alpha) in window.iter().enumerate() {
                if !window.contains(&alpha.add(&tail)) {
                    continue;
                }
                let rhs = wj.conj() * kw[i];
                assert!(
                    (lhs[i] - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()),
                    "j={j} α={alpha}: {} vs {}",
                    lhs[i],
                    rhs
                );
            }
        }
    }
}

#[test]
fn basis_reproduces_kernel_on_diagonal_partial_sums() {
    // Σ_{α <= b} |e_α(z)|^2 increases toward K(z, z) for a point close to the origin.
    let p = PolyTuple::hartogs(2);
    let ctx = KernelContext::with_cutoff(p, vec![1, 2], 40).unwrap();
    let z = phi_inverse(&[c(0.1, 0.05), c(0.2, -0.1)]);
    let k = kernel_eval(&ctx, &z, &z).unwrap();
    assert!(k.im.abs() < 1e-12);
    let window = LatticeWindow::cube(2, 40).unwrap();
    let sum: f64 = window.iter().map(|a| basis_eval(&ctx, &a, &z).unwrap().norm_sqr()).sum();
    assert!((sum - k.re).abs() <= 1e-10 * k.re, "{sum} vs {}", k.re);
}

#[test]
fn weighted_multiplication_matches_pointwise_multiplication() {
    // M_{z_j} e_α, expanded in the basis, evaluates to z_j e_α(z).
    for (p, m) in tuples() {
        let n = p.dim();
        let window = LatticeWindow::cube(n, 3).unwrap();
        let ctx = KernelContext::with_cutoff(p.clone(), m.clone(), 5).unwrap();
        let weights = WeightTable::new(&p, &m, &window).unwrap();
        let z = phi_inverse(&vec![c(0.25, 0.1); n]);
        for j in 0..n {
            for alpha in window.iter() {
                let image = alpha.add(&MultiIndex::tail(n, j));
                let lhs = basis_eval(&ctx, &image, &z).unwrap() * weights.omega(j, &alpha).unwrap();
                let rhs = z[j] * basis_eval(&ctx, &alpha, &z).unwrap();
                assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()), "j={j} α={alpha}");
            }
        }
    }
}
