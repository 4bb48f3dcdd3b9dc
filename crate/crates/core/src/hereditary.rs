//! Hereditary functional calculus on commuting matrix tuples.
//!
//! A hereditary polynomial `Σ a_{αβ} z^α conj(w)^β` is evaluated at `T` as
//! `Σ a_{αβ} T*^β T^α` (adjoints on the left). With this convention the
//! reciprocal kernel of `△ⁿ_0` evaluates to the defect built from
//! `D^{(1)} = T_n*T_n - T_{n-1}*T_{n-1}` and
//! `D^{(k)} = T*_{n-k+1} D^{(k-1)} T_{n-k+1} - T*_{n-k} D^{(k-1)} T_{n-k}`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::geometry::triangle_contains;
use crate::polytuple::{rational_to_f64, MultiIndex, PolyTuple};

pub type CMatrix = DMatrix<Complex64>;

pub const COMMUTE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const PICK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HereditaryError {
    #[error("T_{} and T_{} do not commute (residual {residual:e})", .j + 1, .k + 1)]
    NonCommuting { j: usize, k: usize, residual: f64 },
    #[error("matrices must be square and of equal size")]
    ShapeMismatch,
    #[error("a tuple needs at least one matrix")]
    Empty,
    #[error("1/K is not a hereditary polynomial here: {reason}")]
    NotHereditaryPolynomial { reason: String },
    #[error("point {index} is not in the Hartogs triangle")]
    PointOutsideDomain { index: usize },
    #[error("points {i} and {j} coincide")]
    DuplicatePoints { i: usize, j: usize },
    #[error("target {index} has modulus greater than one")]
    TargetOutsideDisc { index: usize },
}

/// Spectral norm.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    hermitian_part(m).symmetric_eigenvalues().min()
}

/// `X ⪰ 0` up to `-tol · ‖X‖`.
pub fn is_psd(m: &CMatrix, tol: f64) -> bool {
    min_eigenvalue(m) >= -tol * op_norm(m)
}

/// A commuting tuple of `d × d` complex matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    mats: Vec<CMatrix>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self, HereditaryError> {
        Self::with_tolerance(mats, COMMUTE_TOL)
    }

    pub fn with_tolerance(mats: Vec<CMatrix>, tol: f64) -> Result<Self, HereditaryError> {
        let d = mats.first().ok_or(HereditaryError::Empty)?.nrows();
        if mats.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(HereditaryError::ShapeMismatch);
        }
        let norms: Vec<f64> = mats.iter().map(op_norm).collect();
        for j in 0..mats.len() {
            for k in j + 1..mats.len() {
                let c = &mats[j] * &mats[k] - &mats[k] * &mats[j];
                let residual = op_norm(&c);
                if residual > tol * f64::max(1.0, norms[j] * norms[k]) {
                    return Err(HereditaryError::NonCommuting { j, k, residual });
                }
            }
        }
        Ok(MatrixTuple { mats })
    }

    pub fn from_diagonals(diags: &[Vec<Complex64>]) -> Result<Self, HereditaryError> {
        Self::new(
            diags
                .iter()
                .map(|d| CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.clone())))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn size(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn mats(&self) -> &[CMatrix] {
        &self.mats
    }

    /// `T^α`.
    pub fn power(&self, alpha: &MultiIndex) -> CMatrix {
        let d = self.size();
        alpha
            .0
            .iter()
            .zip(&self.mats)
            .fold(CMatrix::identity(d, d), |acc, (&a, t)| {
                (0..a).fold(acc, |x, _| x * t)
            })
    }

    /// `max_j ‖T_j‖`.
    pub fn norm(&self) -> f64 {
        self.mats.iter().map(op_norm).fold(0.0, f64::max)
    }
}

/// `Σ a_{αβ} z^α conj(w)^β`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HereditaryPoly {
    terms: BTreeMap<(MultiIndex, MultiIndex), Complex64>,
}

impl HereditaryPoly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, alpha: MultiIndex, beta: MultiIndex, c: Complex64) {
        let e = self.terms.entry((alpha.clone(), beta.clone())).or_insert(Complex64::zero());
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(alpha, beta));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &Complex64)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn coeff(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Complex64 {
        self.terms
            .get(&(alpha.clone(), beta.clone()))
            .copied()
            .unwrap_or_else(Complex64::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

/// Laurent polynomial in `x_k = z_k conj(w_k)`.
type Laurent = BTreeMap<Vec<i64>, BigRational>;

fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigRational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Is `P = P_a` for some `a >= 0`? Returns `a`.
fn family_parameter(p: &PolyTuple) -> Option<BigRational> {
    let n = p.dim();
    let all = MultiIndex(vec![1; n]);
    let a = if n == 1 { BigRational::zero() } else { p.poly(0).coeff(&all) };
    let want = PolyTuple::family(n, &a);
    (n >= 2 && *p == want || n == 1 && *p == PolyTuple::hartogs(1)).then_some(a)
}

/// `1/K_{P,m} = ∏_{j>=2} z_j conj(w_j) · ∏_j (1 - P_j(φ(z) ⋄ conj φ(w)))^{m_j}`
/// expanded exactly. Supported for `△ⁿ_a` with `m_1 = ... = m_{n-1} = 1`.
pub fn reciprocal_kernel_polynomial(p: &PolyTuple, m: &[u32]) -> Result<HereditaryPoly, HereditaryError> {
    let n = p.dim();
    if m.len() != n || m.contains(&0) {
        return Err(HereditaryError::NotHereditaryPolynomial {
            reason: format!("invalid multiplicity {m:?}"),
        });
    }
    // u^γ has x-exponent γ_k - γ_{k-1} in slot k.
    let u_exponent = |g: &MultiIndex| -> Vec<i64> {
        (0..n)
            .map(|k| i64::from(g.0[k]) - if k > 0 { i64::from(g.0[k - 1]) } else { 0 })
            .collect()
    };
    let mut acc: Laurent = Laurent::new();
    acc.insert((0..n).map(|k| i64::from(k >= 1)).collect(), BigRational::one());
    for (pj, &mj) in p.polys().iter().zip(m) {
        let mut factor = Laurent::new();
        factor.insert(vec![0; n], BigRational::one());
        for (g, c) in pj.terms() {
            *factor.entry(u_exponent(g)).or_insert_with(BigRational::zero) -= c;
        }
        factor.retain(|_, c| !c.is_zero());
        for _ in 0..mj {
            acc = laurent_mul(&acc, &factor);
        }
    }
    if let Some((e, _)) = acc.iter().find(|(e, _)| e.iter().any(|&x| x < 0)) {
        return Err(HereditaryError::NotHereditaryPolynomial {
            reason: format!("negative exponent {e:?} remains after clearing denominators"),
        });
    }
    if family_parameter(p).is_none() || m[..n - 1].iter().any(|&x| x != 1) {
        return Err(HereditaryError::NotHereditaryPolynomial {
            reason: "only P_a with m_1 = ... = m_{n-1} = 1 is supported".into(),
        });
    }
    let mut out = HereditaryPoly::new();
    for (e, c) in acc {
        let alpha = MultiIndex(e.iter().map(|&x| x as u32).collect());
        out.add_term(alpha.clone(), alpha, Complex64::new(rational_to_f64(&c), 0.0));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HereditaryValue {
    /// `(X + X*)/2`.
    pub value: CMatrix,
    /// `‖X - X*‖ / 2` before symmetrization.
    pub asymmetry: f64,
}

/// `Σ a_{αβ} T*^β T^α`, Hermitized.
pub fn hereditary_eval(p: &HereditaryPoly, t: &MatrixTuple) -> HereditaryValue {
    let d = t.size();
    let mut x = CMatrix::zeros(d, d);
    for (alpha, beta, c) in p.terms() {
        x += t.power(beta).adjoint() * t.power(alpha) * *c;
    }
    let asymmetry = op_norm(&(&x - x.adjoint())) / 2.0;
    HereditaryValue {
        value: hermitian_part(&x),
        asymmetry,
    }
}

/// The `△ⁿ_0` defect `D^{(n-1)} - T_n* D^{(n-1)} T_n` (for `n = 1`, `I - T*T`).
pub fn triangle_defect(t: &MatrixTuple) -> CMatrix {
    let n = t.len();
    let d = t.size();
    let ts = t.mats();
    let gram = |a: &CMatrix, x: &CMatrix| a.adjoint() * x * a;
    let mut dk = CMatrix::identity(d, d);
    if n >= 2 {
        dk = gram(&ts[n - 1], &dk) - gram(&ts[n - 2], &dk);
        for k in 2..n {
            dk = gram(&ts[n - k], &dk) - gram(&ts[n - k - 1], &dk);
        }
    }
    &dk - gram(&ts[n - 1], &dk)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectClass {
    Isometry,
    Contraction,
    Neither,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    pub class: DefectClass,
    pub defect: CMatrix,
    pub defect_norm: f64,
    pub min_eigenvalue: f64,
}

pub fn triangle_defect_classify(t: &MatrixTuple, tol: f64) -> DefectReport {
    let defect = hermitian_part(&triangle_defect(t));
    let defect_norm = op_norm(&defect);
    let min_eig = min_eigenvalue(&defect);
    let tn = t.norm();
    let class = if defect_norm <= tol * f64::max(1.0, tn * tn) {
        DefectClass::Isometry
    } else if min_eig >= -tol * defect_norm {
        DefectClass::Contraction
    } else {
        DefectClass::Neither
    };
    DefectReport {
        class,
        defect,
        defect_norm,
        min_eigenvalue: min_eig,
    }
}

/// `φ⁻¹(T) = (T_1⋯T_n, T_2⋯T_n, ..., T_n)`.
pub fn toral_lift(t: &MatrixTuple) -> Result<MatrixTuple, HereditaryError> {
    let n = t.len();
    let d = t.size();
    let mut out = vec![CMatrix::zeros(d, d); n];
    let mut acc = CMatrix::identity(d, d);
    for j in (0..n).rev() {
        acc = &t.mats()[j] * acc;
        out[j] = acc.clone();
    }
    MatrixTuple::new(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum SpectrumStatus {
    InTriangle,
    /// A joint eigenvalue outside `△ⁿ_0`.
    Outside { eigenvalue: Vec<[f64; 2]> },
    /// The tuple is not jointly triangular, so the spectrum was not computed.
    UnverifiedHypothesis,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingReport {
    /// `T_j*T_j ⪯ T_{j+1}*T_{j+1}` for each `j`, then `T_n*T_n ⪯ I`.
    pub links: Vec<bool>,
    pub chain_holds: bool,
    pub spectrum: SpectrumStatus,
}

fn is_triangular(m: &CMatrix, upper: bool) -> bool {
    let scale = f64::max(1.0, op_norm(m));
    (0..m.nrows()).all(|i| {
        (0..m.ncols()).all(|j| {
            let off = if upper { i > j } else { i < j };
            !off || m[(i, j)].norm() <= 1e-14 * scale
        })
    })
}

/// Joint eigenvalues of a jointly triangular tuple, one tuple per diagonal slot.
fn joint_eigenvalues(t: &MatrixTuple) -> Option<Vec<Vec<Complex64>>> {
    let tri = |upper| t.mats().iter().all(|m| is_triangular(m, upper));
    if !(tri(true) || tri(false)) {
        return None;
    }
    Some(
        (0..t.size())
            .map(|i| t.mats().iter().map(|m| m[(i, i)]).collect())
            .collect(),
    )
}

pub fn ordering_check(t: &MatrixTuple, tol: f64) -> OrderingReport {
    let n = t.len();
    let d = t.size();
    let grams: Vec<CMatrix> = t.mats().iter().map(|m| m.adjoint() * m).collect();
    let mut links: Vec<bool> = (0..n.saturating_sub(1))
        .map(|j| is_psd(&(&grams[j + 1] - &grams[j]), tol))
        .collect();
    links.push(is_psd(&(CMatrix::identity(d, d) - &grams[n - 1]), tol));
    let spectrum = match joint_eigenvalues(t) {
        None => SpectrumStatus::UnverifiedHypothesis,
        Some(eigs) => {
            let p0 = PolyTuple::hartogs(n);
            match eigs.iter().find(|l| !triangle_contains(&p0, l).unwrap_or(false)) {
                None => SpectrumStatus::InTriangle,
                Some(l) => SpectrumStatus::Outside {
                    eigenvalue: l.iter().map(|c| [c.re, c.im]).collect(),
                },
            }
        }
    };
    OrderingReport {
        chain_holds: links.iter().all(|&b| b),
        links,
        spectrum,
    }
}

/// Checks a Pick certificate on `△²_0`: `A_1, A_2 ⪰ 0` and
/// `1 - conj(z_i) z_j = (conj(λ_i2) λ_j2 - conj(λ_i1) λ_j1) A1_ij + (1 - conj(λ_i2) λ_j2) A2_ij`.
pub fn pick_verify(
    lambda: &[[Complex64; 2]],
    z: &[Complex64],
    a1: &CMatrix,
    a2: &CMatrix,
) -> Result<bool, HereditaryError> {
    let k = lambda.len();
    if z.len() != k || a1.shape() != (k, k) || a2.shape() != (k, k) {
        return Err(HereditaryError::ShapeMismatch);
    }
    let p0 = PolyTuple::hartogs(2);
    for (index, l) in lambda.iter().enumerate() {
        if !triangle_contains(&p0, l).unwrap_or(false) {
            return Err(HereditaryError::PointOutsideDomain { index });
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if lambda[i] == lambda[j] {
                return Err(HereditaryError::DuplicatePoints { i, j });
            }
        }
    }
    if let Some(index) = z.iter().position(|c| c.norm() > 1.0) {
        return Err(HereditaryError::TargetOutsideDisc { index });
    }
    let hermitian = |a: &CMatrix| op_norm(&(a - a.adjoint())) <= PICK_TOL;
    if !hermitian(a1) || !hermitian(a2) {
        return Ok(false);
    }
    if min_eigenvalue(a1) < -PICK_TOL || min_eigenvalue(a2) < -PICK_TOL {
        return Ok(false);
    }
    let one = Complex64::one();
    for i in 0..k {
        for j in 0..k {
            let l2 = lambda[i][1].conj() * lambda[j][1];
            let l1 = lambda[i][0].conj() * lambda[j][0];
            let rhs = (l2 - l1) * a1[(i, j)] + (one - l2) * a2[(i, j)];
            let lhs = one - z[i].conj() * z[j];
            if (lhs - rhs).norm() > PICK_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
