//! Reproducing kernels of the weighted spaces on `△ⁿ_P`, their orthonormal
//! monomial bases and Gram-matrix positivity.
//!
//! With `u = φ(z) ⋄ conj(φ(w))`,
//! `K(z, w) = ∏_{j>=2} 1/(z_j conj(w_j)) · ∏_j (1 - P_j(u))^{-m_j}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::coeff::{coeff_function, CoeffError, CoeffTable};
use crate::geometry::{phi, triangle_contains, GeometryError};
use crate::lattice::LatticeWindow;
use crate::polytuple::{MultiIndex, PolyTuple};
use crate::quadrature::{bergman_norm_sq_hartogs, hardy_norm_sq, HARDY_GRID_LEVELS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("point {index} lies outside the triangle")]
    OutsideDomain { index: usize },
    #[error("multiplicities must all be at least {min}, got {m:?}")]
    InvalidMultiplicity { m: Vec<u32>, min: u32 },
    #[error("series cutoff {cutoff} exceeds the precomputed table (bound {available})")]
    CutoffTooLarge { cutoff: u32, available: u32 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// `(P, m)` plus a cached coefficient table for series evaluation.
#[derive(Debug, Clone)]
pub struct KernelContext {
    p: PolyTuple,
    m: Vec<u32>,
    cutoff: u32,
    table: Option<CoeffTable>,
    table_f64: Vec<f64>,
}

impl KernelContext {
    /// Context without a coefficient table; only closed-form evaluation.
    pub fn new(p: PolyTuple, m: Vec<u32>) -> Result<Self, KernelError> {
        if m.len() != p.dim() || m.contains(&0) {
            return Err(KernelError::InvalidMultiplicity { m, min: 1 });
        }
        Ok(KernelContext {
            p,
            m,
            cutoff: 0,
            table: None,
            table_f64: Vec::new(),
        })
    }

    /// Context whose coefficient table covers every `|α| <= cutoff`.
    pub fn with_cutoff(p: PolyTuple, m: Vec<u32>, cutoff: u32) -> Result<Self, KernelError> {
        let mut ctx = Self::new(p, m)?;
        let window = LatticeWindow::cube(ctx.p.dim(), cutoff).expect("n >= 1");
        let table = coeff_function(&ctx.p, &ctx.m, &window)?;
        ctx.table_f64 = table.values().iter().map(|v| v.to_f64().unwrap_or(f64::INFINITY)).collect();
        ctx.table = Some(table);
        ctx.cutoff = cutoff;
        Ok(ctx)
    }

    pub fn poly(&self) -> &PolyTuple {
        &self.p
    }

    pub fn multiplicity(&self) -> &[u32] {
        &self.m
    }

    pub fn table(&self) -> Option<&CoeffTable> {
        self.table.as_ref()
    }

    fn coeff_f64(&self, alpha: &MultiIndex) -> Result<f64, KernelError> {
        let table = self.table.as_ref().ok_or(KernelError::CutoffTooLarge {
            cutoff: alpha.total() as u32,
            available: 0,
        })?;
        let i = table
            .window()
            .index_of(alpha)
            .ok_or_else(|| CoeffError::WindowTooSmall {
                alpha: alpha.clone(),
                bounds: table.bounds().clone(),
            })?;
        Ok(self.table_f64[i])
    }

    fn check_point(&self, z: &[Complex64], index: usize) -> Result<(), KernelError> {
        if !triangle_contains(&self.p, z)? {
            return Err(KernelError::OutsideDomain { index });
        }
        Ok(())
    }
}

/// `∏_{j>=2} 1/(z_j conj(w_j))`.
fn prefactor(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter()
        .zip(w)
        .skip(1)
        .fold(Complex64::one(), |acc, (a, b)| acc / (a * b.conj()))
}

fn diamond_conj(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).collect()
}

/// Closed-form kernel value.
pub fn kernel_eval(ctx: &KernelContext, z: &[Complex64], w: &[Complex64]) -> Result<Complex64, KernelError> {
    ctx.check_point(z, 0)?;
    ctx.check_point(w, 1)?;
    let u = diamond_conj(&phi(z)?, &phi(w)?);
    let body = ctx
        .p
        .polys()
        .iter()
        .zip(&ctx.m)
        .fold(Complex64::one(), |acc, (pj, &mj)| {
            acc / (Complex64::one() - pj.eval_complex(&u)).powu(mj)
        });
    Ok(prefactor(z, w) * body)
}

/// Partial sum `Σ_{|α| <= cutoff} e_α(z) conj(e_α(w))`.
pub fn kernel_series_eval(
    ctx: &KernelContext,
    z: &[Complex64],
    w: &[Complex64],
    cutoff: u32,
) -> Result<Complex64, KernelError> {
    if ctx.table.is_none() || cutoff > ctx.cutoff {
        return Err(KernelError::CutoffTooLarge {
            cutoff,
            available: ctx.cutoff,
        });
    }
    ctx.check_point(z, 0)?;
    ctx.check_point(w, 1)?;
    let u = diamond_conj(&phi(z)?, &phi(w)?);
    let table = ctx.table.as_ref().expect("checked above");
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, alpha) in table.window().iter().enumerate() {
        if alpha.total() <= u64::from(cutoff) && ctx.table_f64[i] != 0.0 {
            sum += alpha.monomial(&u) * ctx.table_f64[i];
        }
    }
    Ok(prefactor(z, w) * sum)
}

/// `e_α(z) = sqrt(A(α)) φ(z)^α / ∏_{j>=2} z_j`.
pub fn basis_eval(ctx: &KernelContext, alpha: &MultiIndex, z: &[Complex64]) -> Result<Complex64, KernelError> {
    let a = ctx.coeff_f64(alpha)?;
    let f = phi(z)?;
    let denom: Complex64 = z.iter().skip(1).product();
    Ok(alpha.monomial(&f) * a.sqrt() / denom)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    pub min_eigenvalue: f64,
    pub max_diagonal: f64,
    /// `min_eigenvalue >= -GRAM_TOL · max_diagonal`.
    pub positive: bool,
}

pub const GRAM_TOL: f64 = 1e-10;

pub fn gram_matrix(ctx: &KernelContext, points: &[Vec<Complex64>]) -> Result<DMatrix<Complex64>, KernelError> {
    for (i, z) in points.iter().enumerate() {
        ctx.check_point(z, i)?;
    }
    let k = points.len();
    let mut g = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = kernel_eval(ctx, &points[i], &points[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    Ok(g)
}

/// Smallest eigenvalue of `[K(z_i, z_j)]`, which must be PSD.
pub fn gram_psd_check(ctx: &KernelContext, points: &[Vec<Complex64>]) -> Result<GramReport, KernelError> {
    let g = gram_matrix(ctx, points)?;
    let max_diagonal = (0..g.nrows()).map(|i| g[(i, i)].re).fold(0.0, f64::max);
    let min_eigenvalue = if g.is_empty() {
        0.0
    } else {
        g.symmetric_eigenvalues().min()
    };
    Ok(GramReport {
        min_eigenvalue,
        max_diagonal,
        positive: min_eigenvalue >= -GRAM_TOL * max_diagonal,
    })
}

/// Hardy norm squared of `scale · e_α` for `△ⁿ_0` with `m = 1`, where the
/// basis is `φ(z)^α / ∏_{j>=2} z_j`.
pub fn hardy_norm_check(n: usize, alpha: &MultiIndex, scale: f64) -> f64 {
    let f = |z: &[Complex64]| -> Complex64 {
        let denom: Complex64 = z.iter().skip(1).product();
        match phi(z) {
            Ok(w) => alpha.monomial(&w) * scale / denom,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    };
    hardy_norm_sq(n, f, HARDY_GRID_LEVELS, 16)
}

/// Weighted Bergman norm squared of `e_α` for `△ⁿ_0`; every `m_j >= 2`.
pub fn bergman_norm_check(m: &[u32], alpha: &MultiIndex) -> Result<f64, KernelError> {
    if m.iter().any(|&x| x < 2) || m.len() != alpha.dim() {
        return Err(KernelError::InvalidMultiplicity { m: m.to_vec(), min: 2 });
    }
    Ok(bergman_norm_sq_hartogs(m, alpha, 24))
}
