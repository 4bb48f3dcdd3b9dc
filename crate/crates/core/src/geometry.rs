//! The biholomorphism `φ(z) = (z_1/z_2, ..., z_{n-1}/z_n, z_n)`, membership
//! tests for `△ⁿ_P` and `Q`-balls, and the polydisc radii of the `P̃` model.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::polytuple::{PolyTuple, Polynomial};

/// Bisection stops once the bracket is narrower than this.
pub const RADIUS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("coordinate z_{} is zero, so φ is undefined", .index + 1)]
    ZeroCoordinate { index: usize },
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

pub fn change_of_variables(p: &[Complex64], dir: Direction) -> Result<Vec<Complex64>, GeometryError> {
    match dir {
        Direction::Forward => phi(p),
        Direction::Inverse => Ok(phi_inverse(p)),
    }
}

/// `φ(z)`; needs `z_2, ..., z_n` nonzero.
pub fn phi(z: &[Complex64]) -> Result<Vec<Complex64>, GeometryError> {
    let n = z.len();
    if let Some(index) = (1..n).find(|&j| z[j].is_zero()) {
        return Err(GeometryError::ZeroCoordinate { index });
    }
    Ok((0..n)
        .map(|j| if j + 1 < n { z[j] / z[j + 1] } else { z[j] })
        .collect())
}

/// `φ⁻¹(w) = (w_1⋯w_n, w_2⋯w_n, ..., w_n)`.
pub fn phi_inverse(w: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); w.len()];
    let mut acc = Complex64::new(1.0, 0.0);
    for j in (0..w.len()).rev() {
        acc *= w[j];
        out[j] = acc;
    }
    out
}

/// Complex Jacobian determinant of `φ⁻¹` at `w`: `∏_{j>=2} w_j^{j-1}`.
pub fn jacobian_inverse(w: &[Complex64]) -> Complex64 {
    w.iter()
        .enumerate()
        .skip(1)
        .map(|(j, wj)| wj.powu(j as u32))
        .product()
}

/// `|φ(z)_j|^2` computed from `|z_j|^2` directly.
fn phi_moduli_sq(z: &[Complex64]) -> Vec<f64> {
    let n = z.len();
    let sq: Vec<f64> = z.iter().map(|c| c.norm_sqr()).collect();
    (0..n)
        .map(|j| if j + 1 < n { sq[j] / sq[j + 1] } else { sq[j] })
        .collect()
}

fn check_dim(expected: usize, found: usize) -> Result<(), GeometryError> {
    if expected != found {
        return Err(GeometryError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `z ∈ △ⁿ_P`: `z_2, ..., z_n ≠ 0` and `P_j(|φ(z)|^2) < 1` for every `j`.
pub fn triangle_contains(p: &PolyTuple, z: &[Complex64]) -> Result<bool, GeometryError> {
    check_dim(p.dim(), z.len())?;
    if z.iter().skip(1).any(|c| c.is_zero()) {
        return Ok(false);
    }
    let x = phi_moduli_sq(z);
    Ok(p.polys().iter().all(|pj| pj.eval_real(&x) < 1.0))
}

/// `|Q(z ⋄ z̄)| < 1`; with nonnegative coefficients this is `Q(|z|^2) < 1`.
pub fn q_ball_contains(q: &Polynomial, z: &[Complex64]) -> Result<bool, GeometryError> {
    check_dim(q.nvars(), z.len())?;
    let x: Vec<f64> = z.iter().map(|c| c.norm_sqr()).collect();
    Ok(q.eval_real(&x) < 1.0)
}

/// `r_j = sqrt(t*)` where `P̃_j(t*) = 1`, found by bisection.
pub fn polydisc_radii(p: &PolyTuple) -> Vec<f64> {
    p.tilde_restrictions()
        .iter()
        .enumerate()
        .map(|(j, pt)| {
            let a = p.linear_coeff(j).to_f64().unwrap_or(1.0);
            let mut lo = 0.0;
            let mut hi = f64::max(1.0, 1.0 / a);
            while pt.eval(hi) < 1.0 {
                hi *= 2.0;
            }
            while hi - lo > RADIUS_TOL {
                let mid = 0.5 * (lo + hi);
                if pt.eval(mid) < 1.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (0.5 * (lo + hi)).sqrt()
        })
        .collect()
}

/// `w` lies in the open polydisc with the given radii.
pub fn polydisc_contains(radii: &[f64], w: &[Complex64]) -> bool {
    radii.len() == w.len() && w.iter().zip(radii).all(|(c, r)| c.norm() < *r)
}
