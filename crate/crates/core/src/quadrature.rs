//! Disc and torus quadrature used for the Hardy and Bergman norm checks.
//!
//! Disc integrals use Gauss-Legendre in `u = r^2` (so `dA = du dθ / 2`) and
//! the trapezoid rule in the angle.

use std::f64::consts::PI;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::coeff::hartogs_closed_form;
use crate::geometry::phi_inverse;
use crate::polytuple::MultiIndex;

/// Finest level `k` of the Hardy grid `t = 1 - 2^{-k}`.
pub const HARDY_GRID_LEVELS: u32 = 40;

#[derive(Debug, Clone)]
pub struct DiscRule {
    radial: GaussLegendre,
    angles: usize,
}

impl DiscRule {
    /// `radial >= 2` Gauss-Legendre nodes in `u`, `angles >= 1` trapezoid nodes.
    pub fn new(radial: usize, angles: usize) -> Self {
        DiscRule {
            radial: GaussLegendre::new(radial.max(2)).expect("at least two nodes"),
            angles: angles.max(1),
        }
    }

    /// `∫_D f(w) dA(w)` over the unit disc.
    pub fn integrate<F: Fn(Complex64) -> f64>(&self, f: F) -> f64 {
        let m = self.angles;
        let dtheta = 2.0 * PI / m as f64;
        0.5 * self.radial.integrate(0.0, 1.0, |u| {
            let r = u.sqrt();
            (0..m)
                .map(|i| f(Complex64::from_polar(r, i as f64 * dtheta)))
                .sum::<f64>()
                * dtheta
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaCheck {
    pub numeric: f64,
    pub closed: f64,
    pub abs_err: f64,
}

/// `π / ((k+1) C(l+k+1, k+1))`.
pub fn beta_integral_closed(l: u32, k: u32) -> f64 {
    let c = hartogs_closed_form(&[k + 2], &MultiIndex(vec![l]));
    PI / (f64::from(k + 1) * c.to_f64().unwrap_or(f64::INFINITY))
}

/// Compares `∫_D |w|^{2l} (1-|w|^2)^k dA` with its closed form.
pub fn beta_integral_check(l: u32, k: u32, nodes: usize) -> BetaCheck {
    let rule = DiscRule::new(nodes, 8);
    let numeric = rule.integrate(|w| {
        let s = w.norm_sqr();
        s.powi(l as i32) * (1.0 - s).powi(k as i32)
    });
    let closed = beta_integral_closed(l, k);
    BetaCheck {
        numeric,
        closed,
        abs_err: (numeric - closed).abs(),
    }
}

/// Squared Hardy norm for multiplicity one:
/// `sup_t ∫_{T^n} |f(φ⁻¹(t e^{iθ}))|^2 ∏ t_j^{2j-1} dθ / (2π)^n`,
/// with `t_1 = ... = t_n = 1 - 2^{-k}`, `k = 1..=levels`, and `angles`
/// trapezoid nodes per circle.
pub fn hardy_norm_sq<F>(n: usize, f: F, levels: u32, angles: usize) -> f64
where
    F: Fn(&[Complex64]) -> Complex64,
{
    let total = angles.pow(n as u32);
    let dtheta = 2.0 * PI / angles as f64;
    let mut best = f64::NEG_INFINITY;
    for k in 1..=levels {
        let t = 1.0 - (-(k as f64)).exp2();
        let weight: f64 = (1..=n).map(|j| t.powi(2 * j as i32 - 1)).product();
        let mut acc = 0.0;
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        for flat in 0..total {
            let mut rest = flat;
            for wj in w.iter_mut() {
                *wj = Complex64::from_polar(t, (rest % angles) as f64 * dtheta);
                rest /= angles;
            }
            acc += f(&phi_inverse(&w)).norm_sqr();
        }
        best = best.max(acc / total as f64 * weight);
    }
    best
}

/// `∫ |e_α|^2 w_m dV` over `△ⁿ_0`, reduced by `φ` to a product of weighted
/// disc integrals. Needs every `m_j >= 2`.
pub fn bergman_norm_sq_hartogs(m: &[u32], alpha: &MultiIndex, nodes: usize) -> f64 {
    let rule = DiscRule::new(nodes, 8);
    let a = hartogs_closed_form(m, alpha).to_f64().unwrap_or(f64::INFINITY);
    alpha.0.iter().zip(m).fold(a, |acc, (&aj, &mj)| {
        let integral = rule.integrate(|w| {
            let s = w.norm_sqr();
            s.powi(aj as i32) * (1.0 - s).powi(mj as i32 - 2)
        });
        acc * f64::from(mj - 1) / PI * integral
    })
}
