//! Exact Taylor coefficients of `(1 - Q)^{-k}` and of
//! `∏_j (1 - P_j)^{-m_j}`, stored as dense tables over a lattice window.

use std::io::Write;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::LatticeWindow;
use crate::polytuple::{MultiIndex, PolyTuple, Polynomial, UnivariatePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("coefficient at {alpha} lies outside the window with bounds {bounds}")]
    WindowTooSmall { alpha: MultiIndex, bounds: MultiIndex },
    #[error("polynomial has a nonzero constant term")]
    ConstantTermPresent,
    #[error("multiplicities must be positive integers, got {0:?}")]
    InvalidMultiplicity(Vec<u32>),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the polynomial tuple is not admissible")]
    NotAdmissible,
}

/// How `(1 - Q)^{-k}` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReciprocalMethod {
    /// `A_k(α) = A_{k-1}(α) + Σ_γ q_γ A_k(α - γ)`.
    Recursion,
    /// `Σ_l C(k+l-1, l) Q^l`, truncated to the window.
    BinomialSeries,
}

/// How `A_{P,m}` is assembled from the one-polynomial tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assembly {
    /// Product over `P̃` when the tuple is admissible, convolution otherwise.
    Auto,
    /// n-fold convolution of the tables of `(1 - P_j)^{-m_j}`.
    Convolution,
    /// `∏_j A_{P̃_j, m_j}(α_j)`; requires an admissible tuple.
    TildeProduct,
}

/// Dense row-major table of exact coefficients over a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    window: LatticeWindow,
    values: Vec<BigRational>,
}

impl CoeffTable {
    fn zeros(window: LatticeWindow) -> Self {
        let values = vec![BigRational::zero(); window.len()];
        CoeffTable { window, values }
    }

    fn delta(window: LatticeWindow) -> Self {
        let mut t = Self::zeros(window);
        t.values[0] = BigRational::one();
        t
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn bounds(&self) -> &MultiIndex {
        self.window.bounds()
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, alpha: &MultiIndex) -> Result<&BigRational, CoeffError> {
        self.window
            .index_of(alpha)
            .map(|i| &self.values[i])
            .ok_or_else(|| CoeffError::WindowTooSmall {
                alpha: alpha.clone(),
                bounds: self.bounds().clone(),
            })
    }

    /// Lookup at a signed index; entries off `Z^n_+` are zero.
    pub fn get_signed(&self, alpha: &[i64]) -> Result<BigRational, CoeffError> {
        if alpha.iter().any(|&a| a < 0) {
            return Ok(BigRational::zero());
        }
        let a = MultiIndex(alpha.iter().map(|&x| x as u32).collect());
        self.get(&a).cloned()
    }

    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, &BigRational)> {
        self.window
            .iter()
            .zip(self.values.iter())
    }

    /// Restriction to a smaller window.
    pub fn restrict(&self, window: &LatticeWindow) -> Result<CoeffTable, CoeffError> {
        let values = window
            .iter()
            .map(|a| self.get(&a).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CoeffTable {
            window: window.clone(),
            values,
        })
    }

    /// Writes `alpha_1,...,alpha_n,value` rows with values as exact `p/q` strings.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let n = self.window.dim();
        let mut header: Vec<String> = (1..=n).map(|k| format!("alpha_{k}")).collect();
        header.push("value".into());
        w.write_record(&header)?;
        for (alpha, v) in self.iter() {
            let mut row: Vec<String> = alpha.0.iter().map(u32::to_string).collect();
            row.push(v.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), CoeffError> {
    if expected != found {
        return Err(CoeffError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Coefficients of `(1 - Q)^{-k}` over `window`.
pub fn reciprocal_power_coeffs(
    q: &Polynomial,
    k: u32,
    window: &LatticeWindow,
    method: ReciprocalMethod,
) -> Result<CoeffTable, CoeffError> {
    check_dim(q.nvars(), window.dim())?;
    if !q.constant_term().is_zero() {
        return Err(CoeffError::ConstantTermPresent);
    }
    match method {
        ReciprocalMethod::Recursion => Ok(by_recursion(q, k, window)),
        ReciprocalMethod::BinomialSeries => Ok(by_binomial_series(q, k, window)),
    }
}

/// Terms of `q` that fit in the window, as `(flat offset, exponent, coeff)`.
fn window_terms<'a>(
    q: &'a Polynomial,
    window: &LatticeWindow,
) -> Vec<(usize, &'a MultiIndex, &'a BigRational)> {
    q.terms()
        .filter_map(|(g, c)| window.index_of(g).map(|off| (off, g, c)))
        .collect()
}

fn by_recursion(q: &Polynomial, k: u32, window: &LatticeWindow) -> CoeffTable {
    let terms = window_terms(q, window);
    let mut prev = CoeffTable::delta(window.clone());
    for _ in 0..k {
        let mut cur = prev.clone();
        for (i, alpha) in window.iter().enumerate() {
            let mut acc = BigRational::zero();
            for (off, g, c) in &terms {
                if g.dominated_by(&alpha) && !cur.values[i - off].is_zero() {
                    acc += *c * &cur.values[i - off];
                }
            }
            cur.values[i] += acc;
        }
        prev = cur;
    }
    prev
}

/// Multiplies a table by `q`, dropping everything outside the window.
fn mul_truncated(t: &CoeffTable, terms: &[(usize, &MultiIndex, &BigRational)]) -> CoeffTable {
    let window = t.window.clone();
    let mut out = CoeffTable::zeros(window.clone());
    for (i, alpha) in window.iter().enumerate() {
        if t.values[i].is_zero() {
            continue;
        }
        for (_, g, c) in terms {
            if let Some(j) = window.index_of(&alpha.add(g)) {
                out.values[j] += *c * &t.values[i];
            }
        }
    }
    out
}

fn by_binomial_series(q: &Polynomial, k: u32, window: &LatticeWindow) -> CoeffTable {
    let mut out = CoeffTable::delta(window.clone());
    if k == 0 {
        return out;
    }
    let terms = window_terms(q, window);
    let max_l = window.bounds().total();
    let mut power = CoeffTable::delta(window.clone());
    for l in 1..=max_l {
        power = mul_truncated(&power, &terms);
        if power.values.iter().all(Zero::is_zero) {
            break;
        }
        let c = BigRational::from_integer(binomial(
            BigInt::from(u64::from(k) + l - 1),
            BigInt::from(l),
        ));
        for (o, p) in out.values.iter_mut().zip(&power.values) {
            if !p.is_zero() {
                *o += &c * p;
            }
        }
    }
    out
}

/// Coefficients `c_0, ..., c_len-1` of `(1 - p(t))^{-k}` for univariate `p`.
pub fn univariate_reciprocal_coeffs(p: &UnivariatePoly, k: u32, len: usize) -> Vec<BigRational> {
    let window = LatticeWindow::new(MultiIndex(vec![len.saturating_sub(1) as u32]))
        .expect("one coordinate");
    let table = by_recursion(&p.to_polynomial(), k, &window);
    table.values
}

fn check_multiplicity(n: usize, m: &[u32]) -> Result<(), CoeffError> {
    check_dim(n, m.len())?;
    if m.contains(&0) {
        return Err(CoeffError::InvalidMultiplicity(m.to_vec()));
    }
    Ok(())
}

/// `A_{P,m}` over `window`, choosing the tilde product for admissible tuples.
pub fn coeff_function(
    p: &PolyTuple,
    m: &[u32],
    window: &LatticeWindow,
) -> Result<CoeffTable, CoeffError> {
    coeff_function_with(p, m, window, Assembly::Auto)
}

pub fn coeff_function_with(
    p: &PolyTuple,
    m: &[u32],
    window: &LatticeWindow,
    assembly: Assembly,
) -> Result<CoeffTable, CoeffError> {
    let n = p.dim();
    check_multiplicity(n, m)?;
    check_dim(n, window.dim())?;
    let admissible = p.is_admissible();
    match assembly {
        Assembly::TildeProduct if !admissible => Err(CoeffError::NotAdmissible),
        Assembly::TildeProduct => Ok(tilde_product(p, m, window)),
        Assembly::Auto if admissible => Ok(tilde_product(p, m, window)),
        Assembly::Auto | Assembly::Convolution => Ok(convolution(p, m, window)),
    }
}

fn tilde_product(p: &PolyTuple, m: &[u32], window: &LatticeWindow) -> CoeffTable {
    let factors: Vec<Vec<BigRational>> = p
        .tilde_restrictions()
        .iter()
        .zip(m)
        .zip(&window.bounds().0)
        .map(|((pt, &mj), &b)| univariate_reciprocal_coeffs(pt, mj, b as usize + 1))
        .collect();
    let values = window
        .iter()
        .map(|alpha| {
            alpha
                .0
                .iter()
                .zip(&factors)
                .fold(BigRational::one(), |acc, (&a, f)| acc * &f[a as usize])
        })
        .collect();
    CoeffTable {
        window: window.clone(),
        values,
    }
}

fn convolution(p: &PolyTuple, m: &[u32], window: &LatticeWindow) -> CoeffTable {
    let mut acc: Option<CoeffTable> = None;
    for (pj, &mj) in p.polys().iter().zip(m) {
        let t = by_recursion(pj, mj, window);
        acc = Some(match acc {
            None => t,
            Some(a) => convolve(&a, &t),
        });
    }
    acc.expect("at least one polynomial")
}

/// Truncated Cauchy product of two tables over the same window.
fn convolve(a: &CoeffTable, b: &CoeffTable) -> CoeffTable {
    let window = a.window.clone();
    let nonzero = |t: &CoeffTable| -> Vec<(MultiIndex, BigRational)> {
        t.iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(al, v)| (al, v.clone()))
            .collect()
    };
    let (na, nb) = (nonzero(a), nonzero(b));
    let mut out = CoeffTable::zeros(window.clone());
    for (x, vx) in &na {
        for (y, vy) in &nb {
            if let Some(i) = window.index_of(&x.add(y)) {
                out.values[i] += vx * vy;
            }
        }
    }
    out
}

/// `∏_j C(α_j + m_j - 1, m_j - 1)`, the coefficients for `P_0`.
pub fn hartogs_closed_form(m: &[u32], alpha: &MultiIndex) -> BigRational {
    let v = alpha.0.iter().zip(m).fold(BigInt::one(), |acc, (&a, &mj)| {
        acc * binomial(
            BigInt::from(u64::from(a) + u64::from(mj) - 1),
            BigInt::from(mj - 1),
        )
    });
    BigRational::from_integer(v)
}
