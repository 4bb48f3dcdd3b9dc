//! Truncations of the coordinate multiplication tuple `M_z` on a lattice
//! window, with exact weight bookkeeping.
//!
//! In the orthonormal basis `{e_α}`,
//! `M_{z_j} e_α = ω_j(α) e_{α+ε^{(j)}}` with `ω_j(α)^2 = A(α)/A(α+ε^{(j)})`,
//! and the factor shifts are `W_j e_α = σ_j(α) e_{α+ε_j}` with
//! `σ_j(α)^2 = A(α)/A(α+ε_j)`. Squared weights are kept as exact rationals;
//! square roots are only taken when a floating value is requested.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{coeff_function, univariate_reciprocal_coeffs, CoeffError, CoeffTable};
use crate::lattice::WindowError;
pub use crate::lattice::LatticeWindow;
use crate::polytuple::{rational_to_f64, MultiIndex, PolyTuple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error("window has no coordinates")]
    EmptyWindow,
    #[error("the tuple is not n-admissible, so no lower norm bound is available")]
    NotNAdmissible,
    #[error("the tuple is not admissible")]
    NotAdmissible,
    #[error("operation needs dimension {expected}, got {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("coordinate index {0} out of range")]
    BadCoordinate(usize),
    #[error("coefficient table does not cover the window plus one step")]
    TableTooSmall,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

impl From<WindowError> for ShiftError {
    fn from(_: WindowError) -> Self {
        ShiftError::EmptyWindow
    }
}

fn ratio(a: &BigRational, b: &BigRational) -> BigRational {
    a / b
}

fn sqrt_f64(q: &BigRational) -> f64 {
    rational_to_f64(q).sqrt()
}

/// Exact squared weights of `M_z` over a window. The coefficient table covers
/// the window enlarged by one in every coordinate.
#[derive(Debug, Clone)]
pub struct WeightTable {
    window: LatticeWindow,
    table: CoeffTable,
}

impl WeightTable {
    pub fn new(p: &PolyTuple, m: &[u32], window: &LatticeWindow) -> Result<Self, ShiftError> {
        if window.dim() != p.dim() {
            return Err(ShiftError::WrongDimension {
                expected: p.dim(),
                found: window.dim(),
            });
        }
        let table = coeff_function(p, m, &window.grown(1))?;
        Ok(WeightTable {
            window: window.clone(),
            table,
        })
    }

    /// Uses an existing coefficient table, which must cover `window + 1`.
    pub fn from_table(table: CoeffTable, window: &LatticeWindow) -> Result<Self, ShiftError> {
        if !table.window().contains(window.grown(1).bounds()) {
            return Err(ShiftError::TableTooSmall);
        }
        Ok(WeightTable {
            window: window.clone(),
            table,
        })
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Result<&BigRational, ShiftError> {
        Ok(self.table.get(alpha)?)
    }

    fn check_coord(&self, j: usize) -> Result<(), ShiftError> {
        if j >= self.dim() {
            return Err(ShiftError::BadCoordinate(j));
        }
        Ok(())
    }

    /// `ω_j(α)^2` (0-based `j`).
    pub fn omega_sq(&self, j: usize, alpha: &MultiIndex) -> Result<BigRational, ShiftError> {
        self.check_coord(j)?;
        let next = alpha.add(&MultiIndex::tail(self.dim(), j));
        Ok(ratio(self.coeff(alpha)?, self.coeff(&next)?))
    }

    /// `σ_j(α)^2` (0-based `j`).
    pub fn sigma_sq(&self, j: usize, alpha: &MultiIndex) -> Result<BigRational, ShiftError> {
        self.check_coord(j)?;
        let next = alpha.add(&MultiIndex::unit(self.dim(), j));
        Ok(ratio(self.coeff(alpha)?, self.coeff(&next)?))
    }

    pub fn omega(&self, j: usize, alpha: &MultiIndex) -> Result<f64, ShiftError> {
        Ok(sqrt_f64(&self.omega_sq(j, alpha)?))
    }

    pub fn sigma(&self, j: usize, alpha: &MultiIndex) -> Result<f64, ShiftError> {
        Ok(sqrt_f64(&self.sigma_sq(j, alpha)?))
    }

    /// `max_α ω_j(α)^2` over the window: the squared norm of the truncation.
    pub fn truncated_norm_sq(&self, j: usize) -> Result<BigRational, ShiftError> {
        let mut best = BigRational::zero();
        for alpha in self.window.iter() {
            let w = self.omega_sq(j, &alpha)?;
            if w > best {
                best = w;
            }
        }
        Ok(best)
    }

    fn shift_apply(
        &self,
        delta: &MultiIndex,
        weight: impl Fn(&MultiIndex) -> Result<f64, ShiftError>,
        v: &[Complex64],
        adjoint: bool,
    ) -> Result<Vec<Complex64>, ShiftError> {
        assert_eq!(v.len(), self.window.len(), "vector length must match the window");
        let mut out = vec![Complex64::zero(); v.len()];
        for (i, alpha) in self.window.iter().enumerate() {
            let Some(t) = self.window.index_of(&alpha.add(delta)) else {
                continue;
            };
            let w = weight(&alpha)?;
            if adjoint {
                out[i] += v[t] * w;
            } else {
                out[t] += v[i] * w;
            }
        }
        Ok(out)
    }

    /// Truncated `M_{z_j} v`; mass pushed outside the window is dropped.
    pub fn apply_mult(&self, j: usize, v: &[Complex64]) -> Result<Vec<Complex64>, ShiftError> {
        self.check_coord(j)?;
        let d = MultiIndex::tail(self.dim(), j);
        self.shift_apply(&d, |a| self.omega(j, a), v, false)
    }

    /// `M_{z_j}^* v`: `e_α ↦ ω_j(α - ε^{(j)}) e_{α-ε^{(j)}}`, or 0.
    pub fn apply_adjoint(&self, j: usize, v: &[Complex64]) -> Result<Vec<Complex64>, ShiftError> {
        self.check_coord(j)?;
        let d = MultiIndex::tail(self.dim(), j);
        self.shift_apply(&d, |a| self.omega(j, a), v, true)
    }

    /// Truncated `W_j v`.
    pub fn apply_shift(&self, j: usize, v: &[Complex64]) -> Result<Vec<Complex64>, ShiftError> {
        self.check_coord(j)?;
        let d = MultiIndex::unit(self.dim(), j);
        self.shift_apply(&d, |a| self.sigma(j, a), v, false)
    }

    /// Dense `N × N` truncation of `M_{z_j}`.
    pub fn mult_matrix(&self, j: usize) -> Result<DMatrix<f64>, ShiftError> {
        self.check_coord(j)?;
        let n = self.window.len();
        let d = MultiIndex::tail(self.dim(), j);
        let mut m = DMatrix::zeros(n, n);
        for (i, alpha) in self.window.iter().enumerate() {
            if let Some(t) = self.window.index_of(&alpha.add(&d)) {
                m[(t, i)] = self.omega(j, &alpha)?;
            }
        }
        Ok(m)
    }
}

/// Univariate tables `Ã_k(a)` of `(1 - P̃_k)^{-m_k}`, `a = 0..=len-1`.
#[derive(Debug, Clone)]
pub struct TildeTables {
    tables: Vec<Vec<BigRational>>,
}

impl TildeTables {
    pub fn new(p: &PolyTuple, m: &[u32], len: usize) -> Self {
        let tables = p
            .tilde_restrictions()
            .iter()
            .zip(m)
            .map(|(pt, &mk)| univariate_reciprocal_coeffs(pt, mk, len))
            .collect();
        TildeTables { tables }
    }

    pub fn get(&self, k: usize, a: usize) -> &BigRational {
        &self.tables[k][a]
    }

    pub fn len(&self) -> usize {
        self.tables.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Ã_k(a) / Ã_k(a+1)`.
    pub fn ratio(&self, k: usize, a: usize) -> BigRational {
        ratio(&self.tables[k][a], &self.tables[k][a + 1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormBounds {
    pub j: usize,
    pub upper: f64,
    /// `1 / ∏_{l>=j} a_l`.
    pub upper_sq: String,
    pub lower: Option<f64>,
    pub lower_sq: Option<String>,
    /// With every `m_l = 1` and an n-admissible tuple the bounds coincide.
    pub exact: bool,
}

/// Norm bounds for `M_{z_j}` (0-based `j`).
pub fn norm_bounds(p: &PolyTuple, m: &[u32], j: usize) -> Result<NormBounds, ShiftError> {
    let n = p.dim();
    if j >= n {
        return Err(ShiftError::BadCoordinate(j));
    }
    if m.len() != n {
        return Err(ShiftError::WrongDimension {
            expected: n,
            found: m.len(),
        });
    }
    let prod_a = (j..n).fold(BigRational::one(), |acc, l| acc * p.linear_coeff(l));
    let upper_sq = BigRational::one() / &prod_a;
    let n_adm = p.admissibility_degree().degree.at_least(n as u64);
    let lower_sq = n_adm.then(|| {
        let pm = (j..n).fold(BigRational::from_integer(BigInt::one()), |acc, l| {
            acc * BigRational::from_integer(BigInt::from(m[l]))
        });
        BigRational::one() / (&prod_a * pm)
    });
    let exact = n_adm && m.iter().all(|&x| x == 1);
    Ok(NormBounds {
        j,
        upper: sqrt_f64(&upper_sq),
        upper_sq: upper_sq.to_string(),
        lower: lower_sq.as_ref().map(sqrt_f64),
        lower_sq: lower_sq.as_ref().map(ToString::to_string),
        exact,
    })
}

/// The lower bound alone; fails unless the tuple is n-admissible.
pub fn norm_lower_bound(p: &PolyTuple, m: &[u32], j: usize) -> Result<f64, ShiftError> {
    norm_bounds(p, m, j)?.lower.ok_or(ShiftError::NotNAdmissible)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutatorWitness {
    pub alpha: MultiIndex,
    /// Coefficient of `e_{α-ε_{n-1}}` in `[M*_{z_{n-1}}, M_{z_n}] e_α`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationProbe {
    /// `ω_j(α)^2 = ∏ σ_k^2` along the path `α, α+ε_n, ..., α+ε_{j+1}+...+ε_n`, exactly.
    pub factorization_holds: bool,
    pub factorization_checked: usize,
    /// First `α` (lexicographic) where the mixed commutator is nonzero.
    pub commutator_witness: Option<CommutatorWitness>,
    /// All `[M̃*_{z_j}, M̃_{z_k}]`, `j != k`, vanish on the polydisc side.
    pub polydisc_commutators_vanish: bool,
}

/// Squared magnitudes of the two terms of `[M*_{z_i}, M_{z_k}] e_α` landing on
/// `e_{α+ε^{(k)}-ε^{(i)}}`; `None` marks a term that is absent.
fn commutator_terms(
    w: &WeightTable,
    i: usize,
    k: usize,
    alpha: &MultiIndex,
) -> Result<(Option<BigRational>, Option<BigRational>), ShiftError> {
    let n = w.dim();
    let ti = MultiIndex::tail(n, i);
    let tk = MultiIndex::tail(n, k);
    // M*_i M_k e_α = ω_k(α) ω_i(α+ε^{(k)}-ε^{(i)}) e_{...}
    let up = alpha.add(&tk);
    let first = match up.checked_sub(&ti) {
        Some(b) => Some(w.omega_sq(k, alpha)? * w.omega_sq(i, &b)?),
        None => None,
    };
    // M_k M*_i e_α = ω_i(α-ε^{(i)}) ω_k(α-ε^{(i)}) e_{...}
    let second = match alpha.checked_sub(&ti) {
        Some(b) => Some(w.omega_sq(i, &b)? * w.omega_sq(k, &b)?),
        None => None,
    };
    Ok((first, second))
}

pub fn factorization_and_commutation_probe(
    p: &PolyTuple,
    m: &[u32],
    window: &LatticeWindow,
) -> Result<FactorizationProbe, ShiftError> {
    let w = WeightTable::new(p, m, window)?;
    let n = w.dim();
    let mut holds = true;
    let mut checked = 0;
    for alpha in window.iter() {
        for j in 0..n {
            let mut path = alpha.clone();
            let mut prod = BigRational::one();
            for k in (j..n).rev() {
                prod *= w.sigma_sq(k, &path)?;
                path = path.add(&MultiIndex::unit(n, k));
            }
            holds &= prod == w.omega_sq(j, &alpha)?;
            checked += 1;
        }
    }

    let mut witness = None;
    if n >= 2 {
        for alpha in window.iter() {
            let (a, b) = commutator_terms(&w, n - 2, n - 1, &alpha)?;
            let zero = BigRational::zero();
            let (a, b) = (a.unwrap_or(zero.clone()), b.unwrap_or(zero));
            if a != b {
                witness = Some(CommutatorWitness {
                    value: sqrt_f64(&a) - sqrt_f64(&b),
                    alpha,
                });
                break;
            }
        }
    }

    // Polydisc side: σ̃_k(a)^2 = Ã_k(a)/Ã_k(a+1); [M̃*_j, M̃_k] e_α has terms
    // σ̃_k(α_k) σ̃_j(α_j - 1) and σ̃_j(α_j - 1) σ̃_k(α_k).
    let tilde = TildeTables::new(p, m, window.bounds().0.iter().max().map_or(1, |&b| b as usize + 2));
    let mut vanish = true;
    for alpha in window.iter() {
        for j in 0..n {
            for k in (0..n).filter(|&k| k != j) {
                let (aj, ak) = (alpha.0[j] as usize, alpha.0[k] as usize);
                let first = (aj >= 1).then(|| tilde.ratio(k, ak) * tilde.ratio(j, aj - 1));
                let second = (aj >= 1).then(|| tilde.ratio(j, aj - 1) * tilde.ratio(k, ak));
                vanish &= first == second;
            }
        }
    }

    Ok(FactorizationProbe {
        factorization_holds: holds,
        factorization_checked: checked,
        commutator_witness: witness,
        polydisc_commutators_vanish: vanish,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyponormalityReport {
    pub j: usize,
    /// `(α, A(α)/A(α+ε^{(j)}) - A(α-ε^{(j)})/A(α))`, the diagonal of `[M*_{z_j}, M_{z_j}]`.
    pub entries: Vec<(MultiIndex, String)>,
    pub nonnegative: bool,
    pub first_negative: Option<MultiIndex>,
}

pub fn hyponormality_diagonal(w: &WeightTable, j: usize) -> Result<HyponormalityReport, ShiftError> {
    let n = w.dim();
    let t = MultiIndex::tail(n, j);
    let mut entries = Vec::new();
    let mut first_negative = None;
    for alpha in w.window().iter() {
        let d = hypo_entry(w, j, &t, &alpha)?;
        if d.is_negative() && first_negative.is_none() {
            first_negative = Some(alpha.clone());
        }
        entries.push((alpha, d.to_string()));
    }
    Ok(HyponormalityReport {
        j,
        entries,
        nonnegative: first_negative.is_none(),
        first_negative,
    })
}

fn hypo_entry(w: &WeightTable, j: usize, t: &MultiIndex, alpha: &MultiIndex) -> Result<BigRational, ShiftError> {
    let prev = match alpha.checked_sub(t) {
        Some(b) => w.omega_sq(j, &b)?,
        None => BigRational::zero(),
    };
    Ok(w.omega_sq(j, alpha)? - prev)
}

/// One row of the weight export: `(α, j, ω_j(α), σ_j(α), hyponormality diagonal)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightRow {
    pub alpha: MultiIndex,
    pub j: usize,
    pub omega: f64,
    pub sigma: f64,
    pub hypo_diag: f64,
}

pub fn weight_rows(w: &WeightTable) -> Result<Vec<WeightRow>, ShiftError> {
    let n = w.dim();
    let mut rows = Vec::new();
    for alpha in w.window().iter() {
        for j in 0..n {
            let t = MultiIndex::tail(n, j);
            rows.push(WeightRow {
                omega: w.omega(j, &alpha)?,
                sigma: w.sigma(j, &alpha)?,
                hypo_diag: rational_to_f64(&hypo_entry(w, j, &t, &alpha)?),
                j,
                alpha: alpha.clone(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EssentialNormalityProbe {
    pub i: usize,
    /// `A(ℓ ε_i) / A(ℓ ε_i + ε_n)` for `ℓ = 0..=bound_i`.
    pub values: Vec<f64>,
    pub infimum: f64,
    pub constant: bool,
}

/// Diagonal of `M*_{z_n} M_{z_n}` along the ray `ℓ ε_i`.
pub fn essential_normality_probe(w: &WeightTable, i: usize) -> Result<EssentialNormalityProbe, ShiftError> {
    let n = w.dim();
    w.check_coord(i)?;
    let bound = w.window().bounds().0[i];
    let mut exact = Vec::new();
    for l in 0..=bound {
        let mut a = MultiIndex::zero(n);
        a.0[i] = l;
        exact.push(w.sigma_sq(n - 1, &a)?);
    }
    let values: Vec<f64> = exact.iter().map(rational_to_f64).collect();
    Ok(EssentialNormalityProbe {
        i,
        infimum: values.iter().copied().fold(f64::INFINITY, f64::min),
        constant: exact.windows(2).all(|p| p[0] == p[1]),
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetTraceReport {
    pub k: usize,
    /// Both `a_1` and `a_2` are nondecreasing on `0..=K`.
    pub positive: bool,
    /// Every diagonal entry over `α <= (K, K)` is nonnegative.
    pub diagonal_nonnegative: bool,
    pub partial_trace: f64,
    pub partial_trace_exact: String,
    pub limit_trace_estimate: f64,
}

/// `a_j(k) = Ã_j(k)/Ã_j(k+1)` and the determinant-commutator diagonal
/// `(a_1(α_1) - a_1(α_1-1)) (a_2(α_2)^2 - a_2(α_2-1)^2)` with `a(-1) = 0`.
pub struct DetTrace {
    pub a1: Vec<BigRational>,
    pub a2: Vec<BigRational>,
}

impl DetTrace {
    pub fn new(p: &PolyTuple, m: &[u32], k: usize) -> Result<Self, ShiftError> {
        if p.dim() != 2 {
            return Err(ShiftError::WrongDimension {
                expected: 2,
                found: p.dim(),
            });
        }
        if !p.is_admissible() {
            return Err(ShiftError::NotAdmissible);
        }
        let tilde = TildeTables::new(p, m, k + 2);
        let a1 = (0..=k).map(|i| tilde.ratio(0, i)).collect();
        let a2 = (0..=k).map(|i| tilde.ratio(1, i)).collect();
        Ok(DetTrace { a1, a2 })
    }

    fn d1(&self, i: usize) -> BigRational {
        let prev = if i == 0 { BigRational::zero() } else { self.a1[i - 1].clone() };
        &self.a1[i] - prev
    }

    fn d2(&self, i: usize) -> BigRational {
        let sq = |x: &BigRational| x * x;
        let prev = if i == 0 { BigRational::zero() } else { sq(&self.a2[i - 1]) };
        sq(&self.a2[i]) - prev
    }

    pub fn diagonal(&self, alpha: &MultiIndex) -> BigRational {
        self.d1(alpha.0[0] as usize) * self.d2(alpha.0[1] as usize)
    }

    pub fn report(&self) -> DetTraceReport {
        let k = self.a1.len() - 1;
        let nondecreasing = |a: &[BigRational]| a.windows(2).all(|p| p[0] <= p[1]);
        let d1: Vec<_> = (0..=k).map(|i| self.d1(i)).collect();
        let d2: Vec<_> = (0..=k).map(|i| self.d2(i)).collect();
        let signs = |d: &[BigRational]| {
            (
                d.iter().any(Signed::is_positive),
                d.iter().any(Signed::is_negative),
            )
        };
        let ((p1, n1), (p2, n2)) = (signs(&d1), signs(&d2));
        let diagonal_nonnegative = !((p1 && n2) || (n1 && p2));
        let s1: BigRational = d1.iter().sum();
        let s2: BigRational = d2.iter().sum();
        let partial = s1 * s2;
        let limit = &self.a1[k] * &self.a2[k] * &self.a2[k];
        DetTraceReport {
            k,
            positive: nondecreasing(&self.a1) && nondecreasing(&self.a2),
            diagonal_nonnegative,
            partial_trace: rational_to_f64(&partial),
            partial_trace_exact: partial.to_string(),
            limit_trace_estimate: rational_to_f64(&limit),
        }
    }
}

pub fn det_commutator_and_trace(p: &PolyTuple, m: &[u32], k: usize) -> Result<DetTraceReport, ShiftError> {
    Ok(DetTrace::new(p, m, k)?.report())
}

/// Natural logarithm of a positive rational without overflowing `f64`.
pub fn ln_rational(q: &BigRational) -> f64 {
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 960 {
        return x.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralRadiusReport {
    pub j: usize,
    /// `r_N = max_{k<=K} (Ã_j(k)/Ã_j(k+N))^{1/(2N)}` for `N = 1..`.
    pub approximants: Vec<f64>,
    pub estimate: f64,
    /// `1 / sqrt(a_j)`.
    pub upper_bound: f64,
    pub within_bound: bool,
}

pub const RADIUS_BOUND_TOL: f64 = 1e-12;

/// Finite spectral-radius approximants from the `P̃_j` sequence, without extrapolation.
pub fn spectral_radius_estimate(
    p: &PolyTuple,
    m: &[u32],
    j: usize,
    k_max: usize,
    n_max: usize,
) -> Result<SpectralRadiusReport, ShiftError> {
    if !p.is_admissible() {
        return Err(ShiftError::NotAdmissible);
    }
    if j >= p.dim() {
        return Err(ShiftError::BadCoordinate(j));
    }
    let tilde = TildeTables::new(p, m, k_max + n_max + 1);
    let logs: Vec<f64> = (0..tilde.len()).map(|a| ln_rational(tilde.get(j, a))).collect();
    let approximants: Vec<f64> = (1..=n_max)
        .map(|nn| {
            (0..=k_max)
                .map(|k| ((logs[k] - logs[k + nn]) / (2 * nn) as f64).exp())
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let estimate = approximants.last().copied().unwrap_or(f64::NAN);
    let upper_bound = 1.0 / rational_to_f64(&p.linear_coeff(j)).sqrt();
    Ok(SpectralRadiusReport {
        j,
        within_bound: estimate <= upper_bound + RADIUS_BOUND_TOL,
        approximants,
        estimate,
        upper_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntertwiningReport {
    pub holds: bool,
    pub checked: usize,
    pub first_failure: Option<(usize, MultiIndex)>,
}

/// Exact check of `ω_j(α)^2 = ∏_{k>=j} Ã_k(α_k)/Ã_k(α_k+1)`, with `A_{P,m}`
/// assembled by convolution so the two sides are computed independently.
pub fn polydisc_intertwining_check(
    p: &PolyTuple,
    m: &[u32],
    window: &LatticeWindow,
) -> Result<IntertwiningReport, ShiftError> {
    if !p.is_admissible() {
        return Err(ShiftError::NotAdmissible);
    }
    let table = crate::coeff::coeff_function_with(
        p,
        m,
        &window.grown(1),
        crate::coeff::Assembly::Convolution,
    )?;
    let w = WeightTable::from_table(table, window)?;
    let n = w.dim();
    let len = window.bounds().0.iter().max().map_or(0, |&b| b as usize) + 2;
    let tilde = TildeTables::new(p, m, len);
    let mut checked = 0;
    let mut first_failure = None;
    for alpha in window.iter() {
        for j in 0..n {
            let rhs = (j..n).fold(BigRational::one(), |acc, k| acc * tilde.ratio(k, alpha.0[k] as usize));
            checked += 1;
            if w.omega_sq(j, &alpha)? != rhs && first_failure.is_none() {
                first_failure = Some((j, alpha.clone()));
            }
        }
    }
    Ok(IntertwiningReport {
        holds: first_failure.is_none(),
        checked,
        first_failure,
    })
}

/// `θ̃` with `θ_j = Σ_{k>=j} θ̃_k`.
pub fn tilde_angles(theta: &[f64]) -> Vec<f64> {
    let n = theta.len();
    (0..n)
        .map(|j| if j + 1 < n { theta[j] - theta[j + 1] } else { theta[j] })
        .collect()
}

/// Largest entry of `|Γ* M_{z_j} Γ - e^{iθ_j} M_{z_j}|` over all `j`, where
/// `Γ e_α = exp(-i⟨θ̃, α⟩) e_α` is the diagonal unitary on the window.
pub fn circularity_check(w: &WeightTable, theta: &[f64]) -> Result<f64, ShiftError> {
    let n = w.dim();
    if theta.len() != n {
        return Err(ShiftError::WrongDimension {
            expected: n,
            found: theta.len(),
        });
    }
    let tt = tilde_angles(theta);
    let phases: Vec<Complex64> = w
        .window()
        .iter()
        .map(|a| {
            let s: f64 = a.0.iter().zip(&tt).map(|(&x, t)| f64::from(x) * t).sum();
            Complex64::from_polar(1.0, -s)
        })
        .collect();
    let gamma = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases));
    let mut worst: f64 = 0.0;
    for (j, &th) in theta.iter().enumerate() {
        let mj = w.mult_matrix(j)?.map(|x| Complex64::new(x, 0.0));
        let lhs = gamma.adjoint() * &mj * &gamma;
        let rhs = mj * Complex64::from_polar(1.0, th);
        worst = worst.max((lhs - rhs).iter().map(|c| c.norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}
