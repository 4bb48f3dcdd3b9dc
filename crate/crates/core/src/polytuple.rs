//! Multi-indices, nonnegative polynomials and the polynomial tuples that
//! define generalized Hartogs triangles.
//!
//! A [`PolyTuple`] holds `n` polynomials `P_1, ..., P_n` in `n` variables with
//! nonnegative rational coefficients, no constant term and a strictly positive
//! coefficient `a_j` of `z_j` in `P_j`. Terms with zero coefficient are never
//! stored.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point of `Z^n_+`. Ordering is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// `ε_k` (0-based `k`).
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        MultiIndex(v)
    }

    /// `ε^{(j)} = ε_j + ... + ε_n` (0-based `j`).
    pub fn tail(n: usize, j: usize) -> Self {
        MultiIndex((0..n).map(|k| u32::from(k >= j)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&a| u64::from(a)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` if the result leaves `Z^n_+`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// If this index is a pure power `k ε_j` with `k >= 1`, returns `(j, k)`.
    pub fn as_pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (j, &a) in self.0.iter().enumerate() {
            if a != 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((j, a));
            }
        }
        found
    }

    /// `z^α` for a complex point.
    pub fn monomial(&self, z: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(z)
            .fold(Complex64::one(), |acc, (&a, &zj)| acc * zj.powu(a))
    }

    /// `x^α` for a real point.
    pub fn monomial_real(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .fold(1.0, |acc, (&a, &xj)| acc * xj.powi(a as i32))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Nonnegative multivariate polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from `(alpha, coeff)` pairs. Repeated exponents are
    /// summed; zero coefficients are dropped. Panics on dimension mismatch.
    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, BigRational)>,
    {
        let mut p = Polynomial::zero(n);
        for (alpha, c) in terms {
            p.add_term(alpha, c);
        }
        p
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: BigRational) {
        assert_eq!(alpha.dim(), self.n, "exponent dimension mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(alpha.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> BigRational {
        self.terms.get(alpha).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&MultiIndex::zero(self.n))
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().map(MultiIndex::total).max().unwrap_or(0)
    }

    /// Evaluation at a complex point with coefficients rounded to `f64`.
    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(a, c)| a.monomial(z) * rational_to_f64(c))
            .sum()
    }

    pub fn eval_real(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(a, c)| a.monomial_real(x) * rational_to_f64(c))
            .sum()
    }
}

/// Univariate polynomial `Σ c_k t^k` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePoly {
    coeffs: BTreeMap<u32, BigRational>,
}

impl UnivariatePoly {
    pub fn from_terms<I: IntoIterator<Item = (u32, BigRational)>>(terms: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            if !c.is_zero() {
                *coeffs.entry(k).or_insert_with(BigRational::zero) += c;
            }
        }
        coeffs.retain(|_, c: &mut BigRational| !c.is_zero());
        UnivariatePoly { coeffs }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: u32) -> BigRational {
        self.coeffs.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, c)| rational_to_f64(c) * t.powi(*k as i32))
            .sum()
    }

    /// The same polynomial seen as a polynomial in one variable.
    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_terms(
            1,
            self.coeffs
                .iter()
                .map(|(k, c)| (MultiIndex(vec![*k]), c.clone())),
        )
    }
}

/// Largest `d` for which the tuple is `d`-admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdmissibilityDegree {
    /// `d`-admissible exactly for `d <= k`.
    Finite(u64),
    /// No cross terms at all, so `d`-admissible for every `d`.
    All,
}

impl AdmissibilityDegree {
    pub fn at_least(self, d: u64) -> bool {
        match self {
            AdmissibilityDegree::All => true,
            AdmissibilityDegree::Finite(k) => k >= d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub degree: AdmissibilityDegree,
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyTupleError {
    #[error("malformed input at {path}: {reason}")]
    MalformedInput { path: String, reason: String },
    #[error("negative coefficient at {path}")]
    NegativeCoefficient { path: String },
    #[error("polynomial {index} has no positive coefficient of z_{var}", var = index + 1)]
    MissingLinearTerm { index: usize },
    #[error("constant term at {path}")]
    ConstantTerm { path: String },
}

/// The defining tuple `P = (P_1, ..., P_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyTuple {
    polys: Vec<Polynomial>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    alpha: Vec<i64>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct PolyTupleDoc {
    n: usize,
    polys: Vec<PolyDoc>,
}

fn malformed(path: impl Into<String>, reason: impl Into<String>) -> PolyTupleError {
    PolyTupleError::MalformedInput {
        path: path.into(),
        reason: reason.into(),
    }
}

impl PolyTuple {
    /// Validates and builds a tuple. Polynomial `j` must have `n = polys.len()`
    /// variables, nonnegative coefficients, no constant term and a positive
    /// coefficient of `z_j`.
    pub fn new(polys: Vec<Polynomial>) -> Result<Self, PolyTupleError> {
        let n = polys.len();
        if n == 0 {
            return Err(malformed("polys", "at least one polynomial is required"));
        }
        for (j, p) in polys.iter().enumerate() {
            if p.nvars() != n {
                return Err(malformed(
                    format!("polys[{j}]"),
                    format!("expected {n} variables, found {}", p.nvars()),
                ));
            }
            for (alpha, c) in p.terms() {
                let path = format!("polys[{j}].terms[{alpha}]");
                if c.is_negative() {
                    return Err(PolyTupleError::NegativeCoefficient { path });
                }
                if alpha.is_zero() {
                    return Err(PolyTupleError::ConstantTerm { path });
                }
            }
            if !p.coeff(&MultiIndex::unit(n, j)).is_positive() {
                return Err(PolyTupleError::MissingLinearTerm { index: j });
            }
        }
        Ok(PolyTuple { polys })
    }

    /// `P_0 = (z_1, ..., z_n)`, the classical Hartogs triangle.
    pub fn hartogs(n: usize) -> Self {
        Self::family(n, &BigRational::zero())
    }

    /// `P_a`: `P_j = z_j + a z_1 ⋯ z_n`.
    pub fn family(n: usize, a: &BigRational) -> Self {
        let all = MultiIndex(vec![1; n]);
        let polys = (0..n)
            .map(|j| {
                Polynomial::from_terms(
                    n,
                    [
                        (MultiIndex::unit(n, j), BigRational::one()),
                        (all.clone(), a.clone()),
                    ],
                )
            })
            .collect();
        PolyTuple { polys }
    }

    pub fn from_json_str(s: &str) -> Result<Self, PolyTupleError> {
        let value: serde_json::Value =
            serde_json::from_str(s).map_err(|e| malformed("$", e.to_string()))?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Self, PolyTupleError> {
        let doc: PolyTupleDoc =
            serde_json::from_value(value.clone()).map_err(|e| malformed("$", e.to_string()))?;
        if doc.polys.len() != doc.n {
            return Err(malformed(
                "n",
                format!("n = {} but {} polynomials given", doc.n, doc.polys.len()),
            ));
        }
        let n = doc.n;
        let mut polys = Vec::with_capacity(n);
        for (j, pd) in doc.polys.iter().enumerate() {
            let mut p = Polynomial::zero(n);
            for (t, term) in pd.terms.iter().enumerate() {
                let path = format!("polys[{j}].terms[{t}]");
                if term.alpha.len() != n {
                    return Err(malformed(
                        format!("{path}.alpha"),
                        format!("expected {n} exponents, found {}", term.alpha.len()),
                    ));
                }
                let alpha = term
                    .alpha
                    .iter()
                    .map(|&a| u32::try_from(a))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| malformed(format!("{path}.alpha"), "exponents must be nonnegative"))?;
                let c: BigRational = term
                    .coeff
                    .trim()
                    .parse()
                    .map_err(|_| malformed(format!("{path}.coeff"), format!("not a rational: {:?}", term.coeff)))?;
                if c.is_negative() {
                    return Err(PolyTupleError::NegativeCoefficient { path });
                }
                if c.is_zero() {
                    continue;
                }
                if alpha.iter().all(|&a| a == 0) {
                    return Err(PolyTupleError::ConstantTerm { path });
                }
                p.add_term(MultiIndex(alpha), c);
            }
            polys.push(p);
        }
        Self::new(polys)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = PolyTupleDoc {
            n: self.dim(),
            polys: self
                .polys
                .iter()
                .map(|p| PolyDoc {
                    terms: p
                        .terms()
                        .map(|(a, c)| TermDoc {
                            alpha: a.0.iter().map(|&x| i64::from(x)).collect(),
                            coeff: c.to_string(),
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("polynomial document serializes")
    }

    pub fn dim(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn poly(&self, j: usize) -> &Polynomial {
        &self.polys[j]
    }

    /// `a_j`, the coefficient of `z_j` in `P_j` (0-based `j`).
    pub fn linear_coeff(&self, j: usize) -> BigRational {
        self.polys[j].coeff(&MultiIndex::unit(self.dim(), j))
    }

    /// A term of `P_j` is a cross term unless it is a pure power of `z_j`.
    fn cross_terms(&self) -> impl Iterator<Item = &MultiIndex> {
        self.polys.iter().enumerate().flat_map(|(j, p)| {
            p.terms()
                .map(|(a, _)| a)
                .filter(move |a| !matches!(a.as_pure_power(), Some((i, _)) if i == j))
        })
    }

    pub fn admissibility_degree(&self) -> Admissibility {
        match self.cross_terms().map(MultiIndex::total).min() {
            None => Admissibility {
                degree: AdmissibilityDegree::All,
                admissible: true,
            },
            Some(d) => Admissibility {
                degree: AdmissibilityDegree::Finite(d - 1),
                admissible: false,
            },
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility_degree().admissible
    }

    /// `P̃_j(w) = P_j(w ε_j)`, one univariate polynomial per coordinate.
    pub fn tilde_restrictions(&self) -> Vec<UnivariatePoly> {
        self.polys
            .iter()
            .enumerate()
            .map(|(j, p)| {
                UnivariatePoly::from_terms(p.terms().filter_map(|(a, c)| match a.as_pure_power() {
                    Some((i, k)) if i == j => Some((k, c.clone())),
                    _ => None,
                }))
            })
            .collect()
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_hartogs_document() {
        let s = r#"{"n":2,"polys":[{"terms":[{"alpha":[1,0],"coeff":"1"}]},
                                    {"terms":[{"alpha":[0,1],"coeff":"1"}]}]}"#;
        let p = PolyTuple::from_json_str(s).unwrap();
        assert_eq!(p, PolyTuple::hartogs(2));
        assert_eq!(p.linear_coeff(0), r("1"));
    }

    #[test]
    fn rejects_negative_coefficient_with_path() {
        let s = r#"{"n":2,"polys":[{"terms":[{"alpha":[1,0],"coeff":"1"}]},
                   {"terms":[{"alpha":[0,1],"coeff":"1"},{"alpha":[1,1],"coeff":"-1/2"}]}]}"#;
        assert_eq!(
            PolyTuple::from_json_str(s),
            Err(PolyTupleError::NegativeCoefficient {
                path: "polys[1].terms[1]".into()
            })
        );
    }

    #[test]
    fn rejects_missing_linear_term() {
        let s = r#"{"n":2,"polys":[{"terms":[{"alpha":[2,0],"coeff":"1"}]},
                   {"terms":[{"alpha":[0,1],"coeff":"1"}]}]}"#;
        assert_eq!(
            PolyTuple::from_json_str(s),
            Err(PolyTupleError::MissingLinearTerm { index: 0 })
        );
    }

    #[test]
    fn rejects_constant_term() {
        let s = r#"{"n":1,"polys":[{"terms":[{"alpha":[1],"coeff":"1"},{"alpha":[0],"coeff":"3"}]}]}"#;
        assert!(matches!(
            PolyTuple::from_json_str(s),
            Err(PolyTupleError::ConstantTerm { .. })
        ));
    }

    #[test]
    fn rejects_bad_shapes() {
        for s in [
            r#"{"n":2,"polys":[]}"#,
            r#"{"n":1,"polys":[{"terms":[{"alpha":[1,0],"coeff":"1"}]}]}"#,
            r#"{"n":1,"polys":[{"terms":[{"alpha":[-1],"coeff":"1"}]}]}"#,
            r#"{"n":1,"polys":[{"terms":[{"alpha":[1],"coeff":"x"}]}]}"#,
            r#"[1,2]"#,
        ] {
            assert!(
                matches!(PolyTuple::from_json_str(s), Err(PolyTupleError::MalformedInput { .. })),
                "{s}"
            );
        }
    }

    #[test]
    fn zero_terms_are_dropped() {
        let s = r#"{"n":1,"polys":[{"terms":[{"alpha":[1],"coeff":"2"},{"alpha":[3],"coeff":"0/5"}]}]}"#;
        let p = PolyTuple::from_json_str(s).unwrap();
        assert_eq!(p.poly(0).num_terms(), 1);
    }

    #[test]
    fn admissibility_of_family_is_n_minus_one() {
        for n in 2..=4 {
            let p = PolyTuple::family(n, &r("3/2"));
            let adm = p.admissibility_degree();
            assert_eq!(adm.degree, AdmissibilityDegree::Finite(n as u64 - 1));
            assert!(!adm.admissible);
        }
        let p0 = PolyTuple::hartogs(3).admissibility_degree();
        assert_eq!(p0.degree, AdmissibilityDegree::All);
        assert!(p0.admissible);
    }

    #[test]
    fn linear_cross_term_gives_degree_zero() {
        let p = PolyTuple::new(vec![
            Polynomial::from_terms(
                2,
                [
                    (MultiIndex(vec![1, 0]), r("1")),
                    (MultiIndex(vec![0, 1]), r("1")),
                ],
            ),
            Polynomial::from_terms(2, [(MultiIndex(vec![0, 1]), r("1"))]),
        ])
        .unwrap();
        assert_eq!(
            p.admissibility_degree().degree,
            AdmissibilityDegree::Finite(0)
        );
    }

    #[test]
    fn pure_powers_keep_admissibility() {
        let p = PolyTuple::new(vec![
            Polynomial::from_terms(
                2,
                [
                    (MultiIndex(vec![1, 0]), r("1")),
                    (MultiIndex(vec![2, 0]), r("1")),
                ],
            ),
            Polynomial::from_terms(2, [(MultiIndex(vec![0, 1]), r("4"))]),
        ])
        .unwrap();
        assert!(p.is_admissible());
        let tilde = p.tilde_restrictions();
        assert_eq!(tilde[0].coeff(2), r("1"));
        assert_eq!(tilde[1].coeff(1), r("4"));
    }

    #[test]
    fn tilde_drops_cross_terms() {
        let p = PolyTuple::family(2, &r("1"));
        let t = p.tilde_restrictions();
        assert_eq!(t[0], UnivariatePoly::from_terms([(1, r("1"))]));
        assert_eq!(t[1], UnivariatePoly::from_terms([(1, r("1"))]));
    }

    #[test]
    fn json_round_trip() {
        let p = PolyTuple::family(3, &r("2/7"));
        let back = PolyTuple::from_json_value(&p.to_json_value()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn multi_index_helpers() {
        assert_eq!(MultiIndex::tail(3, 1), MultiIndex(vec![0, 1, 1]));
        assert_eq!(MultiIndex::unit(3, 2), MultiIndex(vec![0, 0, 1]));
        let a = MultiIndex(vec![1, 0]);
        assert_eq!(a.checked_sub(&MultiIndex(vec![0, 1])), None);
        assert_eq!(a.to_string(), "(1,0)");
    }
}
