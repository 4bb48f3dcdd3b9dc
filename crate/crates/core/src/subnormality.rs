//! Moment sequences of the multiplication tuple and exact complete
//! monotonicity tests on finite windows.
//!
//! For a base point `γ`, the moment sequence is
//! `s(β) = 1 / A_{P,m}(γ + Σ_j β_j ε^{(j)})`; for admissible tuples this
//! factors as `∏_j 1 / A_{P̃_j,m_j}(γ_j + Σ_{l<=j} β_l)`. A sequence is tested
//! through `(-1)^{|k|} Δ^k s̃(β) >= 0` with `s̃(β) = c^{-|β|} s(β)`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{coeff_function, CoeffError};
use crate::lattice::LatticeWindow;
use crate::polytuple::{MultiIndex, PolyTuple};
use crate::shiftops::TildeTables;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubnormalityError {
    #[error("window bounds {bounds} cannot host differences of order {order}")]
    WindowTooSmall { bounds: MultiIndex, order: u32 },
    #[error("the tuple is not admissible")]
    NotAdmissible,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("moment sequences must be positive")]
    NonPositive,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentVariant {
    General,
    Admissible,
}

/// A positive rational sequence on a window of `Z^n_+` with a scale `c > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSequence {
    window: LatticeWindow,
    scale: BigRational,
    values: Vec<BigRational>,
}

impl MomentSequence {
    pub fn from_fn<F>(window: LatticeWindow, scale: BigRational, f: F) -> Result<Self, SubnormalityError>
    where
        F: Fn(&MultiIndex) -> BigRational,
    {
        let values: Vec<BigRational> = window.iter().map(|b| f(&b)).collect();
        if !scale.is_positive() || values.iter().any(|v| !v.is_positive()) {
            return Err(SubnormalityError::NonPositive);
        }
        Ok(MomentSequence {
            window,
            scale,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn get(&self, beta: &MultiIndex) -> Option<&BigRational> {
        self.window.index_of(beta).map(|i| &self.values[i])
    }

    pub fn with_scale(mut self, scale: BigRational) -> Result<Self, SubnormalityError> {
        if !scale.is_positive() {
            return Err(SubnormalityError::NonPositive);
        }
        self.scale = scale;
        Ok(self)
    }

    /// `s̃(β) = c^{-|β|} s(β)`.
    fn scaled(&self) -> Vec<BigRational> {
        let inv = BigRational::one() / &self.scale;
        self.window
            .iter()
            .zip(&self.values)
            .map(|(b, v)| v * num_traits::pow(inv.clone(), b.total() as usize))
            .collect()
    }
}

/// `index_k = γ_k + Σ_{l<=k} β_l`.
fn moment_index(gamma: &MultiIndex, beta: &MultiIndex) -> MultiIndex {
    let mut run = 0;
    MultiIndex(
        gamma
            .0
            .iter()
            .zip(&beta.0)
            .map(|(g, b)| {
                run += b;
                g + run
            })
            .collect(),
    )
}

pub fn moment_sequence(
    p: &PolyTuple,
    m: &[u32],
    gamma: &MultiIndex,
    variant: MomentVariant,
    window: &LatticeWindow,
) -> Result<MomentSequence, SubnormalityError> {
    let n = p.dim();
    for found in [gamma.dim(), window.dim(), m.len()] {
        if found != n {
            return Err(SubnormalityError::DimensionMismatch { expected: n, found });
        }
    }
    let top = moment_index(gamma, window.bounds());
    let one = BigRational::one();
    match variant {
        MomentVariant::General => {
            let table = coeff_function(p, m, &LatticeWindow::new(top).expect("n >= 1"))?;
            MomentSequence::from_fn(window.clone(), one.clone(), |b| {
                let a = table.get(&moment_index(gamma, b)).expect("inside the table");
                &one / a
            })
        }
        MomentVariant::Admissible => {
            if !p.is_admissible() {
                return Err(SubnormalityError::NotAdmissible);
            }
            let len = top.0.iter().max().map_or(1, |&x| x as usize + 1);
            let tilde = TildeTables::new(p, m, len);
            MomentSequence::from_fn(window.clone(), one.clone(), |b| {
                let idx = moment_index(gamma, b);
                idx.0
                    .iter()
                    .enumerate()
                    .fold(one.clone(), |acc, (j, &x)| acc / tilde.get(j, x as usize))
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<MultiIndex>,
    pub beta: MultiIndex,
    pub k: MultiIndex,
    /// `(-1)^{|k|} Δ^k s̃(β)`, exact.
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub verdict: Verdict,
    pub order: u32,
    pub window: MultiIndex,
    /// Sorted; the first entry is the lexicographically first `(β, k)`.
    pub witnesses: Vec<Witness>,
}

/// Maximum number of witnesses kept in a report.
pub const MAX_WITNESSES: usize = 16;

/// All `k` with `|k| <= order`, in lexicographic order.
fn orders_up_to(n: usize, order: u32) -> Vec<MultiIndex> {
    let w = LatticeWindow::cube(n, order).expect("n >= 1");
    w.iter().filter(|k| k.total() <= u64::from(order)).collect()
}

/// Checks `(-1)^{|k|} Δ^k s̃(β) >= 0` for every `|k| <= order` and every `β`
/// with `β + k` inside the window.
pub fn complete_monotonicity_check(
    seq: &MomentSequence,
    order: u32,
) -> Result<MonotonicityReport, SubnormalityError> {
    let n = seq.dim();
    let bounds = seq.window().bounds().clone();
    if bounds.0.iter().any(|&b| b < order) {
        return Err(SubnormalityError::WindowTooSmall { bounds, order });
    }
    // U_k(β) = U_{k-ε_j}(β) - U_{k-ε_j}(β+ε_j), each on the window shrunk by k.
    let mut tables: BTreeMap<MultiIndex, (LatticeWindow, Vec<BigRational>)> = BTreeMap::new();
    let mut witnesses = Vec::new();
    for k in orders_up_to(n, order) {
        let sub = LatticeWindow::new(MultiIndex(
            bounds.0.iter().zip(&k.0).map(|(b, x)| b - x).collect(),
        ))
        .expect("n >= 1");
        let values = if k.is_zero() {
            seq.scaled()
        } else {
            let j = k.0.iter().position(|&x| x > 0).expect("nonzero");
            let prev = k.checked_sub(&MultiIndex::unit(n, j)).expect("k_j > 0");
            let (pw, pv) = &tables[&prev];
            let e = MultiIndex::unit(n, j);
            sub.iter()
                .map(|b| {
                    let here = &pv[pw.index_of(&b).expect("inside")];
                    let next = &pv[pw.index_of(&b.add(&e)).expect("inside")];
                    here - next
                })
                .collect()
        };
        for (b, v) in sub.iter().zip(&values) {
            if v.is_negative() {
                witnesses.push(Witness {
                    gamma: None,
                    beta: b,
                    k: k.clone(),
                    value: v.to_string(),
                });
            }
        }
        tables.insert(k, (sub, values));
    }
    witnesses.sort();
    witnesses.truncate(MAX_WITNESSES);
    Ok(MonotonicityReport {
        verdict: if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail },
        order,
        window: bounds,
        witnesses,
    })
}

/// Runs the admissible moment test for `P_0` at every base point `γ <= gamma_bound`.
pub fn hartogs_certify(
    m: &[u32],
    gamma_bound: &MultiIndex,
    order: u32,
) -> Result<MonotonicityReport, SubnormalityError> {
    let n = m.len();
    if gamma_bound.dim() != n {
        return Err(SubnormalityError::DimensionMismatch {
            expected: n,
            found: gamma_bound.dim(),
        });
    }
    let p0 = PolyTuple::hartogs(n);
    let beta_window = LatticeWindow::cube(n, order).expect("n >= 1");
    let mut witnesses = Vec::new();
    for gamma in LatticeWindow::new(gamma_bound.clone()).expect("n >= 1").iter() {
        let seq = moment_sequence(&p0, m, &gamma, MomentVariant::Admissible, &beta_window)?;
        let rep = complete_monotonicity_check(&seq, order)?;
        witnesses.extend(rep.witnesses.into_iter().map(|w| Witness {
            gamma: Some(gamma.clone()),
            ..w
        }));
    }
    witnesses.sort();
    witnesses.truncate(MAX_WITNESSES);
    Ok(MonotonicityReport {
        verdict: if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail },
        order,
        window: gamma_bound.clone(),
        witnesses,
    })
}
