//! The JSON run configuration. One flat document; each command reads the
//! fields it needs and ignores the rest. Unknown keys are rejected so typos
//! surface as input errors.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::Deserialize;

use crate::report::Format;

/// A complex number written as `[re, im]` or as a bare real.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ComplexDoc {
    Pair([f64; 2]),
    Real(f64),
}

impl From<ComplexDoc> for Complex64 {
    fn from(c: ComplexDoc) -> Self {
        match c {
            ComplexDoc::Pair([re, im]) => Complex64::new(re, im),
            ComplexDoc::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

pub type MatrixDoc = Vec<Vec<ComplexDoc>>;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    /// A polynomial tuple document, `{"hartogs": n}`, or `{"family": {"n": n, "a": "1/2"}}`.
    pub poly: Option<serde_json::Value>,
    /// A single polynomial `{"n": n, "terms": [...]}` for raw reciprocal expansions.
    pub q: Option<serde_json::Value>,
    pub power: Option<u32>,
    pub method: Option<String>,
    pub assembly: Option<String>,
    pub m: Option<Vec<u32>>,
    pub window: Option<Vec<u32>>,
    pub n: Option<usize>,
    pub points: Option<Vec<Vec<ComplexDoc>>>,
    /// Number of seeded random points, used when `points` is absent.
    pub sample: Option<usize>,
    pub cutoff: Option<u32>,
    pub matrices: Option<Vec<MatrixDoc>>,
    pub lift: Option<bool>,
    pub tolerance: Option<f64>,
    pub k: Option<usize>,
    /// 1-based coordinate.
    pub j: Option<usize>,
    pub k_max: Option<usize>,
    pub n_max: Option<usize>,
    pub gamma: Option<Vec<u32>>,
    pub gamma_bound: Option<Vec<u32>>,
    pub order: Option<u32>,
    pub variant: Option<String>,
    /// Ratios `r_j` of the synthetic moment sequence `∏ r_j^{β_j}`.
    pub geometric: Option<Vec<String>>,
    pub theta: Option<Vec<f64>>,
    pub lambda: Option<Vec<[ComplexDoc; 2]>>,
    pub targets: Option<Vec<ComplexDoc>>,
    pub a1: Option<MatrixDoc>,
    pub a2: Option<MatrixDoc>,
    pub kind: Option<String>,
    pub max_degree: Option<u32>,
    pub nodes: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_json_str(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}
