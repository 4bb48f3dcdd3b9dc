use std::fmt::Display;

use hartogs::coeff::{
    coeff_function_with, reciprocal_power_coeffs, Assembly, CoeffError, CoeffTable, ReciprocalMethod,
};
use hartogs::geometry::{phi_inverse, polydisc_contains, polydisc_radii, triangle_contains};
use hartogs::hereditary::{
    hereditary_eval, min_eigenvalue, op_norm, ordering_check, pick_verify, reciprocal_kernel_polynomial,
    toral_lift, triangle_defect_classify, CMatrix, DefectClass, HereditaryError, MatrixTuple, PSD_TOL,
};
use hartogs::kernel::{
    gram_psd_check, kernel_eval, kernel_series_eval, KernelContext, KernelError,
};
use hartogs::polytuple::AdmissibilityDegree;
use hartogs::quadrature::beta_integral_check;
use hartogs::shiftops::{
    circularity_check, det_commutator_and_trace, essential_normality_probe,
    factorization_and_commutation_probe, hyponormality_diagonal, norm_bounds, polydisc_intertwining_check,
    spectral_radius_estimate, weight_rows, ShiftError, WeightTable,
};
use hartogs::subnormality::{
    complete_monotonicity_check, hartogs_certify, moment_sequence, MomentSequence, MomentVariant,
    MonotonicityReport, SubnormalityError, Verdict,
};
use hartogs::{LatticeWindow, MultiIndex, PolyTuple, Polynomial};
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::{ComplexDoc, MatrixDoc, RunConfig};
use crate::report::{Report, Status, Table};
use crate::CliError;

type Res<T> = Result<T, CliError>;

const DEFAULT_K_MAX: usize = 50;
const DEFAULT_N_MAX: usize = 200;
const SAMPLE_ATTEMPTS: usize = 100_000;

fn invalid(msg: impl Display) -> CliError {
    CliError::InvalidConfig(msg.to_string())
}

fn require<'a, T>(v: &'a Option<T>, field: &str) -> Res<&'a T> {
    v.as_ref().ok_or_else(|| invalid(format!("missing field `{field}`")))
}

impl From<CoeffError> for CliError {
    fn from(e: CoeffError) -> Self {
        match e {
            CoeffError::NotAdmissible => CliError::Rejected(e.to_string()),
            _ => invalid(e),
        }
    }
}

impl From<ShiftError> for CliError {
    fn from(e: ShiftError) -> Self {
        match e {
            ShiftError::NotAdmissible | ShiftError::NotNAdmissible => CliError::Rejected(e.to_string()),
            ShiftError::Coeff(c) => c.into(),
            _ => invalid(e),
        }
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::OutsideDomain { .. } => CliError::Rejected(e.to_string()),
            KernelError::Coeff(c) => c.into(),
            _ => invalid(e),
        }
    }
}

impl From<SubnormalityError> for CliError {
    fn from(e: SubnormalityError) -> Self {
        match e {
            SubnormalityError::NotAdmissible => CliError::Rejected(e.to_string()),
            SubnormalityError::Coeff(c) => c.into(),
            _ => invalid(e),
        }
    }
}

impl From<HereditaryError> for CliError {
    fn from(e: HereditaryError) -> Self {
        match e {
            HereditaryError::NotHereditaryPolynomial { .. } | HereditaryError::PointOutsideDomain { .. } => {
                CliError::Rejected(e.to_string())
            }
            _ => invalid(e),
        }
    }
}

fn parse_rational(s: &str, field: &str) -> Res<BigRational> {
    s.trim()
        .parse()
        .map_err(|_| invalid(format!("`{field}`: not a rational: {s:?}")))
}

fn poly(cfg: &RunConfig) -> Res<PolyTuple> {
    let v = require(&cfg.poly, "poly")?;
    if let Some(n) = v.get("hartogs") {
        let n = n
            .as_u64()
            .filter(|&n| n >= 1)
            .ok_or_else(|| invalid("`poly.hartogs` must be a positive integer"))?;
        return Ok(PolyTuple::hartogs(n as usize));
    }
    if let Some(f) = v.get("family") {
        #[derive(Deserialize)]
        struct Family {
            n: usize,
            a: String,
        }
        let f: Family = serde_json::from_value(f.clone()).map_err(|e| invalid(format!("`poly.family`: {e}")))?;
        if f.n == 0 {
            return Err(invalid("`poly.family.n` must be positive"));
        }
        let a = parse_rational(&f.a, "poly.family.a")?;
        if a < BigRational::from_integer(0.into()) {
            return Err(invalid("`poly.family.a` must be nonnegative"));
        }
        return Ok(PolyTuple::family(f.n, &a));
    }
    PolyTuple::from_json_value(v).map_err(invalid)
}

fn raw_polynomial(v: &Value) -> Res<Polynomial> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Term {
        alpha: Vec<u32>,
        coeff: String,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Doc {
        n: usize,
        terms: Vec<Term>,
    }
    let doc: Doc = serde_json::from_value(v.clone()).map_err(|e| invalid(format!("`q`: {e}")))?;
    let mut q = Polynomial::zero(doc.n);
    for (i, t) in doc.terms.into_iter().enumerate() {
        if t.alpha.len() != doc.n {
            return Err(invalid(format!("`q.terms[{i}].alpha`: expected {} exponents", doc.n)));
        }
        let c = parse_rational(&t.coeff, "q.terms.coeff")?;
        if c < BigRational::from_integer(0.into()) {
            return Err(invalid(format!("`q.terms[{i}].coeff` is negative")));
        }
        q.add_term(MultiIndex(t.alpha), c);
    }
    Ok(q)
}

fn multiplicity(cfg: &RunConfig, n: usize) -> Res<Vec<u32>> {
    let m = cfg.m.clone().unwrap_or_else(|| vec![1; n]);
    if m.len() != n {
        return Err(invalid(format!("`m` has {} entries, expected {n}", m.len())));
    }
    if m.contains(&0) {
        return Err(invalid("`m` entries must be positive"));
    }
    Ok(m)
}

fn window_of(bounds: &[u32], n: usize, field: &str) -> Res<LatticeWindow> {
    if bounds.len() != n {
        return Err(invalid(format!("`{field}` has {} entries, expected {n}", bounds.len())));
    }
    LatticeWindow::new(MultiIndex(bounds.to_vec())).map_err(invalid)
}

fn window(cfg: &RunConfig, n: usize) -> Res<LatticeWindow> {
    window_of(require(&cfg.window, "window")?, n, "window")
}

fn tolerance(cfg: &RunConfig, default: f64) -> Res<f64> {
    match cfg.tolerance {
        None => Ok(default),
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(invalid(format!("`tolerance` must be positive, got {t}"))),
    }
}

fn coordinate(j: usize, n: usize) -> Res<usize> {
    if j == 0 || j > n {
        return Err(invalid(format!("`j` must lie in 1..={n}")));
    }
    Ok(j - 1)
}

fn complex_vec(v: &[ComplexDoc]) -> Vec<Complex64> {
    v.iter().map(|&c| c.into()).collect()
}

fn matrix(doc: &MatrixDoc, field: &str) -> Res<CMatrix> {
    let rows = doc.len();
    let cols = doc.first().map_or(0, Vec::len);
    if rows == 0 || doc.iter().any(|r| r.len() != cols) {
        return Err(invalid(format!("`{field}` must be a nonempty rectangular matrix")));
    }
    Ok(DMatrix::from_fn(rows, cols, |i, j| doc[i][j].into()))
}

/// Explicit `points`, or `sample` seeded points drawn area-uniformly in `φ`
/// coordinates and kept when they fall inside the triangle.
fn points(cfg: &RunConfig, p: &PolyTuple, seed: u64) -> Res<Vec<Vec<Complex64>>> {
    let n = p.dim();
    if let Some(pts) = &cfg.points {
        for (i, z) in pts.iter().enumerate() {
            if z.len() != n {
                return Err(invalid(format!("`points[{i}]` has {} coordinates, expected {n}", z.len())));
            }
        }
        return Ok(pts.iter().map(|z| complex_vec(z)).collect());
    }
    let count = *require(&cfg.sample, "points` or `sample")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..SAMPLE_ATTEMPTS {
        if out.len() == count {
            break;
        }
        let w: Vec<Complex64> = (0..n)
            .map(|_| {
                let r: f64 = rng.gen::<f64>().sqrt();
                Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        let z = phi_inverse(&w);
        if triangle_contains(p, &z).unwrap_or(false) {
            out.push(z);
        }
    }
    if out.len() < count {
        return Err(CliError::Rejected("could not sample enough points inside the triangle".into()));
    }
    Ok(out)
}

fn alpha_cols(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("alpha_{j}")).collect()
}

fn alpha_cells(a: &MultiIndex) -> Vec<String> {
    a.0.iter().map(ToString::to_string).collect()
}

fn ok(command: &str, summary: Value, table: Table) -> Report {
    Report {
        command: command.to_string(),
        status: Status::Success,
        summary,
        table,
    }
}

fn verdict(pass: bool) -> Status {
    if pass {
        Status::Success
    } else {
        Status::Negative
    }
}

pub fn validate(cfg: &RunConfig) -> Res<Report> {
    let p = poly(cfg)?;
    let adm = p.admissibility_degree();
    let degree = match adm.degree {
        AdmissibilityDegree::All => json!("all"),
        AdmissibilityDegree::Finite(d) => json!(d),
    };
    let mut table = Table::new(["j", "linear_coeff", "degree", "terms"]);
    for j in 0..p.dim() {
        table.push(vec![
            (j + 1).to_string(),
            p.linear_coeff(j).to_string(),
            p.poly(j).degree().to_string(),
            p.poly(j).num_terms().to_string(),
        ]);
    }
    let summary = json!({
        "n": p.dim(),
        "admissibility_degree": degree,
        "admissible": adm.admissible,
        "poly": p.to_json_value(),
    });
    Ok(ok("validate", summary, table))
}

fn table_rows(t: &CoeffTable) -> Table {
    let n = t.window().dim();
    let mut table = Table::new(alpha_cols(n).into_iter().chain(["value".to_string()]));
    for (a, v) in t.iter() {
        let mut row = alpha_cells(&a);
        row.push(v.to_string());
        table.push(row);
    }
    table
}

pub fn coeffs(cfg: &RunConfig) -> Res<Report> {
    if let Some(qv) = &cfg.q {
        let q = raw_polynomial(qv)?;
        let w = window(cfg, q.nvars())?;
        let method = match cfg.method.as_deref() {
            None | Some("recursion") => ReciprocalMethod::Recursion,
            Some("binomial") => ReciprocalMethod::BinomialSeries,
            Some(o) => return Err(invalid(format!("unknown method {o:?}"))),
        };
        let k = cfg.power.unwrap_or(1);
        let t = reciprocal_power_coeffs(&q, k, &w, method)?;
        let summary = json!({ "bounds": w.bounds(), "power": k, "cells": w.len() });
        return Ok(ok("coeffs", summary, table_rows(&t)));
    }
    let p = poly(cfg)?;
    let m = multiplicity(cfg, p.dim())?;
    let w = window(cfg, p.dim())?;
    let assembly = match cfg.assembly.as_deref() {
        None | Some("auto") => Assembly::Auto,
        Some("convolution") => Assembly::Convolution,
        Some("tilde") => Assembly::TildeProduct,
        Some(o) => return Err(invalid(format!("unknown assembly {o:?}"))),
    };
    let t = coeff_function_with(&p, &m, &w, assembly)?;
    let summary = json!({ "bounds": w.bounds(), "m": m, "cells": w.len() });
    Ok(ok("coeffs", summary, table_rows(&t)))
}

pub fn domain(cfg: &RunConfig, seed: u64) -> Res<Report> {
    let p = poly(cfg)?;
    let n = p.dim();
    let pts: Vec<Vec<Complex64>> = match &cfg.points {
        Some(_) => points(cfg, &p, seed)?,
        None => return Err(invalid("missing field `points`")),
    };
    let radii = p.is_admissible().then(|| polydisc_radii(&p));
    let mut header = vec!["index".to_string()];
    for j in 1..=n {
        header.push(format!("z{j}_re"));
        header.push(format!("z{j}_im"));
    }
    header.push("inside".into());
    header.push("in_polydisc".into());
    let mut table = Table::new(header);
    let mut inside_count = 0;
    for (i, z) in pts.iter().enumerate() {
        let inside = triangle_contains(&p, z).unwrap_or(false);
        inside_count += usize::from(inside);
        let in_polydisc = match (&radii, hartogs::geometry::phi(z)) {
            (Some(r), Ok(w)) => polydisc_contains(r, &w).to_string(),
            (Some(_), Err(_)) => "false".into(),
            (None, _) => String::new(),
        };
        let mut row = vec![i.to_string()];
        for c in z {
            row.push(c.re.to_string());
            row.push(c.im.to_string());
        }
        row.push(inside.to_string());
        row.push(in_polydisc);
        table.push(row);
    }
    let summary = json!({ "points": pts.len(), "inside": inside_count, "polydisc_radii": radii });
    Ok(ok("domain", summary, table))
}

pub fn kernel(cfg: &RunConfig, seed: u64) -> Res<Report> {
    let p = poly(cfg)?;
    let m = multiplicity(cfg, p.dim())?;
    let pts = points(cfg, &p, seed)?;
    let ctx = match cfg.cutoff {
        Some(c) => KernelContext::with_cutoff(p.clone(), m.clone(), c)?,
        None => KernelContext::new(p.clone(), m.clone())?,
    };
    let mut header: Vec<String> = ["i", "j", "re", "im"].map(String::from).to_vec();
    if cfg.cutoff.is_some() {
        header.extend(["series_re", "series_im", "rel_err"].map(String::from));
    }
    let mut table = Table::new(header);
    let mut worst = 0.0f64;
    for (i, z) in pts.iter().enumerate() {
        for (j, w) in pts.iter().enumerate() {
            let k = kernel_eval(&ctx, z, w)?;
            let mut row = vec![i.to_string(), j.to_string(), k.re.to_string(), k.im.to_string()];
            if let Some(c) = cfg.cutoff {
                let s = kernel_series_eval(&ctx, z, w, c)?;
                let rel = (s - k).norm() / k.norm();
                worst = worst.max(rel);
                row.extend([s.re.to_string(), s.im.to_string(), rel.to_string()]);
            }
            table.push(row);
        }
    }
    let gram = gram_psd_check(&ctx, &pts)?;
    let mut summary = json!({
        "points": pts.len(),
        "m": m,
        "gram_min_eigenvalue": gram.min_eigenvalue,
        "gram_max_diagonal": gram.max_diagonal,
        "gram_psd": gram.positive,
    });
    if let Some(c) = cfg.cutoff {
        summary["cutoff"] = json!(c);
        summary["max_rel_err"] = json!(worst);
    }
    let mut r = ok("kernel", summary, table);
    r.status = verdict(gram.positive);
    Ok(r)
}

pub fn weights(cfg: &RunConfig) -> Res<Report> {
    let p = poly(cfg)?;
    let n = p.dim();
    let m = multiplicity(cfg, n)?;
    let w = WeightTable::new(&p, &m, &window(cfg, n)?)?;
    let mut table = Table::new(
        alpha_cols(n)
            .into_iter()
            .chain(["j", "omega", "sigma", "hypo_diag"].map(String::from)),
    );
    for r in weight_rows(&w)? {
        let mut row = alpha_cells(&r.alpha);
        row.extend([
            (r.j + 1).to_string(),
            r.omega.to_string(),
            r.sigma.to_string(),
            r.hypo_diag.to_string(),
        ]);
        table.push(row);
    }
    let bounds = (0..n).map(|j| norm_bounds(&p, &m, j)).collect::<Result<Vec<_>, _>>()?;
    let hypo = (0..n)
        .map(|j| hyponormality_diagonal(&w, j).map(|h| h.nonnegative))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = json!({ "m": m, "norm_bounds": bounds, "hyponormal_diagonal": hypo });
    Ok(ok("weights", summary, table))
}

pub fn probes(cfg: &RunConfig, seed: u64) -> Res<Report> {
    let p = poly(cfg)?;
    let n = p.dim();
    let m = multiplicity(cfg, n)?;
    let win = window(cfg, n)?;
    let w = WeightTable::new(&p, &m, &win)?;
    let mut table = Table::new(["probe", "value"]);
    let fact = factorization_and_commutation_probe(&p, &m, &win)?;
    table.push(vec!["factorization_holds".into(), fact.factorization_holds.to_string()]);
    table.push(vec![
        "doubly_commuting".into(),
        fact.commutator_witness.is_none().to_string(),
    ]);
    table.push(vec![
        "polydisc_commutators_vanish".into(),
        fact.polydisc_commutators_vanish.to_string(),
    ]);
    for j in 0..n {
        let h = hyponormality_diagonal(&w, j)?;
        table.push(vec![format!("hyponormal_diagonal_{}", j + 1), h.nonnegative.to_string()]);
    }
    let mut ess = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let e = essential_normality_probe(&w, i)?;
        table.push(vec![format!("essential_infimum_{}", i + 1), e.infimum.to_string()]);
        ess.push(e);
    }
    let theta = match &cfg.theta {
        Some(t) if t.len() == n => t.clone(),
        Some(t) => return Err(invalid(format!("`theta` has {} entries, expected {n}", t.len()))),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect()
        }
    };
    let circ = circularity_check(&w, &theta)?;
    table.push(vec!["circularity_deviation".into(), circ.to_string()]);
    let intertwining = if p.is_admissible() {
        let r = polydisc_intertwining_check(&p, &m, &win)?;
        table.push(vec!["intertwining_holds".into(), r.holds.to_string()]);
        Some(r)
    } else {
        None
    };
    let summary = json!({
        "m": m,
        "factorization": fact,
        "essential_normality": ess,
        "theta": theta,
        "circularity_deviation": circ,
        "intertwining": intertwining,
    });
    Ok(ok("probes", summary, table))
}

pub fn dettrace(cfg: &RunConfig) -> Res<Report> {
    let p = poly(cfg)?;
    let m = multiplicity(cfg, p.dim())?;
    let k = *require(&cfg.k, "k")?;
    let r = det_commutator_and_trace(&p, &m, k)?;
    let mut table = Table::new([
        "k",
        "positive",
        "diagonal_nonnegative",
        "partial_trace",
        "partial_trace_exact",
        "limit_trace_estimate",
    ]);
    table.push(vec![
        r.k.to_string(),
        r.positive.to_string(),
        r.diagonal_nonnegative.to_string(),
        r.partial_trace.to_string(),
        r.partial_trace_exact.clone(),
        r.limit_trace_estimate.to_string(),
    ]);
    let mut rep = ok("dettrace", serde_json::to_value(&r).expect("serializes"), table);
    rep.status = verdict(r.positive);
    Ok(rep)
}

pub fn radius(cfg: &RunConfig) -> Res<Report> {
    let p = poly(cfg)?;
    let n = p.dim();
    let m = multiplicity(cfg, n)?;
    let coords: Vec<usize> = match cfg.j {
        Some(j) => vec![coordinate(j, n)?],
        None => (0..n).collect(),
    };
    let k_max = cfg.k_max.unwrap_or(DEFAULT_K_MAX);
    let n_max = cfg.n_max.unwrap_or(DEFAULT_N_MAX);
    if n_max == 0 {
        return Err(invalid("`n_max` must be positive"));
    }
    let radii = polydisc_radii(&p);
    let mut table = Table::new(["j", "estimate", "upper_bound", "within_bound", "polydisc_radius"]);
    let mut all_within = true;
    let mut reports = Vec::new();
    for j in coords {
        let r = spectral_radius_estimate(&p, &m, j, k_max, n_max)?;
        all_within &= r.within_bound;
        table.push(vec![
            (j + 1).to_string(),
            r.estimate.to_string(),
            r.upper_bound.to_string(),
            r.within_bound.to_string(),
            radii[j].to_string(),
        ]);
        reports.push(json!({
            "j": j + 1,
            "estimate": r.estimate,
            "upper_bound": r.upper_bound,
            "within_bound": r.within_bound,
            "polydisc_radius": radii[j],
        }));
    }
    let summary = json!({ "m": m, "k_max": k_max, "n_max": n_max, "radii": reports });
    let mut rep = ok("radius", summary, table);
    rep.status = verdict(all_within);
    Ok(rep)
}

fn monotonicity_report(rep: MonotonicityReport) -> Report {
    let mut table = Table::new(["gamma", "beta", "k", "value"]);
    for w in &rep.witnesses {
        table.push(vec![
            w.gamma.as_ref().map(ToString::to_string).unwrap_or_default(),
            w.beta.to_string(),
            w.k.to_string(),
            w.value.clone(),
        ]);
    }
    let pass = rep.verdict == Verdict::Pass;
    let mut r = ok("subnormality", serde_json::to_value(&rep).expect("serializes"), table);
    r.status = verdict(pass);
    r
}

pub fn subnormality(cfg: &RunConfig) -> Res<Report> {
    let order = *require(&cfg.order, "order")?;
    if let Some(ratios) = &cfg.geometric {
        let r = ratios
            .iter()
            .map(|s| parse_rational(s, "geometric"))
            .collect::<Res<Vec<_>>>()?;
        let n = r.len();
        let win = match &cfg.window {
            Some(b) => window_of(b, n, "window")?,
            None => LatticeWindow::cube(n, order).map_err(invalid)?,
        };
        let one = BigRational::from_integer(1.into());
        let seq = MomentSequence::from_fn(win, one.clone(), |b| {
            b.0.iter()
                .zip(&r)
                .fold(one.clone(), |acc, (&e, rj)| acc * rj.pow(e as i32))
        })?;
        return Ok(monotonicity_report(complete_monotonicity_check(&seq, order)?));
    }
    match cfg.variant.as_deref().unwrap_or("hartogs") {
        "hartogs" => {
            let m = require(&cfg.m, "m")?;
            if m.is_empty() || m.contains(&0) {
                return Err(invalid("`m` entries must be positive"));
            }
            let g = cfg.gamma_bound.clone().unwrap_or_else(|| vec![0; m.len()]);
            Ok(monotonicity_report(hartogs_certify(m, &MultiIndex(g), order)?))
        }
        v @ ("general" | "admissible") => {
            let p = poly(cfg)?;
            let n = p.dim();
            let m = multiplicity(cfg, n)?;
            let gamma = MultiIndex(cfg.gamma.clone().unwrap_or_else(|| vec![0; n]));
            let win = match &cfg.window {
                Some(b) => window_of(b, n, "window")?,
                None => LatticeWindow::cube(n, order).map_err(invalid)?,
            };
            let variant = if v == "general" {
                MomentVariant::General
            } else {
                MomentVariant::Admissible
            };
            let seq = moment_sequence(&p, &m, &gamma, variant, &win)?;
            Ok(monotonicity_report(complete_monotonicity_check(&seq, order)?))
        }
        other => Err(invalid(format!("unknown variant {other:?}"))),
    }
}

pub fn hereditary(cfg: &RunConfig) -> Res<Report> {
    let docs = require(&cfg.matrices, "matrices")?;
    let mats = docs
        .iter()
        .enumerate()
        .map(|(i, d)| matrix(d, &format!("matrices[{i}]")))
        .collect::<Res<Vec<_>>>()?;
    let mut t = MatrixTuple::new(mats)?;
    if cfg.lift.unwrap_or(false) {
        t = toral_lift(&t)?;
    }
    let tol = tolerance(cfg, PSD_TOL)?;
    let mut table = Table::new(["quantity", "value"]);
    let (class, summary) = if cfg.poly.is_some() {
        let p = poly(cfg)?;
        if p.dim() != t.len() {
            return Err(invalid(format!("`poly` has n = {}, but {} matrices given", p.dim(), t.len())));
        }
        let m = multiplicity(cfg, p.dim())?;
        let hp = reciprocal_kernel_polynomial(&p, &m)?;
        let v = hereditary_eval(&hp, &t);
        let norm = op_norm(&v.value);
        let min = min_eigenvalue(&v.value);
        let tn = t.norm();
        let class = if norm <= tol * f64::max(1.0, tn * tn) {
            DefectClass::Isometry
        } else if min >= -tol * norm {
            DefectClass::Contraction
        } else {
            DefectClass::Neither
        };
        table.push(vec!["defect_norm".into(), norm.to_string()]);
        table.push(vec!["min_eigenvalue".into(), min.to_string()]);
        table.push(vec!["asymmetry".into(), v.asymmetry.to_string()]);
        let s = json!({
            "class": class,
            "defect_norm": norm,
            "min_eigenvalue": min,
            "asymmetry": v.asymmetry,
            "terms": hp.num_terms(),
        });
        (class, s)
    } else {
        let d = triangle_defect_classify(&t, tol);
        let ord = ordering_check(&t, tol);
        table.push(vec!["defect_norm".into(), d.defect_norm.to_string()]);
        table.push(vec!["min_eigenvalue".into(), d.min_eigenvalue.to_string()]);
        table.push(vec!["ordering_chain".into(), ord.chain_holds.to_string()]);
        let s = json!({
            "class": d.class,
            "defect_norm": d.defect_norm,
            "min_eigenvalue": d.min_eigenvalue,
            "ordering": ord,
        });
        (d.class, s)
    };
    table.push(vec![
        "class".into(),
        serde_json::to_value(class)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default(),
    ]);
    let mut r = ok("hereditary", summary, table);
    r.status = verdict(class != DefectClass::Neither);
    Ok(r)
}

pub fn pick(cfg: &RunConfig) -> Res<Report> {
    let lambda: Vec<[Complex64; 2]> = require(&cfg.lambda, "lambda")?
        .iter()
        .map(|l| [l[0].into(), l[1].into()])
        .collect();
    let z = complex_vec(require(&cfg.targets, "targets")?);
    let a1 = matrix(require(&cfg.a1, "a1")?, "a1")?;
    let a2 = matrix(require(&cfg.a2, "a2")?, "a2")?;
    let valid = pick_verify(&lambda, &z, &a1, &a2)?;
    let mut table = Table::new(["points", "certificate_valid"]);
    table.push(vec![lambda.len().to_string(), valid.to_string()]);
    let mut r = ok("pick-verify", json!({ "points": lambda.len(), "certificate_valid": valid }), table);
    r.status = verdict(valid);
    Ok(r)
}

fn indices_up_to(n: usize, d: u32) -> Res<Vec<MultiIndex>> {
    Ok(LatticeWindow::cube(n, d)
        .map_err(invalid)?
        .iter()
        .filter(|a| a.total() <= u64::from(d))
        .collect())
}

pub fn quadrature(cfg: &RunConfig) -> Res<Report> {
    let kind = cfg.kind.as_deref().unwrap_or("beta");
    let (rows, tol, header) = match kind {
        "beta" => {
            let d = cfg.max_degree.unwrap_or(5);
            let nodes = cfg.nodes.unwrap_or(12);
            let mut rows = Vec::new();
            for l in 0..=d {
                for k in 0..=d {
                    let c = beta_integral_check(l, k, nodes);
                    rows.push((vec![l.to_string(), k.to_string()], c.numeric, c.closed, c.abs_err));
                }
            }
            (rows, tolerance(cfg, 1e-6)?, vec!["l".to_string(), "k".to_string()])
        }
        "hardy" => {
            let n = cfg.n.unwrap_or(2);
            if n == 0 {
                return Err(invalid("`n` must be positive"));
            }
            let d = cfg.max_degree.unwrap_or(4);
            let rows = indices_up_to(n, d)?
                .into_iter()
                .map(|a| {
                    let v = hartogs::kernel::hardy_norm_check(n, &a, 1.0);
                    (alpha_cells(&a), v, 1.0, (v - 1.0).abs())
                })
                .collect();
            (rows, tolerance(cfg, 1e-6)?, alpha_cols(n))
        }
        "bergman" => {
            let m = require(&cfg.m, "m")?;
            let d = cfg.max_degree.unwrap_or(3);
            let mut rows = Vec::new();
            for a in indices_up_to(m.len().max(1), d)? {
                let v = hartogs::kernel::bergman_norm_check(m, &a)?;
                rows.push((alpha_cells(&a), v, 1.0, (v - 1.0).abs()));
            }
            (rows, tolerance(cfg, 1e-3)?, alpha_cols(m.len()))
        }
        other => return Err(invalid(format!("unknown quadrature kind {other:?}"))),
    };
    let mut table = Table::new(header.into_iter().chain(["numeric", "expected", "abs_err"].map(String::from)));
    let mut worst = 0.0f64;
    for (mut cells, num, exp, err) in rows {
        worst = worst.max(err);
        cells.extend([num.to_string(), exp.to_string(), err.to_string()]);
        table.push(cells);
    }
    let pass = worst <= tol;
    let mut r = ok(
        "quadrature",
        json!({ "kind": kind, "max_abs_err": worst, "tolerance": tol, "pass": pass }),
        table,
    );
    r.status = verdict(pass);
    Ok(r)
}
