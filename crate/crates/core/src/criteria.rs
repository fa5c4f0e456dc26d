//! Grid estimators for decrease and boundedness criteria: sups over sampled
//! sublevel sets, boundary products with `|theta'|`, Leibniz terms, zero
//! decay profiles and the covering of `Omega(B, eps)` by pseudohyperbolic
//! disks.
//!
//! Every value is a finite-grid estimate with a witness.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissible::top_order;
use crate::disk::DiskPoint;
use crate::error::{usage, Error, Result};
use crate::expr::AnalyticExpr;
use crate::geometry::{gaps, GapMode, ZeroSequence};
use crate::inner::{
    boundary_deriv_modulus, d_tau, eval_inner, inner_jet, sample_sublevel, BoundaryGrid, GridSpec, InnerFunction,
};
use crate::scalar::binomial;

pub const SCHEMA_VERSION: &str = "1";

/// Relative change between two grid depths tolerated by a "bounded" verdict.
pub const REFINEMENT_GATE: f64 = 0.10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bounded,
    Comparable,
    Divergent,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GridDescriptor {
    Interior(GridSpec),
    Boundary(BoundaryGrid),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Canonical grid index.
    pub index: usize,
    pub z: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub params: BTreeMap<String, f64>,
    pub sup: f64,
    pub witness: Option<Witness>,
    pub grid: GridDescriptor,
    pub verdict: Verdict,
    /// Points evaluated.
    pub samples: usize,
    /// Points skipped because the integrand was singular there.
    pub skipped: usize,
    /// Sup on the coarser grid when a refinement pair was run.
    pub coarse_sup: Option<f64>,
    pub flags: Vec<String>,
}

impl CriterionReport {
    fn new(criterion: &str, params: &[(&str, f64)], grid: GridDescriptor) -> Self {
        CriterionReport {
            criterion: criterion.into(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            sup: 0.0,
            witness: None,
            grid,
            verdict: Verdict::Inconclusive,
            samples: 0,
            skipped: 0,
            coarse_sup: None,
            flags: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Verdict from a coarse/fine pair of sups.
pub fn refinement_verdict(coarse: f64, fine: f64) -> Verdict {
    if !fine.is_finite() || !coarse.is_finite() {
        return Verdict::Divergent;
    }
    let scale = fine.abs().max(coarse.abs());
    if scale == 0.0 || (fine - coarse).abs() <= REFINEMENT_GATE * scale {
        Verdict::Bounded
    } else {
        Verdict::Divergent
    }
}

/// Run `estimate` on `grid` with one level fewer and on `grid` itself.
pub fn refine_interior<F>(grid: &GridSpec, estimate: F) -> Result<CriterionReport>
where
    F: Fn(&GridSpec) -> Result<CriterionReport>,
{
    if grid.levels == 0 {
        return usage("refinement needs at least one grid level");
    }
    let coarse = estimate(&grid.with_levels(grid.levels - 1))?;
    let mut fine = estimate(grid)?;
    fine.coarse_sup = Some(coarse.sup);
    fine.verdict = refinement_verdict(coarse.sup, fine.sup);
    Ok(fine)
}

/// Run `estimate` on a boundary grid with half the points and on `grid`.
pub fn refine_boundary<F>(grid: &BoundaryGrid, estimate: F) -> Result<CriterionReport>
where
    F: Fn(&BoundaryGrid) -> Result<CriterionReport>,
{
    let coarse = estimate(&BoundaryGrid { count: grid.count / 2, ..*grid })?;
    let mut fine = estimate(grid)?;
    fine.coarse_sup = Some(coarse.sup);
    fine.verdict = refinement_verdict(coarse.sup, fine.sup);
    if fine.verdict == Verdict::Divergent && fine.sup > coarse.sup {
        fine.flags.push("growth under refinement".into());
    }
    Ok(fine)
}

// (index, z, value) triples, reduced to the max with the lowest index on ties
fn reduce_max(values: Vec<(usize, Complex64, Option<f64>)>, report: &mut CriterionReport) {
    report.samples = values.len();
    for (index, z, v) in values {
        match v {
            None => report.skipped += 1,
            Some(v) if report.witness.is_none() || v > report.sup => {
                report.sup = v;
                report.witness = Some(Witness { index, z });
            }
            Some(_) => {}
        }
    }
}

fn skip_singular(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Singularity(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return usage(format!("epsilon must lie in (0, 1), got {eps}"));
    }
    Ok(())
}

/// `sup |f(z)| / (1 - |z|)^exponent` over sampled `Omega(theta, eps)`.
pub fn decrease_sup(
    f: &AnalyticExpr,
    theta: &InnerFunction,
    eps: f64,
    exponent: f64,
    grid: &GridSpec,
) -> Result<CriterionReport> {
    check_eps(eps)?;
    if !(exponent > 0.0) {
        return usage(format!("exponent must be positive, got {exponent}"));
    }
    sublevel_sup("decrease_sup", &[("eps", eps), ("exponent", exponent)], theta, eps, grid, |z, depth| {
        Ok(f.eval(z)?.norm() / depth.powf(exponent))
    })
}

/// `sup |f^(k)(z)| / (1 - |z|)^(alpha - k)` over sampled `Omega(theta, eps/2)`.
pub fn derivative_decrease(
    f: &AnalyticExpr,
    theta: &InnerFunction,
    eps: f64,
    alpha: f64,
    k: usize,
    grid: &GridSpec,
) -> Result<CriterionReport> {
    check_eps(eps)?;
    if k < 1 {
        return usage("derivative_decrease needs k >= 1");
    }
    let params = [("eps", eps), ("alpha", alpha), ("k", k as f64)];
    sublevel_sup("derivative_decrease", &params, theta, eps / 2.0, grid, |z, depth| {
        Ok(f.derivative(z, k)?.norm() / depth.powf(alpha - k as f64))
    })
}

fn sublevel_sup<F>(
    name: &str,
    params: &[(&str, f64)],
    theta: &InnerFunction,
    level: f64,
    grid: &GridSpec,
    value: F,
) -> Result<CriterionReport>
where
    F: Fn(Complex64, f64) -> Result<f64> + Sync,
{
    let sample = sample_sublevel(theta, level, grid)?;
    let mut report = CriterionReport::new(name, params, GridDescriptor::Interior(*grid));
    if sample.points.is_empty() {
        report.flags.push("empty omega".into());
        return Ok(report);
    }
    let values = sample
        .points
        .par_iter()
        .map(|p| Ok((p.index, p.z, skip_singular(value(p.z, p.depth))?)))
        .collect::<Result<Vec<_>>>()?;
    reduce_max(values, &mut report);
    Ok(report)
}

fn boundary_sup<F>(
    name: &str,
    params: &[(&str, f64)],
    theta: &InnerFunction,
    grid: &BoundaryGrid,
    value: F,
) -> Result<CriterionReport>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let pts = grid.points(&theta.spectrum())?;
    let mut report = CriterionReport::new(name, params, GridDescriptor::Boundary(*grid));
    report.flags.push(format!("excluded {} points", grid.count - pts.len()));
    let values =
        pts.par_iter().map(|&(i, z)| Ok((i, z, skip_singular(value(z))?))).collect::<Result<Vec<_>>>()?;
    reduce_max(values, &mut report);
    Ok(report)
}

/// `sup |f(zeta)| |theta'(zeta)|^N` over the boundary grid.
pub fn boundary_crit(f: &AnalyticExpr, theta: &InnerFunction, big_n: u32, grid: &BoundaryGrid) -> Result<CriterionReport> {
    boundary_sup("boundary_crit", &[("N", big_n as f64)], theta, grid, |z| {
        Ok(f.eval(z)?.norm() * boundary_deriv_modulus(theta, z)?.powi(big_n as i32))
    })
}

/// `sup |theta^(l)(zeta)| tau_theta(zeta)^l`, an empirical constant `c_l`.
pub fn shider_sup(theta: &InnerFunction, l: usize, grid: &BoundaryGrid) -> Result<CriterionReport> {
    if l < 1 {
        return usage("shider_sup needs l >= 1");
    }
    boundary_sup("shider_sup", &[("l", l as f64)], theta, grid, |z| {
        let d = inner_jet(theta, z, l)?.derivative(l)?.norm();
        Ok(d * d_tau(theta, z)?.tau.powi(l as i32))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeibnizTerm {
    pub l: usize,
    /// `sup |f^(N-l) theta^(l)|`.
    pub product: CriterionReport,
    /// `sup |f^(N-l)| / tau^l`.
    pub tau_scaled: CriterionReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeibnizReport {
    pub big_n: usize,
    pub terms: Vec<LeibnizTerm>,
    /// Largest pointwise relative defect between `(f theta)^(N)` and the
    /// binomial sum, relative to `sum_l C(N,l) |f^(N-l) theta^(l)|`.
    pub sum_check: f64,
    pub sum_witness: Option<Witness>,
}

/// Terms of `(f theta)^(N) = sum_l C(N, l) f^(N-l) theta^(l)` on the circle.
pub fn leibniz_terms(f: &AnalyticExpr, theta: &InnerFunction, big_n: usize, grid: &BoundaryGrid) -> Result<LeibnizReport> {
    let pts = grid.points(&theta.spectrum())?;
    let product_expr = AnalyticExpr::product(vec![f.clone(), theta.to_expr()]);
    struct Row {
        index: usize,
        z: Complex64,
        fd: Vec<Complex64>,
        td: Vec<Complex64>,
        tau: f64,
        defect: f64,
    }
    let rows = pts
        .par_iter()
        .map(|&(index, z)| {
            let fd = f.jet(z, big_n)?.derivatives();
            let td = inner_jet(theta, z, big_n)?.derivatives();
            let tau = d_tau(theta, z)?.tau;
            let whole = product_expr.jet(z, big_n)?.derivative(big_n)?;
            let mut sum = Complex64::new(0.0, 0.0);
            let mut scale = 0.0;
            for l in 0..=big_n {
                let t = fd[big_n - l] * td[l] * binomial(big_n, l);
                sum += t;
                scale += t.norm();
            }
            let defect = if scale > 0.0 { (whole - sum).norm() / scale } else { whole.norm() };
            Ok(Row { index, z, fd, td, tau, defect })
        })
        .collect::<Result<Vec<Row>>>()?;
    let gd = GridDescriptor::Boundary(*grid);
    let terms = (0..=big_n)
        .map(|l| {
            let params = [("N", big_n as f64), ("l", l as f64)];
            let mut product = CriterionReport::new("leibniz_product", &params, gd);
            let mut tau_scaled = CriterionReport::new("leibniz_tau", &params, gd);
            reduce_max(rows.iter().map(|r| (r.index, r.z, Some((r.fd[big_n - l] * r.td[l]).norm()))).collect(), &mut product);
            reduce_max(
                rows.iter().map(|r| (r.index, r.z, Some(r.fd[big_n - l].norm() / r.tau.powi(l as i32)))).collect(),
                &mut tau_scaled,
            );
            LeibnizTerm { l, product, tau_scaled }
        })
        .collect();
    let mut sum_check = 0.0;
    let mut sum_witness = None;
    for r in &rows {
        if sum_witness.is_none() || r.defect > sum_check {
            sum_check = r.defect;
            sum_witness = Some(Witness { index: r.index, z: r.z });
        }
    }
    Ok(LeibnizReport { big_n, terms, sum_check, sum_witness })
}

/// Values of `f` on the sequence: an expression or a table.
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileInput {
    Expr(AnalyticExpr),
    Table(Vec<f64>),
}

/// `|f(z_j)| := d_j^(alpha - k) (1 - |z_j|)^k` on extended gaps.
pub fn delta_table(seq: &ZeroSequence, k: usize, alpha: f64) -> Result<Vec<f64>> {
    let d = gaps(seq, GapMode::Extended)?;
    Ok(d.iter().zip(seq.points()).map(|(dj, p)| dj.powf(alpha - k as f64) * p.depth().powi(k as i32)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub max: f64,
    pub min: f64,
    pub argmax: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroDecayProfile {
    pub k: usize,
    pub alpha: f64,
    pub gate: f64,
    /// `|f(z_j)| / (d_j^(alpha-k) (1 - |z_j|)^k)`.
    pub r1: Vec<f64>,
    /// `|f(z_j)| / (1 - |z_j|)^alpha`.
    pub r2: Vec<f64>,
    pub r1_summary: RatioSummary,
    pub r2_summary: RatioSummary,
}

/// Default max/min gate for a "comparable" verdict.
pub const DEFAULT_PROFILE_GATE: f64 = 10.0;

fn summarize(r: &[f64], gate: f64, comparable_allowed: bool) -> RatioSummary {
    let (argmax, max) = r.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |b, (i, v)| if v > b.1 { (i, v) } else { b });
    let min = r.iter().copied().fold(f64::INFINITY, f64::min);
    let half = r.len() / 2;
    let first = r[..half.max(1)].iter().copied().fold(0.0, f64::max);
    let second = r[half..].iter().copied().fold(0.0, f64::max);
    let verdict = if !max.is_finite() {
        Verdict::Divergent
    } else if comparable_allowed && min > 0.0 && max / min <= gate {
        Verdict::Comparable
    } else if r.len() >= 4 && second > gate * first {
        Verdict::Divergent
    } else if r.len() >= 4 {
        Verdict::Bounded
    } else {
        Verdict::Inconclusive
    };
    RatioSummary { max, min, argmax, verdict }
}

/// Ratio arrays along a sequence with max/min summaries. `r1` is judged
/// comparable when `max/min <= gate`; either array is divergent when its
/// second-half max exceeds `gate` times its first-half max.
pub fn zero_decay_profile(
    input: &ProfileInput,
    seq: &ZeroSequence,
    k: usize,
    alpha: f64,
    gate: f64,
) -> Result<ZeroDecayProfile> {
    let n = top_order(alpha)?;
    if k > n {
        return usage(format!("k = {k} exceeds n = {n} for alpha = {alpha}"));
    }
    if seq.is_empty() {
        return usage("zero decay profile of an empty sequence");
    }
    let values: Vec<f64> = match input {
        ProfileInput::Table(t) if t.len() != seq.len() => {
            return usage(format!("value table has {} entries for {} points", t.len(), seq.len()))
        }
        ProfileInput::Table(t) => t.clone(),
        ProfileInput::Expr(e) => seq.points().iter().map(|p| Ok(e.eval(p.z())?.norm())).collect::<Result<_>>()?,
    };
    let d = gaps(seq, GapMode::Extended)?;
    let r1: Vec<f64> = values
        .iter()
        .zip(&d)
        .zip(seq.points())
        .map(|((v, dj), p)| v / (dj.powf(alpha - k as f64) * p.depth().powi(k as i32)))
        .collect();
    let r2: Vec<f64> = values.iter().zip(seq.points()).map(|(v, p)| v / p.depth().powf(alpha)).collect();
    Ok(ZeroDecayProfile {
        k,
        alpha,
        gate,
        r1_summary: summarize(&r1, gate, true),
        r2_summary: summarize(&r2, gate, false),
        r1,
        r2,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub eps: f64,
    pub samples: usize,
    /// `max_z min_j rho(z, z_j)`.
    pub lambda_emp: f64,
    /// `max |z - z_j*| / (1 - |z|)` for the nearest zero `z_j*`.
    pub c_emp: f64,
    /// `max (1 - |z_j*|) / (1 - |z|)`.
    pub c_emp_depth: f64,
    pub witness: Option<Witness>,
    /// Samples of `Omega(B, eps)` outside `Omega(B1, sqrt eps) u Omega(B2, sqrt eps)`.
    pub split_exceptions: usize,
    pub grid: GridSpec,
    pub flags: Vec<String>,
}

/// Covering and splitting statistics over sampled `Omega(B1 B2, eps)`.
pub fn covering_profile(b1: &InnerFunction, b2: &InnerFunction, eps: f64, grid: &GridSpec) -> Result<CoveringReport> {
    check_eps(eps)?;
    let b = b1.product(b2)?;
    if !b.atoms().is_empty() {
        return usage("covering profiles take finite Blaschke products");
    }
    let zeros: Vec<DiskPoint> = b.zeros().iter().map(|&z| DiskPoint::from_complex(z)).collect::<Result<_>>()?;
    let sample = sample_sublevel(&b, eps, grid)?;
    let root = eps.sqrt();
    let rows = sample
        .points
        .par_iter()
        .map(|p| {
            let zp = DiskPoint::polar(p.depth, p.z.arg())?;
            let mut best = (f64::INFINITY, 0usize);
            for (j, q) in zeros.iter().enumerate() {
                let r = zp.rho(q)?;
                if r < best.0 {
                    best = (r, j);
                }
            }
            let near = &zeros[best.1];
            let c1 = zp.dist(near) / p.depth;
            let c2 = near.depth() / p.depth;
            let split = eval_inner(b1, p.z)?.norm() < root || eval_inner(b2, p.z)?.norm() < root;
            Ok((p.index, p.z, best.0, c1, c2, split))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = CoveringReport {
        eps,
        samples: rows.len(),
        lambda_emp: 0.0,
        c_emp: 0.0,
        c_emp_depth: 0.0,
        witness: None,
        split_exceptions: 0,
        grid: *grid,
        flags: Vec::new(),
    };
    if rows.is_empty() {
        rep.flags.push("empty omega".into());
    }
    for (index, z, lam, c1, c2, split) in rows {
        if rep.witness.is_none() || lam > rep.lambda_emp {
            rep.lambda_emp = lam;
            rep.witness = Some(Witness { index, z });
        }
        rep.c_emp = rep.c_emp.max(c1);
        rep.c_emp_depth = rep.c_emp_depth.max(c2);
        if !split {
            rep.split_exceptions += 1;
        }
    }
    Ok(rep)
}
