//! Check batteries. Each suite turns one module's invariants into pass/fail
//! records; randomized suites draw from a ChaCha stream seeded by `seed`.

use std::str::FromStr;

use anyhow::bail;
use innerkit::criteria::{
    boundary_crit, covering_profile, decrease_sup, delta_table, derivative_decrease, leibniz_terms, refine_interior,
    shider_sup, zero_decay_profile, ProfileInput, DEFAULT_PROFILE_GATE,
};
use innerkit::geometry::v1_ratio;
use innerkit::inner::blaschke_jet;
use innerkit::scalar::gauss;
use innerkit::{
    build_delta_jet, build_m, check_admissible, det_exact, AnalyticExpr, BoundaryGrid, GaussRat, GridSpec,
    InnerFunction, Jet, Scalar, ZeroSequence,
};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::Config;
use crate::report::{CheckRecord, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteId {
    LemmaIdentities,
    MatrixSweep,
    Admissibility,
    Dichotomy,
    CriteriaCorpus,
    Covering,
}

pub const SUITE_IDS: [&str; 6] =
    ["lemma-identities", "matrix-sweep", "admissibility", "dichotomy", "criteria-corpus", "covering"];

impl SuiteId {
    pub fn name(self) -> &'static str {
        match self {
            SuiteId::LemmaIdentities => SUITE_IDS[0],
            SuiteId::MatrixSweep => SUITE_IDS[1],
            SuiteId::Admissibility => SUITE_IDS[2],
            SuiteId::Dichotomy => SUITE_IDS[3],
            SuiteId::CriteriaCorpus => SUITE_IDS[4],
            SuiteId::Covering => SUITE_IDS[5],
        }
    }

    /// Whether the suite draws random cases.
    pub fn is_randomized(self) -> bool {
        matches!(self, SuiteId::LemmaIdentities | SuiteId::Covering)
    }
}

impl FromStr for SuiteId {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "lemma-identities" => SuiteId::LemmaIdentities,
            "matrix-sweep" => SuiteId::MatrixSweep,
            "admissibility" => SuiteId::Admissibility,
            "dichotomy" => SuiteId::Dichotomy,
            "criteria-corpus" => SuiteId::CriteriaCorpus,
            "covering" => SuiteId::Covering,
            other => bail!("unknown suite {other:?} (expected one of {})", SUITE_IDS.join(", ")),
        })
    }
}

pub fn run_suite(id: SuiteId, cfg: &Config) -> anyhow::Result<Report> {
    let checks = match id {
        SuiteId::LemmaIdentities => lemma_identities(cfg)?,
        SuiteId::MatrixSweep => matrix_sweep(cfg)?,
        SuiteId::Admissibility => admissibility(cfg)?,
        SuiteId::Dichotomy => dichotomy(cfg)?,
        SuiteId::CriteriaCorpus => criteria_corpus(cfg)?,
        SuiteId::Covering => covering(cfg)?,
    };
    Ok(Report::new(id.name(), cfg.clone(), checks))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    if b.norm() == 0.0 {
        a.norm()
    } else {
        (a - b).norm() / b.norm()
    }
}

fn random_disk_point(rng: &mut ChaCha8Rng, rmax: f64) -> Complex64 {
    Complex64::from_polar(rmax * rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU))
}

/// Product rule and induction identities at zeros of random finite
/// products, exactly over Gaussian rationals and in floating point.
fn lemma_identities(cfg: &Config) -> anyhow::Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for case in 0..cfg.cases.unwrap_or(50) {
        let nz = rng.random_range(1..=8usize);
        let m = rng.random_range(1..=4usize);
        let mut zs: Vec<(i64, i64)> = Vec::new();
        while zs.len() < nz {
            let p = (rng.random_range(-15..=15), rng.random_range(-15..=15));
            if p.0 * p.0 + p.1 * p.1 < 225 && !zs.contains(&p) {
                zs.push(p);
            }
        }
        let deg = rng.random_range(0..=5usize);
        let fc: Vec<(i64, i64)> = (0..=deg).map(|_| (rng.random_range(-9..=9), rng.random_range(-9..=9))).collect();
        let j = rng.random_range(0..nz);
        let witness = json!({ "zeros_over_16": zs, "m": m, "j": j, "f": fc });

        let zeros: Vec<GaussRat> = zs.iter().map(|&(a, b)| gauss(a, 16, b, 16)).collect();
        let f: Vec<GaussRat> = fc.iter().map(|&(a, b)| gauss(a, 7, b, 5)).collect();
        let w = zeros[j].clone();
        let b = blaschke_jet(&zeros, &w, m + 1)?;
        let bm = b.powi(m as u32);
        let fj = Jet::polynomial(&f, w.clone(), m);
        let exact_product = fj.mul(&bm.truncate(m))?.derivative(m)? == fj.value().clone() * bm.derivative(m)?;
        let exact_induction = b.powi(m as u32 + 1).derivative(m + 1)?
            == GaussRat::from_i64(m as i64 + 1) * bm.derivative(m)? * b.derivative(1)?;

        let zf: Vec<Complex64> = zeros.iter().map(Scalar::to_complex64).collect();
        let ff: Vec<Complex64> = f.iter().map(Scalar::to_complex64).collect();
        let b = blaschke_jet(&zf, &zf[j], m + 1)?;
        let bm = b.powi(m as u32);
        let fj = Jet::polynomial(&ff, zf[j], m);
        let product_err = rel(fj.mul(&bm.truncate(m))?.derivative(m)?, fj.value() * bm.derivative(m)?);
        let induction_err =
            rel(b.powi(m as u32 + 1).derivative(m + 1)?, bm.derivative(m)? * (m as f64 + 1.0) * b.derivative(1)?);

        out.push(CheckRecord::gated(
            format!("product-identity/{case}"),
            exact_product && product_err <= 1e-11,
            product_err,
            Some(1e-11),
            witness.clone(),
        ));
        out.push(CheckRecord::gated(
            format!("induction-identity/{case}"),
            exact_induction && induction_err <= 1e-11,
            induction_err,
            Some(1e-11),
            witness,
        ));
    }
    Ok(out)
}

/// `det M(k, n) != 0` for `n/2 < k <= n <= n_max` (default 12).
fn matrix_sweep(cfg: &Config) -> anyhow::Result<Vec<CheckRecord>> {
    let n_max = cfg.n.unwrap_or(12);
    let mut out = Vec::new();
    for n in 1..=n_max {
        for k in (n / 2 + 1)..=n {
            let d = det_exact(&build_m(k, n, false)?);
            let value = innerkit::cramer::rational_to_f64(&d);
            out.push(CheckRecord::gated(
                format!("det M({k},{n}) != 0"),
                !d.is_zero(),
                value,
                None,
                json!({ "k": k, "n": n, "det": d.to_string() }),
            ));
        }
    }
    for (k, n, expect) in [(2, 3, "1/12"), (3, 4, "1/144")] {
        if n <= n_max {
            let d = det_exact(&build_m(k, n, false)?);
            out.push(CheckRecord::gated(
                format!("det M({k},{n}) = {expect}"),
                d.to_string() == expect,
                innerkit::cramer::rational_to_f64(&d),
                None,
                json!({ "det": d.to_string() }),
            ));
        }
    }
    Ok(out)
}

/// `C_min <= 1 + 1e-12` for delta-jets on the configured sequence, all
/// `k <= n <= n_max` (default 4) and `alpha` in `n + {1/4, 1/2, 3/4, 1}`.
fn admissibility(cfg: &Config) -> anyhow::Result<Vec<CheckRecord>> {
    let seq = cfg.sequence()?;
    let gate = 1.0 + 1e-12;
    let mut out = Vec::new();
    for n in 0..=cfg.n.unwrap_or(4) {
        for k in 0..=n {
            for frac in [0.25, 0.5, 0.75, 1.0] {
                let alpha = n as f64 + frac;
                let r = check_admissible(&build_delta_jet(&seq, k, alpha)?, Some(gate))?;
                let witness = r.worst.map_or(Value::Null, |w| {
                    json!({ "z": w.z, "w": w.w, "s": w.s, "z_point": seq_point(&seq, w.z), "w_point": seq_point(&seq, w.w) })
                });
                out.push(CheckRecord::gated(
                    format!("C_min k={k} alpha={alpha}"),
                    r.pass == Some(true),
                    r.c_min,
                    Some(gate),
                    witness,
                ));
            }
        }
    }
    Ok(out)
}

fn seq_point(seq: &ZeroSequence, i: usize) -> Value {
    let pts = seq.closure_points();
    pts.get(i).map_or(Value::Null, |p| json!([p.z().re, p.z().im]))
}

/// `spiral(a, b, J)` against `radial(b, J)`: gap/depth ratios blow up on
/// the spiral and are constant `1 - b` on the radial sequence.
fn dichotomy(cfg: &Config) -> anyhow::Result<Vec<CheckRecord>> {
    let spiral = v1_ratio(&ZeroSequence::spiral(cfg.a, cfg.b, cfg.j)?)?;
    let radial = v1_ratio(&ZeroSequence::radial(cfg.b, cfg.j)?)?;
    let inner = spiral.interior();
    let first_drop = inner.windows(2).position(|w| w[1] <= w[0]);
    let max = spiral.max.unwrap_or(0.0);
    let target = 1.0 - cfg.b;
    let (dev_at, dev) = radial
        .interior()
        .iter()
        .map(|r| (r - target).abs())
        .enumerate()
        .fold((0, 0.0), |b, (i, v)| if v > b.1 { (i, v) } else { b });
    Ok(vec![
        CheckRecord::gated(
            "spiral ratios strictly increasing",
            first_drop.is_none(),
            inner.len() as f64,
            None,
            first_drop.map_or(Value::Null, |i| json!({ "j": i + 1 })),
        ),
        CheckRecord::gated("spiral max ratio > 1e6", max > 1e6, max, Some(1e6), json!({ "argmax": spiral.argmax })),
        CheckRecord::gated(
            "radial ratios = 1 - b",
            dev <= 1e-12,
            dev,
            Some(1e-12),
            if dev > 1e-12 { json!({ "j": dev_at + 1 }) } else { Value::Null },
        ),
    ])
}

fn witness_of(r: &innerkit::CriterionReport) -> Value {
    r.witness.map_or(Value::Null, |w| json!({ "index": w.index, "z": [w.z.re, w.z.im] }))
}

/// Fixed corpus for the criterion estimators.
fn criteria_corpus(cfg: &Config) -> anyhow::Result<Vec<CheckRecord>> {
    let atom = InnerFunction::atom(Complex64::new(1.0, 0.0), 1.0)?;
    let half = InnerFunction::blaschke(vec![Complex64::new(0.5, 0.0)])?;
    let sq = AnalyticExpr::one_minus_pow(2.0)?;
    let (coarse, fine) = (BoundaryGrid::new(1 << 13), BoundaryGrid::new(1 << 14));
    let grid = GridSpec::default().with_levels(cfg.grid_q);
    let mut out = Vec::new();

    let bc = boundary_crit(&sq, &atom, 1, &fine)?;
    out.push(CheckRecord::gated(
        "boundary_crit (1-z)^2 atom N=1 = 2",
        (bc.sup - 2.0).abs() <= 1e-9,
        bc.sup,
        Some(1e-9),
        witness_of(&bc),
    ));

    let change = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    for (label, theta, l) in [("atom", &atom, 1), ("zero 1/2", &half, 2)] {
        let (a, b) = (shider_sup(theta, l, &coarse)?, shider_sup(theta, l, &fine)?);
        let c = change(a.sup, b.sup);
        out.push(CheckRecord::gated(format!("shider_sup {label} l={l} stable"), c <= 0.1, c, Some(0.1), witness_of(&b)));
        out.push(CheckRecord::info(format!("shider_sup {label} l={l}"), b.sup));
    }

    let three = InnerFunction::blaschke(vec![Complex64::new(0.3, 0.4), Complex64::new(-0.5, 0.1), Complex64::new(0.0, -0.7)])?;
    let poly = AnalyticExpr::poly(vec![
        Complex64::new(0.7, -0.2),
        Complex64::new(-1.1, 0.4),
        Complex64::new(0.3, 0.9),
        Complex64::new(0.5, 0.0),
    ]);
    for (label, f, theta, n) in [("(1-z)^2 atom", &sq, &atom, 1), ("cubic three zeros", &poly, &three, 2)] {
        let (a, b) = (leibniz_terms(f, theta, n, &coarse)?, leibniz_terms(f, theta, n, &fine)?);
        let check = a.sum_check.max(b.sum_check);
        let witness = b.sum_witness.map_or(Value::Null, |w| json!({ "index": w.index, "z": [w.z.re, w.z.im] }));
        out.push(CheckRecord::gated(format!("leibniz {label} N={n} sum check"), check <= 1e-11, check, Some(1e-11), witness));
        let worst = a
            .terms
            .iter()
            .zip(&b.terms)
            .map(|(x, y)| change(x.product.sup, y.product.sup).max(change(x.tau_scaled.sup, y.tau_scaled.sup)))
            .fold(0.0, f64::max);
        out.push(CheckRecord::gated(format!("leibniz {label} N={n} stable"), worst <= 0.1, worst, Some(0.1), Value::Null));
    }

    // Omega(z, eps) is the disk |z| < eps, which the default mesh barely
    // resolves; these use many radial substeps and compare with the radial
    // oracles at the largest sampled radius r
    let dense = GridSpec::new(8, 64, 16)?;
    let zero = InnerFunction::identity();
    let r = innerkit::inner::sample_sublevel(&zero, cfg.eps, &dense)?.points.iter().map(|p| p.z.norm()).fold(0.0, f64::max);
    for (label, f, exponent, oracle) in [
        ("z^3", AnalyticExpr::z().powi(3), 3.0, (r / (1.0 - r)).powi(3)),
        ("1", AnalyticExpr::real(1.0), cfg.alpha, (1.0 - r).powf(-cfg.alpha)),
    ] {
        let d = decrease_sup(&f, &zero, cfg.eps, exponent, &dense)?;
        let dev = (d.sup / oracle - 1.0).abs();
        out.push(CheckRecord::gated(
            format!("decrease_sup {label} on Omega(z, eps) vs radial oracle"),
            dev <= 1e-12,
            dev,
            Some(1e-12),
            witness_of(&d),
        ));
    }
    let pow = AnalyticExpr::one_minus_pow(1.5)?;
    let d = refine_interior(&grid, |g| derivative_decrease(&pow, &atom, cfg.eps, 1.5, 1, g))?;
    let mut rec = CheckRecord::info("derivative_decrease (1-z)^1.5 atom", d.sup);
    rec.witness = Some(json!({ "verdict": d.verdict, "coarse_sup": d.coarse_sup }));
    out.push(rec);

    let (k, alpha) = (cfg.k, cfg.alpha);
    for seq in [ZeroSequence::spiral(0.25, 0.5, cfg.j)?, ZeroSequence::radial(0.5, cfg.j)?] {
        let p = zero_decay_profile(&ProfileInput::Table(delta_table(&seq, k, alpha)?), &seq, k, alpha, DEFAULT_PROFILE_GATE)?;
        let (at, dev) =
            p.r1.iter().map(|r| (r - 1.0).abs()).enumerate().fold((0, 0.0), |b, (i, v)| if v > b.1 { (i, v) } else { b });
        let name = seq.kind().name();
        out.push(CheckRecord::gated(
            format!("profile {name} r1 = 1"),
            dev <= 1e-12,
            dev,
            Some(1e-12),
            if dev > 1e-12 { json!({ "j": at + 1 }) } else { Value::Null },
        ));
        let mut rec = CheckRecord::info(format!("profile {name} r2 sup"), p.r2_summary.max);
        rec.witness = Some(json!({ "verdict": p.r2_summary.verdict, "argmax": p.r2_summary.argmax + 1 }));
        out.push(rec);
    }
    Ok(out)
}

/// Splitting and covering statistics for random factored finite products.
fn covering(cfg: &Config) -> anyhow::Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let grid = GridSpec::default().with_levels(cfg.grid_q);
    let mut out = Vec::new();
    for case in 0..cfg.cases.unwrap_or(10) {
        let n1 = rng.random_range(1..=5);
        let n2 = rng.random_range(1..=5);
        let z1: Vec<Complex64> = (0..n1).map(|_| random_disk_point(&mut rng, 0.95)).collect();
        let z2: Vec<Complex64> = (0..n2).map(|_| random_disk_point(&mut rng, 0.95)).collect();
        let r = covering_profile(&InnerFunction::blaschke(z1.clone())?, &InnerFunction::blaschke(z2.clone())?, cfg.eps, &grid)?;
        let pair = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
        out.push(CheckRecord::gated(
            format!("split/{case}"),
            r.split_exceptions == 0,
            r.split_exceptions as f64,
            Some(0.0),
            json!({ "b1": pair(&z1), "b2": pair(&z2), "samples": r.samples }),
        ));
        out.push(CheckRecord::info(format!("lambda_emp/{case}"), r.lambda_emp));
        out.push(CheckRecord::info(format!("c_emp/{case}"), r.c_emp));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn ids_round_trip() {
        for name in SUITE_IDS {
            assert_eq!(name.parse::<SuiteId>().unwrap().name(), name);
        }
        assert!("nope".parse::<SuiteId>().is_err());
    }

    #[test]
    fn matrix_sweep_passes() {
        let r = run_suite(SuiteId::MatrixSweep, &Config::default()).unwrap();
        assert_eq!(r.summary.fail, 0);
        assert_eq!(r.summary.pass, 44);
    }

    #[test]
    fn dichotomy_passes() {
        let r = run_suite(SuiteId::Dichotomy, &Config::default()).unwrap();
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{:?}", r.checks);
    }

    #[test]
    fn empty_corpus_is_info() {
        let cfg = Config { cases: Some(0), ..Config::default() };
        let r = run_suite(SuiteId::LemmaIdentities, &cfg).unwrap();
        assert!(r.checks.is_empty());
        assert_eq!((r.status, r.exit_code()), (Status::Info, 0));
    }

    #[test]
    fn lemma_identities_pass() {
        let cfg = Config { cases: Some(10), ..Config::default() };
        assert_eq!(run_suite(SuiteId::LemmaIdentities, &cfg).unwrap().summary.fail, 0);
    }
}
