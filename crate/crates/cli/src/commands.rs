use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use innerkit::admissible::JetData;
use innerkit::cramer::{rational_json, rational_to_f64};
use innerkit::criteria::{
    boundary_crit, covering_profile, decrease_sup, delta_table, derivative_decrease, leibniz_terms, refine_boundary,
    refine_interior, shider_sup, zero_decay_profile, CriterionReport, ProfileInput, DEFAULT_PROFILE_GATE,
};
use innerkit::geometry::{geometry_report, GeometryOpts};
use innerkit::inner::sample_sublevel;
use innerkit::{
    build_delta_jet, build_m, check_admissible, cramer_solve, inner_jet, AnalyticExpr, BoundaryGrid, GaussRat,
    GridSpec, InnerFunction,
};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::config::Config;
use crate::report::{Format, Report};

/// An output document: JSON always, CSV where the command has a table.
pub struct Output {
    pub json: String,
    pub csv: Option<String>,
}

impl Output {
    fn json_only<T: Serialize>(v: &T) -> anyhow::Result<Self> {
        Ok(Output { json: serde_json::to_string_pretty(v)? + "\n", csv: None })
    }

    fn with_csv<T: Serialize>(v: &T, csv: String) -> anyhow::Result<Self> {
        Ok(Output { json: serde_json::to_string_pretty(v)? + "\n", csv: Some(csv) })
    }

    pub fn render(self, format: Format) -> anyhow::Result<String> {
        match format {
            Format::Json => Ok(self.json),
            Format::Csv => self.csv.context("this command has no CSV form; use --format json"),
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn csv_table<R: AsRef<[String]>>(header: &[&str], rows: &[R]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.as_ref())?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn parse_complex(s: &str) -> anyhow::Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().with_context(|| format!("bad number {t:?} in {s:?}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => bail!("expected re or re,im, got {s:?}"),
    }
}

pub fn gen(cfg: &Config) -> anyhow::Result<Output> {
    let seq = cfg.sequence()?;
    let rows: Vec<Vec<String>> = seq
        .points()
        .iter()
        .enumerate()
        .map(|(j, p)| vec![(j + 1).to_string(), p.z().re.to_string(), p.z().im.to_string(), p.depth().to_string()])
        .collect();
    let csv = csv_table(&["j", "re", "im", "1-|z_j|"], &rows)?;
    Ok(Output { json: seq.to_json()? + "\n", csv: Some(csv) })
}

pub fn geom(cfg: &Config) -> anyhow::Result<Output> {
    let opts = GeometryOpts { arc_depth: cfg.depth, ..GeometryOpts::default() };
    let r = geometry_report(&cfg.sequence()?, &opts)?;
    Output::with_csv(&r, r.to_csv())
}

/// The inner function from `--theta`, or the finite Blaschke product over
/// the configured sequence.
pub fn load_theta(cfg: &Config, theta: Option<&Path>) -> anyhow::Result<InnerFunction> {
    match theta {
        Some(p) => Ok(InnerFunction::from_json(&read(p)?)?),
        None => Ok(InnerFunction::from_sequence(&cfg.sequence()?)?),
    }
}

pub fn inner(cfg: &Config, theta: Option<&Path>, z: Option<&str>, order: usize, sample: bool) -> anyhow::Result<Output> {
    let th = load_theta(cfg, theta)?;
    if sample {
        let s = sample_sublevel(&th, cfg.eps, &GridSpec::default().with_levels(cfg.grid_q))?;
        return Output::with_csv(&s, s.to_csv());
    }
    let z = parse_complex(z.context("inner needs --z re,im or --sample")?)?;
    let jet = inner_jet(&th, z, order)?;
    let derivs = jet.derivatives();
    let rows: Vec<Vec<String>> =
        derivs.iter().enumerate().map(|(l, d)| vec![l.to_string(), d.re.to_string(), d.im.to_string()]).collect();
    let doc = json!({ "version": "1", "z": z, "value": jet.value(), "coeffs": jet.coeffs(), "derivatives": derivs });
    Output::with_csv(&doc, csv_table(&["order", "re", "im"], &rows)?)
}

pub fn jets(cfg: &Config, data: Option<&Path>, gate: Option<f64>) -> anyhow::Result<Output> {
    let d = match data {
        Some(p) => JetData::from_json(&read(p)?)?,
        None => build_delta_jet(&cfg.sequence()?, cfg.k, cfg.alpha)?,
    };
    let r = check_admissible(&d, gate)?;
    let rows: Vec<Vec<String>> = r.per_s.iter().enumerate().map(|(s, v)| vec![s.to_string(), v.to_string()]).collect();
    Output::with_csv(&r, csv_table(&["s", "max_ratio"], &rows)?)
}

fn parse_rational(s: &str) -> anyhow::Result<GaussRat> {
    let q: num_rational::BigRational = s.trim().parse().map_err(|_| anyhow::anyhow!("bad rational {s:?}"))?;
    Ok(GaussRat::new(q, num_rational::BigRational::default()))
}

pub fn matrix(cfg: &Config, explore: bool, rhs: Option<&str>) -> anyhow::Result<Output> {
    let n = cfg.n.context("matrix needs --n")?;
    let m = build_m(cfg.k, n, explore)?;
    let det = m.det();
    let mut doc = json!({
        "version": "1",
        "matrix": m.to_json_value(),
        "det": rational_json(&det),
        "det_f64": rational_to_f64(&det),
    });
    if let Some(rhs) = rhs {
        let r: Vec<GaussRat> = rhs.split(',').map(parse_rational).collect::<anyhow::Result<_>>()?;
        doc["solution"] = cramer_solve(&m, &r)?.to_json_value();
    }
    let rows: Vec<Vec<String>> = m.entries.iter().map(|row| row.iter().map(|q| q.to_string()).collect()).collect();
    let header: Vec<String> = (0..m.size()).map(|t| format!("t{t}")).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    Output::with_csv(&doc, csv_table(&header, &rows)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Criterion {
    Decrease,
    Derivative,
    Boundary,
    Shider,
    Leibniz,
    Profile,
    Covering,
}

pub struct CritArgs {
    pub criterion: Criterion,
    pub f: Option<PathBuf>,
    pub theta: Option<PathBuf>,
    pub theta2: Option<PathBuf>,
    pub big_n: usize,
    pub l: usize,
    pub exponent: f64,
    pub count: usize,
    pub refine: bool,
}

fn criterion_csv(r: &CriterionReport) -> anyhow::Result<String> {
    let (idx, re, im) = r.witness.map_or((String::new(), String::new(), String::new()), |w| {
        (w.index.to_string(), w.z.re.to_string(), w.z.im.to_string())
    });
    let verdict = serde_json::to_value(r.verdict)?.as_str().unwrap_or_default().to_string();
    let row = vec![r.criterion.clone(), r.sup.to_string(), verdict, idx, re, im, r.samples.to_string()];
    csv_table(&["criterion", "sup", "verdict", "witness_index", "witness_re", "witness_im", "samples"], &[row])
}

pub fn crit(cfg: &Config, a: &CritArgs) -> anyhow::Result<Output> {
    let f = match &a.f {
        Some(p) => AnalyticExpr::from_json(&read(p)?)?,
        None => AnalyticExpr::one_minus_pow(2.0)?,
    };
    let theta = match &a.theta {
        Some(p) => InnerFunction::from_json(&read(p)?)?,
        None => InnerFunction::atom(Complex64::new(1.0, 0.0), 1.0)?,
    };
    let grid = GridSpec::default().with_levels(cfg.grid_q);
    let bgrid = BoundaryGrid::new(a.count);
    let interior = |est: &dyn Fn(&GridSpec) -> innerkit::Result<CriterionReport>| -> anyhow::Result<Output> {
        let r = if a.refine { refine_interior(&grid, est)? } else { est(&grid)? };
        Output::with_csv(&r, criterion_csv(&r)?)
    };
    let boundary = |est: &dyn Fn(&BoundaryGrid) -> innerkit::Result<CriterionReport>| -> anyhow::Result<Output> {
        let r = if a.refine { refine_boundary(&bgrid, est)? } else { est(&bgrid)? };
        Output::with_csv(&r, criterion_csv(&r)?)
    };
    match a.criterion {
        Criterion::Decrease => interior(&|g| decrease_sup(&f, &theta, cfg.eps, a.exponent, g)),
        Criterion::Derivative => interior(&|g| derivative_decrease(&f, &theta, cfg.eps, cfg.alpha, cfg.k, g)),
        Criterion::Boundary => boundary(&|g| boundary_crit(&f, &theta, a.big_n as u32, g)),
        Criterion::Shider => boundary(&|g| shider_sup(&theta, a.l, g)),
        Criterion::Leibniz => {
            let r = leibniz_terms(&f, &theta, a.big_n, &bgrid)?;
            let rows: Vec<Vec<String>> = r
                .terms
                .iter()
                .map(|t| vec![t.l.to_string(), t.product.sup.to_string(), t.tau_scaled.sup.to_string()])
                .collect();
            Output::with_csv(&r, csv_table(&["l", "product_sup", "tau_scaled_sup"], &rows)?)
        }
        Criterion::Profile => {
            let seq = cfg.sequence()?;
            let input = match &a.f {
                Some(_) => ProfileInput::Expr(f),
                None => ProfileInput::Table(delta_table(&seq, cfg.k, cfg.alpha)?),
            };
            let p = zero_decay_profile(&input, &seq, cfg.k, cfg.alpha, DEFAULT_PROFILE_GATE)?;
            let rows: Vec<Vec<String>> = p
                .r1
                .iter()
                .zip(&p.r2)
                .enumerate()
                .map(|(j, (r1, r2))| vec![(j + 1).to_string(), r1.to_string(), r2.to_string()])
                .collect();
            Output::with_csv(&p, csv_table(&["j", "r1", "r2"], &rows)?)
        }
        Criterion::Covering => {
            let b1 = load_theta(cfg, a.theta.as_deref())?;
            let b2 = match &a.theta2 {
                Some(p) => InnerFunction::from_json(&read(p)?)?,
                None => bail!("covering needs --theta2 <inner.json> for the second factor"),
            };
            Output::json_only(&covering_profile(&b1, &b2, cfg.eps, &grid)?)
        }
    }
}

pub fn export(report: &Path, format: Format) -> anyhow::Result<String> {
    let r = Report::from_json(&read(report)?)?;
    match format {
        Format::Json => r.to_json(),
        Format::Csv => r.to_csv(),
    }
}
