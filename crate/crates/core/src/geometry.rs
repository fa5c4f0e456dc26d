//! Geometry of zero sequences in the disk: nearest gaps, pseudohyperbolic
//! separation, the Carleson constant, the dyadic arc condition, the
//! Beurling–Carleson entropy integral and the gap/depth ratio.
//!
//! Every quantity is computed on a finite truncation. Reports carry the
//! truncation length and the tail mass so the distance to the infinite
//! object stays visible.

use std::collections::VecDeque;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disk::DiskPoint;
use crate::error::{usage, Result};
use crate::quadrature::{integrate_panels, QuadratureOpts};

pub const SCHEMA_VERSION: &str = "1";

/// Uniform samples taken per dyadic arc by [`arc_condition`], on top of
/// the midpoints between consecutive angles of `E` and their antipodes.
pub const ARC_SAMPLES: usize = 64;

/// Default pseudohyperbolic threshold for the two-split search.
pub const DEFAULT_SPLIT_THRESHOLD: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SequenceKind {
    /// `z_j = (1 - a^j) exp(i b^j)`, `0 < a < b < 1`.
    Spiral { a: f64, b: f64 },
    /// `z_j = 1 - a^j`, `0 < a < 1`.
    Radial { a: f64 },
    Custom,
}

impl SequenceKind {
    pub fn name(&self) -> &'static str {
        match self {
            SequenceKind::Spiral { .. } => "spiral",
            SequenceKind::Radial { .. } => "radial",
            SequenceKind::Custom => "custom",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SequenceKind::Spiral { a, b } if !(0.0 < a && a < b && b < 1.0) => {
                usage(format!("spiral needs 0 < a < b < 1, got a = {a}, b = {b}"))
            }
            SequenceKind::Radial { a } if !(0.0 < a && a < 1.0) => usage(format!("radial needs 0 < a < 1, got a = {a}")),
            _ => Ok(()),
        }
    }

    /// The `j`-th term (1-based) of a generator; `None` for custom lists.
    pub fn term(&self, j: usize) -> Option<DiskPoint> {
        let j = j as i32;
        match *self {
            SequenceKind::Spiral { a, b } => Some(DiskPoint::polar(a.powi(j), b.powi(j)).ok()?),
            SequenceKind::Radial { a } => Some(DiskPoint::polar(a.powi(j), 0.0).ok()?),
            SequenceKind::Custom => None,
        }
    }

    pub fn is_generator(&self) -> bool {
        !matches!(self, SequenceKind::Custom)
    }
}

/// An ordered finite list of distinct disk points, optionally produced by a
/// generator, with declared boundary accumulation points.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSequence {
    kind: SequenceKind,
    points: Vec<DiskPoint>,
    accumulation: Vec<DiskPoint>,
}

impl ZeroSequence {
    pub fn spiral(a: f64, b: f64, len: usize) -> Result<Self> {
        gen_sequence(SequenceKind::Spiral { a, b }, len)
    }

    pub fn radial(a: f64, len: usize) -> Result<Self> {
        gen_sequence(SequenceKind::Radial { a }, len)
    }

    /// An explicit list. Interior points must be distinct; accumulation
    /// points must lie on the circle.
    pub fn custom(points: Vec<DiskPoint>, accumulation: Vec<DiskPoint>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if p.is_boundary() {
                return usage(format!("sequence point {i} lies on the circle; declare it as an accumulation point"));
            }
            if let Some(l) = points[..i].iter().position(|q| q.dist(p) == 0.0) {
                return usage(format!("sequence points {l} and {i} coincide"));
            }
        }
        if let Some(q) = accumulation.iter().find(|q| !q.is_boundary()) {
            return usage(format!("accumulation point {} is not on the circle", q.z()));
        }
        Ok(Self { kind: SequenceKind::Custom, points, accumulation })
    }

    pub fn from_complex(points: &[num_complex::Complex64]) -> Result<Self> {
        let pts = points.iter().map(|&z| DiskPoint::from_complex(z)).collect::<Result<Vec<_>>>()?;
        Self::custom(pts, Vec::new())
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    pub fn points(&self) -> &[DiskPoint] {
        &self.points
    }

    pub fn accumulation(&self) -> &[DiskPoint] {
        &self.accumulation
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points together with the declared accumulation points.
    pub fn closure_points(&self) -> Vec<DiskPoint> {
        self.points.iter().chain(&self.accumulation).copied().collect()
    }

    /// Indices excluded from sup statistics: the last two terms of a
    /// generator truncation.
    pub fn edge_flags(&self) -> Vec<bool> {
        let n = self.len();
        (0..n).map(|i| self.kind.is_generator() && i + 2 >= n).collect()
    }

    /// `sum_{j > cut} (1 - |z_j|)`; closed form for generators.
    pub fn tail_mass(&self, cut: usize) -> f64 {
        match self.kind {
            SequenceKind::Radial { a } | SequenceKind::Spiral { a, .. } => a.powi(cut as i32 + 1) / (1.0 - a),
            SequenceKind::Custom => self.points.iter().skip(cut).map(|p| p.depth()).sum(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let params = match self.kind {
            SequenceKind::Spiral { a, b } => SequenceParams { a: Some(a), b: Some(b) },
            SequenceKind::Radial { a } => SequenceParams { a: Some(a), b: None },
            SequenceKind::Custom => SequenceParams::default(),
        };
        let custom = !self.kind.is_generator();
        let doc = SequenceDoc {
            version: SCHEMA_VERSION.into(),
            kind: self.kind.name().into(),
            params,
            len: self.len(),
            points: custom.then(|| self.points.clone()),
            accumulation: (custom && !self.accumulation.is_empty()).then(|| self.accumulation.clone()),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: SequenceDoc = serde_json::from_str(s)?;
        if doc.version != SCHEMA_VERSION {
            return usage(format!("unsupported sequence schema version {:?}", doc.version));
        }
        let missing = |name: &str| crate::Error::Usage(format!("{} sequence needs parameter {name}", doc.kind));
        match doc.kind.as_str() {
            "spiral" => ZeroSequence::spiral(
                doc.params.a.ok_or_else(|| missing("a"))?,
                doc.params.b.ok_or_else(|| missing("b"))?,
                doc.len,
            ),
            "radial" => ZeroSequence::radial(doc.params.a.ok_or_else(|| missing("a"))?, doc.len),
            "custom" => {
                let points = doc.points.unwrap_or_default();
                if points.len() != doc.len {
                    return usage(format!("custom sequence declares J = {} but lists {} points", doc.len, points.len()));
                }
                ZeroSequence::custom(points, doc.accumulation.unwrap_or_default())
            }
            other => usage(format!("unknown sequence kind {other:?}")),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct SequenceParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct SequenceDoc {
    #[serde(default = "default_version")]
    version: String,
    kind: String,
    #[serde(default)]
    params: SequenceParams,
    #[serde(rename = "J")]
    len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<DiskPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    accumulation: Option<Vec<DiskPoint>>,
}

fn default_version() -> String {
    SCHEMA_VERSION.into()
}

/// First `len` terms of a generator. Both built-in generators accumulate
/// only at `1`.
pub fn gen_sequence(kind: SequenceKind, len: usize) -> Result<ZeroSequence> {
    kind.validate()?;
    if len < 1 {
        return usage("a generated sequence needs J >= 1");
    }
    if !kind.is_generator() {
        return usage("custom sequences are built from an explicit point list");
    }
    let points = (1..=len)
        .map(|j| kind.term(j).ok_or_else(|| crate::Error::Usage(format!("term {j} underflows"))))
        .collect::<Result<Vec<_>>>()?;
    if points.iter().any(|p| p.is_boundary()) {
        return usage("generator terms reached the circle (depth underflow); use a smaller J");
    }
    Ok(ZeroSequence { kind, points, accumulation: vec![DiskPoint::boundary(0.0)] })
}

/// How the last gaps of a truncation are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapMode {
    /// Distances within the truncation only.
    Truncated,
    /// Also the first omitted generator term and the declared accumulation
    /// points, each an upper bound for the gap in the infinite sequence.
    Extended,
}

/// `d_j = min_{l != j} |z_j - z_l|` over the truncation.
pub fn nearest_gaps(seq: &ZeroSequence) -> Result<Vec<f64>> {
    gaps(seq, GapMode::Truncated)
}

pub fn gaps(seq: &ZeroSequence, mode: GapMode) -> Result<Vec<f64>> {
    let pts = seq.points();
    let mut extra: Vec<DiskPoint> = Vec::new();
    if mode == GapMode::Extended {
        extra.extend(seq.kind.term(pts.len() + 1).filter(|p| !p.is_boundary()));
        extra.extend_from_slice(seq.accumulation());
    }
    if pts.len() + extra.len() < 2 || pts.is_empty() {
        return usage("gaps need at least two points");
    }
    Ok((0..pts.len())
        .into_par_iter()
        .map(|j| {
            let within = pts.iter().enumerate().filter(|&(l, _)| l != j).map(|(_, q)| pts[j].dist(q));
            let outside = extra.iter().map(|q| pts[j].dist(q));
            within.chain(outside).fold(f64::INFINITY, f64::min)
        })
        .collect())
}

/// Per-index ratios `d_j / (1 - |z_j|)` and their maximum over non-edge
/// indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRatios {
    pub ratios: Vec<f64>,
    pub edge: Vec<bool>,
    pub max: Option<f64>,
    /// 0-based index realizing `max`.
    pub argmax: Option<usize>,
}

impl GapRatios {
    /// Ratios at non-edge indices, in order.
    pub fn interior(&self) -> Vec<f64> {
        self.ratios.iter().zip(&self.edge).filter(|(_, &e)| !e).map(|(&r, _)| r).collect()
    }
}

pub fn v1_ratio(seq: &ZeroSequence) -> Result<GapRatios> {
    let d = nearest_gaps(seq)?;
    let ratios: Vec<f64> = d.iter().zip(seq.points()).map(|(dj, p)| dj / p.depth()).collect();
    let edge = seq.edge_flags();
    let mut best: Option<(usize, f64)> = None;
    for (i, (&r, &e)) in ratios.iter().zip(&edge).enumerate() {
        if !e && best.is_none_or(|(_, m)| r > m) {
            best = Some((i, r));
        }
    }
    Ok(GapRatios { ratios, edge, max: best.map(|b| b.1), argmax: best.map(|b| b.0) })
}

/// `inf_j prod_{l != j} rho(z_j, z_l)` on the truncation, with the index
/// attaining it.
pub fn carleson_delta(seq: &ZeroSequence) -> Result<(f64, usize)> {
    let pts = seq.points();
    if pts.len() < 2 {
        return usage("the Carleson constant needs at least two points");
    }
    let products = (0..pts.len())
        .into_par_iter()
        .map(|j| {
            let mut prod = 1.0;
            for (l, q) in pts.iter().enumerate() {
                if l != j {
                    prod *= pts[j].rho(q)?;
                }
            }
            Ok(prod)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (j, delta) = products
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (j, p)| if p < best.1 { (j, p) } else { best });
    Ok((delta, j))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub min_rho: f64,
    /// 0-based pair realizing `min_rho`.
    pub pair: (usize, usize),
    pub threshold: f64,
    /// Whether the points split into two families, each with all pairwise
    /// `rho >= threshold`.
    pub two_split: bool,
    /// A witnessing 2-coloring when `two_split` holds.
    pub coloring: Option<Vec<u8>>,
}

/// Minimum pairwise pseudohyperbolic distance and the two-family split.
///
/// The split is decided exactly: the conflict graph (edge when
/// `rho < threshold`) is 2-colored by breadth-first search, which succeeds
/// iff the graph is bipartite.
pub fn separation_check(seq: &ZeroSequence, threshold: f64) -> Result<SeparationReport> {
    let pts = seq.points();
    let n = pts.len();
    if n < 2 {
        return usage("separation needs at least two points");
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut min_rho = f64::INFINITY;
    let mut pair = (0, 1);
    for i in 0..n {
        for j in (i + 1)..n {
            let r = pts[i].rho(&pts[j])?;
            if r < min_rho {
                min_rho = r;
                pair = (i, j);
            }
            if r < threshold {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let coloring = two_color(&adj);
    Ok(SeparationReport { min_rho, pair, threshold, two_split: coloring.is_some(), coloring })
}

fn two_color(adj: &[Vec<usize>]) -> Option<Vec<u8>> {
    let n = adj.len();
    let mut color: Vec<Option<u8>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let cv = color[v]?;
            for &u in &adj[v] {
                match color[u] {
                    None => {
                        color[u] = Some(1 - cv);
                        queue.push_back(u);
                    }
                    Some(cu) if cu == cv => return None,
                    Some(_) => {}
                }
            }
        }
    }
    color.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcReport {
    /// Minimum over all scanned arcs of `sup_I dist(zeta, E) / |I|`.
    pub c: f64,
    /// The minimum restricted to each level `0..=depth`.
    pub per_level: Vec<f64>,
    /// `(level, index)` of the arc attaining `c`.
    pub witness: (u32, usize),
}

/// Dyadic scan of the arc condition `sup_{zeta in I} dist(zeta, E) >= c |I|`
/// with `E` the points plus the declared accumulation points.
pub fn arc_condition(seq: &ZeroSequence, depth: u32) -> Result<ArcReport> {
    if depth > 16 {
        return usage(format!("arc scan depth {depth} exceeds 16"));
    }
    let set = seq.closure_points();
    if set.is_empty() {
        return usage("the arc condition needs a nonempty set");
    }
    let dist = |t: f64| {
        let zeta = DiskPoint::boundary(t);
        set.iter().map(|e| zeta.dist(e)).fold(f64::INFINITY, f64::min)
    };
    // angular midpoints between consecutive points of E and antipodes of E,
    // where the distance to E peaks when E lies on the circle
    let mut angles: Vec<f64> = set.iter().map(|p| p.angle_mod_2pi()).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    let mut extra: Vec<(f64, f64)> = Vec::with_capacity(2 * angles.len());
    for (i, &a) in angles.iter().enumerate() {
        let next = angles.get(i + 1).copied().unwrap_or(angles[0] + 2.0 * PI);
        extra.push((((a + next) / 2.0).rem_euclid(2.0 * PI), 0.0));
        extra.push(((a + PI).rem_euclid(2.0 * PI), 0.0));
    }
    extra.par_iter_mut().for_each(|(t, d)| *d = dist(*t));
    extra.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut per_level = Vec::with_capacity(depth as usize + 1);
    let mut best = (f64::INFINITY, (0u32, 0usize));
    for level in 0..=depth {
        let arcs = 1usize << level;
        let len = 2.0 * PI / arcs as f64;
        let values: Vec<f64> = (0..arcs)
            .into_par_iter()
            .map(|m| {
                let start = m as f64 * len;
                let sampled = (0..ARC_SAMPLES)
                    .map(|i| dist(start + (i as f64 + 0.5) * len / ARC_SAMPLES as f64))
                    .fold(0.0, f64::max);
                let lo = extra.partition_point(|e| e.0 < start);
                let hi = extra.partition_point(|e| e.0 < start + len);
                let sup = extra[lo..hi].iter().map(|e| e.1).fold(sampled, f64::max);
                sup / len
            })
            .collect();
        let (m, v) = values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |b, (m, v)| if v < b.1 { (m, v) } else { b });
        per_level.push(v);
        if v < best.0 {
            best = (v, (level, m));
        }
    }
    Ok(ArcReport { c: best.0, per_level, witness: best.1 })
}

/// `int_T log dist(zeta, E) |d zeta|` by adaptive quadrature, with panel
/// breaks at the angles of every point of `E` so the logarithmic
/// singularities sit at panel ends.
pub fn bc_entropy(seq: &ZeroSequence, opts: QuadratureOpts) -> Result<f64> {
    let set = seq.closure_points();
    if set.is_empty() {
        return usage("the entropy integral needs a nonempty set");
    }
    let mut breaks: Vec<f64> = set.iter().map(|p| p.angle_mod_2pi()).collect();
    breaks.push(0.0);
    breaks.push(2.0 * PI);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let f = |t: f64| {
        let zeta = DiskPoint::boundary(t);
        set.iter().map(|e| zeta.dist(e)).fold(f64::INFINITY, f64::min).ln()
    };
    Ok(integrate_panels(f, &breaks, opts))
}

/// Options for [`geometry_report`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryOpts {
    pub arc_depth: u32,
    pub split_threshold: f64,
    pub quadrature: QuadratureOpts,
}

impl Default for GeometryOpts {
    fn default() -> Self {
        Self { arc_depth: 8, split_threshold: DEFAULT_SPLIT_THRESHOLD, quadrature: QuadratureOpts::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryRow {
    /// 1-based index.
    pub j: usize,
    pub modulus: f64,
    pub depth: f64,
    pub gap: f64,
    pub ratio: f64,
    pub edge: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryScalars {
    pub carleson_delta: f64,
    pub min_rho: f64,
    pub two_split: bool,
    pub arc_constant: f64,
    pub entropy: f64,
    pub max_ratio: Option<f64>,
    #[serde(rename = "J")]
    pub len: usize,
    pub tail_mass: f64,
}

/// Per-index table plus scalar diagnostics for one truncated sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub version: String,
    pub kind: SequenceKind,
    pub rows: Vec<GeometryRow>,
    pub scalars: GeometryScalars,
}

pub const GEOMETRY_CSV_HEADER: &str = "j,|z_j|,1-|z_j|,d_j,ratio,edge_flag";

pub fn geometry_report(seq: &ZeroSequence, opts: &GeometryOpts) -> Result<GeometryReport> {
    let v1 = v1_ratio(seq)?;
    let d = nearest_gaps(seq)?;
    let rows = seq
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| GeometryRow {
            j: i + 1,
            modulus: p.modulus(),
            depth: p.depth(),
            gap: d[i],
            ratio: v1.ratios[i],
            edge: v1.edge[i],
        })
        .collect();
    let sep = separation_check(seq, opts.split_threshold)?;
    let scalars = GeometryScalars {
        carleson_delta: carleson_delta(seq)?.0,
        min_rho: sep.min_rho,
        two_split: sep.two_split,
        arc_constant: arc_condition(seq, opts.arc_depth)?.c,
        entropy: bc_entropy(seq, opts.quadrature)?,
        max_ratio: v1.max,
        len: seq.len(),
        tail_mass: seq.tail_mass(seq.len()),
    };
    Ok(GeometryReport { version: SCHEMA_VERSION.into(), kind: seq.kind().clone(), rows, scalars })
}

impl GeometryReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(GEOMETRY_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{},{},{}\n", r.j, r.modulus, r.depth, r.gap, r.ratio, r.edge));
        }
        out
    }

    /// The scalar block as JSON.
    pub fn scalars_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.scalars)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn custom(pts: &[(f64, f64)]) -> ZeroSequence {
        let zs: Vec<Complex64> = pts.iter().map(|&(x, y)| Complex64::new(x, y)).collect();
        ZeroSequence::from_complex(&zs).unwrap()
    }

    #[test]
    fn generators() {
        let r = ZeroSequence::radial(0.5, 4).unwrap();
        let mods: Vec<f64> = r.points().iter().map(|p| p.modulus()).collect();
        assert_eq!(mods, vec![0.5, 0.75, 0.875, 0.9375]);
        let s = ZeroSequence::spiral(0.25, 0.5, 1).unwrap();
        let z = s.points()[0].z();
        assert!((z - Complex64::from_polar(0.75, 0.5)).norm() < 1e-16);
        assert_eq!(s.accumulation().len(), 1);
        let c = custom(&[(0.0, 0.0), (0.5, 0.0)]);
        assert_eq!(c.points()[1].z(), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn generator_parameter_checks() {
        assert!(ZeroSequence::spiral(0.5, 0.25, 3).is_err());
        assert!(ZeroSequence::radial(1.0, 3).is_err());
        assert!(ZeroSequence::radial(0.5, 0).is_err());
        assert!(ZeroSequence::from_complex(&[Complex64::new(0.1, 0.0), Complex64::new(0.1, 0.0)]).is_err());
    }

    #[test]
    fn radial_gaps() {
        let r = ZeroSequence::radial(0.5, 4).unwrap();
        assert_eq!(nearest_gaps(&r).unwrap(), vec![0.25, 0.125, 0.0625, 0.0625]);
        assert_eq!(nearest_gaps(&custom(&[(0.0, 0.0), (0.5, 0.0)])).unwrap(), vec![0.5, 0.5]);
        assert!(nearest_gaps(&custom(&[(0.2, 0.0)])).is_err());
        // extended mode sees the fifth term
        let ext = gaps(&r, GapMode::Extended).unwrap();
        assert_eq!(ext[3], 0.03125);
    }

    #[test]
    fn spiral_gaps_match_brute_force() {
        let s = ZeroSequence::spiral(0.25, 0.5, 3).unwrap();
        let zs: Vec<Complex64> = (1..=3).map(|j| Complex64::from_polar(1.0 - 0.25f64.powi(j), 0.5f64.powi(j))).collect();
        let d = nearest_gaps(&s).unwrap();
        for j in 0..3 {
            let brute = (0..3).filter(|&l| l != j).map(|l| (zs[j] - zs[l]).norm()).fold(f64::INFINITY, f64::min);
            assert!((d[j] - brute).abs() < 1e-14);
            // angular separation dominates
            let ang = (1.0 - 0.25f64.powi(j as i32 + 1)) * (0.5f64.powi(j as i32 + 1) - 0.5f64.powi(j as i32 + 2));
            assert!(d[j] >= ang * 0.9);
        }
    }

    #[test]
    fn carleson_examples() {
        let (d, _) = carleson_delta(&custom(&[(0.5, 0.0), (-0.5, 0.0)])).unwrap();
        assert!((d - 0.8).abs() < 1e-15);
        let (d, _) = carleson_delta(&custom(&[(0.0, 0.0), (0.5, 0.0)])).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn v1_examples() {
        let c = v1_ratio(&custom(&[(0.0, 0.0), (0.5, 0.0)])).unwrap();
        assert_eq!(c.ratios, vec![0.5, 1.0]);
        assert_eq!(c.max, Some(1.0));
        let r = v1_ratio(&ZeroSequence::radial(0.5, 20).unwrap()).unwrap();
        assert_eq!(r.interior().len(), 18);
        assert!(r.interior().iter().all(|&x| (x - 0.5).abs() < 1e-12));
        let s = v1_ratio(&ZeroSequence::spiral(0.25, 0.5, 20).unwrap()).unwrap();
        assert!(s.max.unwrap() > 1e4);
    }

    #[test]
    fn separation_examples() {
        let r = separation_check(&ZeroSequence::radial(0.5, 20).unwrap(), 0.1).unwrap();
        assert!(r.two_split);
        assert!(r.min_rho >= 1.0 / 3.0 && r.min_rho < 1.0 / 3.0 + 1e-5, "{}", r.min_rho);
        let q = separation_check(&custom(&[(0.0, 0.0), (0.1, 0.0), (0.2, 0.0), (0.9, 0.0)]), 0.1).unwrap();
        assert!((q.min_rho - 0.1).abs() < 1e-15);
        assert_eq!(q.pair, (0, 1));
        assert!(q.two_split);
    }

    #[test]
    fn doubled_sequence_splits() {
        let base: Vec<Complex64> = (1..=6).map(|j| Complex64::new(1.0 - 0.5f64.powi(j), 0.0)).collect();
        let mut all = base.clone();
        all.extend(base.iter().map(|z| z + Complex64::new(0.0, 1e-9)));
        let r = separation_check(&ZeroSequence::from_complex(&all).unwrap(), 0.1).unwrap();
        assert!(r.min_rho < 1e-6);
        assert!(r.two_split);
        // three mutually close points cannot be split in two
        let tri = custom(&[(0.0, 0.0), (0.01, 0.0), (0.0, 0.01)]);
        assert!(!separation_check(&tri, 0.1).unwrap().two_split);
    }

    #[test]
    fn arc_condition_single_interior_point() {
        let rep = arc_condition(&custom(&[(0.0, 0.0)]), 4).unwrap();
        assert!((rep.c - 1.0 / (2.0 * PI)).abs() < 1e-14);
        assert_eq!(rep.witness.0, 0);
        assert!(arc_condition(&custom(&[(0.0, 0.0)]), 17).is_err());
    }

    #[test]
    fn entropy_of_origin_is_zero() {
        let v = bc_entropy(&custom(&[(0.0, 0.0)]), QuadratureOpts::default()).unwrap();
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn entropy_of_boundary_point() {
        let seq = ZeroSequence::custom(vec![], vec![DiskPoint::boundary(0.0)]).unwrap();
        let v = bc_entropy(&seq, QuadratureOpts::default()).unwrap();
        assert!(v.abs() < 1e-3, "{v}");
    }

    #[test]
    fn tail_masses() {
        assert_eq!(ZeroSequence::radial(0.5, 10).unwrap().tail_mass(10), 0.5f64.powi(10));
        let s = ZeroSequence::spiral(0.25, 0.5, 5).unwrap();
        assert!((s.tail_mass(5) - 0.25f64.powi(5) / 3.0).abs() < 1e-18);
        assert_eq!(custom(&[(0.1, 0.0)]).tail_mass(1), 0.0);
    }

    #[test]
    fn json_round_trips() {
        let s = ZeroSequence::spiral(0.25, 0.5, 7).unwrap();
        assert_eq!(ZeroSequence::from_json(&s.to_json().unwrap()).unwrap(), s);
        let c = ZeroSequence::custom(
            vec![DiskPoint::polar(1e-20, 0.1).unwrap(), DiskPoint::origin()],
            vec![DiskPoint::boundary(0.1)],
        )
        .unwrap();
        let back = ZeroSequence::from_json(&c.to_json().unwrap()).unwrap();
        for (p, q) in back.closure_points().iter().zip(c.closure_points()) {
            assert_eq!(p.depth(), q.depth());
            assert!((p.angle() - q.angle()).abs() < 1e-15);
        }
        assert!(ZeroSequence::from_json(r#"{"kind":"radial","params":{},"J":3}"#).is_err());
    }

    #[test]
    fn geometry_csv_header() {
        let rep = geometry_report(&ZeroSequence::radial(0.5, 5).unwrap(), &GeometryOpts::default()).unwrap();
        let csv = rep.to_csv();
        assert_eq!(csv.lines().next().unwrap(), "j,|z_j|,1-|z_j|,d_j,ratio,edge_flag");
        assert_eq!(csv.lines().count(), 6);
        assert_eq!(rep.scalars.len, 5);
    }
}
