//! Finite Blaschke products times finite-atomic singular inner functions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{singular, usage, Result};
use crate::expr::AnalyticExpr;
use crate::geometry::ZeroSequence;
use crate::jet::Jet;
use crate::scalar::Scalar;

pub const SCHEMA_VERSION: &str = "1";

/// Distance below which a point counts as sitting on a spectrum point.
pub const SPECTRUM_TOL: f64 = 1e-14;

/// Default spectrum exclusion radius for boundary grids.
pub const DEFAULT_EXCLUSION: f64 = 1e-6;

/// Jet of the Möbius factor `(a - z)/(1 - conj(a) z)` at `w` in closed form;
/// a zero at the origin gives the factor `z`.
pub fn mobius_jet<S: Scalar>(zero: &S, w: &S, order: usize) -> Result<Jet<S>> {
    if zero.is_zero() {
        return Ok(Jet::variable(w.clone(), order));
    }
    let a_bar = zero.conj();
    let gap = zero.one_minus_norm_sqr();
    let num = zero.clone() - w.clone();
    let den = gap.clone() + a_bar.clone() * num.clone();
    if den.is_zero() {
        return singular("jet of a Möbius factor at its pole");
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(num / den.clone());
    // c_k = -(1 - |a|^2) conj(a)^(k-1) / D^(k+1)
    let mut ratio = -gap / (den.clone() * den.clone());
    for _ in 1..=order {
        coeffs.push(ratio.clone());
        ratio = ratio * a_bar.clone() / den.clone();
    }
    Jet::new(w.clone(), coeffs)
}

/// Jet of the unnormalized product `prod_j (a_j - z)/(1 - conj(a_j) z)`.
pub fn blaschke_jet<S: Scalar>(zeros: &[S], w: &S, order: usize) -> Result<Jet<S>> {
    let mut acc = Jet::constant(w.clone(), S::one(), order);
    for a in zeros {
        acc = acc.mul(&mobius_jet(a, w, order)?)?;
    }
    Ok(acc)
}

/// A point mass `mass` at the boundary point `point`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub point: Complex64,
    pub mass: f64,
}

impl Serialize for Atom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.point.re, self.point.im, self.mass].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [re, im, mass] = <[f64; 3]>::deserialize(d)?;
        Ok(Atom { point: Complex64::new(re, im), mass })
    }
}

/// `phase * prod_j b_{z_j}(z) * prod_i exp(-mass_i (zeta_i + z)/(zeta_i - z))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InnerDoc", into = "InnerDoc")]
pub struct InnerFunction {
    zeros: Vec<Complex64>,
    atoms: Vec<Atom>,
    phase: Option<f64>,
    normalized: bool,
    accumulation: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct InnerDoc {
    #[serde(default = "default_version")]
    version: String,
    #[serde(default)]
    zeros: Vec<[f64; 2]>,
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    phase: Option<f64>,
    #[serde(default = "default_true")]
    normalized: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    accumulation: Vec<[f64; 2]>,
}

fn default_version() -> String {
    SCHEMA_VERSION.into()
}

fn default_true() -> bool {
    true
}

impl TryFrom<InnerDoc> for InnerFunction {
    type Error = crate::Error;

    fn try_from(doc: InnerDoc) -> Result<Self> {
        if doc.version != SCHEMA_VERSION {
            return usage(format!("unsupported inner function schema version {:?}", doc.version));
        }
        let c = |p: &[f64; 2]| Complex64::new(p[0], p[1]);
        let mut f = InnerFunction::new(doc.zeros.iter().map(c).collect(), doc.atoms)?;
        f.phase = doc.phase;
        f.normalized = doc.normalized;
        f.with_accumulation(doc.accumulation.iter().map(c).collect())
    }
}

impl From<InnerFunction> for InnerDoc {
    fn from(f: InnerFunction) -> Self {
        let pair = |z: &Complex64| [z.re, z.im];
        InnerDoc {
            version: SCHEMA_VERSION.into(),
            zeros: f.zeros.iter().map(pair).collect(),
            atoms: f.atoms,
            phase: f.phase,
            normalized: f.normalized,
            accumulation: f.accumulation.iter().map(pair).collect(),
        }
    }
}

impl InnerFunction {
    /// Normalized Blaschke factors; zeros may repeat.
    pub fn new(zeros: Vec<Complex64>, atoms: Vec<Atom>) -> Result<Self> {
        if let Some(z) = zeros.iter().find(|z| !(z.norm() < 1.0)) {
            return usage(format!("Blaschke zero {z} is not inside the unit disk"));
        }
        for a in &atoms {
            if (a.point.norm() - 1.0).abs() > 1e-12 {
                return usage(format!("atom {} is not on the unit circle", a.point));
            }
            if !(a.mass > 0.0) || !a.mass.is_finite() {
                return usage(format!("atom mass must be positive, got {}", a.mass));
            }
        }
        Ok(Self { zeros, atoms, phase: None, normalized: true, accumulation: Vec::new() })
    }

    pub fn blaschke(zeros: Vec<Complex64>) -> Result<Self> {
        Self::new(zeros, Vec::new())
    }

    /// `exp(-mass (point + z)/(point - z))`.
    pub fn atom(point: Complex64, mass: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![Atom { point, mass }])
    }

    /// The identity `z`.
    pub fn identity() -> Self {
        Self { zeros: vec![Complex64::new(0.0, 0.0)], atoms: Vec::new(), phase: None, normalized: true, accumulation: Vec::new() }
    }

    /// Blaschke product over a truncated sequence, carrying its accumulation
    /// points into the spectrum.
    pub fn from_sequence(seq: &ZeroSequence) -> Result<Self> {
        let zeros: Vec<Complex64> = seq.points().iter().map(|p| p.z()).collect();
        Self::blaschke(zeros)?.with_accumulation(seq.accumulation().iter().map(|p| p.z()).collect())
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = Some(phase);
        self
    }

    /// Drop the unimodular normalizers `conj(z_j)/|z_j|`.
    pub fn unnormalized(mut self) -> Self {
        self.normalized = false;
        self
    }

    pub fn with_accumulation(mut self, points: Vec<Complex64>) -> Result<Self> {
        if let Some(z) = points.iter().find(|z| (z.norm() - 1.0).abs() > 1e-12) {
            return usage(format!("accumulation point {z} is not on the unit circle"));
        }
        self.accumulation = points;
        Ok(self)
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn phase(&self) -> Option<f64> {
        self.phase
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn accumulation(&self) -> &[Complex64] {
        &self.accumulation
    }

    /// The product of two inner functions.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.normalized != other.normalized {
            return usage("cannot multiply normalized and unnormalized products");
        }
        let phase = match (self.phase, other.phase) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0.0) + b.unwrap_or(0.0)),
        };
        let cat = |a: &[Complex64], b: &[Complex64]| a.iter().chain(b).copied().collect::<Vec<_>>();
        Ok(Self {
            zeros: cat(&self.zeros, &other.zeros),
            atoms: self.atoms.iter().chain(&other.atoms).copied().collect(),
            phase,
            normalized: self.normalized,
            accumulation: cat(&self.accumulation, &other.accumulation),
        })
    }

    pub fn spectrum(&self) -> Spectrum {
        let mut points = self.zeros.clone();
        points.extend(self.atoms.iter().map(|a| a.point));
        points.extend_from_slice(&self.accumulation);
        Spectrum { points }
    }

    fn phase_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.phase.unwrap_or(0.0))
    }

    fn normalizer(&self, a: &Complex64) -> Complex64 {
        if self.normalized && a.norm() > 0.0 {
            a.conj() / a.norm()
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    /// The same function as an expression tree.
    pub fn to_expr(&self) -> AnalyticExpr {
        let mut factors = Vec::new();
        if let Some(p) = self.phase {
            factors.push(AnalyticExpr::constant(Complex64::from_polar(1.0, p)));
        }
        factors.extend(self.zeros.iter().map(|&zero| AnalyticExpr::Mobius { zero, normalized: self.normalized }));
        factors.extend(self.atoms.iter().map(|a| AnalyticExpr::SingularAtom { point: a.point, mass: a.mass }));
        AnalyticExpr::product(factors)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    fn check_off_boundary_spectrum(&self, z: Complex64) -> Result<()> {
        let boundary = self.atoms.iter().map(|a| a.point).chain(self.accumulation.iter().copied());
        for p in boundary {
            if (p - z).norm() <= SPECTRUM_TOL {
                return singular(format!("{z} lies on the boundary spectrum point {p}"));
            }
        }
        Ok(())
    }
}

/// Closure of the zeros together with atom locations and declared
/// accumulation points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub points: Vec<Complex64>,
}

impl Spectrum {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dist(&self, z: Complex64) -> Option<f64> {
        self.points.iter().map(|p| (p - z).norm()).min_by(f64::total_cmp)
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.dist(z).is_some_and(|d| d <= tol)
    }
}

fn check_closed_disk(z: Complex64) -> Result<()> {
    if !(z.norm() <= 1.0 + 1e-12) {
        return usage(format!("point {z} lies outside the closed unit disk"));
    }
    Ok(())
}

/// `theta(z)`.
pub fn eval_inner(theta: &InnerFunction, z: Complex64) -> Result<Complex64> {
    check_closed_disk(z)?;
    let one = Complex64::new(1.0, 0.0);
    let mut acc = theta.phase_factor();
    for a in &theta.zeros {
        if a.norm() == 0.0 {
            acc *= z;
        } else {
            acc *= theta.normalizer(a) * (a - z) / (one - a.conj() * z);
        }
    }
    for at in &theta.atoms {
        let u = at.point - z;
        if u.norm() <= SPECTRUM_TOL {
            return singular(format!("evaluation at the atom {}", at.point));
        }
        acc *= crate::expr::atom_exponent(at.point, at.mass, z).exp();
    }
    Ok(acc)
}

/// Jet of `theta` at `z`, built by jet multiplication over the factors.
pub fn inner_jet(theta: &InnerFunction, z: Complex64, order: usize) -> Result<Jet> {
    check_closed_disk(z)?;
    theta.check_off_boundary_spectrum(z)?;
    let mut acc = Jet::constant(z, theta.phase_factor(), order);
    for a in &theta.zeros {
        acc = acc.mul(&mobius_jet(a, &z, order)?.scale(&theta.normalizer(a)))?;
    }
    for at in &theta.atoms {
        acc = acc.mul(&crate::expr::singular_atom_jet(at.point, at.mass, z, order)?)?;
    }
    Ok(acc)
}

fn check_boundary(zeta: Complex64) -> Result<()> {
    if (zeta.norm() - 1.0).abs() > 1e-12 {
        return usage(format!("{zeta} is not on the unit circle"));
    }
    Ok(())
}

/// `|theta'(zeta)|` on the circle from the closed form
/// `sum_j (1 - |z_j|^2)/|zeta - z_j|^2 + sum_i 2 mass_i/|zeta - zeta_i|^2`.
pub fn boundary_deriv_modulus(theta: &InnerFunction, zeta: Complex64) -> Result<f64> {
    check_boundary(zeta)?;
    theta.check_off_boundary_spectrum(zeta)?;
    let zeros = theta.zeros.iter().map(|a| a.one_minus_norm_sqr().re / (zeta - a).norm_sqr());
    let atoms = theta.atoms.iter().map(|at| 2.0 * at.mass / (zeta - at.point).norm_sqr());
    Ok(zeros.chain(atoms).fold(0.0, |acc, x| acc + x))
}

/// `d_theta(zeta)` and `tau_theta(zeta) = min(d, 1/|theta'(zeta)|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DTau {
    pub d: f64,
    pub tau: f64,
    /// The spectrum was empty and `d` defaulted to the disk diameter.
    pub empty_spectrum: bool,
}

pub fn d_tau(theta: &InnerFunction, zeta: Complex64) -> Result<DTau> {
    let deriv = boundary_deriv_modulus(theta, zeta)?;
    let spec = theta.spectrum();
    let (d, empty_spectrum) = match spec.dist(zeta) {
        Some(d) => (d, false),
        None => (2.0, true),
    };
    Ok(DTau { d, tau: d.min(1.0 / deriv), empty_spectrum })
}

/// `sum_{j > cut} (1 - |z_j|)` for a sequence.
pub fn tail_mass(seq: &ZeroSequence, cut: usize) -> f64 {
    seq.tail_mass(cut)
}

/// Hyperbolically graded polar mesh.
///
/// Ring depths are `2^-(q + i/substeps)` for `q < levels`, `i < substeps`,
/// plus a last ring at depth `2^-levels`; a ring in level `q` carries
/// `base * 2^q` equispaced angles. The depth-1 ring is the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub levels: u32,
    pub substeps: u32,
    pub base: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { levels: 12, substeps: 4, base: 16 }
    }
}

/// One mesh node; `index` is its position in the canonical ordering.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub index: usize,
    pub z: Complex64,
    /// `1 - |z|`.
    pub depth: f64,
}

impl GridSpec {
    pub fn new(levels: u32, substeps: u32, base: u32) -> Result<Self> {
        if levels > 24 || substeps == 0 || base == 0 {
            return usage(format!("invalid grid: levels {levels}, substeps {substeps}, base {base}"));
        }
        Ok(Self { levels, substeps, base })
    }

    /// A grid with `levels` changed (refinement pairs compare `Q - 1` and `Q`).
    pub fn with_levels(self, levels: u32) -> Self {
        Self { levels, ..self }
    }

    /// `(depth, count)` per ring, in canonical order.
    pub fn rings(&self) -> Vec<(f64, usize)> {
        let mut rings = Vec::new();
        for q in 0..self.levels {
            let count = self.base as usize * (1usize << q);
            for i in 0..self.substeps {
                let depth = (-(q as f64 + i as f64 / self.substeps as f64)).exp2();
                rings.push((depth, if depth == 1.0 { 1 } else { count }));
            }
        }
        let last = (-(self.levels as f64)).exp2();
        rings.push((last, if last == 1.0 { 1 } else { self.base as usize * (1usize << self.levels) }));
        rings
    }

    pub fn len(&self) -> usize {
        self.rings().iter().map(|r| r.1).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All nodes in canonical order.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(self.len());
        for (depth, count) in self.rings() {
            for m in 0..count {
                let t = 2.0 * PI * m as f64 / count as f64;
                out.push(GridPoint { index: out.len(), z: Complex64::from_polar(1.0 - depth, t), depth });
            }
        }
        out
    }
}

/// `count` equispaced circle points, minus those within `exclusion` of a
/// spectrum point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGrid {
    pub count: usize,
    pub exclusion: f64,
}

impl Default for BoundaryGrid {
    fn default() -> Self {
        Self { count: 1 << 14, exclusion: DEFAULT_EXCLUSION }
    }
}

impl BoundaryGrid {
    pub fn new(count: usize) -> Self {
        Self { count, exclusion: DEFAULT_EXCLUSION }
    }

    /// Surviving `(index, zeta)` pairs.
    pub fn points(&self, spectrum: &Spectrum) -> Result<Vec<(usize, Complex64)>> {
        let pts: Vec<(usize, Complex64)> = (0..self.count)
            .map(|m| (m, Complex64::from_polar(1.0, 2.0 * PI * m as f64 / self.count as f64)))
            .filter(|(_, z)| !spectrum.contains(*z, self.exclusion))
            .collect();
        if pts.is_empty() {
            return usage("every boundary grid point falls in the spectrum exclusion zone");
        }
        Ok(pts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SublevelPoint {
    pub index: usize,
    pub z: Complex64,
    pub modulus: f64,
    pub depth: f64,
}

/// Grid nodes of `{z : |theta(z)| < epsilon}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SublevelSample {
    pub epsilon: f64,
    pub points: Vec<SublevelPoint>,
    pub grid: GridSpec,
}

pub const SUBLEVEL_CSV_HEADER: &str = "re,im,|theta|,1-|z|";

impl SublevelSample {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SUBLEVEL_CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            out.push_str(&format!("{},{},{},{}\n", p.z.re, p.z.im, p.modulus, p.depth));
        }
        out
    }
}

pub fn sample_sublevel(theta: &InnerFunction, epsilon: f64, grid: &GridSpec) -> Result<SublevelSample> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return usage(format!("epsilon must lie in (0, 1), got {epsilon}"));
    }
    let nodes = grid.points();
    let points = nodes
        .par_iter()
        .map(|g| {
            let v = eval_inner(theta, g.z)?.norm();
            Ok((v < epsilon).then_some(SublevelPoint { index: g.index, z: g.z, modulus: v, depth: g.depth }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    for p in &points {
        let again = eval_inner(theta, p.z)?.norm();
        if !(again < epsilon) {
            return Err(crate::Error::Precondition(format!("sample point {} failed the re-check", p.z)));
        }
    }
    Ok(SublevelSample { epsilon, points, grid: *grid })
}
