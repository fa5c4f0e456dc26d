//! Closed-form analytic test functions on the disk, as an expression tree.
//!
//! Every node can be evaluated pointwise and expanded into a [`Jet`]; the two
//! routes are independent so they can check each other.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{singular, usage, Error, Result};
use crate::inner::mobius_jet;
use crate::jet::Jet;

pub const SCHEMA_VERSION: &str = "1";

/// Tolerance for deciding that a point sits on a boundary singularity.
const SPECTRUM_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "Node", try_from = "Node")]
pub enum AnalyticExpr {
    Const(Complex64),
    /// The identity `z`.
    Identity,
    /// `(a - z)/(1 - conj(a) z)`, times `conj(a)/|a|` when normalized.
    /// A zero at the origin is the factor `z`.
    Mobius { zero: Complex64, normalized: bool },
    /// `(1 - z)^beta`, principal branch, `beta > 0`.
    OneMinusPow { beta: f64 },
    /// `sum_m c_m z^m`.
    Poly(Vec<Complex64>),
    Sum(Vec<AnalyticExpr>),
    Product(Vec<AnalyticExpr>),
    Powi(Box<AnalyticExpr>, u32),
    /// `exp(-mass (zeta + z)/(zeta - z))` for a boundary point `zeta`.
    SingularAtom { point: Complex64, mass: f64 },
}

impl AnalyticExpr {
    pub fn z() -> Self {
        AnalyticExpr::Identity
    }

    pub fn constant(c: Complex64) -> Self {
        AnalyticExpr::Const(c)
    }

    pub fn real(x: f64) -> Self {
        AnalyticExpr::Const(Complex64::new(x, 0.0))
    }

    pub fn poly(coeffs: Vec<Complex64>) -> Self {
        AnalyticExpr::Poly(coeffs)
    }

    /// Polynomial with real coefficients.
    pub fn real_poly(coeffs: &[f64]) -> Self {
        AnalyticExpr::Poly(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn mobius(zero: Complex64, normalized: bool) -> Result<Self> {
        let e = AnalyticExpr::Mobius { zero, normalized };
        e.validate()?;
        Ok(e)
    }

    pub fn one_minus_pow(beta: f64) -> Result<Self> {
        let e = AnalyticExpr::OneMinusPow { beta };
        e.validate()?;
        Ok(e)
    }

    pub fn singular_atom(point: Complex64, mass: f64) -> Result<Self> {
        let e = AnalyticExpr::SingularAtom { point, mass };
        e.validate()?;
        Ok(e)
    }

    pub fn product(factors: Vec<AnalyticExpr>) -> Self {
        AnalyticExpr::Product(factors)
    }

    pub fn sum(terms: Vec<AnalyticExpr>) -> Self {
        AnalyticExpr::Sum(terms)
    }

    pub fn powi(self, n: u32) -> Self {
        AnalyticExpr::Powi(Box::new(self), n)
    }

    /// Check node parameters recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            AnalyticExpr::Const(c) if !(c.re.is_finite() && c.im.is_finite()) => usage("non-finite constant"),
            AnalyticExpr::Mobius { zero, .. } if !(zero.norm() < 1.0) => {
                usage(format!("Möbius zero {zero} is not inside the unit disk"))
            }
            AnalyticExpr::OneMinusPow { beta } if !(*beta > 0.0) || !beta.is_finite() => {
                usage(format!("(1 - z)^beta needs beta > 0, got {beta}"))
            }
            AnalyticExpr::SingularAtom { point, mass } => {
                if (point.norm() - 1.0).abs() > 1e-12 {
                    usage(format!("singular atom {point} is not on the unit circle"))
                } else if !(*mass > 0.0) || !mass.is_finite() {
                    usage(format!("singular atom mass must be positive, got {mass}"))
                } else {
                    Ok(())
                }
            }
            AnalyticExpr::Sum(args) | AnalyticExpr::Product(args) => args.iter().try_for_each(|a| a.validate()),
            AnalyticExpr::Powi(base, _) => base.validate(),
            _ => Ok(()),
        }
    }

    /// Boundary points where the expression fails to be analytic.
    pub fn boundary_singularities(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        self.collect_singularities(&mut out);
        out
    }

    fn collect_singularities(&self, out: &mut Vec<Complex64>) {
        match self {
            AnalyticExpr::OneMinusPow { beta } if beta.fract() != 0.0 => out.push(Complex64::new(1.0, 0.0)),
            AnalyticExpr::SingularAtom { point, .. } => out.push(*point),
            AnalyticExpr::Sum(args) | AnalyticExpr::Product(args) => {
                args.iter().for_each(|a| a.collect_singularities(out))
            }
            AnalyticExpr::Powi(base, _) => base.collect_singularities(out),
            _ => {}
        }
    }

    /// Direct pointwise evaluation.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_in_closed_disk(z)?;
        self.eval_unchecked(z)
    }

    fn eval_unchecked(&self, z: Complex64) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        Ok(match self {
            AnalyticExpr::Const(c) => *c,
            AnalyticExpr::Identity => z,
            AnalyticExpr::Mobius { zero, normalized } => {
                if *zero == Complex64::new(0.0, 0.0) {
                    z
                } else {
                    let den = one - zero.conj() * z;
                    if den.norm() == 0.0 {
                        return singular(format!("pole of the Möbius factor with zero {zero}"));
                    }
                    let b = (zero - z) / den;
                    if *normalized {
                        b * zero.conj() / zero.norm()
                    } else {
                        b
                    }
                }
            }
            AnalyticExpr::OneMinusPow { beta } => {
                let u = one - z;
                if beta.fract() == 0.0 {
                    u.powu(*beta as u32)
                } else if u.norm() <= SPECTRUM_TOL {
                    return singular("(1 - z)^beta evaluated at its branch point z = 1");
                } else {
                    (u.ln() * beta).exp()
                }
            }
            AnalyticExpr::Poly(cs) => cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c),
            AnalyticExpr::Sum(args) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in args {
                    acc += a.eval_unchecked(z)?;
                }
                acc
            }
            AnalyticExpr::Product(args) => {
                let mut acc = one;
                for a in args {
                    acc *= a.eval_unchecked(z)?;
                }
                acc
            }
            AnalyticExpr::Powi(base, n) => base.eval_unchecked(z)?.powu(*n),
            AnalyticExpr::SingularAtom { point, mass } => {
                let u = point - z;
                if u.norm() <= SPECTRUM_TOL {
                    return singular(format!("evaluation at the singular atom {point}"));
                }
                (-(point + z) / u * *mass).exp()
            }
        })
    }

    /// Jet of order `order` at `w`.
    pub fn jet(&self, w: Complex64, order: usize) -> Result<Jet> {
        check_in_closed_disk(w)?;
        self.jet_unchecked(w, order)
    }

    fn jet_unchecked(&self, w: Complex64, order: usize) -> Result<Jet> {
        let one = Complex64::new(1.0, 0.0);
        match self {
            AnalyticExpr::Const(c) => Ok(Jet::constant(w, *c, order)),
            AnalyticExpr::Identity => Ok(Jet::variable(w, order)),
            AnalyticExpr::Mobius { zero, normalized } => {
                let j = mobius_jet(zero, &w, order)?;
                if *normalized && *zero != Complex64::new(0.0, 0.0) {
                    Ok(j.scale(&(zero.conj() / zero.norm())))
                } else {
                    Ok(j)
                }
            }
            AnalyticExpr::OneMinusPow { beta } => {
                let u = Jet::polynomial(&[one, -one], w, order);
                if beta.fract() == 0.0 {
                    Ok(u.powi(*beta as u32))
                } else if (one - w).norm() <= SPECTRUM_TOL {
                    singular("jet of (1 - z)^beta at its branch point z = 1")
                } else {
                    u.powf(*beta)
                }
            }
            AnalyticExpr::Poly(cs) => Ok(Jet::polynomial(cs, w, order)),
            AnalyticExpr::Sum(args) => {
                let mut acc = Jet::zero(w, order);
                for a in args {
                    acc = acc.add(&a.jet_unchecked(w, order)?)?;
                }
                Ok(acc)
            }
            AnalyticExpr::Product(args) => {
                let mut acc = Jet::constant(w, one, order);
                for a in args {
                    acc = acc.mul(&a.jet_unchecked(w, order)?)?;
                }
                Ok(acc)
            }
            AnalyticExpr::Powi(base, n) => Ok(base.jet_unchecked(w, order)?.powi(*n)),
            AnalyticExpr::SingularAtom { point, mass } => singular_atom_jet(*point, *mass, w, order),
        }
    }

    /// `f^(l)(w)`.
    pub fn derivative(&self, w: Complex64, l: usize) -> Result<Complex64> {
        self.jet(w, l)?.derivative(l)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ExprDocument { version: SCHEMA_VERSION.into(), expr: self.clone() };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ExprDocument = serde_json::from_str(s)?;
        if doc.version != SCHEMA_VERSION {
            return usage(format!("unsupported expression schema version {:?}", doc.version));
        }
        Ok(doc.expr)
    }
}

/// Jet of `exp(-mass (zeta + z)/(zeta - z))` at `w`.
/// `-m (zeta + z)/(zeta - z)` with the real part taken as
/// `-m (1 - |z|^2)/|zeta - z|^2`, exactly zero for `z` on the circle.
pub(crate) fn atom_exponent(point: Complex64, mass: f64, z: Complex64) -> Complex64 {
    let u = point - z;
    let r = z.norm();
    let rim = (1.0 - r) * (1.0 + r);
    let rim = if rim.abs() <= 4.0 * f64::EPSILON { 0.0 } else { rim };
    let q = u.norm_sqr();
    Complex64::new(-mass * rim / q, -2.0 * mass * (z * point.conj()).im / q)
}

pub(crate) fn singular_atom_jet(point: Complex64, mass: f64, w: Complex64, order: usize) -> Result<Jet> {
    let u = point - w;
    if u.norm() <= SPECTRUM_TOL {
        return singular(format!("jet at the singular atom {point}"));
    }
    // (zeta + z)/(zeta - z) = -1 + 2 zeta / (zeta - z); expand the geometric series in t = z - w
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut inv_pow = u.inv();
    coeffs.push(atom_exponent(point, mass, w));
    for _ in 1..=order {
        inv_pow /= u;
        coeffs.push(-(point * 2.0 * inv_pow) * mass);
    }
    Ok(Jet::new(w, coeffs)?.exp())
}

fn check_in_closed_disk(z: Complex64) -> Result<()> {
    if !(z.norm() <= 1.0 + 1e-12) {
        return usage(format!("point {z} lies outside the closed unit disk"));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ExprDocument {
    version: String,
    expr: AnalyticExpr,
}

/// Wire form of an expression node: `{op, args, params}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Node {
    pub op: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<Node>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
}

impl Node {
    fn leaf(op: &str, params: Vec<f64>) -> Self {
        Node { op: op.into(), args: Vec::new(), params }
    }
}

impl From<AnalyticExpr> for Node {
    fn from(e: AnalyticExpr) -> Self {
        match e {
            AnalyticExpr::Const(c) => Node::leaf("const", vec![c.re, c.im]),
            AnalyticExpr::Identity => Node::leaf("z", vec![]),
            AnalyticExpr::Mobius { zero, normalized } => {
                Node::leaf("mobius", vec![zero.re, zero.im, if normalized { 1.0 } else { 0.0 }])
            }
            AnalyticExpr::OneMinusPow { beta } => Node::leaf("one_minus_pow", vec![beta]),
            AnalyticExpr::Poly(cs) => Node::leaf("poly", cs.iter().flat_map(|c| [c.re, c.im]).collect()),
            AnalyticExpr::Sum(args) => Node { op: "add".into(), args: args.into_iter().map(Node::from).collect(), params: vec![] },
            AnalyticExpr::Product(args) => {
                Node { op: "mul".into(), args: args.into_iter().map(Node::from).collect(), params: vec![] }
            }
            AnalyticExpr::Powi(base, n) => Node { op: "powi".into(), args: vec![Node::from(*base)], params: vec![n as f64] },
            AnalyticExpr::SingularAtom { point, mass } => Node::leaf("singular", vec![point.re, point.im, mass]),
        }
    }
}

impl TryFrom<Node> for AnalyticExpr {
    type Error = Error;

    fn try_from(node: Node) -> Result<Self> {
        let p = &node.params;
        let need = |n: usize| -> Result<()> {
            if p.len() < n {
                usage(format!("node {:?} needs {n} params, got {}", node.op, p.len()))
            } else {
                Ok(())
            }
        };
        let e = match node.op.as_str() {
            "const" => {
                need(1)?;
                AnalyticExpr::Const(Complex64::new(p[0], p.get(1).copied().unwrap_or(0.0)))
            }
            "z" => AnalyticExpr::Identity,
            "mobius" => {
                need(2)?;
                AnalyticExpr::Mobius {
                    zero: Complex64::new(p[0], p[1]),
                    normalized: p.get(2).is_some_and(|&f| f != 0.0),
                }
            }
            "one_minus_pow" => {
                need(1)?;
                AnalyticExpr::OneMinusPow { beta: p[0] }
            }
            "poly" => {
                if p.len() % 2 != 0 {
                    return usage("poly params must be (re, im) pairs");
                }
                AnalyticExpr::Poly(p.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
            }
            "add" | "mul" => {
                let args = node.args.into_iter().map(AnalyticExpr::try_from).collect::<Result<Vec<_>>>()?;
                if node.op == "add" {
                    AnalyticExpr::Sum(args)
                } else {
                    AnalyticExpr::Product(args)
                }
            }
            "powi" => {
                need(1)?;
                if p[0] < 0.0 || p[0].fract() != 0.0 {
                    return usage(format!("powi exponent must be a nonnegative integer, got {}", p[0]));
                }
                let n = p[0] as u32;
                let mut args = node.args.into_iter();
                let (Some(base), None) = (args.next(), args.next()) else {
                    return usage("powi takes exactly one argument");
                };
                AnalyticExpr::Powi(Box::new(AnalyticExpr::try_from(base)?), n)
            }
            "singular" => {
                need(3)?;
                AnalyticExpr::SingularAtom { point: Complex64::new(p[0], p[1]), mass: p[2] }
            }
            other => return usage(format!("unknown expression op {other:?}")),
        };
        e.validate()?;
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn mobius_jet_matches_symbolic_derivative() {
        let b = AnalyticExpr::mobius(c(0.5), false).unwrap();
        let j = b.jet(c(0.5), 1).unwrap();
        assert!(j.coeff(0).norm() < 1e-16);
        assert!((j.coeff(1) - c(-4.0 / 3.0)).norm() < 1e-15);
        assert!((b.derivative(c(0.5), 1).unwrap() - c(-4.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn identity_jet() {
        let j = AnalyticExpr::z().jet(c(0.3), 2).unwrap();
        assert_eq!(j.coeffs(), &[c(0.3), c(1.0), c(0.0)]);
    }

    #[test]
    fn singular_atom_value_at_origin() {
        let s = AnalyticExpr::singular_atom(c(1.0), 1.0).unwrap();
        let j = s.jet(c(0.0), 0).unwrap();
        assert!((j.coeff(0) - c((-1.0f64).exp())).norm() < 1e-15);
        assert!(matches!(s.jet(c(1.0), 1), Err(Error::Singularity(_))));
        assert!(matches!(s.eval(c(1.0)), Err(Error::Singularity(_))));
    }

    #[test]
    fn simple_derivatives() {
        let cube = AnalyticExpr::z().powi(3);
        assert_eq!(cube.derivative(c(0.0), 3).unwrap(), c(6.0));
        let five = AnalyticExpr::real(5.0);
        assert_eq!(five.derivative(c(0.9), 2).unwrap(), c(0.0));
    }

    #[test]
    fn branch_point_is_singular_for_fractional_powers_only() {
        let half = AnalyticExpr::one_minus_pow(1.5).unwrap();
        assert!(half.jet(c(1.0), 2).is_err());
        let sq = AnalyticExpr::one_minus_pow(2.0).unwrap();
        let j = sq.jet(c(1.0), 2).unwrap();
        assert_eq!(j.coeffs(), &[c(0.0), c(0.0), c(1.0)]);
    }

    #[test]
    fn invalid_nodes_are_rejected() {
        assert!(AnalyticExpr::mobius(c(1.0), false).is_err());
        assert!(AnalyticExpr::one_minus_pow(0.0).is_err());
        assert!(AnalyticExpr::singular_atom(c(0.5), 1.0).is_err());
        assert!(AnalyticExpr::z().eval(c(1.5)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let e = AnalyticExpr::product(vec![
            AnalyticExpr::mobius(Complex64::new(0.2, -0.3), true).unwrap(),
            AnalyticExpr::one_minus_pow(2.5).unwrap(),
            AnalyticExpr::singular_atom(Complex64::new(0.0, 1.0), 0.7).unwrap(),
            AnalyticExpr::sum(vec![AnalyticExpr::z(), AnalyticExpr::real(1.0)]).powi(2),
            AnalyticExpr::real_poly(&[1.0, 0.0, -2.0]),
        ]);
        let s = e.to_json().unwrap();
        assert!(s.contains("\"version\": \"1\""));
        assert_eq!(AnalyticExpr::from_json(&s).unwrap(), e);
    }

    #[test]
    fn json_rejects_unknown_ops_and_versions() {
        let bad = r#"{"version":"1","expr":{"op":"sin"}}"#;
        assert!(AnalyticExpr::from_json(bad).is_err());
        let old = r#"{"version":"0","expr":{"op":"z"}}"#;
        assert!(AnalyticExpr::from_json(old).is_err());
    }
}
