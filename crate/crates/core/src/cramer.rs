//! The matrix `M(k, n)` with entries `1/(k + t - s)!`, its exact
//! determinant, Cramer solves over either scalar backend and the recovery of
//! `g^(k)(z_j)` from the right-hand sides `R_s`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{singular, usage, Error, Result};
use crate::expr::AnalyticExpr;
use crate::scalar::{factorial, factorial_big, GaussRat, Scalar};

pub const SCHEMA_VERSION: &str = "1";

/// Square matrix of exact rationals `M[s][t] = 1/(k + t - s)!`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    pub k: usize,
    pub n: usize,
    pub entries: Vec<Vec<BigRational>>,
    /// Built with `k <= n/2`.
    pub outside_hypotheses: bool,
}

/// Build `M(k, n)`. Without `explore`, `n/2 < k <= n` is required; with it,
/// any `1 <= k <= n` is allowed and entries with negative factorial argument
/// are zero.
pub fn build_m(k: usize, n: usize, explore: bool) -> Result<RationalMatrix> {
    if k < 1 || k > n {
        return usage(format!("M(k, n) needs 1 <= k <= n, got k = {k}, n = {n}"));
    }
    let outside = 2 * k <= n;
    if outside && !explore {
        return usage(format!("k = {k} <= n/2 for n = {n}; pass the exploration flag to build it anyway"));
    }
    let size = n - k + 1;
    let entries = (0..size)
        .map(|s| {
            (0..size)
                .map(|t| {
                    let arg = (k + t) as i64 - s as i64;
                    if arg < 0 {
                        BigRational::zero()
                    } else {
                        BigRational::new(BigInt::one(), factorial_big(arg as usize))
                    }
                })
                .collect()
        })
        .collect();
    Ok(RationalMatrix { k, n, entries, outside_hypotheses: outside })
}

impl RationalMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn det(&self) -> BigRational {
        det_rational(&self.entries)
    }

    /// `(-1)^(s+t) det(minor_{s,t})`.
    pub fn cofactor(&self, s: usize, t: usize) -> BigRational {
        let minor: Vec<Vec<BigRational>> = self
            .entries
            .iter()
            .enumerate()
            .filter(|&(r, _)| r != s)
            .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != t).map(|(_, v)| v.clone()).collect())
            .collect();
        let d = det_rational(&minor);
        if (s + t) % 2 == 0 {
            d
        } else {
            -d
        }
    }

    /// `M u`.
    pub fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(u).fold(S::zero(), |acc, (m, x)| acc + S::from_rational(m) * x.clone()))
            .collect()
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "version": SCHEMA_VERSION,
            "k": self.k,
            "n": self.n,
            "outside_hypotheses": self.outside_hypotheses,
            "entries": self.entries.iter().map(|row| row.iter().map(rational_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "det": rational_json(&self.det()),
        })
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let field = |name: &str| v.get(name).ok_or_else(|| Error::Usage(format!("matrix JSON lacks {name:?}")));
        if field("version")?.as_str() != Some(SCHEMA_VERSION) {
            return usage("unsupported matrix schema version");
        }
        let k = field("k")?.as_u64().ok_or_else(|| Error::Usage("k must be an integer".into()))? as usize;
        let n = field("n")?.as_u64().ok_or_else(|| Error::Usage("n must be an integer".into()))? as usize;
        let explore = field("outside_hypotheses")?.as_bool().unwrap_or(false);
        let m = build_m(k, n, explore)?;
        let entries = field("entries")?
            .as_array()
            .ok_or_else(|| Error::Usage("entries must be an array".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Usage("matrix rows must be arrays".into()))?
                    .iter()
                    .map(rational_from_json)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if entries != m.entries {
            return usage(format!("entries do not match M({k}, {n})"));
        }
        Ok(m)
    }
}

/// `{num, den}` with decimal strings.
pub fn rational_json(q: &BigRational) -> Value {
    json!({"num": q.numer().to_string(), "den": q.denom().to_string()})
}

pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    let part = |name: &str| -> Result<BigInt> {
        v.get(name)
            .and_then(Value::as_str)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Usage(format!("rational lacks a decimal {name:?} string")))
    };
    let den = part("den")?;
    if den.is_zero() {
        return usage("rational with zero denominator");
    }
    Ok(BigRational::new(part("num")?, den))
}

/// Exact determinant by fraction-free (Bareiss) elimination after clearing
/// each row's denominators.
pub fn det_rational(a: &[Vec<BigRational>]) -> BigRational {
    let size = a.len();
    if size == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= &l;
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for p in 0..size {
        if m[p][p].is_zero() {
            match (p + 1..size).find(|&r| !m[r][p].is_zero()) {
                Some(r) => {
                    m.swap(p, r);
                    sign = -sign;
                }
                None => return BigRational::zero(),
            }
        }
        for i in p + 1..size {
            for j in p + 1..size {
                let v = (&m[i][j] * &m[p][p] - &m[i][p] * &m[p][j]) / &prev;
                m[i][j] = v;
            }
            m[i][p] = BigInt::zero();
        }
        prev = m[p][p].clone();
    }
    BigRational::new(sign * &m[size - 1][size - 1], scale)
}

pub fn det_exact(m: &RationalMatrix) -> BigRational {
    m.det()
}

/// Unknowns of `M u = rhs` with the Cramer numerators `det M_t` (column `t`
/// replaced by `rhs`).
#[derive(Clone, Debug, PartialEq)]
pub struct SystemSolution<S> {
    pub unknowns: Vec<S>,
    pub det: BigRational,
    pub det_columns: Vec<S>,
    /// `|(M u - rhs)_s|`.
    pub residuals: Vec<f64>,
}

impl<S: Scalar + ExportScalar> SystemSolution<S> {
    /// `det M_1`, the numerator for the first unknown.
    pub fn det_m1(&self) -> &S {
        &self.det_columns[0]
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "version": SCHEMA_VERSION,
            "unknowns": self.unknowns.iter().map(ExportScalar::export).collect::<Vec<_>>(),
            "det": rational_json(&self.det),
            "det_columns": self.det_columns.iter().map(ExportScalar::export).collect::<Vec<_>>(),
            "residuals": self.residuals,
        })
    }
}

/// JSON form of a scalar: `[re, im]` for floats, `{re, im}` of `{num, den}`
/// for Gaussian rationals.
pub trait ExportScalar {
    fn export(&self) -> Value;
}

impl ExportScalar for Complex64 {
    fn export(&self) -> Value {
        json!([self.re, self.im])
    }
}

impl ExportScalar for GaussRat {
    fn export(&self) -> Value {
        json!({"re": rational_json(&self.re), "im": rational_json(&self.im)})
    }
}

/// Cramer's rule through exact cofactors: `det M_t = sum_s C_{s,t} rhs_s`.
pub fn cramer_solve<S: Scalar>(m: &RationalMatrix, rhs: &[S]) -> Result<SystemSolution<S>> {
    let size = m.size();
    if rhs.len() != size {
        return usage(format!("right-hand side has {} entries for a {size}x{size} system", rhs.len()));
    }
    let det = m.det();
    if det.is_zero() {
        return singular(format!("M({}, {}) is singular", m.k, m.n));
    }
    let det_s = S::from_rational(&det);
    let det_columns: Vec<S> = (0..size)
        .map(|t| (0..size).fold(S::zero(), |acc, s| acc + S::from_rational(&m.cofactor(s, t)) * rhs[s].clone()))
        .collect();
    let unknowns: Vec<S> = det_columns.iter().map(|d| d.clone() / det_s.clone()).collect();
    let residuals = residuals(m, &unknowns, rhs);
    Ok(SystemSolution { unknowns, det, det_columns, residuals })
}

fn residuals<S: Scalar>(m: &RationalMatrix, u: &[S], rhs: &[S]) -> Vec<f64> {
    m.apply(u).into_iter().zip(rhs).map(|(a, b)| (a - b.clone()).abs_f64()).collect()
}

/// Gaussian elimination with partial pivoting, an independent route to the
/// same unknowns.
pub fn gauss_solve<S: Scalar>(m: &RationalMatrix, rhs: &[S]) -> Result<Vec<S>> {
    let size = m.size();
    if rhs.len() != size {
        return usage(format!("right-hand side has {} entries for a {size}x{size} system", rhs.len()));
    }
    let mut a: Vec<Vec<S>> = m.entries.iter().map(|row| row.iter().map(S::from_rational).collect()).collect();
    let mut b = rhs.to_vec();
    for p in 0..size {
        let piv = (p..size)
            .filter(|&r| !a[r][p].is_zero())
            .max_by(|&r1, &r2| a[r1][p].abs_f64().total_cmp(&a[r2][p].abs_f64()).then(r2.cmp(&r1)))
            .ok_or_else(|| Error::Singularity(format!("M({}, {}) is singular", m.k, m.n)))?;
        a.swap(p, piv);
        b.swap(p, piv);
        for r in p + 1..size {
            let f = a[r][p].clone() / a[p][p].clone();
            for c in p..size {
                let v = a[r][c].clone() - f.clone() * a[p][c].clone();
                a[r][c] = v;
            }
            let v = b[r].clone() - f * b[p].clone();
            b[r] = v;
        }
    }
    let mut u = vec![S::zero(); size];
    for p in (0..size).rev() {
        let mut acc = b[p].clone();
        for c in p + 1..size {
            acc = acc - a[p][c].clone() * u[c].clone();
        }
        u[p] = acc / a[p][p].clone();
    }
    Ok(u)
}

/// Outcome of [`recover_gk`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recovery {
    pub k: usize,
    pub n: usize,
    pub alpha: f64,
    /// `R_s` for `s = 0..=n-k`.
    pub rhs: Vec<Complex64>,
    /// Solved unknowns `u_t`.
    pub unknowns: Vec<Complex64>,
    /// Direct `g^(k+t)(z_j) (z_l - z_j)^t`.
    pub expected: Vec<Complex64>,
    /// `max_t |u_t - expected_t| / max(|expected|)`.
    pub rel_error: f64,
    /// `|R_s| / |z_l - z_j|^(alpha - k)`.
    pub ratios: Vec<f64>,
    /// `|g^(s)(z_l) - sum_{m=s}^n g^(m)(z_j)/(m-s)! h^(m-s)| / |h|^(alpha-s)`,
    /// when requested.
    pub taylor_ratios: Option<Vec<f64>>,
    pub det: Value,
    pub det_m1: Complex64,
    pub outside_hypotheses: bool,
}

/// Tolerance for the vanishing-order check, relative to the largest jet
/// coefficient of order `k..=n`.
pub const VANISHING_TOL: f64 = 1e-10;

/// Form `R_s` from the jet of `g` at `z_j`, solve the `M(k, n)` system and
/// compare with the directly computed derivatives.
pub fn recover_gk(
    g: &AnalyticExpr,
    zj: Complex64,
    zl: Complex64,
    k: usize,
    n: usize,
    alpha: f64,
    taylor_check: bool,
) -> Result<Recovery> {
    let m = build_m(k, n, false)?;
    let h = zl - zj;
    if h.norm() == 0.0 {
        return usage("z_l must differ from z_j");
    }
    let jet = g.jet(zj, n)?;
    let c = jet.coeffs();
    let lead = c[k..=n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    if let Some(i) = (0..k).find(|&i| c[i].norm() > VANISHING_TOL * lead.max(f64::MIN_POSITIVE)) {
        return Err(Error::Precondition(format!(
            "g does not vanish to order {k} at {zj}: coefficient {i} has modulus {:e}",
            c[i].norm()
        )));
    }
    let d = jet.derivatives();
    let inv_fact = |x: usize| 1.0 / factorial::<Complex64>(x).re;
    let rhs: Vec<Complex64> = (0..=n - k)
        .map(|s| (k..=n).map(|mm| d[mm] * inv_fact(mm - s) * h.powu((mm - k) as u32)).sum())
        .collect();
    let sol = cramer_solve(&m, &rhs)?;
    let expected: Vec<Complex64> = (0..=n - k).map(|t| d[k + t] * h.powu(t as u32)).collect();
    let scale = expected.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let err = sol.unknowns.iter().zip(&expected).map(|(u, e)| (u - e).norm()).fold(0.0, f64::max);
    let rel_error = if scale > 0.0 { err / scale } else { err };
    let hn = h.norm();
    let ratios = rhs.iter().map(|r| r.norm() / hn.powf(alpha - k as f64)).collect();
    let taylor_ratios = if taylor_check {
        let at_l = g.jet(zl, n)?.derivatives();
        Some(
            (0..=n - k)
                .map(|s| {
                    let t: Complex64 = (s..=n).map(|mm| d[mm] * inv_fact(mm - s) * h.powu((mm - s) as u32)).sum();
                    (at_l[s] - t).norm() / hn.powf(alpha - s as f64)
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(Recovery {
        k,
        n,
        alpha,
        rhs,
        unknowns: sol.unknowns.clone(),
        expected,
        rel_error,
        ratios,
        taylor_ratios,
        det: rational_json(&sol.det),
        det_m1: sol.det_columns[0],
        outside_hypotheses: m.outside_hypotheses,
    })
}

/// Absolute value of a rational as a float, for reports.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(build_m(3, 3, false).unwrap().entries, vec![vec![q(1, 6)]]);
        assert_eq!(build_m(2, 3, false).unwrap().entries, vec![vec![q(1, 2), q(1, 6)], vec![q(1, 1), q(1, 2)]]);
        assert_eq!(build_m(3, 4, false).unwrap().entries, vec![vec![q(1, 6), q(1, 24)], vec![q(1, 2), q(1, 6)]]);
        assert!(build_m(1, 3, false).is_err());
        let e = build_m(1, 3, true).unwrap();
        assert!(e.outside_hypotheses);
        assert_eq!(e.entries[2][0], q(0, 1));
        assert!(build_m(0, 3, true).is_err());
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det_exact(&build_m(4, 4, false).unwrap()), q(1, 24));
        assert_eq!(det_exact(&build_m(2, 3, false).unwrap()), q(1, 12));
        assert_eq!(det_exact(&build_m(3, 4, false).unwrap()), q(1, 144));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = vec![vec![q(2, 3), q(-1, 2), q(0, 1)], vec![q(1, 5), q(0, 1), q(3, 1)], vec![q(0, 1), q(0, 1), q(1, 7)]];
        // leading 2x2 minor times 1/7
        let expect = (q(2, 3) * q(0, 1) - q(-1, 2) * q(1, 5)) * q(1, 7);
        assert_eq!(det_rational(&a), expect);
    }

    #[test]
    fn cramer_examples() {
        let m22 = build_m(2, 2, false).unwrap();
        let s = cramer_solve(&m22, &[GaussRat::from_i64(1)]).unwrap();
        assert_eq!(s.unknowns, vec![GaussRat::from_i64(2)]);
        let m = build_m(2, 3, false).unwrap();
        let s = cramer_solve(&m, &[GaussRat::from_i64(1), GaussRat::from_i64(2)]).unwrap();
        assert_eq!(s.unknowns, vec![GaussRat::from_i64(2), GaussRat::from_i64(0)]);
        assert_eq!(s.det, q(1, 12));
        assert_eq!(s.det_m1(), &GaussRat::from_rational(&q(1, 6)));
        assert!(s.residuals.iter().all(|&r| r == 0.0));
        let z = cramer_solve(&m, &[GaussRat::from_i64(0), GaussRat::from_i64(0)]).unwrap();
        assert!(z.unknowns.iter().all(|u| u.is_zero()));
    }

    #[test]
    fn cramer_agrees_with_elimination() {
        let m = build_m(4, 7, false).unwrap();
        let rhs: Vec<GaussRat> = (0..4).map(|i| crate::scalar::gauss(i * 3 - 2, 7, 1 - i, 5)).collect();
        let c = cramer_solve(&m, &rhs).unwrap();
        assert_eq!(c.unknowns, gauss_solve(&m, &rhs).unwrap());
    }

    #[test]
    fn recovery_examples() {
        let sq = AnalyticExpr::z().powi(2);
        let r = recover_gk(&sq, Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), 2, 3, 3.5, true).unwrap();
        assert_eq!(r.rhs, vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]);
        assert!((r.unknowns[0] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        assert!(r.unknowns[1].norm() < 1e-14);
        assert!(r.taylor_ratios.unwrap().iter().all(|&t| t < 1e-12));
        let cube = AnalyticExpr::sum(vec![AnalyticExpr::z(), AnalyticExpr::real(-0.5)]).powi(3);
        let r = recover_gk(&cube, Complex64::new(0.5, 0.0), Complex64::new(0.1, 0.2), 3, 3, 3.5, false).unwrap();
        assert!((r.unknowns[0] - Complex64::new(6.0, 0.0)).norm() < 1e-13);
        let lin = AnalyticExpr::z();
        let e = recover_gk(&lin, Complex64::new(0.3, 0.0), Complex64::new(0.1, 0.0), 2, 3, 3.5, false);
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn json_forms() {
        let m = build_m(3, 5, false).unwrap();
        let v = m.to_json_value();
        assert_eq!(v["entries"][0][0], json!({"num": "1", "den": "6"}));
        assert_eq!(RationalMatrix::from_json_value(&v).unwrap(), m);
        let s = cramer_solve(&m, &[Complex64::new(1.0, 0.0); 3]).unwrap();
        assert_eq!(s.to_json_value()["unknowns"].as_array().unwrap().len(), 3);
    }
}
