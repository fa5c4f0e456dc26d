//! Truncated Taylor expansions ("jets") of analytic functions.
//!
//! A jet of order `M` at a center `w` stores the Taylor coefficients
//! `c_i = f^(i)(w) / i!` for `i = 0..=M`. Products are truncated Cauchy
//! products; derivatives are recovered as `f^(l)(w) = l! c_l`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{singular, usage, Result};
use crate::scalar::{factorial, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<S = Complex64> {
    center: S,
    coeffs: Vec<S>,
}

/// Binary jet operation selector for [`jet_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Combine two jets at the same center and order.
pub fn jet_arith<S: Scalar>(a: &Jet<S>, b: &Jet<S>, op: JetOp) -> Result<Jet<S>> {
    match op {
        JetOp::Add => a.add(b),
        JetOp::Sub => a.sub(b),
        JetOp::Mul => a.mul(b),
        JetOp::Div => a.div(b),
    }
}

impl<S: Scalar> Jet<S> {
    pub fn new(center: S, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return usage("a jet needs at least the constant coefficient");
        }
        Ok(Self { center, coeffs })
    }

    pub fn constant(center: S, value: S, order: usize) -> Self {
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = value;
        Self { center, coeffs }
    }

    pub fn zero(center: S, order: usize) -> Self {
        Self::constant(center, S::zero(), order)
    }

    /// Jet of the identity `z` at `center`.
    pub fn variable(center: S, order: usize) -> Self {
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = center.clone();
        if order >= 1 {
            coeffs[1] = S::one();
        }
        Self { center, coeffs }
    }

    /// Jet of the polynomial `sum_m a_m z^m` (Horner over jets, exact in the
    /// rational backend).
    pub fn polynomial(coeffs: &[S], center: S, order: usize) -> Self {
        let z = Self::variable(center.clone(), order);
        let mut acc = Self::zero(center, order);
        for a in coeffs.iter().rev() {
            acc = acc.mul_unchecked(&z);
            acc.coeffs[0] = acc.coeffs[0].clone() + a.clone();
        }
        acc
    }

    pub fn center(&self) -> &S {
        &self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &S {
        &self.coeffs[i]
    }

    pub fn value(&self) -> &S {
        &self.coeffs[0]
    }

    /// `f^(l)(center) = l! c_l`.
    pub fn derivative(&self, l: usize) -> Result<S> {
        match self.coeffs.get(l) {
            Some(c) => Ok(c.clone() * factorial::<S>(l)),
            None => usage(format!("derivative of order {l} requested from a jet of order {}", self.order())),
        }
    }

    pub fn derivatives(&self) -> Vec<S> {
        (0..=self.order()).map(|l| self.coeffs[l].clone() * factorial::<S>(l)).collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.center != other.center {
            return usage("jets are centered at different points");
        }
        if self.order() != other.order() {
            return usage(format!("jet orders differ ({} vs {})", self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Self { center: self.center.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(Self { center: self.center.clone(), coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let m = self.order();
        let coeffs = (0..=m)
            .map(|k| {
                (0..=k).fold(S::zero(), |acc, i| acc + self.coeffs[i].clone() * other.coeffs[k - i].clone())
            })
            .collect();
        Self { center: self.center.clone(), coeffs }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let b0 = &other.coeffs[0];
        if b0.is_zero() {
            return singular("jet division by a function vanishing at the center");
        }
        let mut q: Vec<S> = Vec::with_capacity(self.coeffs.len());
        for k in 0..self.coeffs.len() {
            let mut acc = self.coeffs[k].clone();
            for i in 1..=k {
                acc = acc - other.coeffs[i].clone() * q[k - i].clone();
            }
            q.push(acc / b0.clone());
        }
        Ok(Self { center: self.center.clone(), coeffs: q })
    }

    pub fn scale(&self, c: &S) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.clone() * c.clone()).collect();
        Self { center: self.center.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|a| -a.clone()).collect();
        Self { center: self.center.clone(), coeffs }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut result = Self::constant(self.center.clone(), S::one(), self.order());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Keep coefficients up to `order` (no-op if already lower).
    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        Self { center: self.center.clone(), coeffs: self.coeffs[..keep].to_vec() }
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn vanishing_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl Jet<Complex64> {
    /// Jet of `exp(f)`.
    pub fn exp(&self) -> Self {
        let m = self.order();
        let mut g = Vec::with_capacity(m + 1);
        g.push(self.coeffs[0].exp());
        for k in 1..=m {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 1..=k {
                acc += self.coeffs[i] * g[k - i] * i as f64;
            }
            g.push(acc / k as f64);
        }
        Self { center: self.center, coeffs: g }
    }

    /// Jet of `u^beta` on the principal branch (cut along the negative reals).
    pub fn powf(&self, beta: f64) -> Result<Self> {
        let u0 = self.coeffs[0];
        if u0 == Complex64::new(0.0, 0.0) {
            return singular("non-integer power of a function vanishing at the center");
        }
        let m = self.order();
        let mut h = Vec::with_capacity(m + 1);
        h.push((u0.ln() * beta).exp());
        for k in 1..=m {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 1..=k {
                acc += self.coeffs[i] * h[k - i] * (beta * i as f64 - (k - i) as f64);
            }
            h.push(acc / (u0 * k as f64));
        }
        Ok(Self { center: self.center, coeffs: h })
    }

    /// Evaluate the Taylor polynomial at `center + dz`.
    pub fn eval_offset(&self, dz: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * dz + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss, GaussRat};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn poly_jet(coeffs: &[f64], w: f64, order: usize) -> Jet {
        let cs: Vec<Complex64> = coeffs.iter().map(|&a| c(a)).collect();
        Jet::polynomial(&cs, c(w), order)
    }

    #[test]
    fn product_of_conjugate_linears() {
        let a = poly_jet(&[1.0, 1.0], 0.0, 2);
        let b = poly_jet(&[1.0, -1.0], 0.0, 2);
        let p = jet_arith(&a, &b, JetOp::Mul).unwrap();
        assert_eq!(p.coeffs(), &[c(1.0), c(0.0), c(-1.0)]);
    }

    #[test]
    fn geometric_series_by_division() {
        let one = Jet::constant(c(0.0), c(1.0), 3);
        let b = poly_jet(&[1.0, -1.0], 0.0, 3);
        let q = jet_arith(&one, &b, JetOp::Div).unwrap();
        assert_eq!(q.coeffs(), &[c(1.0); 4]);
    }

    #[test]
    fn square_of_linear_term() {
        let a = poly_jet(&[-0.5, 1.0], 0.5, 3);
        let p = a.mul(&a).unwrap();
        assert_eq!(p.coeffs(), &[c(0.0), c(0.0), c(1.0), c(0.0)]);
    }

    #[test]
    fn mismatched_jets_are_rejected() {
        let a = Jet::variable(c(0.0), 2);
        let b = Jet::variable(c(0.1), 2);
        assert!(matches!(a.add(&b), Err(crate::Error::Usage(_))));
        let d = Jet::variable(c(0.0), 3);
        assert!(matches!(a.mul(&d), Err(crate::Error::Usage(_))));
    }

    #[test]
    fn division_by_vanishing_jet_is_singular() {
        let one = Jet::constant(c(0.0), c(1.0), 2);
        let z = Jet::variable(c(0.0), 2);
        assert!(matches!(one.div(&z), Err(crate::Error::Singularity(_))));
    }

    #[test]
    fn derivative_extraction() {
        let cube = poly_jet(&[0.0, 0.0, 0.0, 1.0], 0.0, 3);
        assert_eq!(cube.derivative(3).unwrap(), c(6.0));
        assert!(cube.derivative(4).is_err());
    }

    #[test]
    fn exp_and_powf_recurrences() {
        // exp(z) at 0: 1/k!
        let e = Jet::variable(c(0.0), 5).exp();
        for (k, ck) in e.coeffs().iter().enumerate() {
            let expect = 1.0 / factorial::<Complex64>(k).re;
            assert!((ck.re - expect).abs() < 1e-15);
        }
        // (1 - z)^{1/2} at 0: binomial series 1, -1/2, -1/8, -1/16
        let u = poly_jet(&[1.0, -1.0], 0.0, 3);
        let h = u.powf(0.5).unwrap();
        let expect = [1.0, -0.5, -0.125, -0.0625];
        for (hk, ek) in h.coeffs().iter().zip(expect) {
            assert!((hk.re - ek).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_backend_division() {
        let one = Jet::constant(gauss(0, 1, 0, 1), GaussRat::from_i64(1), 4);
        let b = Jet::polynomial(&[GaussRat::from_i64(1), gauss(-1, 2, 1, 3)], gauss(0, 1, 0, 1), 4);
        let q = one.div(&b).unwrap();
        let back = q.mul(&b).unwrap();
        assert_eq!(back, one);
    }
}
