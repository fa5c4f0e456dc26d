//! Arithmetic backends for jets: double precision complex numbers and exact
//! Gaussian rationals.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

/// Complex numbers with exact rational real and imaginary parts.
pub type GaussRat = Complex<BigRational>;

/// A field of complex scalars a jet can be built over.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + Num + Neg<Output = Self> {
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn conj(&self) -> Self;
    /// Squared modulus, in the same field.
    fn norm_sqr(&self) -> Self;
    /// `1 - |z|^2`.
    fn one_minus_norm_sqr(&self) -> Self {
        Self::one() - self.norm_sqr()
    }
    /// Modulus as a float, for reporting and tolerances.
    fn abs_f64(&self) -> f64;
    fn to_complex64(&self) -> Complex64;
}

impl Scalar for Complex64 {
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn norm_sqr(&self) -> Self {
        Complex64::new(Complex::norm_sqr(self), 0.0)
    }

    fn one_minus_norm_sqr(&self) -> Self {
        // (1 - r)(1 + r) keeps full relative accuracy for real points near 1.
        let r = self.norm();
        Complex64::new((1.0 - r) * (1.0 + r), 0.0)
    }

    fn abs_f64(&self) -> f64 {
        self.norm()
    }

    fn to_complex64(&self) -> Complex64 {
        *self
    }
}

impl Scalar for GaussRat {
    fn from_i64(n: i64) -> Self {
        GaussRat::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    fn from_rational(q: &BigRational) -> Self {
        GaussRat::new(q.clone(), BigRational::zero())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn norm_sqr(&self) -> Self {
        GaussRat::new(Complex::norm_sqr(self), BigRational::zero())
    }

    fn abs_f64(&self) -> f64 {
        self.to_complex64().norm()
    }

    fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// `n!` in the scalar field.
pub fn factorial<S: Scalar>(n: usize) -> S {
    (1..=n as i64).fold(S::one(), |acc, i| acc * S::from_i64(i))
}

/// Exact `n!` as a big integer.
pub fn factorial_big(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Binomial coefficient as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Gaussian rational `p/q + i r/s` from small integers.
pub fn gauss(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussRat {
    GaussRat::new(
        BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
        BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_agree() {
        let f: Complex64 = factorial(10);
        assert_eq!(f.re, 3_628_800.0);
        assert_eq!(factorial_big(20), BigInt::from(2_432_902_008_176_640_000u64));
        let g: GaussRat = factorial(5);
        assert_eq!(g, GaussRat::from_i64(120));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(4, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
    }

    #[test]
    fn gauss_norm_is_exact() {
        let z = gauss(1, 2, -1, 3);
        assert_eq!(Scalar::norm_sqr(&z), gauss(13, 36, 0, 1));
    }
}
