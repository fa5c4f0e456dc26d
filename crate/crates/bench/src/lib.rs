//! Fixtures shared by the criterion benchmarks.

use innerkit::{InnerFunction, Jet};
use num_complex::Complex64;

/// `n` zeros on a slowly turning spiral toward the circle.
pub fn spiral_zeros(n: usize) -> Vec<Complex64> {
    (1..=n).map(|j| Complex64::from_polar(1.0 - 0.9f64.powi(j as i32), 0.7 * j as f64)).collect()
}

pub fn blaschke(n: usize) -> InnerFunction {
    InnerFunction::blaschke(spiral_zeros(n)).expect("spiral zeros lie in the disk")
}

/// A jet with `order + 1` nonzero coefficients.
pub fn dense_jet(order: usize, center: Complex64) -> Jet {
    let coeffs = (0..=order).map(|i| Complex64::new(1.0 / (i + 1) as f64, 0.5 - i as f64 * 0.1)).collect();
    Jet::new(center, coeffs).expect("nonempty coefficients")
}
