use std::f64::consts::PI;

use innerkit::criteria::{covering_profile, derivative_decrease, refine_interior};
use innerkit::geometry::{arc_condition, bc_entropy, carleson_delta, v1_ratio};
use innerkit::quadrature::QuadratureOpts;
use innerkit::*;
use num_complex::Complex64;

fn delta(len: usize) -> f64 {
    carleson_delta(&ZeroSequence::radial(0.5, len).unwrap()).unwrap().0
}

#[test]
fn carleson_constant_converges() {
    let d: Vec<f64> = [20, 30, 40, 50].iter().map(|&j| delta(j)).collect();
    let pinned = [0.014829531235271073, 0.014676895346655963, 0.014671273143427697, 0.014671080541351028];
    for (v, p) in d.iter().zip(pinned) {
        assert!((v / p - 1.0).abs() < 1e-12, "{v} vs {p}");
    }
    assert!(d.windows(2).all(|w| w[1] <= w[0]));
    // the cut at J moves delta by roughly the tail factor prod_{l > J} rho
    assert!((d[1] - d[2]).abs() < 1e-5);
    assert!((d[2] - d[3]).abs() < 1e-6);
}

#[test]
fn arc_constants() {
    let radial = ZeroSequence::radial(0.5, 30).unwrap();
    let r = arc_condition(&radial, 6).unwrap();
    assert!((r.c - 1.5 / (2.0 * PI)).abs() < 1e-12);
    let mut prev = f64::INFINITY;
    for depth in 0..=8 {
        let c = arc_condition(&radial, depth).unwrap().c;
        assert!(c > 0.0 && c <= prev);
        prev = c;
    }

    let dense = |n: usize| {
        let acc = (0..n).map(|i| DiskPoint::boundary(2.0 * PI * i as f64 / n as f64)).collect();
        arc_condition(&ZeroSequence::custom(vec![], acc).unwrap(), 6).unwrap().c
    };
    let (c128, c512) = (dense(128), dense(512));
    assert!((c512 - (PI / 1024.0).sin() / PI).abs() < 1e-12);
    assert!(c512 < 0.1 && c512 < c128);
}

#[test]
fn entropy_values() {
    let one = ZeroSequence::custom(vec![], vec![DiskPoint::boundary(0.0)]).unwrap();
    assert!(bc_entropy(&one, QuadratureOpts::default()).unwrap().abs() < 1e-3);

    let radial = ZeroSequence::radial(0.5, 30).unwrap();
    let coarse = bc_entropy(&radial, QuadratureOpts { tol: 1e-6, ..Default::default() }).unwrap();
    let fine = bc_entropy(&radial, QuadratureOpts { tol: 1e-12, ..Default::default() }).unwrap();
    let longer = bc_entropy(&ZeroSequence::radial(0.5, 40).unwrap(), QuadratureOpts::default()).unwrap();
    assert!((coarse - fine).abs() < 1e-2);
    assert!((longer - fine).abs() < 1e-2);
    assert!((fine + 1.15862952851205248).abs() < 1e-9);
}

#[test]
fn spiral_ratio_grows_with_length() {
    let maxes: Vec<f64> =
        [10, 15, 20, 25, 30].iter().map(|&j| v1_ratio(&ZeroSequence::spiral(0.25, 0.5, j).unwrap()).unwrap().max.unwrap()).collect();
    assert!(maxes.windows(2).all(|w| w[1] > w[0]), "{maxes:?}");
}

#[test]
fn derivative_decrease_diverges_for_power_singularity() {
    // Omega(theta, eps/2) for the atom at 1 is a horodisk, on which
    // |1 - z|^2 is comparable to 1 - |z|; the quotient then grows like
    // (1 - |z|)^(-1/4).
    let f = AnalyticExpr::one_minus_pow(1.5).unwrap();
    let atom = InnerFunction::atom(Complex64::new(1.0, 0.0), 1.0).unwrap();
    let sup = |q: u32| derivative_decrease(&f, &atom, 0.2, 1.5, 1, &GridSpec::default().with_levels(q)).unwrap().sup;
    let (s10, s11, s12) = (sup(10), sup(11), sup(12));
    for ratio in [s11 / s10, s12 / s11] {
        assert!((ratio - 2f64.powf(0.25)).abs() < 0.05, "{ratio}");
    }
    let r = refine_interior(&GridSpec::default(), |g| derivative_decrease(&f, &atom, 0.2, 1.5, 1, g)).unwrap();
    assert_eq!(r.verdict, Verdict::Divergent);
}

#[test]
fn covering_is_stable_under_refinement() {
    let seq = ZeroSequence::radial(0.5, 20).unwrap();
    let (odd, even): (Vec<_>, Vec<_>) = seq.points().iter().enumerate().partition(|(j, _)| j % 2 == 0);
    let b1 = InnerFunction::blaschke(odd.iter().map(|(_, p)| p.z()).collect()).unwrap();
    let b2 = InnerFunction::blaschke(even.iter().map(|(_, p)| p.z()).collect()).unwrap();
    let fine = covering_profile(&b1, &b2, 0.1, &GridSpec::default()).unwrap();
    let coarse = covering_profile(&b1, &b2, 0.1, &GridSpec::default().with_levels(11)).unwrap();
    assert_eq!(fine.split_exceptions, 0);
    assert!((fine.lambda_emp - coarse.lambda_emp).abs() <= 0.02);
    assert!((fine.lambda_emp - 0.5852).abs() <= 0.02);
    assert!(fine.lambda_emp < 1.0 && fine.c_emp.is_finite());
}
