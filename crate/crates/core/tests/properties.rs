use innerkit::admissible::trace_of_expr;
use innerkit::cramer::gauss_solve;
use innerkit::geometry::{arc_condition, carleson_delta, nearest_gaps, separation_check};
use innerkit::inner::Atom;
use innerkit::scalar::gauss;
use innerkit::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn disk_point(rmax: f64) -> impl Strategy<Value = Complex64> {
    (0.0..rmax, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn separated(pts: Vec<Complex64>, min: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for p in pts {
        if out.iter().all(|q| (p - q).norm() >= min) {
            out.push(p);
        }
    }
    out
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Complex64::new(a, b)), len)
}

fn brute_two_split(pts: &[DiskPoint], threshold: f64) -> bool {
    let n = pts.len();
    (0u32..1 << n).any(|mask| {
        (0..n).all(|i| {
            (i + 1..n).all(|j| ((mask >> i) & 1) != ((mask >> j) & 1) || pts[i].rho(&pts[j]).unwrap() >= threshold)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rho_symmetric_and_triangle(z in disk_point(0.999), w in disk_point(0.999), u in disk_point(0.999)) {
        let r = rho(z, w).unwrap();
        prop_assert!((0.0..1.0).contains(&r) || r == 1.0);
        prop_assert!((r - rho(w, z).unwrap()).abs() <= 1e-15);
        let (a, b) = (rho(z, u).unwrap(), rho(u, w).unwrap());
        prop_assert!(r <= (a + b) / (1.0 + a * b) + 1e-12);
    }

    #[test]
    fn jet_ring_laws(a in coeffs(6), b in coeffs(6), c in coeffs(6), w in disk_point(1.0)) {
        let (ja, jb, jc) = (Jet::new(w, a).unwrap(), Jet::new(w, b).unwrap(), Jet::new(w, c).unwrap());
        let ab = ja.mul(&jb).unwrap();
        let ba = jb.mul(&ja).unwrap();
        let lhs = ab.mul(&jc).unwrap();
        let rhs = ja.mul(&jb.mul(&jc).unwrap()).unwrap();
        let dist = ja.add(&jb).unwrap().mul(&jc).unwrap();
        let sum = ja.mul(&jc).unwrap().add(&jb.mul(&jc).unwrap()).unwrap();
        for i in 0..6 {
            prop_assert!((ab.coeff(i) - ba.coeff(i)).norm() <= 1e-12);
            prop_assert!((lhs.coeff(i) - rhs.coeff(i)).norm() <= 1e-10);
            prop_assert!((dist.coeff(i) - sum.coeff(i)).norm() <= 1e-10);
        }
    }

    #[test]
    fn jet_division_inverts(a in coeffs(5), b in coeffs(5), w in disk_point(1.0)) {
        let mut b = b;
        b[0] += Complex64::new(5.0, 0.0);
        let (ja, jb) = (Jet::new(w, a).unwrap(), Jet::new(w, b).unwrap());
        let back = ja.div(&jb).unwrap().mul(&jb).unwrap();
        for i in 0..5 {
            prop_assert!((back.coeff(i) - ja.coeff(i)).norm() <= 1e-10);
        }
    }

    #[test]
    fn gaps_bounded_by_pair_distances(pts in prop::collection::vec(disk_point(0.99), 2..20)) {
        let pts = separated(pts, 1e-3);
        prop_assume!(pts.len() >= 2);
        let seq = ZeroSequence::from_complex(&pts).unwrap();
        let d = nearest_gaps(&seq).unwrap();
        for (j, dj) in d.iter().enumerate() {
            for (l, q) in pts.iter().enumerate() {
                if l != j {
                    prop_assert!(*dj <= (pts[j] - q).norm() + 1e-15);
                }
            }
        }
    }

    #[test]
    fn inner_functions_multiply(
        z1 in prop::collection::vec(disk_point(0.95), 0..5),
        z2 in prop::collection::vec(disk_point(0.95), 0..5),
        t in 0.0..std::f64::consts::TAU,
        mass in 0.1..2.0f64,
        z in disk_point(0.9),
    ) {
        let a = InnerFunction::new(z1, vec![Atom { point: Complex64::from_polar(1.0, t), mass }]).unwrap();
        let b = InnerFunction::blaschke(z2).unwrap().with_phase(0.3);
        let ab = a.product(&b).unwrap();
        let lhs = eval_inner(&ab, z).unwrap();
        let rhs = eval_inner(&a, z).unwrap() * eval_inner(&b, z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12);
        prop_assert!(lhs.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn unimodular_on_circle(zeros in prop::collection::vec(disk_point(0.99), 0..8), t in 0.0..std::f64::consts::TAU) {
        let theta = InnerFunction::blaschke(zeros).unwrap();
        let v = eval_inner(&theta, Complex64::from_polar(1.0, t)).unwrap();
        prop_assert!((v.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn admissibility_scales(pts in prop::collection::vec(disk_point(0.95), 2..8), c in coeffs(4), lam in disk_point(5.0)) {
        let pts = separated(pts, 0.05);
        prop_assume!(pts.len() >= 2);
        let pts: Vec<DiskPoint> = pts.iter().map(|&z| DiskPoint::from_complex(z).unwrap()).collect();
        let e = AnalyticExpr::product(vec![AnalyticExpr::poly(c), AnalyticExpr::one_minus_pow(1.5).unwrap()]);
        let d = trace_of_expr(&e, &pts, 1, 1.5).unwrap();
        let base = check_admissible(&d, None).unwrap().c_min;
        let scaled = check_admissible(&d.scaled(lam), None).unwrap().c_min;
        prop_assert!((scaled - lam.norm() * base).abs() <= 1e-12 * (1.0 + scaled));
    }

    #[test]
    fn polynomial_traces_are_exact(pts in prop::collection::vec(disk_point(0.95), 2..8), n in 0usize..4, c in coeffs(4)) {
        let pts = separated(pts, 0.05);
        prop_assume!(pts.len() >= 2);
        let pts: Vec<DiskPoint> = pts.iter().map(|&z| DiskPoint::from_complex(z).unwrap()).collect();
        let d = trace_of_expr(&AnalyticExpr::poly(c[..=n].to_vec()), &pts, n, n as f64 + 0.5).unwrap();
        prop_assert!(check_admissible(&d, None).unwrap().c_min <= 1e-9);
    }

    #[test]
    fn split_matches_brute_force(pts in prop::collection::vec(disk_point(0.9), 2..11), threshold in 0.05..0.9f64) {
        let pts = separated(pts, 1e-3);
        prop_assume!(pts.len() >= 2);
        let seq = ZeroSequence::from_complex(&pts).unwrap();
        let r = separation_check(&seq, threshold).unwrap();
        prop_assert_eq!(r.two_split, brute_two_split(seq.points(), threshold));
        if let Some(col) = &r.coloring {
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    if col[i] == col[j] {
                        prop_assert!(seq.points()[i].rho(&seq.points()[j]).unwrap() >= threshold);
                    }
                }
            }
        }
    }

    #[test]
    fn carleson_nonincreasing_in_length(pts in prop::collection::vec(disk_point(0.99), 3..15)) {
        let pts = separated(pts, 1e-3);
        prop_assume!(pts.len() >= 3);
        let mut prev = f64::INFINITY;
        for len in 2..=pts.len() {
            let (d, _) = carleson_delta(&ZeroSequence::from_complex(&pts[..len]).unwrap()).unwrap();
            prop_assert!(d <= prev);
            prev = d;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cramer_agrees_with_gauss(n in 1usize..7, pick in 0usize..100, rhs in prop::collection::vec((-20i64..20, 1i64..9, -20i64..20, 1i64..9), 7)) {
        let k = n / 2 + 1 + pick % (n - n / 2);
        let m = build_m(k, n, false).unwrap();
        let rhs: Vec<GaussRat> = rhs[..m.size()].iter().map(|&(a, b, c, d)| gauss(a, b, c, d)).collect();
        let exact = cramer_solve(&m, &rhs).unwrap();
        prop_assert_eq!(&exact.unknowns, &gauss_solve(&m, &rhs).unwrap());
        prop_assert_eq!(m.apply(&exact.unknowns), rhs);
    }

    #[test]
    fn arc_constant_monotone_in_depth(pts in prop::collection::vec(disk_point(0.99), 1..10)) {
        let seq = ZeroSequence::from_complex(&separated(pts, 1e-3)).unwrap();
        let mut prev = f64::INFINITY;
        for depth in 0..=6 {
            let c = arc_condition(&seq, depth).unwrap().c;
            prop_assert!(c <= prev);
            prev = c;
        }
    }
}
