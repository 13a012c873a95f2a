use std::f64::consts::PI;

use proptest::prelude::*;
use schottky_gem::contour::{gauss_legendre, segment_nodes, CircleContour};
use schottky_gem::C64;

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

proptest! {
    #[test]
    fn trapezoid_integrates_laurent_monomials(c in complex(3.0), r in 0.1f64..2.0, k in -6i32..6) {
        let contour = CircleContour::new(c, r, 32).unwrap();
        let got = contour.integral(|z| Ok((z - c).powi(k))).unwrap();
        let want = if k == -1 { C64::new(0.0, 2.0 * PI) } else { C64::new(0.0, 0.0) };
        prop_assert!((got - want).norm() < 1e-12 * r.powi(k + 1).max(1.0));
    }

    #[test]
    fn cauchy_formula(c in complex(2.0), r in 0.5f64..2.0, t in 0.0..1.0f64, s in 0.0..std::f64::consts::TAU) {
        let a = c + C64::from_polar(0.6 * r * t, s);
        let contour = CircleContour::new(c, r, 128).unwrap();
        let got = contour.integral(|z| Ok(z.exp() / (z - a))).unwrap() / C64::new(0.0, 2.0 * PI);
        prop_assert!((got - a.exp()).norm() < 1e-11 * a.exp().norm().max(1.0));
    }

    #[test]
    fn gauss_legendre_exact_on_polynomials(n in 2usize..40, k in 0usize..20) {
        prop_assume!(k < 2 * n);
        let (x, w) = gauss_legendre(n);
        let got: f64 = x.iter().zip(&w).map(|(t, wt)| wt * t.powi(k as i32)).sum();
        let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
        prop_assert!((got - want).abs() < 1e-13);
    }

    #[test]
    fn segment_integral_of_entire_function(a in complex(2.0), b in complex(2.0)) {
        let got: C64 = segment_nodes(a, b, 32).iter().map(|n| n.z.exp() * n.dz).sum();
        let want = b.exp() - a.exp();
        prop_assert!((got - want).norm() < 1e-12 * want.norm().max(1.0));
    }
}

#[test]
fn weights_sum_to_interval_length() {
    for n in [1, 2, 5, 64, 128] {
        let (_, w) = gauss_legendre(n);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n = {n}");
    }
}

#[test]
fn rejects_degenerate_contours() {
    assert!(CircleContour::new(C64::new(0.0, 0.0), 0.0, 32).is_err());
    assert!(CircleContour::new(C64::new(0.0, 0.0), 1.0, 0).is_err());
}

#[test]
fn doubling_shows_spectral_convergence() {
    let c = CircleContour::new(C64::new(0.0, 0.0), 1.0, 16).unwrap();
    let f = |z: C64| Ok(1.0 / (z - 1.5));
    let (coarse, fine) = c.integral_doubled(f).unwrap();
    assert!((fine - coarse).norm() < 1e-2);
    assert!(fine.norm() < 1e-4);
}
