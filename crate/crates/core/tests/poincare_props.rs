use std::f64::consts::PI;
use std::sync::OnceLock;

use proptest::prelude::*;
use schottky_gem::contour::CircleContour;
use schottky_gem::poincare::{BersSeries, NuForms, SeriesConfig, Surface, ThirdKind, TwoPointForm};
use schottky_gem::schottky::{reference_surface, single_handle_surface};
use schottky_gem::C64;

fn surface() -> &'static Surface {
    static S: OnceLock<Surface> = OnceLock::new();
    S.get_or_init(|| Surface::new(reference_surface(), SeriesConfig::default().with_max_len(8)).unwrap())
}

fn bers() -> &'static BersSeries {
    static B: OnceLock<BersSeries> = OnceLock::new();
    B.get_or_init(|| BersSeries::new(surface().clone(), 2).unwrap())
}

fn nu() -> &'static NuForms {
    static N: OnceLock<NuForms> = OnceLock::new();
    N.get_or_init(|| NuForms::new(surface().clone()).unwrap())
}

/// Points of the fundamental domain at least 0.3 from every circle.
fn domain_point() -> impl Strategy<Value = C64> {
    (-8.0f64..8.0, -4.0f64..4.0)
        .prop_map(|(a, b)| C64::new(a, b))
        .prop_filter("clear of the discs", |&z| surface().params().clearance(z) > 0.3)
}

const TWO_PI_I: C64 = C64::new(0.0, 2.0 * PI);

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bers_is_periodic_in_x(x in domain_point(), y in domain_point(), a in 1i32..=2) {
        prop_assume!((x - y).norm() > 0.2);
        let g = surface().params().generator(a);
        let (gx, d) = g.apply_with_deriv(x);
        let lhs = bers().value(gx, y).unwrap() * d * d;
        let rhs = bers().value(x, y).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-6 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn nu_is_periodic(x in domain_point(), a in 1i32..=2) {
        let (gx, d) = surface().params().generator(a).apply_with_deriv(x);
        let lhs = nu().values(gx).unwrap();
        let rhs = nu().values(x).unwrap();
        for (l, r) in lhs.iter().zip(&rhs) {
            prop_assert!((l * d - r).norm() < 1e-8 * r.norm().max(1.0));
        }
    }

    #[test]
    fn bers_residue_is_one(y in domain_point()) {
        let r = 0.1;
        let contour = CircleContour::new(y, r, 64).unwrap();
        let res = contour.integral(|x| bers().value(x, y)).unwrap() / TWO_PI_I;
        prop_assert!((res - 1.0).norm() < 1e-8, "{res}");
    }
}

#[test]
fn nu_normalized_on_a_cycles() {
    let p = surface().params();
    for a in 1..=2usize {
        let contour = CircleContour::isometric(p, a as i32, 256).unwrap().with_scale(1.5).unwrap();
        for b in 0..2usize {
            let v = contour.integral(|x| Ok(nu().values(x)?[b])).unwrap() / TWO_PI_I;
            let want = if a == b + 1 { 1.0 } else { 0.0 };
            assert!((v - want).norm() < 1e-8, "a = {a}, b = {}: {v}", b + 1);
        }
    }
}

#[test]
fn third_kind_residues() {
    let tk = ThirdKind::new(surface().clone()).unwrap();
    let y = C64::new(0.5, 1.2);
    let at = |c: C64| {
        CircleContour::new(c, 0.1, 64)
            .unwrap()
            .integral(|x| tk.value(x, y))
            .unwrap()
            / TWO_PI_I
    };
    assert!((at(y) - 1.0).norm() < 1e-8);
    assert!((at(C64::new(0.0, 0.0)) + 1.0).norm() < 1e-8);
}

#[test]
fn shells_decay_on_reference() {
    let report = bers().certify().unwrap();
    assert!(report.monotone);
    assert!(report.last_relative < 1e-12);
}

#[test]
fn genus_one_shells_decay_like_q() {
    let s = Surface::new(single_handle_surface(), SeriesConfig::default().with_max_len(12)).unwrap();
    assert!(matches!(
        BersSeries::new(s.clone(), 2),
        Err(schottky_gem::error::Error::InsufficientLimitPoints { found: 2, wanted: 3 })
    ));
    let tk = ThirdKind::new(s).unwrap();
    let report = tk.shell_report(C64::new(0.3, 1.1), C64::new(-0.4, 0.8)).unwrap();
    let q = single_handle_surface().generator(1).fixed_points().unwrap().multiplier.norm();
    let shells = &report.magnitudes;
    for l in 3..shells.len() {
        let ratio = shells[l] / shells[l - 1];
        assert!(ratio < 4.0 * q, "shell {l}: ratio {ratio:e}, |q| = {q:e}");
    }
}

#[test]
fn pole_is_reported() {
    let y = C64::new(0.5, 1.2);
    assert!(bers().value(y, y).is_err());
}
