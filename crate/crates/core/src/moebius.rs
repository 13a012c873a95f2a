//! Möbius transformations of the Riemann sphere, normalized to SL₂(ℂ).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Determinant tolerance for normalized maps.
pub const DET_TOL: f64 = 1e-12;
/// Maps with `||q| - 1|` below this are treated as non-loxodromic.
pub const LOXODROMY_TOL: f64 = 1e-10;
const POLE_TOL: f64 = 1e-300;

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Finite(C64),
    Infinity,
}

impl Point {
    pub fn finite(self) -> Option<C64> {
        match self {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Point::Infinity)
    }

    /// Chordal-free distance used by tests: `None` when exactly one side is ∞.
    pub fn distance(self, other: Point) -> Option<f64> {
        match (self, other) {
            (Point::Finite(a), Point::Finite(b)) => Some((a - b).norm()),
            (Point::Infinity, Point::Infinity) => Some(0.0),
            _ => None,
        }
    }
}

impl From<C64> for Point {
    fn from(z: C64) -> Self {
        Point::Finite(z)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(z) => write!(f, "{z}"),
            Point::Infinity => f.write_str("∞"),
        }
    }
}

/// `z ↦ (az + b)/(cz + d)` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moebius {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

/// Fixed-point data of a loxodromic map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoints {
    pub attracting: Point,
    pub repelling: Point,
    /// Derivative at the attracting point, `0 < |q| < 1`.
    pub multiplier: C64,
}

impl Moebius {
    pub const IDENTITY: Moebius = Moebius {
        a: C64::new(1.0, 0.0),
        b: C64::new(0.0, 0.0),
        c: C64::new(0.0, 0.0),
        d: C64::new(1.0, 0.0),
    };

    /// Builds the map from arbitrary entries, dividing by the principal
    /// square root of the determinant.
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() < POLE_TOL {
            return Err(Error::Pole { re: 0.0, im: 0.0 });
        }
        let s = det.sqrt().inv();
        Ok(Moebius {
            a: a * s,
            b: b * s,
            c: c * s,
            d: d * s,
        })
    }

    /// Handle generator `z ↦ w_minus + rho/(z - w_plus)`.
    pub fn handle(w_plus: C64, w_minus: C64, rho: C64) -> Result<Self> {
        if rho == C64::new(0.0, 0.0) {
            return Err(Error::ZeroRho);
        }
        let s = (-rho).sqrt().inv();
        Ok(Moebius {
            a: w_minus * s,
            b: (rho - w_plus * w_minus) * s,
            c: s,
            d: -w_plus * s,
        })
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    /// Action on the sphere.
    pub fn apply(&self, z: Point) -> Point {
        match z {
            Point::Finite(z) => {
                let den = self.c * z + self.d;
                if den == C64::new(0.0, 0.0) {
                    Point::Infinity
                } else {
                    Point::Finite((self.a * z + self.b) / den)
                }
            }
            Point::Infinity => {
                if self.c == C64::new(0.0, 0.0) {
                    Point::Infinity
                } else {
                    Point::Finite(self.a / self.c)
                }
            }
        }
    }

    /// Finite action without pole handling, for hot loops over points known
    /// to stay away from `-d/c`.
    #[inline(always)]
    pub fn apply_c(&self, z: C64) -> C64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Image and derivative `1/(cz+d)²` together.
    #[inline(always)]
    pub fn apply_with_deriv(&self, z: C64) -> (C64, C64) {
        let inv = (self.c * z + self.d).inv();
        ((self.a * z + self.b) * inv, inv * inv)
    }

    pub fn deriv(&self, z: C64) -> Result<C64> {
        let den = self.c * z + self.d;
        if den.norm() < POLE_TOL {
            return Err(Error::Pole { re: z.re, im: z.im });
        }
        Ok((den * den).inv())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Moebius) -> Moebius {
        let m = Moebius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        };
        m.renormalized()
    }

    pub fn inverse(&self) -> Moebius {
        Moebius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    fn renormalized(self) -> Moebius {
        let det = self.det();
        let noise = 64.0 * f64::EPSILON * ((self.a * self.d).norm() + (self.b * self.c).norm());
        if (det - 1.0).norm() <= noise.max(1e-15) {
            return self;
        }
        let s = det.sqrt().inv();
        Moebius {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
        }
    }

    /// Entrywise distance to `other` up to the overall sign of SL₂(ℂ).
    pub fn projective_distance(&self, other: &Moebius) -> f64 {
        let plus = [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ];
        let minus = [
            self.a + other.a,
            self.b + other.b,
            self.c + other.c,
            self.d + other.d,
        ];
        let max = |v: [C64; 4]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        max(plus).min(max(minus))
    }

    pub fn fixed_points(&self) -> Result<FixedPoints> {
        let tr = self.trace();
        let disc = (tr * tr - 4.0).sqrt();
        // eigenvalues lambda and 1/lambda with |lambda| >= 1
        let mut lambda = (tr + disc) * 0.5;
        let mut disc = disc;
        if lambda.norm() < 1.0 {
            lambda = (tr - disc) * 0.5;
            disc = -disc;
        }
        let excess = lambda.norm_sqr().ln().abs();
        if excess < LOXODROMY_TOL {
            return Err(Error::NotLoxodromic {
                excess: (tr.norm() - 2.0),
            });
        }
        let multiplier = (lambda * lambda).inv();
        let zero = C64::new(0.0, 0.0);
        let (attracting, repelling) = if self.c == zero {
            // fixed points ∞ and b/(d - a)
            let finite = Point::Finite(self.b / (self.d - self.a));
            // derivative a/d at the finite point
            if (self.a / self.d).norm() < 1.0 {
                (finite, Point::Infinity)
            } else {
                (Point::Infinity, finite)
            }
        } else {
            // root where c z + d = lambda is attracting (derivative 1/lambda²)
            let att = (self.a - self.d + disc) / (self.c * 2.0);
            let rep = (self.a - self.d - disc) / (self.c * 2.0);
            (Point::Finite(att), Point::Finite(rep))
        };
        Ok(FixedPoints {
            attracting,
            repelling,
            multiplier,
        })
    }
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_fixes_points() {
        let z = Point::Finite(c(3.0, 4.0));
        assert_eq!(Moebius::IDENTITY.apply(z), z);
        assert_eq!(Moebius::IDENTITY.apply(Point::Infinity), Point::Infinity);
        assert_eq!(Moebius::IDENTITY.deriv(c(0.3, -2.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn handle_pole_and_infinity() {
        let (w, wm, rho) = (c(-1.0, 0.5), c(3.0, -0.2), c(0.2, 0.1));
        let m = Moebius::handle(w, wm, rho).unwrap();
        assert!((m.det() - 1.0).norm() < DET_TOL);
        assert_eq!(m.apply(Point::Finite(w)), Point::Infinity);
        let at_inf = m.apply(Point::Infinity).finite().unwrap();
        assert!((at_inf - wm).norm() < 1e-14);
    }

    #[test]
    fn handle_derivative_matches_closed_form_and_difference() {
        let (w, wm, rho) = (c(-1.0, 0.5), c(3.0, -0.2), c(0.2, 0.1));
        let m = Moebius::handle(w, wm, rho).unwrap();
        for z in [c(0.4, 0.1), c(-3.0, 2.0), c(5.0, -1.0)] {
            let d = m.deriv(z).unwrap();
            let closed = -rho / ((z - w) * (z - w));
            assert!((d - closed).norm() < 1e-13);
            let h = 1e-5;
            let fd = (m.apply_c(z + h) - m.apply_c(z - h)) / (2.0 * h);
            assert!((d - fd).norm() < 1e-8);
        }
    }

    #[test]
    fn deriv_pole_is_an_error() {
        let m = Moebius::handle(c(1.0, 0.0), c(4.0, 0.0), c(0.1, 0.0)).unwrap();
        assert!(matches!(m.deriv(c(1.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn compose_with_inverse_is_identity_up_to_sign() {
        let m = Moebius::new(c(1.0, 2.0), c(0.5, 0.0), c(-0.3, 0.2), c(2.0, 1.0)).unwrap();
        let id = m.compose(&m.inverse());
        assert!(id.projective_distance(&Moebius::IDENTITY) < 1e-13);
        assert!(Moebius::IDENTITY.compose(&m).projective_distance(&m) < 1e-15);
    }

    #[test]
    fn affine_map_fixed_points_include_infinity() {
        // z -> 4z + 3: derivative 4 at -1, so ∞ attracts
        let m = Moebius::new(c(2.0, 0.0), c(1.5, 0.0), c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        let fp = m.fixed_points().unwrap();
        assert_eq!(fp.attracting, Point::Infinity);
        assert!((fp.repelling.finite().unwrap() - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((fp.multiplier - c(0.25, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn elliptic_and_parabolic_rejected() {
        let rot = Moebius::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)).unwrap();
        assert!(matches!(rot.fixed_points(), Err(Error::NotLoxodromic { .. })));
        let par = Moebius::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(matches!(par.fixed_points(), Err(Error::NotLoxodromic { .. })));
    }
}
