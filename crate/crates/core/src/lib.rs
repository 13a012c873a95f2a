//! Numerical Schottky uniformization toolkit.
//!
//! The crate builds genus-`g` Riemann surfaces from Schottky parameters,
//! evaluates truncated Poincaré series (the Bers kernel, the differential of
//! the third kind and the normalized holomorphic 1-forms), works with Eichler
//! cocycles of weight `1 - N`, and assembles the canonical basis of
//! holomorphic `N`-differentials together with the canonical GEM form. The
//! `variation` module realizes the moduli derivative `∇(x)` for `N = 2` and
//! checks it against Rauch's formula for the period matrix.
//!
//! Conventions used across modules:
//! * forms are represented by their coefficient in the global coordinate;
//!   an `N`-form in `x` transforms with `(γ'x)^N`;
//! * every circle `C_a` is traversed counterclockwise;
//! * series are truncated by word length and summed shell by shell with
//!   compensated accumulation, so results are bit-stable.

pub mod cli;
pub mod config;
pub mod contour;
pub mod eichler;
pub mod error;
pub mod gem;
pub mod linalg;
pub mod moebius;
pub mod poincare;
pub mod schottky;
pub mod suites;
pub mod sum;
pub mod variation;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use moebius::{Moebius, Point};
pub use schottky::{GroupWord, HandleParams, SchottkyParams};

pub(crate) const TWO_PI_I: C64 = C64::new(0.0, 2.0 * std::f64::consts::PI);
