use std::ffi::{c_char, CStr, CString};
use std::f64::consts::PI;
use std::ptr;

use schottky_gem::poincare::{BersSeries, NuForms, TwoPointForm};
use schottky_gem::schottky::reference_surface;
use schottky_gem::C64;
use schottky_gem_ffi::*;

fn c(re: f64, im: f64) -> SgComplex {
    SgComplex { re, im }
}

fn handle(wp: f64, wm: f64, rho: f64) -> SgHandle {
    SgHandle {
        w_plus: c(wp, 0.0),
        w_minus: c(wm, 0.0),
        rho: c(rho, 0.0),
    }
}

fn reference_handles() -> [SgHandle; 2] {
    [handle(-6.0, -2.0, 0.09), handle(2.0, 6.0, 0.09)]
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe {
        sg_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

struct Owned(*mut SgSurface);

impl Drop for Owned {
    fn drop(&mut self) {
        unsafe { sg_surface_free(self.0) }
    }
}

fn build(handles: &[SgHandle], max_len: usize) -> Owned {
    let mut s = ptr::null_mut();
    let st = unsafe { sg_surface_new(handles.as_ptr(), handles.len(), max_len, &mut s) };
    assert_eq!(st, SgStatus::Ok, "{}", last_error());
    assert!(!s.is_null());
    Owned(s)
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(sg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn validate_reports_overlap_without_error() {
    let mut valid = -1;
    let ok = reference_handles();
    assert_eq!(unsafe { sg_validate(ok.as_ptr(), 2, &mut valid) }, SgStatus::Ok);
    assert_eq!(valid, 1);

    let bad = [handle(-1.0, 1.0, 1.0)];
    assert_eq!(unsafe { sg_validate(bad.as_ptr(), 1, &mut valid) }, SgStatus::Ok);
    assert_eq!(valid, 0);
    assert!(!last_error().is_empty());
}

#[test]
fn invalid_surface_is_rejected() {
    let bad = [handle(-1.0, 1.0, 1.0)];
    let mut s = ptr::null_mut();
    let st = unsafe { sg_surface_new(bad.as_ptr(), 1, 10, &mut s) };
    assert_eq!(st, SgStatus::InvalidSurface);
    assert!(s.is_null());
    assert!(last_error().contains("invalid"));

    let zero = [handle(-2.0, 2.0, 0.0)];
    assert_eq!(
        unsafe { sg_surface_new(zero.as_ptr(), 1, 10, &mut s) },
        SgStatus::InvalidSurface
    );
}

#[test]
fn null_and_size_errors() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sg_surface_new(ptr::null(), 1, 10, &mut s) }, SgStatus::NullPointer);
    let hs = reference_handles();
    assert_eq!(unsafe { sg_surface_new(hs.as_ptr(), 0, 10, &mut s) }, SgStatus::InvalidArgument);
    assert_eq!(unsafe { sg_surface_new(hs.as_ptr(), 2, 0, &mut s) }, SgStatus::InvalidArgument);
    assert_eq!(unsafe { sg_surface_genus(ptr::null()) }, 0);

    let mut out = [SgComplex::default(); 1];
    assert_eq!(
        unsafe { sg_period_matrix(ptr::null(), out.as_mut_ptr(), 1) },
        SgStatus::NullPointer
    );
    let s = build(&hs, 6);
    assert_eq!(unsafe { sg_surface_genus(s.0) }, 2);
    assert_eq!(
        unsafe { sg_nu(s.0, c(0.3, 0.4), out.as_mut_ptr(), 1) },
        SgStatus::BufferTooSmall
    );
    assert!(last_error().contains("2 needed"));
    assert_eq!(
        unsafe { sg_bers(s.0, 1, c(0.0, 1.0), c(0.0, 0.5), out.as_mut_ptr()) },
        SgStatus::InvalidArgument
    );
    unsafe { sg_surface_free(ptr::null_mut()) };
}

#[test]
fn json_constructor_and_config_errors() {
    let json = CString::new(reference_surface().to_json()).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sg_surface_from_json(json.as_ptr(), &mut s) }, SgStatus::Ok);
    let s = Owned(s);
    assert_eq!(unsafe { sg_surface_genus(s.0) }, 2);

    let broken = CString::new("{\"genus\": 2").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { sg_surface_from_json(broken.as_ptr(), &mut t) }, SgStatus::Config);
    assert!(t.is_null());
}

#[test]
fn genus_one_period_matches_multiplier() {
    let (wp, wm, rho) = (C64::new(-2.0, 0.0), C64::new(2.0, 0.0), C64::new(0.25, 0.0));
    // Fixed points solve (z − w₋)(z − w₊) = ρ; the multiplier is
    // the derivative −ρ/(z − w₊)² at the attracting one.
    let disc = ((wp + wm) * (wp + wm) - 4.0 * (wp * wm - rho)).sqrt();
    let q = [(wp + wm + disc) / 2.0, (wp + wm - disc) / 2.0]
        .iter()
        .map(|z| -rho / ((z - wp) * (z - wp)))
        .min_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    let expect = q.ln() / C64::new(0.0, 2.0 * PI);

    let s = build(&[handle(-2.0, 2.0, 0.25)], 20);
    let mut omega = [SgComplex::default(); 1];
    assert_eq!(unsafe { sg_period_matrix(s.0, omega.as_mut_ptr(), 1) }, SgStatus::Ok);
    let d = C64::from(omega[0]) - expect;
    assert!((d.re - d.re.round()).abs() < 1e-8, "{omega:?} vs {expect}");
    assert!(d.im.abs() < 1e-8, "{omega:?} vs {expect}");
    assert!(omega[0].im > 0.0);
}

#[test]
fn reference_period_matrix_is_symmetric() {
    let s = build(&reference_handles(), 10);
    let mut omega = [SgComplex::default(); 4];
    assert_eq!(unsafe { sg_period_matrix(s.0, omega.as_mut_ptr(), 4) }, SgStatus::Ok);
    let (o12, o21) = (C64::from(omega[1]), C64::from(omega[2]));
    assert!((o12 - o21).norm() < 1e-7);
    assert!(omega[0].im > 0.0 && omega[3].im > 0.0);
}

#[test]
fn nu_and_bers_agree_with_library() {
    let s = build(&reference_handles(), 8);
    let lib = schottky_gem::poincare::Surface::new(
        reference_surface(),
        schottky_gem::poincare::SeriesConfig::default().with_max_len(8),
    )
    .unwrap();
    let x = C64::new(0.4, 1.1);
    let y = C64::new(-0.3, -0.7);

    let mut nu = [SgComplex::default(); 2];
    assert_eq!(unsafe { sg_nu(s.0, x.into(), nu.as_mut_ptr(), 2) }, SgStatus::Ok);
    let want = NuForms::new(lib.clone()).unwrap().values(x).unwrap();
    for (a, b) in nu.iter().zip(&want) {
        assert!((C64::from(*a) - b).norm() <= 1e-14 * b.norm().max(1.0));
    }

    let mut b = SgComplex::default();
    assert_eq!(unsafe { sg_bers(s.0, 2, x.into(), y.into(), &mut b) }, SgStatus::Ok);
    let want = BersSeries::new(lib, 2).unwrap().value(x, y).unwrap();
    assert!((C64::from(b) - want).norm() <= 1e-14 * want.norm().max(1.0));
}

#[test]
fn bers_has_unit_residue() {
    let s = build(&reference_handles(), 8);
    let y = C64::new(0.2, 0.5);
    let (count, r) = (64, 0.05);
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..count {
        let e = C64::from_polar(r, 2.0 * PI * k as f64 / count as f64);
        let mut b = SgComplex::default();
        assert_eq!(unsafe { sg_bers(s.0, 2, (y + e).into(), y.into(), &mut b) }, SgStatus::Ok);
        sum += C64::from(b) * e;
    }
    let residue = sum / count as f64;
    assert!((residue - 1.0).norm() < 1e-8, "{residue}");
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/schottky_gem.h");
    let text = std::fs::read_to_string(header).unwrap();
    for sym in ["sg_surface_new", "sg_period_matrix", "sg_nu", "sg_bers", "sg_last_error_message"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let Ok(out) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", header])
        .output()
    else {
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
