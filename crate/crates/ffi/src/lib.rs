//! C ABI over `schottky_gem`.
//!
//! Surfaces are opaque handles created by `sg_surface_new` or
//! `sg_surface_from_json` and released with `sg_surface_free`. Every fallible
//! call returns an [`SgStatus`]; on failure the message is kept per thread and
//! can be copied out with `sg_last_error_message`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Arc, Mutex, OnceLock};

use schottky_gem::config::RunConfig;
use schottky_gem::error::Error;
use schottky_gem::poincare::{BersSeries, NuForms, SeriesConfig, Surface, TwoPointForm};
use schottky_gem::schottky::{HandleParams, SchottkyParams};
use schottky_gem::variation::period_matrix;
use schottky_gem::C64;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Parameters violate the Schottky conditions.
    InvalidSurface = 3,
    /// A series, quadrature or linear solve failed its accuracy gate.
    Numerical = 4,
    /// Evaluation point is a pole or too close to a limit point.
    Domain = 5,
    Config = 6,
    BufferTooSmall = 7,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SgComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for SgComplex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<SgComplex> for C64 {
    fn from(z: SgComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

/// One handle: the two circle centers and the sewing parameter.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SgHandle {
    pub w_plus: SgComplex,
    pub w_minus: SgComplex,
    pub rho: SgComplex,
}

/// Opaque surface handle.
pub struct SgSurface {
    surface: Surface,
    nu: OnceLock<NuForms>,
    bers: Mutex<HashMap<usize, Arc<BersSeries>>>,
}

impl SgSurface {
    fn new(surface: Surface) -> Self {
        Self {
            surface,
            nu: OnceLock::new(),
            bers: Mutex::new(HashMap::new()),
        }
    }

    fn nu(&self) -> Result<&NuForms, Error> {
        if let Some(nu) = self.nu.get() {
            return Ok(nu);
        }
        let nu = NuForms::new(self.surface.clone())?;
        Ok(self.nu.get_or_init(|| nu))
    }

    fn bers(&self, n: usize) -> Result<Arc<BersSeries>, Error> {
        let mut cache = self.bers.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(b) = cache.get(&n) {
            return Ok(b.clone());
        }
        let b = Arc::new(BersSeries::new(self.surface.clone(), n)?);
        cache.insert(n, b.clone());
        Ok(b)
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> SgStatus {
    match err {
        Error::InvalidParams(_) | Error::ZeroRho | Error::NotLoxodromic { .. } => SgStatus::InvalidSurface,
        Error::Pole { .. } | Error::NonTermination(_) | Error::BoundaryAmbiguity { .. } => SgStatus::Domain,
        Error::Config(_) | Error::Json(_) | Error::Io(_) => SgStatus::Config,
        Error::Index(_) | Error::CoincidentPunctures(..) => SgStatus::InvalidArgument,
        _ => SgStatus::Numerical,
    }
}

fn fail(status: SgStatus, msg: impl Into<String>) -> SgStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), SgStatus>) -> SgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SgStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(SgStatus::Panic, msg)
        }
    }
}

fn lift<T>(r: Result<T, Error>) -> Result<T, SgStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn out_slice<'a, T>(ptr: *mut T, len: usize, need: usize) -> Result<&'a mut [T], SgStatus> {
    if ptr.is_null() {
        return Err(fail(SgStatus::NullPointer, "output buffer is null"));
    }
    if len < need {
        return Err(fail(
            SgStatus::BufferTooSmall,
            format!("output buffer holds {len} values, {need} needed"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(ptr, need))
}

unsafe fn surface_ref<'a>(s: *const SgSurface) -> Result<&'a SgSurface, SgStatus> {
    s.as_ref()
        .ok_or_else(|| fail(SgStatus::NullPointer, "surface handle is null"))
}

unsafe fn read_params(handles: *const SgHandle, genus: usize) -> Result<SchottkyParams, SgStatus> {
    if handles.is_null() {
        return Err(fail(SgStatus::NullPointer, "handle array is null"));
    }
    if genus == 0 {
        return Err(fail(SgStatus::InvalidArgument, "genus must be positive"));
    }
    let hs = std::slice::from_raw_parts(handles, genus)
        .iter()
        .map(|h| HandleParams::new(h.w_plus.into(), h.w_minus.into(), h.rho.into()))
        .collect();
    lift(SchottkyParams::new(hs))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to fit) and returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sg_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Checks the Schottky conditions without building a surface. `*valid` is
/// set to 1 or 0; a violation is not an error.
///
/// # Safety
/// `handles` must point to `genus` handles; `valid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_validate(handles: *const SgHandle, genus: usize, valid: *mut i32) -> SgStatus {
    guard(|| {
        let p = read_params(handles, genus)?;
        let out = out_slice(valid, 1, 1)?;
        let report = p.validate();
        out[0] = i32::from(report.is_valid());
        if !report.is_valid() {
            set_error(report.to_string());
        }
        Ok(())
    })
}

/// Builds a surface from `genus` handles, enumerating words up to length
/// `max_len`. The handle is written to `*out` and must be freed with
/// `sg_surface_free`.
///
/// # Safety
/// `handles` must point to `genus` handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_surface_new(
    handles: *const SgHandle,
    genus: usize,
    max_len: usize,
    out: *mut *mut SgSurface,
) -> SgStatus {
    guard(|| {
        let slot = out_slice(out, 1, 1)?;
        slot[0] = std::ptr::null_mut();
        let p = read_params(handles, genus)?;
        if max_len == 0 {
            return Err(fail(SgStatus::InvalidArgument, "max_len must be positive"));
        }
        let surface = lift(Surface::new(p, SeriesConfig::default().with_max_len(max_len)))?;
        slot[0] = Box::into_raw(Box::new(SgSurface::new(surface)));
        Ok(())
    })
}

/// Builds a surface from a run config or bare surface JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_surface_from_json(json: *const c_char, out: *mut *mut SgSurface) -> SgStatus {
    guard(|| {
        let slot = out_slice(out, 1, 1)?;
        slot[0] = std::ptr::null_mut();
        if json.is_null() {
            return Err(fail(SgStatus::NullPointer, "json is null"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| fail(SgStatus::InvalidArgument, format!("json is not UTF-8: {e}")))?;
        let cfg = lift(RunConfig::from_json(text))?;
        let surface = lift(cfg.build_surface())?;
        slot[0] = Box::into_raw(Box::new(SgSurface::new(surface)));
        Ok(())
    })
}

/// Releases a surface. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sg_surface_free(s: *mut SgSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Genus of the surface, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live surface handle.
#[no_mangle]
pub unsafe extern "C" fn sg_surface_genus(s: *const SgSurface) -> usize {
    s.as_ref().map_or(0, |s| s.surface.genus())
}

/// Period matrix, `genus × genus` row-major into `out`.
///
/// # Safety
/// `s` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn sg_period_matrix(s: *const SgSurface, out: *mut SgComplex, len: usize) -> SgStatus {
    guard(|| {
        let s = surface_ref(s)?;
        let g = s.surface.genus();
        let out = out_slice(out, len, g * g)?;
        let pm = lift(period_matrix(&s.surface))?;
        for (o, z) in out.iter_mut().zip(pm.flat()) {
            *o = z.into();
        }
        Ok(())
    })
}

/// Normalized holomorphic differentials `ν_1(x), …, ν_g(x)` into `out`.
///
/// # Safety
/// `s` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn sg_nu(s: *const SgSurface, x: SgComplex, out: *mut SgComplex, len: usize) -> SgStatus {
    guard(|| {
        let s = surface_ref(s)?;
        let out = out_slice(out, len, s.surface.genus())?;
        let nu = lift(s.nu())?;
        for (o, z) in out.iter_mut().zip(lift(nu.values(x.into()))?) {
            *o = z.into();
        }
        Ok(())
    })
}

/// Bers kernel of weight `n ≥ 2` at `(x, y)`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_bers(
    s: *const SgSurface,
    n: usize,
    x: SgComplex,
    y: SgComplex,
    out: *mut SgComplex,
) -> SgStatus {
    guard(|| {
        let s = surface_ref(s)?;
        let out = out_slice(out, 1, 1)?;
        if n < 2 {
            return Err(fail(SgStatus::InvalidArgument, format!("weight must be at least 2, got {n}")));
        }
        let bers = lift(s.bers(n))?;
        out[0] = lift(bers.value(x.into(), y.into()))?.into();
        Ok(())
    })
}
