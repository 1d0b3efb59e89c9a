//! C ABI over the thetacat engine.
//!
//! Objects cross the boundary as opaque handles, made by
//! [`tc_precat_from_json`] and [`tc_resolve`] and released with the matching
//! `*_free`. Every fallible call
//! returns a [`TcStatus`]; on failure, [`tc_last_error`] describes what went
//! wrong on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use thetacat::homcalc::hom_classes;
use thetacat::io;
use thetacat::lifting::is_ncategory;
use thetacat::precat::Precat;
use thetacat::resolution::{ResolveConfig, Resolution};
use thetacat::support::{BoundaryMode, Support};
use thetacat::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed or inconsistent input.
    Invalid = 3,
    /// A completion stopped at its pass limit.
    PassLimit = 4,
    /// A size limit (elements or enumerated maps) was exceeded.
    Limit = 5,
    /// Any other failure, including a caught panic.
    Internal = 6,
}

/// A finite precategory over a bounded support.
pub struct TcPrecat(Precat);

/// `F0 ⇉ F1` (and optionally `F2`) over a precat.
pub struct TcResolution(Resolution);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TcStatus {
    match e {
        Error::PassLimit { .. } => TcStatus::PassLimit,
        Error::ElementLimit(_) | Error::MapLimit(_) | Error::BoundTooLarge(_) => TcStatus::Limit,
        e if e.is_validation() => TcStatus::Invalid,
        _ => TcStatus::Internal,
    }
}

/// Run `f`, translating errors and panics into a status and a message.
fn guard(f: impl FnOnce() -> Result<(), (TcStatus, String)>) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TcStatus::Internal
        }
    }
}

fn lift(e: Error) -> (TcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TcStatus, String) {
    (TcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (TcStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (TcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (TcStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

/// The message of the last failed call on this thread, or "" if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a category or precat document. Categories become nerves (promoted
/// when `n == 2`). `degree_bound == 0` picks the default (3 at n = 1, 2 at n = 2).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_precat` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_precat_from_json(
    json: *const c_char,
    n: u32,
    degree_bound: u32,
    out_precat: *mut *mut TcPrecat,
) -> TcStatus {
    guard(|| {
        let json = text(json, "json")?;
        let slot = out(out_precat, "out_precat")?;
        *slot = ptr::null_mut();
        let d = match (degree_bound, n) {
            (0, 1) => 3,
            (0, _) => 2,
            (d, _) => d,
        };
        let support = Support::shared(n as usize, d, BoundaryMode::Free).map_err(lift)?;
        let x = io::parse(json).and_then(|doc| io::as_precat(doc, &support)).map_err(lift)?;
        *slot = Box::into_raw(Box::new(TcPrecat(x)));
        Ok(())
    })
}

/// The JSON text of a shipped fixture (`"arrow"`, `"retract"`, ...), or null.
///
/// # Safety
/// `name` must be a NUL-terminated string or null.
#[no_mangle]
pub unsafe extern "C" fn tc_fixture(name: *const c_char) -> *const c_char {
    static CACHE: std::sync::OnceLock<Vec<(&'static str, CString)>> = std::sync::OnceLock::new();
    let Ok(name) = text(name, "name") else {
        return ptr::null();
    };
    let all = CACHE.get_or_init(|| {
        io::FIXTURES
            .iter()
            .map(|(k, v)| (*k, CString::new(*v).expect("fixtures have no NUL")))
            .collect()
    });
    all.iter().find(|(k, _)| *k == name).map_or(ptr::null(), |(_, v)| v.as_ptr())
}

/// # Safety
/// `p` must come from [`tc_precat_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tc_precat_free(p: *mut TcPrecat) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of support shapes (levels) of the precat.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_precat_level_count(p: *const TcPrecat, out_count: *mut usize) -> TcStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("precat"))?;
        *out(out_count, "out_count")? = p.0.sizes().len();
        Ok(())
    })
}

/// Number of elements at level `level` (support order).
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_precat_level_size(p: *const TcPrecat, level: usize, out_size: *mut usize) -> TcStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("precat"))?;
        let size = *p
            .0
            .sizes()
            .get(level)
            .ok_or_else(|| (TcStatus::Invalid, format!("level {level} out of range")))?;
        *out(out_size, "out_size")? = size;
        Ok(())
    })
}

/// Segal check: `*out_is_category` is true when the precat is an n-category.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_precat_is_ncategory(p: *const TcPrecat, out_is_category: *mut bool) -> TcStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("precat"))?;
        let w = is_ncategory(&p.0).map_err(lift)?;
        *out(out_is_category, "out_is_category")? = w.is_none();
        Ok(())
    })
}

/// Build the resolution of `p`. `pass_limit == 0` uses the default. Fails
/// with [`TcStatus::PassLimit`] if a stage does not reach a fixpoint.
///
/// # Safety
/// `p` must be a live handle and `out_resolution` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_resolve(
    p: *const TcPrecat,
    pass_limit: usize,
    level2: bool,
    out_resolution: *mut *mut TcResolution,
) -> TcStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("precat"))?;
        let slot = out(out_resolution, "out_resolution")?;
        *slot = ptr::null_mut();
        let mut config = ResolveConfig { level2, ..Default::default() };
        if pass_limit > 0 {
            config.pass_limit = pass_limit;
        }
        let r = Resolution::build(&p.0, &config).map_err(lift)?;
        if !r.converged() {
            return Err((TcStatus::PassLimit, format!("no fixpoint within {} passes", config.pass_limit)));
        }
        *slot = Box::into_raw(Box::new(TcResolution(r)));
        Ok(())
    })
}

/// # Safety
/// `r` must come from [`tc_resolve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tc_resolution_free(r: *mut TcResolution) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Cell counts of `F0` and `F1`.
///
/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_resolution_cells(r: *const TcResolution, out_f0: *mut usize, out_f1: *mut usize) -> TcStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("resolution"))?;
        *out(out_f0, "out_f0")? = r.0.f0.complex().len();
        *out(out_f1, "out_f1")? = r.0.f1.complex().len();
        Ok(())
    })
}

/// Homotopy classes of maps from the resolved source into `target`.
/// Both must live over the same support.
///
/// # Safety
/// `r` and `target` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn tc_hom_classes(
    r: *const TcResolution,
    target: *const TcPrecat,
    out_maps: *mut usize,
    out_classes: *mut usize,
) -> TcStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("resolution"))?;
        let b = target.as_ref().ok_or_else(|| null("target"))?;
        let h = hom_classes(&r.0, &b.0).map_err(lift)?;
        *out(out_maps, "out_maps")? = h.maps.len();
        *out(out_classes, "out_classes")? = h.class_count();
        Ok(())
    })
}
