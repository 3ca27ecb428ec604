//! C ABI for `hyperterm`.
//!
//! Objects are opaque handles created by `*_parse`/`*_build` and released by
//! the matching `*_free`. Every function returns an [`HtStatus`]; on failure
//! [`ht_last_error_message`] describes the error for the calling thread.
//! Strings returned through `char **out` are owned by the caller and must be
//! released with [`ht_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hyperterm::geometry::Window;
use hyperterm::rat::format_rat;
use hyperterm::{
    build_structure, closed_form_eval, decompose, grid_compare, split_factorial, to_pochhammer, Error, Eval, Json,
    PiecewiseStructure, TermSpec, Undefined,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HtStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON or polynomial text.
    Parse = 3,
    /// Arity mismatch between arguments.
    Dimension = 4,
    /// The input violates a documented precondition.
    Precondition = 5,
    /// The generators are not compatible.
    Cocycle = 6,
    /// The structure construction failed.
    Structure = 7,
    /// A factor does not split over the rationals.
    Splitting = 8,
    /// A zero polynomial or zero product term where a nonzero one is needed.
    Zero = 9,
    /// An internal consistency check failed.
    Integrity = 10,
    /// The value is not defined at the requested point.
    Undefined = 11,
    /// A panic was caught at the boundary.
    Panic = 12,
}

/// A parsed term specification.
pub struct HtSpec(TermSpec);

/// A piecewise closed-form structure.
pub struct HtStructure(PiecewiseStructure);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HtStatus {
    match e {
        Error::Dimension { .. } => HtStatus::Dimension,
        Error::Precondition(_) | Error::Io(_) => HtStatus::Precondition,
        Error::Parse { .. } | Error::Json(_) => HtStatus::Parse,
        Error::ZeroPolynomial(_) | Error::ZeroTerm(_) => HtStatus::Zero,
        Error::Cocycle(_) => HtStatus::Cocycle,
        Error::Structure(_) => HtStatus::Structure,
        Error::Splitting(_) => HtStatus::Splitting,
        Error::Integrity(_) => HtStatus::Integrity,
    }
}

struct Fail(HtStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(HtStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error or panic and converts it to a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HtStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            HtStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(HtStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice_arg<'a>(p: *const i64, len: usize, what: &str) -> Result<&'a [i64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail(HtStatus::Integrity, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn check_out<T>(out: *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(null("out"))
    } else {
        Ok(())
    }
}

/// Parses a JSON term specification into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ht_spec_parse(json: *const c_char, out: *mut *mut HtSpec) -> HtStatus {
    guard(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        let spec = TermSpec::from_json(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(HtSpec(spec)));
        Ok(())
    })
}

/// Releases a specification. Null is ignored.
///
/// # Safety
/// `spec` must come from [`ht_spec_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ht_spec_free(spec: *mut HtSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Number of variables of the specification.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ht_spec_arity(spec: *const HtSpec, out: *mut usize) -> HtStatus {
    guard(|| {
        check_out(out)?;
        *out = ref_arg(spec, "spec")?.0.arity();
        Ok(())
    })
}

/// Writes whether the generators satisfy the compatibility conditions.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ht_check_compatibility(spec: *const HtSpec, out: *mut bool) -> HtStatus {
    guard(|| {
        check_out(out)?;
        *out = ref_arg(spec, "spec")?.0.check_compatibility();
        Ok(())
    })
}

/// The Ore–Sato decomposition as JSON.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ht_decompose_json(spec: *const HtSpec, out: *mut *mut c_char) -> HtStatus {
    guard(|| {
        check_out(out)?;
        let form = decompose(&ref_arg(spec, "spec")?.0)?;
        write_string(out, form.to_json())
    })
}

/// Builds the piecewise structure of a seeded specification.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ht_structure_build(spec: *const HtSpec, out: *mut *mut HtStructure) -> HtStatus {
    guard(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        let ps = build_structure(&ref_arg(spec, "spec")?.0)?;
        *out = Box::into_raw(Box::new(HtStructure(ps)));
        Ok(())
    })
}

/// Releases a structure. Null is ignored.
///
/// # Safety
/// `ps` must come from [`ht_structure_build`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ht_structure_free(ps: *mut HtStructure) {
    if !ps.is_null() {
        drop(Box::from_raw(ps));
    }
}

/// The structure as JSON.
///
/// # Safety
/// `ps` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ht_structure_json(ps: *const HtStructure, out: *mut *mut c_char) -> HtStatus {
    guard(|| {
        check_out(out)?;
        write_string(out, ref_arg(ps, "structure")?.0.to_json())
    })
}

/// Per-region factorial forms as a JSON array.
///
/// # Safety
/// `ps` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ht_factorial_json(ps: *const HtStructure, out: *mut *mut c_char) -> HtStatus {
    guard(|| {
        check_out(out)?;
        write_string(out, split_factorial(&ref_arg(ps, "structure")?.0)?.to_json())
    })
}

/// Per-region Pochhammer forms as a JSON array.
///
/// # Safety
/// `ps` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ht_pochhammer_json(ps: *const HtStructure, out: *mut *mut c_char) -> HtStatus {
    guard(|| {
        check_out(out)?;
        let ffs = split_factorial(&ref_arg(ps, "structure")?.0)?;
        let pfs = ffs.iter().map(to_pochhammer).collect::<hyperterm::Result<Vec<_>>>()?;
        write_string(out, pfs.to_json())
    })
}

/// Evaluates the closed form at `z[0..len]` and writes the exact value as
/// text (`p/q` or an integer). Returns `HT_STATUS_UNDEFINED` where the value
/// is not defined.
///
/// # Safety
/// `ps` must be a live handle, `z` must point to `len` integers and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ht_structure_eval(
    ps: *const HtStructure,
    z: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> HtStatus {
    guard(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        let ps = &ref_arg(ps, "structure")?.0;
        match closed_form_eval(ps, slice_arg(z, len, "z")?)? {
            Eval::Value(v) => write_string(out, format_rat(&v)),
            Eval::Undefined(u) => Err(Fail(
                HtStatus::Undefined,
                match u {
                    Undefined::OnH => "point lies on the exceptional set H",
                    Undefined::DZero => "D vanishes at the point",
                    Undefined::UnknownValue => "piece value is not reachable from the seed",
                    Undefined::OutsideRegion => "point is outside the region",
                }
                .into(),
            )),
        }
    })
}

/// Compares the closed form with recurrence propagation on the window
/// `lo[i] ≤ z_i ≤ hi[i]` and writes the report as JSON.
///
/// # Safety
/// Handles must be live, `lo` and `hi` must point to `len` integers and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ht_compare_json(
    spec: *const HtSpec,
    ps: *const HtStructure,
    lo: *const i64,
    hi: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> HtStatus {
    guard(|| {
        check_out(out)?;
        let window = Window::new(slice_arg(lo, len, "lo")?.to_vec(), slice_arg(hi, len, "hi")?.to_vec())?;
        let rep = grid_compare(&ref_arg(ps, "structure")?.0, &ref_arg(spec, "spec")?.0, &window)?;
        write_string(out, rep.to_json())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ht_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn ht_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
