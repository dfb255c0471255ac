//! C ABI over the `ultrapic` core.
//!
//! Series are opaque `UpSeries` handles created by [`up_series_parse`] and
//! released with [`up_series_free`]. Rationals cross the boundary as strings
//! (`"-3"`, `"1/2"`); a null bound means "unbounded". Every fallible call
//! returns an [`UpStatus`]; on failure [`up_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::c_char;
use num_rational::BigRational;
use ultrapic::cli::format::parse_rational;
use ultrapic::cli::{parse_series_file, SeriesDocument};
use ultrapic::{Error, LaurentSeries, RadiusVal, SingularityClassification, ValRange};

/// Opaque series handle.
pub struct UpSeries {
    inner: LaurentSeries,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    WindowInsufficient = 5,
    NonConvergent = 6,
    PoleAtOrigin = 7,
    HypothesisViolated = 8,
    ContradictionDetected = 9,
    ConstantFunction = 10,
    PrecisionExhausted = 11,
    Unsupported = 12,
    Internal = 13,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpSingularityKind {
    Removable = 0,
    Pole = 1,
    Essential = 2,
}

/// `order` is the pole order; 0 otherwise.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpSingularity {
    pub kind: UpSingularityKind,
    pub order: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> UpStatus {
    match e {
        Error::WindowInsufficient(_) => UpStatus::WindowInsufficient,
        Error::NonConvergent => UpStatus::NonConvergent,
        Error::PoleAtOrigin => UpStatus::PoleAtOrigin,
        Error::HypothesisViolated { .. } => UpStatus::HypothesisViolated,
        Error::ContradictionDetected => UpStatus::ContradictionDetected,
        Error::ConstantFunction => UpStatus::ConstantFunction,
        Error::PrecisionExhausted { .. } => UpStatus::PrecisionExhausted,
        Error::UnsupportedTail(_) => UpStatus::Unsupported,
        Error::InvalidRange(_) => UpStatus::InvalidArgument,
        _ => UpStatus::Internal,
    }
}

type Outcome<T> = Result<T, UpStatus>;

fn fail<T>(status: UpStatus, msg: impl Into<String>) -> Outcome<T> {
    set_error(msg);
    Err(status)
}

fn lib<T>(r: ultrapic::Result<T>) -> Outcome<T> {
    r.or_else(|e| fail(status_of(&e), e.to_string()))
}

/// Run `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Outcome<()>) -> UpStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => UpStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            UpStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Outcome<&'a str> {
    if p.is_null() {
        return fail(UpStatus::NullPointer, "null string argument");
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(UpStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn rational(p: *const c_char) -> Outcome<BigRational> {
    let s = text(p)?;
    parse_rational(s).map_or_else(|| fail(UpStatus::InvalidArgument, format!("`{s}` is not a rational")), Ok)
}

/// Null means unbounded.
unsafe fn bound(p: *const c_char) -> Outcome<Option<BigRational>> {
    if p.is_null() {
        Ok(None)
    } else {
        rational(p).map(Some)
    }
}

unsafe fn series<'a>(p: *const UpSeries) -> Outcome<&'a LaurentSeries> {
    p.as_ref()
        .map(|s| &s.inner)
        .map_or_else(|| fail(UpStatus::NullPointer, "null series handle"), Ok)
}

unsafe fn write<T>(out: *mut T, value: T) -> Outcome<()> {
    if out.is_null() {
        return fail(UpStatus::NullPointer, "null output pointer");
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn singularity(c: SingularityClassification) -> UpSingularity {
    match c {
        SingularityClassification::RemovableAnalytic => UpSingularity {
            kind: UpSingularityKind::Removable,
            order: 0,
        },
        SingularityClassification::Pole(m) => UpSingularity {
            kind: UpSingularityKind::Pole,
            order: m,
        },
        SingularityClassification::EssentialDeclared => UpSingularity {
            kind: UpSingularityKind::Essential,
            order: 0,
        },
    }
}

/// Parse a series file's contents into a new handle stored in `*out`.
///
/// # Safety
/// `src` must be a valid NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn up_series_parse(src: *const c_char, out: *mut *mut UpSeries) -> UpStatus {
    guard(|| {
        let src = text(src)?;
        let doc = parse_series_file(src).or_else(|e| fail(UpStatus::ParseError, e.to_string()))?;
        let inner = doc
            .to_series()
            .or_else(|e| fail(UpStatus::ParseError, e.to_string()))?;
        write(out, Box::into_raw(Box::new(UpSeries { inner })))
    })
}

/// # Safety
/// `series` must come from [`up_series_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn up_series_free(series: *mut UpSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// The series in file format; free with [`up_string_free`]. Null on error.
///
/// # Safety
/// `series` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn up_series_to_text(series: *const UpSeries) -> *mut c_char {
    let mut result = ptr::null_mut();
    guard(|| {
        result = owned_string(SeriesDocument::from_series(self::series(series)?).serialize());
        Ok(())
    });
    result
}

/// `V_f(s)` as a newly allocated string (`"inf"` for the zero series).
///
/// # Safety
/// Pointers must be valid; `out` receives a string to free with
/// [`up_string_free`].
#[no_mangle]
pub unsafe extern "C" fn up_envelope_value(
    series: *const UpSeries,
    s: *const c_char,
    out: *mut *mut c_char,
) -> UpStatus {
    guard(|| {
        let f = self::series(series)?;
        let s = rational(s)?;
        let v = lib(ultrapic::envelope_value(f, &s))?;
        write(out, owned_string(v.to_string()))
    })
}

/// Zeros with valuation in `[from, to]`; null bounds are unbounded.
///
/// # Safety
/// Pointers must be valid (bounds may be null).
#[no_mangle]
pub unsafe extern "C" fn up_zero_count(
    series: *const UpSeries,
    from: *const c_char,
    to: *const c_char,
    out: *mut u64,
) -> UpStatus {
    guard(|| {
        let f = self::series(series)?;
        let range = lib(ValRange::new(bound(from)?, bound(to)?))?;
        write(out, lib(ultrapic::zero_count_annulus(f, &range))?)
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn up_classify(series: *const UpSeries, out: *mut UpSingularity) -> UpStatus {
    guard(|| {
        let f = self::series(series)?;
        write(out, singularity(ultrapic::classify_singularity(f)))
    })
}

/// Extend across the puncture of the disc `v(z) >= radius_val`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn up_extend(
    series: *const UpSeries,
    radius_val: *const c_char,
    out: *mut UpSingularity,
) -> UpStatus {
    guard(|| {
        let f = self::series(series)?;
        let s = RadiusVal::new(rational(radius_val)?);
        write(out, singularity(lib(ultrapic::extend_across_puncture(f, &s))?))
    })
}

/// Image disc: `*out_m` receives the lead exponent, `*out_delta_val` the
/// valuation of the radius as a string to free with [`up_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn up_image_disc(
    series: *const UpSeries,
    radius_val: *const c_char,
    out_m: *mut i64,
    out_delta_val: *mut *mut c_char,
) -> UpStatus {
    guard(|| {
        let f = self::series(series)?;
        let s = RadiusVal::new(rational(radius_val)?);
        if out_m.is_null() || out_delta_val.is_null() {
            return fail(UpStatus::NullPointer, "null output pointer");
        }
        let disc = lib(ultrapic::open_image_disc(f, &s))?;
        write(out_m, disc.lead_exponent)?;
        write(out_delta_val, owned_string(disc.delta_val.to_string()))
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn up_contains_value(
    series: *const UpSeries,
    radius_val: *const c_char,
    w: *const c_char,
    out: *mut bool,
) -> UpStatus {
    guard(|| {
        let f = self::series(series)?;
        let s = RadiusVal::new(rational(radius_val)?);
        let w = rational(w)?;
        write(out, lib(ultrapic::contains_value(f, &s, &w))?)
    })
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn up_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn up_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
