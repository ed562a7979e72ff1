//! C ABI over `qhc`. Chern classes are opaque handles; configurations and
//! results cross the boundary as JSON strings. Every entry point returns a
//! [`QhcStatus`]; on failure `qhc_last_error` describes the cause.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use qhc::chern::{ch_general, ch_multilayer, grr_oracle, multilayer_grr_oracle, ChernClass, MultilayerConfig, OracleLimits, SingleLayerConfig};
use qhc::theta::{theta_char, Characteristic, Modulus, Truncation};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QhcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ComputationFailed = 4,
    Panic = 5,
}

/// Opaque Chern character.
pub struct QhcChernClass {
    inner: ChernClass,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn guard(body: impl FnOnce() -> Result<(), (QhcStatus, String)>) -> QhcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QhcStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QhcStatus::Panic
        }
    }
}

fn invalid(e: impl ToString) -> (QhcStatus, String) {
    (QhcStatus::InvalidArgument, e.to_string())
}

fn failed(e: impl ToString) -> (QhcStatus, String) {
    (QhcStatus::ComputationFailed, e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (QhcStatus, String)> {
    if p.is_null() {
        return Err((QhcStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (QhcStatus::InvalidUtf8, e.to_string()))
}

unsafe fn store<T>(out: *mut T, value: T) -> Result<(), (QhcStatus, String)> {
    if out.is_null() {
        return Err((QhcStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn boxed(class: ChernClass) -> *mut QhcChernClass {
    Box::into_raw(Box::new(QhcChernClass { inner: class }))
}

fn string_out(text: String) -> *mut c_char {
    CString::new(text.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn qhc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Single-layer Chern character. With `oracle` set the Berezin
/// pushforward is computed instead of the closed form.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qhc_ch_single(
    b: i64,
    c: i64,
    d: i64,
    g: u32,
    n: i64,
    m: i64,
    oracle: bool,
    out: *mut *mut QhcChernClass,
) -> QhcStatus {
    guard(|| {
        let cfg = SingleLayerConfig::new(b, c, d, g, n, m).map_err(invalid)?;
        let class = if oracle { grr_oracle(&cfg) } else { ch_general(&cfg) }.map_err(failed)?;
        store(out, boxed(class))
    })
}

/// Multilayer Chern character from a JSON configuration
/// `{"K": [[..]], "C": [[..]], "n": [..], "m": [..], "d": [..], "g": int}`.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qhc_ch_multilayer(
    config_json: *const c_char,
    oracle: bool,
    out: *mut *mut QhcChernClass,
) -> QhcStatus {
    guard(|| {
        let cfg: MultilayerConfig = serde_json::from_str(read_str(config_json)?).map_err(invalid)?;
        let class = if oracle {
            multilayer_grr_oracle(&cfg, OracleLimits::default())
        } else {
            ch_multilayer(&cfg)
        }
        .map_err(failed)?;
        store(out, boxed(class))
    })
}

/// Exact equality of two classes.
///
/// # Safety
/// Both handles must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qhc_chern_equal(
    a: *const QhcChernClass,
    b: *const QhcChernClass,
    out: *mut bool,
) -> QhcStatus {
    guard(|| match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => store(out, a.inner == b.inner),
        _ => Err((QhcStatus::NullPointer, "null handle".into())),
    })
}

/// JSON rendering of the class; free with `qhc_string_free`.
///
/// # Safety
/// `class` must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qhc_chern_to_json(class: *const QhcChernClass, out: *mut *mut c_char) -> QhcStatus {
    guard(|| {
        let class = class.as_ref().ok_or((QhcStatus::NullPointer, "null handle".to_string()))?;
        store(out, string_out(class.inner.to_json().to_string()))
    })
}

/// Human-readable rendering; free with `qhc_string_free`.
///
/// # Safety
/// `class` must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qhc_chern_to_string(class: *const QhcChernClass, out: *mut *mut c_char) -> QhcStatus {
    guard(|| {
        let class = class.as_ref().ok_or((QhcStatus::NullPointer, "null handle".to_string()))?;
        store(out, string_out(class.inner.to_string()))
    })
}

/// # Safety
/// `class` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qhc_chern_free(class: *mut QhcChernClass) {
    if !class.is_null() {
        drop(Box::from_raw(class));
    }
}

/// # Safety
/// `s` must be a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qhc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `θ[a;b](z, τ)` with its certified tail bound.
///
/// # Safety
/// Output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qhc_theta(
    z_re: f64,
    z_im: f64,
    tau_re: f64,
    tau_im: f64,
    a: f64,
    b: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    tail_bound: *mut f64,
) -> QhcStatus {
    guard(|| {
        let tau = Modulus::new(Complex64::new(tau_re, tau_im)).map_err(invalid)?;
        let v = theta_char(Characteristic::new(a, b), Complex64::new(z_re, z_im), &tau, Truncation::default());
        let value = v.value();
        store(out_re, value.re)?;
        store(out_im, value.im)?;
        store(tail_bound, v.tail_bound)
    })
}
