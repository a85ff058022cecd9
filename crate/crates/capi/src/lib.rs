//! C ABI for the kerrcat simulator.
//!
//! Protocol results are returned as opaque handles; every fallible call
//! reports a [`KcStatus`] and writes its output through out-pointers. The
//! header `include/kerrcat.h` is generated by cbindgen at build time.
//!
//! Thread safety: handles are immutable after creation and may be shared
//! across threads; freeing a handle while another thread uses it is the
//! caller's bug, as usual for C APIs.

#![warn(unsafe_op_in_unsafe_fn)]

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64 as C64;

use kerrcat::elements::DetectorPattern;
use kerrcat::error::Error;
use kerrcat::protocols::{
    build_cat, run_protocol1, run_protocol1_imperfect, run_protocol2, CatSpec, Parity,
    ProtocolResult,
};
use kerrcat::serial::result_to_json;
use kerrcat::state::Polarization;
use kerrcat::wigner::wigner_point;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcStatus {
    /// Success.
    KcOk = 0,
    /// Internal failure.
    KcErrInternal = 1,
    /// Invalid argument (bad literal, null pointer, unknown enum value).
    KcErrInvalidArgument = 2,
    /// The requested post-selection has probability zero.
    KcErrImpossibleOutcome = 3,
}

/// Complex number as a plain (re, im) pair.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KcComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for KcComplex {
    fn from(z: C64) -> Self {
        KcComplex { re: z.re, im: z.im }
    }
}

/// Opaque protocol-result handle.
pub struct KcProtocolResult {
    inner: ProtocolResult,
}

/// Measurement outcome selector for the single-photon scheme.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcOutcome {
    KcOutcomeH = 0,
    KcOutcomeV = 1,
}

/// Detector-pattern selector for the twin-photon scheme.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcPattern {
    KcPatternOneDetector = 0,
    KcPatternBothDetectors = 1,
}

fn status_of(e: &Error) -> KcStatus {
    match e {
        Error::ImpossibleOutcome(_) | Error::ZeroNorm | Error::ZeroTrace => {
            KcStatus::KcErrImpossibleOutcome
        }
        Error::InvalidInput { .. } => KcStatus::KcErrInvalidArgument,
        _ => KcStatus::KcErrInternal,
    }
}

fn guarded<F: FnOnce() -> KcStatus>(f: F) -> KcStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(KcStatus::KcErrInternal)
}

/// Run the single-photon scheme. On success `*out` owns a new handle that
/// must be released with `kc_result_free`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_protocol1_run(
    alpha_re: f64,
    alpha_im: f64,
    phi: f64,
    outcome: KcOutcome,
    out: *mut *mut KcProtocolResult,
) -> KcStatus {
    guarded(|| {
        if out.is_null() {
            return KcStatus::KcErrInvalidArgument;
        }
        let pol = match outcome {
            KcOutcome::KcOutcomeH => Polarization::H,
            KcOutcome::KcOutcomeV => Polarization::V,
        };
        match run_protocol1(C64::new(alpha_re, alpha_im), phi, pol) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(KcProtocolResult { inner })) };
                KcStatus::KcOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Run the twin-photon scheme; same ownership contract as
/// `kc_protocol1_run`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_protocol2_run(
    alpha_re: f64,
    alpha_im: f64,
    phi: f64,
    pattern: KcPattern,
    out: *mut *mut KcProtocolResult,
) -> KcStatus {
    guarded(|| {
        if out.is_null() {
            return KcStatus::KcErrInvalidArgument;
        }
        let pat = match pattern {
            KcPattern::KcPatternOneDetector => DetectorPattern::OneDetector,
            KcPattern::KcPatternBothDetectors => DetectorPattern::BothDetectors,
        };
        match run_protocol2(C64::new(alpha_re, alpha_im), phi, pat) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(KcProtocolResult { inner })) };
                KcStatus::KcOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a protocol-result handle. Null is ignored.
///
/// # Safety
/// `handle` must be null or a pointer previously returned by a run function,
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kc_result_free(handle: *mut KcProtocolResult) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Born probability of the post-selected record. Returns NaN on null.
///
/// # Safety
/// `handle` must be null or a live handle from a run function.
#[no_mangle]
pub unsafe extern "C" fn kc_result_outcome_prob(handle: *const KcProtocolResult) -> f64 {
    match unsafe { handle.as_ref() } {
        Some(h) => h.inner.outcome_prob,
        None => f64::NAN,
    }
}

/// Exact cat amplitude `alpha (1 - e^{i phi}) / sqrt2`.
///
/// # Safety
/// `handle` must be null or a live handle from a run function.
#[no_mangle]
pub unsafe extern "C" fn kc_result_cat_amplitude_exact(handle: *const KcProtocolResult) -> KcComplex {
    match unsafe { handle.as_ref() } {
        Some(h) => h.inner.cat_amplitude_exact.into(),
        None => KcComplex {
            re: f64::NAN,
            im: f64::NAN,
        },
    }
}

/// Small-phi cat amplitude `-i alpha phi / sqrt2`.
///
/// # Safety
/// `handle` must be null or a live handle from a run function.
#[no_mangle]
pub unsafe extern "C" fn kc_result_cat_amplitude_approx(handle: *const KcProtocolResult) -> KcComplex {
    match unsafe { handle.as_ref() } {
        Some(h) => h.inner.cat_amplitude_approx.into(),
        None => KcComplex {
            re: f64::NAN,
            im: f64::NAN,
        },
    }
}

/// Wigner function of the generated `o2` cat at phase-space point
/// `beta = beta_re + i beta_im`.
///
/// # Safety
/// `handle` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn kc_result_wigner(
    handle: *const KcProtocolResult,
    beta_re: f64,
    beta_im: f64,
    out: *mut f64,
) -> KcStatus {
    guarded(|| {
        let (Some(h), false) = (unsafe { handle.as_ref() }, out.is_null()) else {
            return KcStatus::KcErrInvalidArgument;
        };
        match wigner_point((&h.inner.cat_o2).into(), "o2", C64::new(beta_re, beta_im)) {
            Ok(w) => {
                unsafe { *out = w };
                KcStatus::KcOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Serialize the full result document to a NUL-terminated JSON string.
/// Free it with `kc_string_free`.
///
/// # Safety
/// `handle` must be null or a live handle from a run function.
#[no_mangle]
pub unsafe extern "C" fn kc_result_to_json(handle: *const KcProtocolResult) -> *mut c_char {
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return ptr::null_mut();
    };
    match result_to_json(&h.inner).ok().and_then(|s| CString::new(s).ok()) {
        Some(c) => c.into_raw(),
        None => ptr::null_mut(),
    }
}

/// Release a string produced by this library. Null is ignored.
///
/// # Safety
/// `text` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kc_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

/// Wigner function of the cat `N (|gamma> + parity |-gamma>)` at `beta`.
/// `parity` is +1 (even) or -1 (odd).
///
/// # Safety
/// `out` must be null or valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn kc_cat_wigner(
    gamma_re: f64,
    gamma_im: f64,
    parity: i32,
    beta_re: f64,
    beta_im: f64,
    out: *mut f64,
) -> KcStatus {
    guarded(|| {
        if out.is_null() {
            return KcStatus::KcErrInvalidArgument;
        }
        let parity = match parity {
            1 => Parity::Even,
            -1 => Parity::Odd,
            _ => return KcStatus::KcErrInvalidArgument,
        };
        let spec = CatSpec {
            gamma: C64::new(gamma_re, gamma_im),
            parity,
        };
        let run = build_cat(&spec)
            .and_then(|cat| wigner_point((&cat).into(), "o2", C64::new(beta_re, beta_im)));
        match run {
            Ok(w) => {
                unsafe { *out = w };
                KcStatus::KcOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Fidelity of the asymmetric-Kerr output against the ideal cat.
///
/// # Safety
/// `out` must be null or valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn kc_imperfect_fidelity(
    alpha_re: f64,
    alpha_im: f64,
    phi: f64,
    epsilon: f64,
    out: *mut f64,
) -> KcStatus {
    guarded(|| {
        if out.is_null() {
            return KcStatus::KcErrInvalidArgument;
        }
        match run_protocol1_imperfect(C64::new(alpha_re, alpha_im), phi, epsilon) {
            Ok(run) => {
                unsafe { *out = run.fidelity };
                KcStatus::KcOk
            }
            Err(e) => status_of(&e),
        }
    })
}
