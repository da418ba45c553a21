//! C ABI over the riesz-core engine.
//!
//! Every entry point is panic-safe (panics become
//! [`RieszStatus::Panic`] instead of unwinding across the boundary),
//! checks its pointers, and reports outcomes through [`RieszStatus`].
//! Complex values cross the boundary as separate real and imaginary
//! doubles. Targets are opaque heap handles created and released
//! through `riesz_target_*`.
//!
//! The matching header is generated into `include/riesz.h` by the
//! build script.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use riesz_core::kernels::{kernel_envelope, poisson, riesz_kernel, smoothed_kernel};
use riesz_core::{
    perron, special, AnalyticTarget, Error, KernelParams, QuadratureSpec, DEFAULT_MAX_TERMS,
};

/// Outcome of a call across the C boundary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RieszStatus {
    /// The call succeeded and all outputs are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was outside the function's domain.
    InvalidArgument = 2,
    /// The computation itself failed (budget, pole, divergence, ...).
    EvalFailure = 3,
    /// An internal panic was caught at the boundary.
    Panic = 4,
}

/// Opaque handle to an analytic target (a Dirichlet series together
/// with its known closed forms). Create with `riesz_target_builtin`
/// or `riesz_target_polynomial`, release with `riesz_target_free`.
pub struct RieszTarget {
    inner: AnalyticTarget,
}

fn status_of(err: &Error) -> RieszStatus {
    match err {
        Error::NonMonotoneFrequency { .. }
        | Error::NegativeFrequency { .. }
        | Error::Domain { .. }
        | Error::UnknownTarget { .. }
        | Error::Config { .. }
        | Error::NoEvalRule
        | Error::NoBoundaryRule
        | Error::MissingReference
        | Error::TailHintMissing => RieszStatus::InvalidArgument,
        _ => RieszStatus::EvalFailure,
    }
}

fn guarded(body: impl FnOnce() -> RieszStatus) -> RieszStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(RieszStatus::Panic)
}

/// Writes a complex value through two out-pointers known to be
/// non-null.
unsafe fn store(value: Complex64, out_re: *mut f64, out_im: *mut f64) {
    *out_re = value.re;
    *out_im = value.im;
}

/// Version of the underlying engine as a static C string.
#[no_mangle]
pub extern "C" fn riesz_core_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Create a built-in target by name. Known names: "const1",
/// "zeta-line", "eta", "taylor-l2".
///
/// # Safety
///
/// `name` must point to a valid NUL-terminated string and `out` to a
/// writable pointer slot. On success `*out` owns the handle and must
/// be released with `riesz_target_free`.
#[no_mangle]
pub unsafe extern "C" fn riesz_target_builtin(
    name: *const c_char,
    out: *mut *mut RieszTarget,
) -> RieszStatus {
    if name.is_null() || out.is_null() {
        return RieszStatus::NullPointer;
    }
    guarded(|| {
        let Ok(name) = CStr::from_ptr(name).to_str() else {
            return RieszStatus::InvalidArgument;
        };
        match AnalyticTarget::builtin(name) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(RieszTarget { inner }));
                RieszStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Create a Dirichlet-polynomial target from `len` frequencies and
/// complex coefficients (split into real and imaginary arrays).
/// Frequencies must be non-negative and strictly increasing.
///
/// # Safety
///
/// `freqs`, `coeff_re`, and `coeff_im` must each point to `len`
/// readable doubles, and `out` to a writable pointer slot. On success
/// `*out` owns the handle and must be released with
/// `riesz_target_free`.
#[no_mangle]
pub unsafe extern "C" fn riesz_target_polynomial(
    freqs: *const f64,
    coeff_re: *const f64,
    coeff_im: *const f64,
    len: usize,
    out: *mut *mut RieszTarget,
) -> RieszStatus {
    if freqs.is_null() || coeff_re.is_null() || coeff_im.is_null() || out.is_null() {
        return RieszStatus::NullPointer;
    }
    guarded(|| {
        let freqs = std::slice::from_raw_parts(freqs, len).to_vec();
        let re = std::slice::from_raw_parts(coeff_re, len);
        let im = std::slice::from_raw_parts(coeff_im, len);
        let coeffs = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        match AnalyticTarget::polynomial(freqs, coeffs) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(RieszTarget { inner }));
                RieszStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a target handle. Null is a no-op.
///
/// # Safety
///
/// `target` must be null or a handle obtained from a `riesz_target_*`
/// constructor that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn riesz_target_free(target: *mut RieszTarget) {
    if !target.is_null() {
        drop(Box::from_raw(target));
    }
}

/// Riesz mean of order `k` at cutoff `x`, evaluated at the complex
/// point `s_re + i s_im`.
///
/// # Safety
///
/// `target` must be a live handle; `out_re` and `out_im` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn riesz_mean_eval(
    target: *const RieszTarget,
    k: f64,
    x: f64,
    s_re: f64,
    s_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> RieszStatus {
    if target.is_null() || out_re.is_null() || out_im.is_null() {
        return RieszStatus::NullPointer;
    }
    guarded(|| {
        let s = Complex64::new(s_re, s_im);
        match (*target).inner.series.riesz_mean(k, x, s, DEFAULT_MAX_TERMS) {
            Ok(v) => {
                store(v, out_re, out_im);
                RieszStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Riesz mean of order `k` at cutoff `x` recovered from the boundary
/// Perron integral at ordinate `tau`, with the default quadrature.
/// `out_err` receives the quadrature error estimate.
///
/// # Safety
///
/// `target` must be a live handle; `out_re`, `out_im`, and `out_err`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn riesz_perron_boundary(
    target: *const RieszTarget,
    k: f64,
    x: f64,
    tau: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_err: *mut f64,
) -> RieszStatus {
    if target.is_null() || out_re.is_null() || out_im.is_null() || out_err.is_null() {
        return RieszStatus::NullPointer;
    }
    guarded(|| {
        let quad = QuadratureSpec::default();
        match perron::perron_boundary(&(*target).inner, k, x, tau, &quad) {
            Ok(r) => {
                store(r.value, out_re, out_im);
                *out_err = r.err_est;
                RieszStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Bare Riesz summability kernel of order `k > 0` at `y`.
///
/// # Safety
///
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn riesz_kernel_eval(
    k: f64,
    y: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> RieszStatus {
    if out_re.is_null() || out_im.is_null() {
        return RieszStatus::NullPointer;
    }
    if !(k > 0.0) || !k.is_finite() {
        return RieszStatus::InvalidArgument;
    }
    guarded(|| {
        store(riesz_kernel(k, y), out_re, out_im);
        RieszStatus::Ok
    })
}

/// Poisson kernel for the half-plane at abscissa `u > 0` and offset
/// `t`.
///
/// # Safety
///
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn riesz_poisson_eval(u: f64, t: f64, out: *mut f64) -> RieszStatus {
    if out.is_null() {
        return RieszStatus::NullPointer;
    }
    if !(u > 0.0) || !u.is_finite() {
        return RieszStatus::InvalidArgument;
    }
    guarded(|| {
        *out = poisson(u, t);
        RieszStatus::Ok
    })
}

/// Decay envelope of the composite smoothed kernel with orders
/// `k > ell >= 0` at height `x > 0`, evaluated at `y`.
///
/// # Safety
///
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn riesz_envelope_eval(
    k: f64,
    ell: f64,
    x: f64,
    y: f64,
    out: *mut f64,
) -> RieszStatus {
    if out.is_null() {
        return RieszStatus::NullPointer;
    }
    guarded(|| {
        let params = match KernelParams::new(k, ell, x) {
            Ok(p) => p,
            Err(e) => return status_of(&e),
        };
        match kernel_envelope(&params, y) {
            Ok(v) => {
                *out = v;
                RieszStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Composite smoothed kernel with orders `k > ell >= 0` at height
/// `x > 0`, evaluated at `y` with the default quadrature. `out_err`
/// receives the quadrature error estimate.
///
/// # Safety
///
/// `out_re`, `out_im`, and `out_err` must be writable.
#[no_mangle]
pub unsafe extern "C" fn riesz_smoothed_kernel_eval(
    k: f64,
    ell: f64,
    x: f64,
    y: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_err: *mut f64,
) -> RieszStatus {
    if out_re.is_null() || out_im.is_null() || out_err.is_null() {
        return RieszStatus::NullPointer;
    }
    guarded(|| {
        let params = match KernelParams::new(k, ell, x) {
            Ok(p) => p,
            Err(e) => return status_of(&e),
        };
        let spec = QuadratureSpec::default();
        match smoothed_kernel(&params, y, &spec) {
            Ok(r) => {
                store(r.value, out_re, out_im);
                *out_err = r.err_est;
                RieszStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Riemann zeta at `s_re + i s_im`, refusing points within 1e-6 of
/// the pole at 1.
///
/// # Safety
///
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn riesz_zeta(
    s_re: f64,
    s_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> RieszStatus {
    if out_re.is_null() || out_im.is_null() {
        return RieszStatus::NullPointer;
    }
    guarded(|| match special::zeta(Complex64::new(s_re, s_im), 1e-6) {
        Ok(v) => {
            store(v, out_re, out_im);
            RieszStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Dirichlet eta at `s_re + i s_im` (entire, no guard needed).
///
/// # Safety
///
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn riesz_eta(
    s_re: f64,
    s_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> RieszStatus {
    if out_re.is_null() || out_im.is_null() {
        return RieszStatus::NullPointer;
    }
    guarded(|| {
        store(special::eta(Complex64::new(s_re, s_im)), out_re, out_im);
        RieszStatus::Ok
    })
}

/// Gamma function on the positive real axis.
///
/// # Safety
///
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn riesz_gamma(x: f64, out: *mut f64) -> RieszStatus {
    if out.is_null() {
        return RieszStatus::NullPointer;
    }
    if !(x > 0.0) || !x.is_finite() {
        return RieszStatus::InvalidArgument;
    }
    guarded(|| {
        *out = special::gamma_pos(x);
        RieszStatus::Ok
    })
}
