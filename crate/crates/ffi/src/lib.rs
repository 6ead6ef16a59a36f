//! C ABI over `gfldpc`.
//!
//! Codes are opaque handles created from alist text and released with
//! [`gfldpc_code_free`]. Every fallible call returns a [`GfStatus`]; the
//! message of the last failure on the calling thread is available from
//! [`gfldpc_last_error`]. Output buffers are caller-allocated and must hold
//! `n` elements.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gfldpc::{
    bp_decode, build_circuit_graph, decode, emit_dot, gdbf_decode, parse_alist, sigma_from_snr,
    total_energy, BpParams, Capture, DecodeResult, Error, EulerParams, GdbfParams, InitPolicy,
    ParityCheckMatrix, PotentialParams,
};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    LengthMismatch = 5,
    NonFinite = 6,
    Numerical = 7,
    Panic = 8,
}

/// Start point of the gradient-flow integration.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfInit {
    Zero = 0,
    ScaledReceived = 1,
}

/// Gradient-flow decoder parameters.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GfFlowParams {
    pub alpha: f64,
    pub beta: f64,
    pub t_end: f64,
    pub steps: usize,
    pub init: GfInit,
    /// Scale applied to `y` when `init` is `ScaledReceived`.
    pub delta: f64,
    pub early_stop: bool,
}

/// Summary of one decode.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GfDecodeInfo {
    pub syndrome_ok: bool,
    pub diverged: bool,
    pub iterations: usize,
}

/// Opaque parity-check matrix.
pub struct GfCode {
    inner: ParityCheckMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> GfStatus {
    match e {
        Error::Alist { .. } | Error::Config { .. } | Error::InvalidMatrix(_) => GfStatus::Parse,
        Error::LengthMismatch { .. } => GfStatus::LengthMismatch,
        Error::NonFinite(_) => GfStatus::NonFinite,
        Error::NearZero { .. } => GfStatus::Numerical,
        Error::InvalidParameter(_) | Error::SampleTime(_) | Error::Io(_) => {
            GfStatus::InvalidArgument
        }
    }
}

fn guard(f: impl FnOnce() -> Result<(), GfStatus>) -> GfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GfStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            GfStatus::Panic
        }
    }
}

fn lift<T>(r: gfldpc::Result<T>) -> Result<T, GfStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> GfStatus {
    set_error(format!("{what} is null"));
    GfStatus::NullPointer
}

unsafe fn code_ref<'a>(code: *const GfCode) -> Result<&'a ParityCheckMatrix, GfStatus> {
    code.as_ref().map(|c| &c.inner).ok_or_else(|| null("code"))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], GfStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_result(
    r: &DecodeResult,
    out_bits: *mut u8,
    out_state: *mut f64,
    info: *mut GfDecodeInfo,
) {
    if !out_bits.is_null() {
        ptr::copy_nonoverlapping(r.hard_word.bits().as_ptr(), out_bits, r.hard_word.len());
    }
    if !out_state.is_null() {
        ptr::copy_nonoverlapping(r.final_state.as_ptr(), out_state, r.final_state.len());
    }
    if let Some(info) = info.as_mut() {
        *info = GfDecodeInfo {
            syndrome_ok: r.syndrome_ok,
            diverged: r.diverged,
            iterations: r.iterations,
        };
    }
}

/// Message of the last error on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn gfldpc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// BER defaults: alpha 1, beta 2, T 10, N 1000, zero start.
#[no_mangle]
pub extern "C" fn gfldpc_flow_params_default() -> GfFlowParams {
    GfFlowParams {
        alpha: 1.0,
        beta: 2.0,
        t_end: 10.0,
        steps: 1000,
        init: GfInit::Zero,
        delta: 0.01,
        early_stop: false,
    }
}

/// Parses alist text into a new code handle.
///
/// # Safety
/// `alist` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gfldpc_code_from_alist(
    alist: *const c_char,
    out: *mut *mut GfCode,
) -> GfStatus {
    guard(|| {
        if alist.is_null() {
            return Err(null("alist"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(alist).to_str().map_err(|_| {
            set_error("alist text is not UTF-8");
            GfStatus::InvalidUtf8
        })?;
        let h = lift(parse_alist(text))?;
        *out = Box::into_raw(Box::new(GfCode { inner: h }));
        Ok(())
    })
}

/// Releases a handle from [`gfldpc_code_from_alist`]. Null is ignored.
///
/// # Safety
/// `code` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn gfldpc_code_free(code: *mut GfCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Code length, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gfldpc_code_n(code: *const GfCode) -> usize {
    code.as_ref().map_or(0, |c| c.inner.n())
}

/// Number of checks, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gfldpc_code_m(code: *const GfCode) -> usize {
    code.as_ref().map_or(0, |c| c.inner.m())
}

/// Noise standard deviation for an SNR in dB and a design rate.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gfldpc_sigma_from_snr(snr_db: f64, rate: f64, out: *mut f64) -> GfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lift(sigma_from_snr(snr_db, rate))?;
        Ok(())
    })
}

/// Total potential `|x - y|^2 / 2 + h(x)`.
///
/// # Safety
/// `x` and `y` must point to `n` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gfldpc_total_energy(
    code: *const GfCode,
    params: *const GfFlowParams,
    x: *const f64,
    y: *const f64,
    n: usize,
    out: *mut f64,
) -> GfStatus {
    guard(|| {
        let h = code_ref(code)?;
        let fp = params.as_ref().ok_or_else(|| null("params"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = lift(PotentialParams::new(fp.alpha, fp.beta))?;
        *out = lift(total_energy(h, &p, slice(x, n, "x")?, slice(y, n, "y")?))?;
        Ok(())
    })
}

/// Gradient-flow decoding of `y`.
///
/// `out_bits` (n bytes), `out_state` (n doubles) and `info` may each be null.
///
/// # Safety
/// `y` must point to `n` doubles and non-null outputs must be large enough.
#[no_mangle]
pub unsafe extern "C" fn gfldpc_gf_decode(
    code: *const GfCode,
    params: *const GfFlowParams,
    y: *const f64,
    n: usize,
    out_bits: *mut u8,
    out_state: *mut f64,
    info: *mut GfDecodeInfo,
) -> GfStatus {
    guard(|| {
        let h = code_ref(code)?;
        let fp = params.as_ref().ok_or_else(|| null("params"))?;
        let y = slice(y, n, "y")?;
        let p = lift(PotentialParams::new(fp.alpha, fp.beta))?;
        let init = match fp.init {
            GfInit::Zero => InitPolicy::Zero,
            GfInit::ScaledReceived => InitPolicy::ScaledReceived(fp.delta),
        };
        let e = lift(EulerParams::new(fp.t_end, fp.steps))?
            .with_init(init)
            .with_early_stop(fp.early_stop);
        let r = lift(decode(h, y, &p, &e, &Capture::None))?;
        write_result(&r, out_bits, out_state, info);
        Ok(())
    })
}

/// Sum-product decoding; `out_llr` receives posterior LLRs.
///
/// # Safety
/// As for [`gfldpc_gf_decode`].
#[no_mangle]
pub unsafe extern "C" fn gfldpc_bp_decode(
    code: *const GfCode,
    y: *const f64,
    n: usize,
    sigma: f64,
    max_iterations: usize,
    out_bits: *mut u8,
    out_llr: *mut f64,
    info: *mut GfDecodeInfo,
) -> GfStatus {
    guard(|| {
        let h = code_ref(code)?;
        let y = slice(y, n, "y")?;
        let params = BpParams { max_iterations, early_stop: true };
        let r = lift(bp_decode(h, y, sigma, &params))?;
        write_result(&r, out_bits, out_llr, info);
        Ok(())
    })
}

/// Multi-bit GDBF decoding; `out_state` receives the final bipolar word.
///
/// # Safety
/// As for [`gfldpc_gf_decode`].
#[no_mangle]
pub unsafe extern "C" fn gfldpc_gdbf_decode(
    code: *const GfCode,
    y: *const f64,
    n: usize,
    max_iterations: usize,
    theta: f64,
    out_bits: *mut u8,
    out_state: *mut f64,
    info: *mut GfDecodeInfo,
) -> GfStatus {
    guard(|| {
        let h = code_ref(code)?;
        let y = slice(y, n, "y")?;
        let r = lift(gdbf_decode(h, y, &GdbfParams { max_iterations, theta }))?;
        write_result(&r, out_bits, out_state, info);
        Ok(())
    })
}

/// Renders the analog dataflow graph as DOT. Free the result with
/// [`gfldpc_string_free`].
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gfldpc_circuit_dot(
    code: *const GfCode,
    alpha: f64,
    beta: f64,
    delta: f64,
    out: *mut *mut c_char,
) -> GfStatus {
    guard(|| {
        let h = code_ref(code)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p = lift(PotentialParams::new(alpha, beta))?;
        let g = lift(build_circuit_graph(h, &p, delta))?;
        let s = CString::new(emit_dot(&g)).map_err(|_| {
            set_error("DOT text contains NUL");
            GfStatus::Panic
        })?;
        *out = s.into_raw();
        Ok(())
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn gfldpc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
