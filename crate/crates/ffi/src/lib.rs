// SPDX-License-Identifier: Apache-2.0

//! C ABI for `dyncirc`.
//!
//! Circuits cross the boundary as opaque [`DcCircuit`] handles. Every
//! fallible function returns a [`DcStatus`]; on failure a message is
//! available from [`dc_last_error_message`] on the same thread. Handles are
//! released with [`dc_circuit_free`] and strings with [`dc_string_free`].
//! No function panics across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dyncirc::json::{from_json, to_json};
use dyncirc::randgen::{gen_pattern1, gen_pattern2, shor_qec_demo, GenConfig, DEFAULT_P_CX};
use dyncirc::{
    equivalent, metrics, optimize, optimize_pipeline, rec_branch_expand, Circuit, ExpandConfig,
    JsonError,
};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or wrong schema version.
    Json = 3,
    /// Indices out of range or wrong gate arity.
    InvalidCircuit = 4,
    Expand = 5,
    /// Qubit cap exceeded or circuits of different shape.
    Simulation = 6,
    /// Bad generator configuration.
    Generate = 7,
    /// Internal error; the message has details.
    Panic = 8,
}

/// Opaque circuit handle.
pub struct DcCircuit {
    inner: Circuit,
}

/// Depth and gate count extremes over all execution paths.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DcMetrics {
    pub max_p_depth: usize,
    pub min_p_depth: usize,
    pub max_p_gate_count: usize,
    pub min_p_gate_count: usize,
    /// Saturates at `UINT64_MAX`.
    pub path_count: u64,
}

/// Benchmark generator settings. `pattern` is 1 (shallow blocks) or
/// 2 (nested blocks of depth `d`).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcGenConfig {
    pub pattern: u32,
    pub n: usize,
    pub d_s: usize,
    pub k: usize,
    pub d: usize,
    pub seed: u64,
    pub p_cx: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (DcStatus, String);

fn set_error(msg: Option<String>) {
    let msg = msg.map(|m| CString::new(m.replace('\0', " ")).expect("nul bytes removed"));
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DcStatus {
    set_error(None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(Some(msg));
            DcStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (DcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn circuit<'a>(c: *const DcCircuit, what: &str) -> Result<&'a Circuit, Failure> {
    c.as_ref().map(|h| &h.inner).ok_or_else(|| null(what))
}

unsafe fn emit(out: *mut *mut DcCircuit, c: Circuit) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(DcCircuit { inner: c }));
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next `dc_` call on this thread.
#[no_mangle]
pub extern "C" fn dc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_circuit_from_json(
    json: *const c_char,
    out: *mut *mut DcCircuit,
) -> DcStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (DcStatus::InvalidUtf8, e.to_string()))?;
        let c = from_json(text).map_err(|e| {
            let status = match e {
                JsonError::Invalid(_) => DcStatus::InvalidCircuit,
                _ => DcStatus::Json,
            };
            (status, e.to_string())
        })?;
        emit(out, c)
    })
}

/// Writes compact `dyncirc-v1` JSON to `*out`; free it with
/// [`dc_string_free`].
///
/// # Safety
/// `c` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_circuit_to_json(
    c: *const DcCircuit,
    out: *mut *mut c_char,
) -> DcStatus {
    guard(|| {
        let c = circuit(c, "circuit")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CString::new(to_json(c)).map_err(|e| (DcStatus::Panic, e.to_string()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn dc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `c` must come from this library or be NULL, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dc_circuit_free(c: *mut DcCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Recursive branch expansion.
///
/// # Safety
/// `c` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_circuit_expand(
    c: *const DcCircuit,
    depth_limit: u32,
    out: *mut *mut DcCircuit,
) -> DcStatus {
    guard(|| {
        let c = circuit(c, "circuit")?;
        let e = rec_branch_expand(c, ExpandConfig::new(depth_limit))
            .map_err(|e| (DcStatus::Expand, e.to_string()))?;
        emit(out, e)
    })
}

/// Peephole cancellation with conditionals as barriers.
///
/// # Safety
/// `c` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_circuit_optimize(
    c: *const DcCircuit,
    out: *mut *mut DcCircuit,
) -> DcStatus {
    guard(|| emit(out, optimize(circuit(c, "circuit")?)))
}

/// Expansion followed by peephole cancellation.
///
/// # Safety
/// `c` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_circuit_pipeline(
    c: *const DcCircuit,
    depth_limit: u32,
    out: *mut *mut DcCircuit,
) -> DcStatus {
    guard(|| {
        let c = circuit(c, "circuit")?;
        let p = optimize_pipeline(c, ExpandConfig::new(depth_limit))
            .map_err(|e| (DcStatus::Expand, e.to_string()))?;
        emit(out, p)
    })
}

/// # Safety
/// `c` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_circuit_metrics(c: *const DcCircuit, out: *mut DcMetrics) -> DcStatus {
    guard(|| {
        let m = metrics(circuit(c, "circuit")?);
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = DcMetrics {
            max_p_depth: m.max_p_depth,
            min_p_depth: m.min_p_depth,
            max_p_gate_count: m.max_p_gate_count,
            min_p_gate_count: m.min_p_gate_count,
            path_count: m.path_count,
        };
        Ok(())
    })
}

/// Compares the measurement-outcome ensembles of two circuits.
///
/// # Safety
/// `a` and `b` must be live handles or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_circuit_equivalent(
    a: *const DcCircuit,
    b: *const DcCircuit,
    tol: f64,
    out: *mut bool,
) -> DcStatus {
    guard(|| {
        let eq = equivalent(circuit(a, "a")?, circuit(b, "b")?, tol)
            .map_err(|e| (DcStatus::Simulation, e.to_string()))?;
        *out.as_mut().ok_or_else(|| null("out"))? = eq;
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dc_circuit_num_qubits(c: *const DcCircuit) -> usize {
    c.as_ref().map_or(0, |h| h.inner.num_qubits)
}

/// # Safety
/// `c` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dc_circuit_num_clbits(c: *const DcCircuit) -> usize {
    c.as_ref().map_or(0, |h| h.inner.num_clbits)
}

/// Instruction count, counting the circuit declaration as one.
///
/// # Safety
/// `c` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dc_circuit_program_size(c: *const DcCircuit) -> usize {
    c.as_ref().map_or(0, |h| h.inner.program_size())
}

/// Defaults: pattern 1, n 3, d_s 5, k 1, d 1, seed 0, p_cx 0.3.
#[no_mangle]
pub extern "C" fn dc_gen_config_default() -> DcGenConfig {
    DcGenConfig {
        pattern: 1,
        n: 3,
        d_s: 5,
        k: 1,
        d: 1,
        seed: 0,
        p_cx: DEFAULT_P_CX,
    }
}

/// # Safety
/// `cfg` must point to a valid config or be NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_generate(
    cfg: *const DcGenConfig,
    out: *mut *mut DcCircuit,
) -> DcStatus {
    guard(|| {
        let cfg = cfg.as_ref().ok_or_else(|| null("cfg"))?;
        let gcfg = GenConfig {
            n: cfg.n,
            d_s: cfg.d_s,
            k: cfg.k,
            d: cfg.d,
            seed: cfg.seed,
            p_cx: cfg.p_cx,
        };
        let generated = match cfg.pattern {
            1 => gen_pattern1(&gcfg),
            2 => gen_pattern2(&gcfg),
            p => return Err((DcStatus::Generate, format!("unknown pattern {p}"))),
        };
        emit(
            out,
            generated.map_err(|e| (DcStatus::Generate, e.to_string()))?,
        )
    })
}

/// The 9-qubit error-correction demo circuit.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_qec_demo(out: *mut *mut DcCircuit) -> DcStatus {
    guard(|| emit(out, shor_qec_demo()))
}
