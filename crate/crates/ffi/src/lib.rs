//! C ABI for the QRS detector.
//!
//! Objects cross the boundary as opaque pointers created by `*_new` / `*_from_*`
//! functions and released by the matching `*_free`. Fallible calls return a
//! [`QrsStatus`]; on failure [`qrs_last_error`] describes the cause for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qrs_core::detect::{self, Algorithm, DetectorParams};
use qrs_core::eval::match_beats;
use qrs_core::{BeatList, EcgRecord, Error};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParam = 2,
    Io = 3,
    Format = 4,
    TooShort = 5,
    SamplingRate = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrsAlgorithm {
    Adaptive = 0,
    Baseline = 1,
}

/// Detector parameters.
pub struct QrsParams(DetectorParams);

/// A single-lead recording in physical units.
pub struct QrsRecord(EcgRecord);

/// Sorted 0-based beat sample indices.
pub struct QrsBeats(BeatList);

/// Counts and percentages from matching predictions to annotations.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QrsMatchReport {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub se: f64,
    pub ppv: f64,
    pub f1: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    let c = CString::new(msg).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QrsStatus {
    match e {
        Error::Io { .. } => QrsStatus::Io,
        Error::Parse { .. } | Error::Format(_) => QrsStatus::Format,
        Error::InvalidParam(_) => QrsStatus::InvalidParam,
        Error::TooShort { .. } => QrsStatus::TooShort,
        Error::SamplingRate(_) => QrsStatus::SamplingRate,
        Error::Record { source, .. } => status_of(source),
    }
}

fn fail(status: QrsStatus, msg: impl Into<String>) -> QrsStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), QrsStatus>) -> QrsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QrsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(QrsStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: qrs_core::Result<T>) -> Result<T, QrsStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, QrsStatus> {
    p.as_ref()
        .ok_or_else(|| fail(QrsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), QrsStatus> {
    if out.is_null() {
        return Err(fail(QrsStatus::NullPointer, "output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qrs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qrs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default parameters (adaptive detector). Never null.
#[no_mangle]
pub extern "C" fn qrs_params_new() -> *mut QrsParams {
    Box::into_raw(Box::new(QrsParams(DetectorParams::default())))
}

/// # Safety
/// `p` must come from [`qrs_params_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qrs_params_free(p: *mut QrsParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live params handle.
#[no_mangle]
pub unsafe extern "C" fn qrs_params_set_algorithm(p: *mut QrsParams, algorithm: QrsAlgorithm) -> QrsStatus {
    guard(|| {
        let p = p
            .as_mut()
            .ok_or_else(|| fail(QrsStatus::NullPointer, "params is null"))?;
        p.0.algorithm = match algorithm {
            QrsAlgorithm::Adaptive => Algorithm::Adaptive,
            QrsAlgorithm::Baseline => Algorithm::Baseline,
        };
        Ok(())
    })
}

/// Sets a numeric field by name, e.g. `"alpha_factor"` or `"m_hi"`.
///
/// Integer fields reject non-integral values. The full set is checked again
/// at detection time.
///
/// # Safety
/// `p` must be a live params handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qrs_params_set(p: *mut QrsParams, name: *const c_char, value: f64) -> QrsStatus {
    guard(|| {
        let p = &mut p
            .as_mut()
            .ok_or_else(|| fail(QrsStatus::NullPointer, "params is null"))?
            .0;
        if name.is_null() {
            return Err(fail(QrsStatus::NullPointer, "name is null"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| fail(QrsStatus::InvalidParam, "name is not UTF-8"))?;
        let int = |v: f64| -> Result<usize, QrsStatus> {
            if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as usize)
            } else {
                Err(fail(QrsStatus::InvalidParam, format!("{name} needs a non-negative integer, got {v}")))
            }
        };
        match name {
            "band_lo" => p.band_lo = value,
            "band_hi" => p.band_hi = value,
            "order" => p.order = int(value)?,
            "w1_factor" => p.w1_factor = value,
            "w2_factor" => p.w2_factor = value,
            "w3_factor" => p.w3_factor = value,
            "alpha_factor" => p.alpha_factor = value,
            "stft_half_window_s" => p.stft_half_window_s = value,
            "stft_modes_per_hz" => p.stft_modes_per_hz = value,
            "m_lo" => p.m_lo = int(value)?,
            "m_hi" => p.m_hi = int(value)?,
            "lambda" => p.lambda = value,
            other => return Err(fail(QrsStatus::InvalidParam, format!("unknown parameter {other:?}"))),
        }
        Ok(())
    })
}

/// Copies `len` samples into a new record.
///
/// # Safety
/// `samples` must point to `len` readable doubles (may be null when `len` is 0);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrs_record_from_samples(
    samples: *const f64,
    len: usize,
    fs: f64,
    out: *mut *mut QrsRecord,
) -> QrsStatus {
    guard(|| {
        let data = if len == 0 {
            Vec::new()
        } else if samples.is_null() {
            return Err(fail(QrsStatus::NullPointer, "samples is null"));
        } else {
            std::slice::from_raw_parts(samples, len).to_vec()
        };
        let rec = lift(EcgRecord::new(data, fs))?;
        put(out, QrsRecord(rec))
    })
}

/// Reads one CSV column. `fs <= 0` takes the rate from a `# fs=` header.
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrs_record_from_csv(
    path: *const c_char,
    column: usize,
    fs: f64,
    out: *mut *mut QrsRecord,
) -> QrsStatus {
    guard(|| {
        if path.is_null() {
            return Err(fail(QrsStatus::NullPointer, "path is null"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| fail(QrsStatus::InvalidParam, "path is not UTF-8"))?;
        let fs = (fs > 0.0).then_some(fs);
        let rec = lift(qrs_core::io::read_csv(path, column, fs))?;
        put(out, QrsRecord(rec))
    })
}

/// # Safety
/// `r` must be a live record handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn qrs_record_len(r: *const QrsRecord) -> usize {
    r.as_ref().map_or(0, |r| r.0.len())
}

/// # Safety
/// `r` must be a live record handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn qrs_record_fs(r: *const QrsRecord) -> f64 {
    r.as_ref().map_or(0.0, |r| r.0.fs)
}

/// # Safety
/// `r` must come from a record constructor and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qrs_record_free(r: *mut QrsRecord) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Runs the detector selected in `params` (null means defaults).
///
/// # Safety
/// `record` must be a live record, `params` a live params handle or null,
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qrs_detect(
    record: *const QrsRecord,
    params: *const QrsParams,
    out: *mut *mut QrsBeats,
) -> QrsStatus {
    guard(|| {
        let rec = &get(record, "record")?.0;
        let defaults = DetectorParams::default();
        let params = params.as_ref().map_or(&defaults, |p| &p.0);
        let beats = lift(detect::detect(rec, params))?;
        put(out, QrsBeats(beats))
    })
}

/// Wraps `len` strictly increasing indices (for annotations).
///
/// # Safety
/// `indices` must point to `len` readable values (may be null when `len` is 0);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrs_beats_from_indices(
    indices: *const usize,
    len: usize,
    fs: f64,
    out: *mut *mut QrsBeats,
) -> QrsStatus {
    guard(|| {
        let data = if len == 0 {
            Vec::new()
        } else if indices.is_null() {
            return Err(fail(QrsStatus::NullPointer, "indices is null"));
        } else {
            std::slice::from_raw_parts(indices, len).to_vec()
        };
        let beats = lift(BeatList::new(data, fs))?;
        put(out, QrsBeats(beats))
    })
}

/// # Safety
/// `b` must be a live beats handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn qrs_beats_len(b: *const QrsBeats) -> usize {
    b.as_ref().map_or(0, |b| b.0.len())
}

/// Borrowed pointer to the indices, valid while `b` lives. Null when empty.
///
/// # Safety
/// `b` must be a live beats handle or null.
#[no_mangle]
pub unsafe extern "C" fn qrs_beats_data(b: *const QrsBeats) -> *const usize {
    match b.as_ref() {
        Some(b) if !b.0.is_empty() => b.0.indices().as_ptr(),
        _ => ptr::null(),
    }
}

/// # Safety
/// `b` must come from a beats constructor and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qrs_beats_free(b: *mut QrsBeats) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Matches predictions to annotations within `grace_ms` milliseconds.
///
/// # Safety
/// `annotations` and `predictions` must be live beats handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qrs_match(
    annotations: *const QrsBeats,
    predictions: *const QrsBeats,
    grace_ms: f64,
    out: *mut QrsMatchReport,
) -> QrsStatus {
    guard(|| {
        let ann = &get(annotations, "annotations")?.0;
        let pred = &get(predictions, "predictions")?.0;
        let out = out
            .as_mut()
            .ok_or_else(|| fail(QrsStatus::NullPointer, "output pointer is null"))?;
        let r = lift(match_beats(ann, pred, grace_ms))?;
        *out = QrsMatchReport {
            tp: r.tp,
            fp: r.fp,
            fn_: r.fn_,
            se: r.se,
            ppv: r.ppv,
            f1: r.f1,
        };
        Ok(())
    })
}
