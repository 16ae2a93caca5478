use std::ffi::{CStr, CString};
use std::ptr;

use qrs_core::synth::{generate, SynthSpec};
use qrs_ffi::*;

fn last_error() -> String {
    let p = qrs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn record(samples: &[f64], fs: f64) -> *mut QrsRecord {
    let mut r = ptr::null_mut();
    assert_eq!(qrs_record_from_samples(samples.as_ptr(), samples.len(), fs, &mut r), QrsStatus::Ok);
    r
}

unsafe fn beats_vec(b: *const QrsBeats) -> Vec<usize> {
    let n = qrs_beats_len(b);
    if n == 0 {
        return Vec::new();
    }
    std::slice::from_raw_parts(qrs_beats_data(b), n).to_vec()
}

#[test]
fn detect_and_match_round_trip() {
    let (rec, truth) = generate(&SynthSpec::constant(200.0, 60.0, 60.0)).unwrap();
    unsafe {
        let r = record(&rec.samples, rec.fs);
        assert_eq!(qrs_record_len(r), rec.len());
        assert_eq!(qrs_record_fs(r), 200.0);

        let mut found = ptr::null_mut();
        assert_eq!(qrs_detect(r, ptr::null(), &mut found), QrsStatus::Ok);
        let rust = qrs_core::detect::detect_adaptive(&rec, &Default::default()).unwrap();
        assert_eq!(beats_vec(found), rust.indices());

        let mut ann = ptr::null_mut();
        let t = truth.indices();
        assert_eq!(qrs_beats_from_indices(t.as_ptr(), t.len(), 200.0, &mut ann), QrsStatus::Ok);
        let mut rep = QrsMatchReport::default();
        assert_eq!(qrs_match(ann, found, 150.0, &mut rep), QrsStatus::Ok);
        assert_eq!((rep.tp, rep.fp, rep.fn_), (60, 0, 0));
        assert_eq!(rep.se, 100.0);

        qrs_beats_free(found);
        qrs_beats_free(ann);
        qrs_record_free(r);
    }
}

#[test]
fn params_select_baseline_and_reject_unknown_names() {
    let (rec, _) = generate(&SynthSpec::constant(200.0, 30.0, 75.0)).unwrap();
    unsafe {
        let p = qrs_params_new();
        assert_eq!(qrs_params_set_algorithm(p, QrsAlgorithm::Baseline), QrsStatus::Ok);
        let name = CString::new("alpha_factor").unwrap();
        assert_eq!(qrs_params_set(p, name.as_ptr(), 0.1), QrsStatus::Ok);

        let r = record(&rec.samples, rec.fs);
        let mut b = ptr::null_mut();
        assert_eq!(qrs_detect(r, p, &mut b), QrsStatus::Ok);
        let want = qrs_core::detect::detect_baseline(
            &rec,
            &qrs_core::detect::DetectorParams { alpha_factor: 0.1, ..Default::default() },
        )
        .unwrap();
        assert_eq!(beats_vec(b), want.indices());

        let bad = CString::new("no_such_field").unwrap();
        assert_eq!(qrs_params_set(p, bad.as_ptr(), 1.0), QrsStatus::InvalidParam);
        assert!(last_error().contains("no_such_field"));
        let order = CString::new("order").unwrap();
        assert_eq!(qrs_params_set(p, order.as_ptr(), 2.5), QrsStatus::InvalidParam);

        qrs_beats_free(b);
        qrs_record_free(r);
        qrs_params_free(p);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(qrs_record_from_samples(ptr::null(), 5, 200.0, &mut r), QrsStatus::NullPointer);

        let short = record(&[0.0; 10], 200.0);
        let mut b = ptr::null_mut();
        assert_eq!(qrs_detect(short, ptr::null(), &mut b), QrsStatus::TooShort);
        assert!(b.is_null());
        qrs_record_free(short);

        let slow = record(&[0.0; 1000], 30.0);
        assert_eq!(qrs_detect(slow, ptr::null(), &mut b), QrsStatus::SamplingRate);
        qrs_record_free(slow);

        assert_eq!(qrs_detect(ptr::null(), ptr::null(), &mut b), QrsStatus::NullPointer);

        let path = CString::new("/definitely/not/here.csv").unwrap();
        assert_eq!(qrs_record_from_csv(path.as_ptr(), 0, 200.0, &mut r), QrsStatus::Io);
        assert!(!last_error().is_empty());

        let unsorted = [5usize, 3];
        assert_eq!(qrs_beats_from_indices(unsorted.as_ptr(), 2, 200.0, &mut b), QrsStatus::InvalidParam);

        // null handles are harmless
        qrs_record_free(ptr::null_mut());
        qrs_beats_free(ptr::null_mut());
        qrs_params_free(ptr::null_mut());
        assert_eq!(qrs_beats_len(ptr::null()), 0);
        assert!(qrs_beats_data(ptr::null()).is_null());
    }
}

#[test]
fn csv_record_uses_header_rate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    std::fs::write(&path, "# fs=250\n1\n2\n3\n").unwrap();
    let c = CString::new(path.to_str().unwrap()).unwrap();
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(qrs_record_from_csv(c.as_ptr(), 0, 0.0, &mut r), QrsStatus::Ok);
        assert_eq!(qrs_record_fs(r), 250.0);
        assert_eq!(qrs_record_len(r), 3);
        qrs_record_free(r);
    }
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(qrs_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qrs_ffi.h")).unwrap();
    for sym in [
        "qrs_last_error",
        "qrs_version",
        "qrs_params_new",
        "qrs_params_free",
        "qrs_params_set",
        "qrs_params_set_algorithm",
        "qrs_record_from_samples",
        "qrs_record_from_csv",
        "qrs_record_len",
        "qrs_record_fs",
        "qrs_record_free",
        "qrs_detect",
        "qrs_beats_from_indices",
        "qrs_beats_len",
        "qrs_beats_data",
        "qrs_beats_free",
        "qrs_match",
        "QRS_STATUS_TOO_SHORT",
        "typedef struct QrsRecord QrsRecord",
    ] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
}
