//! QRS detectors.
//!
//! Both detectors share a front end: bandpass, square, and a short moving
//! average `v1` that follows QRS energy. A longer average `v2` plus a noise
//! offset `alpha` forms the threshold, and a QRS complex is declared at the
//! `v1` maximum of every long-enough stretch where `v1` exceeds it.
//!
//! The adaptive detector sizes the `v2` window per sample from the tracked
//! heart rate and takes `alpha` from a 5 s local mean of the squared signal.
//! The baseline detector uses one fixed `v2` window and a record-wide `alpha`.

mod chunked;
mod params;

pub use chunked::{detect_chunked, min_overlap_s, ChunkConfig};
pub use params::{Algorithm, DetectorParams, Windows};

use crate::dsp::{butterworth_bandpass, filtfilt, moving_count, moving_mean, variable_moving_mean};
use crate::error::{Error, Result};
use crate::hr;
use crate::record::{BeatList, EcgRecord};

/// Inputs with magnitude above this overflow when squared.
const MAX_ABS_SAMPLE: f64 = 1e150;

/// One detected block: a maximal stretch `[start, end]` and its `v1` peak.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    pub peak: usize,
}

/// Intermediate signals of one detector run.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockEvidence {
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
    /// Per-sample noise offset (constant for the baseline detector).
    pub alpha: Vec<f64>,
    /// Per-sample `v1 > v2 + alpha`.
    pub above: Vec<bool>,
    /// Centered count of `above` over `w1` samples.
    pub v3: Vec<u32>,
    /// Per-sample `v2` window (constant for the baseline detector).
    pub w2: Vec<u32>,
    pub w1: usize,
    pub blocks: Vec<Block>,
}

/// Detector output with optional evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub beats: BeatList,
    pub evidence: Option<BlockEvidence>,
}

fn check_samples(x: &[f64]) -> Result<()> {
    if let Some(i) = x.iter().position(|v| !(v.abs() <= MAX_ABS_SAMPLE)) {
        return Err(Error::InvalidParam(format!(
            "sample {i} is not a finite value below {MAX_ABS_SAMPLE:e}: {}",
            x[i]
        )));
    }
    Ok(())
}

/// Squared bandpassed signal `z`.
fn energy(rec: &EcgRecord, params: &DetectorParams) -> Result<Vec<f64>> {
    params.validate_for(rec.fs)?;
    if rec.is_empty() {
        return Err(Error::TooShort { len: 0, min: 1 });
    }
    check_samples(&rec.samples)?;
    let design = butterworth_bandpass(params.order, params.band_lo, params.band_hi, rec.fs)?;
    let mut z = filtfilt(&rec.samples, &design)?;
    for v in &mut z {
        *v *= *v;
    }
    Ok(z)
}

/// The short-window QRS energy average `v1` that both detectors threshold
/// and the heart-rate tracker analyses.
pub fn energy_envelope(rec: &EcgRecord, params: &DetectorParams) -> Result<Vec<f64>> {
    let z = energy(rec, params)?;
    moving_mean(&z, params.windows(rec.fs).w1)
}

/// Position of the first maximum of `v[range]`.
fn peak_in(v: &[f64], start: usize, end: usize) -> usize {
    let mut best = start;
    for i in start + 1..=end {
        if v[i] > v[best] {
            best = i;
        }
    }
    best
}

/// Maximal runs of `pred` as inclusive `(start, end)` pairs.
fn runs(n: usize, pred: impl Fn(usize) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        if pred(i) {
            let s = i;
            while i + 1 < n && pred(i + 1) {
                i += 1;
            }
            out.push((s, i));
        }
        i += 1;
    }
    out
}

fn finish(
    fs: f64,
    blocks: Vec<Block>,
    keep: bool,
    signals: impl FnOnce() -> BlockEvidence,
) -> Detection {
    let beats = BeatList::from_sorted_unchecked(blocks.iter().map(|b| b.peak).collect(), fs);
    let evidence = keep.then(|| BlockEvidence {
        blocks,
        ..signals()
    });
    Detection { beats, evidence }
}

/// Runs the adaptive detector.
pub fn detect_adaptive(rec: &EcgRecord, params: &DetectorParams) -> Result<BeatList> {
    run_adaptive(rec, params, false).map(|d| d.beats)
}

/// Runs the baseline (fixed-window, global-noise) detector.
pub fn detect_baseline(rec: &EcgRecord, params: &DetectorParams) -> Result<BeatList> {
    run_baseline(rec, params, false).map(|d| d.beats)
}

/// Runs the detector selected by `params.algorithm`.
pub fn detect(rec: &EcgRecord, params: &DetectorParams) -> Result<BeatList> {
    detect_with(rec, params, false).map(|d| d.beats)
}

/// Runs the selected detector, keeping the intermediate signals when
/// `keep_evidence` is set.
pub fn detect_with(rec: &EcgRecord, params: &DetectorParams, keep_evidence: bool) -> Result<Detection> {
    match params.algorithm {
        Algorithm::Adaptive => run_adaptive(rec, params, keep_evidence),
        Algorithm::Baseline => run_baseline(rec, params, keep_evidence),
    }
}

fn run_adaptive(rec: &EcgRecord, params: &DetectorParams, keep: bool) -> Result<Detection> {
    let fs = rec.fs;
    let win = params.windows(fs);
    let z = energy(rec, params)?;
    let v1 = moving_mean(&z, win.w1)?;
    let mut alpha = moving_mean(&z, win.w3)?;
    for a in &mut alpha {
        *a *= params.alpha_factor;
    }
    let track = hr::track(&v1, fs, &params.stft(fs))?;
    let w2 = track.window(params.w2_factor)?;
    let v2 = variable_moving_mean(&z, &w2)?;
    drop(z);

    let above: Vec<bool> = (0..v1.len()).map(|i| v1[i] > v2[i] + alpha[i]).collect();
    let v3 = moving_count(&above, win.w1)?;
    let full = win.w1 as u32;
    let blocks: Vec<Block> = runs(v1.len(), |i| v3[i] == full)
        .into_iter()
        .map(|(start, end)| Block {
            start,
            end,
            peak: peak_in(&v1, start, end),
        })
        .collect();

    Ok(finish(fs, blocks, keep, || BlockEvidence {
        v1,
        v2,
        alpha,
        above,
        v3,
        w2,
        w1: win.w1,
        blocks: Vec::new(),
    }))
}

fn run_baseline(rec: &EcgRecord, params: &DetectorParams, keep: bool) -> Result<Detection> {
    let fs = rec.fs;
    let win = params.windows(fs);
    let z = energy(rec, params)?;
    let v1 = moving_mean(&z, win.w1)?;
    let v2 = moving_mean(&z, win.w2_fixed)?;
    let alpha = params.alpha_factor * z.iter().sum::<f64>() / z.len() as f64;
    drop(z);

    let n = v1.len();
    let above: Vec<bool> = (0..n).map(|i| v1[i] > v2[i] + alpha).collect();
    let blocks: Vec<Block> = runs(n, |i| above[i])
        .into_iter()
        .filter(|&(s, e)| e - s + 1 >= win.w1)
        .map(|(start, end)| Block {
            start,
            end,
            peak: peak_in(&v1, start, end),
        })
        .collect();

    Ok(finish(fs, blocks, keep, || BlockEvidence {
        v3: moving_count(&above, win.w1).unwrap_or_default(),
        alpha: vec![alpha; n],
        w2: vec![win.w2_fixed as u32; n],
        v1,
        v2,
        above,
        w1: win.w1,
        blocks: Vec::new(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_basic() {
        let v = [false, true, true, false, true, false, false, true];
        assert_eq!(runs(v.len(), |i| v[i]), vec![(1, 2), (4, 4), (7, 7)]);
        assert!(runs(0, |_| true).is_empty());
        assert_eq!(runs(3, |_| true), vec![(0, 2)]);
    }

    #[test]
    fn peak_ties_take_first() {
        let v = [0.0, 3.0, 1.0, 3.0];
        assert_eq!(peak_in(&v, 0, 3), 1);
        assert_eq!(peak_in(&v, 2, 2), 2);
    }

    #[test]
    fn zero_record_has_no_beats() {
        let rec = EcgRecord::new(vec![0.0; 12_000], 200.0).unwrap();
        assert!(detect_adaptive(&rec, &DetectorParams::default()).unwrap().is_empty());
        assert!(detect_baseline(&rec, &DetectorParams::default()).unwrap().is_empty());
    }

    #[test]
    fn preconditions() {
        let p = DetectorParams::default();
        let short = EcgRecord::new(vec![0.0; 10], 200.0).unwrap();
        assert!(matches!(detect_adaptive(&short, &p), Err(Error::TooShort { .. })));
        let slow = EcgRecord::new(vec![0.0; 1000], 40.0).unwrap();
        assert!(matches!(detect_adaptive(&slow, &p), Err(Error::SamplingRate(_))));
        let mut bad = vec![0.0; 1000];
        bad[3] = f64::NAN;
        let bad = EcgRecord::new(bad, 200.0).unwrap();
        assert!(matches!(detect_baseline(&bad, &p), Err(Error::InvalidParam(_))));
        let mut huge = vec![0.0; 1000];
        huge[3] = 1e200;
        let huge = EcgRecord::new(huge, 200.0).unwrap();
        assert!(detect_adaptive(&huge, &p).is_err());
    }
}
