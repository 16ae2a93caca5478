//! Adaptive QRS detection for single-lead ECG.
//!
//! The crate provides two detectors built on the same moving-average
//! threshold scheme: an adaptive one whose threshold window follows the
//! tracked heart rate and whose noise level is estimated locally, and the
//! fixed-window baseline it was derived from. Around them sit file readers,
//! a beat-matching evaluator, a synthetic signal generator with exact ground
//! truth, and a chunked driver for multi-day recordings.
//!
//! ```
//! use qrs_core::{detect::{detect_adaptive, DetectorParams}, synth::{generate, SynthSpec}};
//!
//! let (rec, truth) = generate(&SynthSpec::constant(200.0, 30.0, 72.0)).unwrap();
//! let beats = detect_adaptive(&rec, &DetectorParams::default()).unwrap();
//! assert!(beats.len().abs_diff(truth.len()) <= 1);
//! ```

pub mod cli;
pub mod detect;
pub mod dsp;
pub mod error;
pub mod eval;
pub mod hr;
pub mod io;
pub mod record;
pub mod synth;

pub use error::{Error, Result};
pub use record::{BeatList, EcgRecord};
