use serde::Serialize;

use crate::dsp::odd_ceil;
use crate::error::{Error, Result};
use crate::hr::{window_for_rate, StftParams};

/// Which detector to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Local noise level and heart-rate adaptive threshold window.
    #[default]
    Adaptive,
    /// Fixed threshold window and a record-wide noise level.
    Baseline,
}

/// Every tunable constant of the two detectors.
///
/// Window factors are in seconds and are turned into odd sample counts with
/// [`odd_ceil`]. The STFT settings are stored as rate factors so one set of
/// parameters works at any sampling rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorParams {
    pub band_lo: f64,
    pub band_hi: f64,
    pub order: usize,
    pub w1_factor: f64,
    /// QT-scale factor: the baseline's fixed window, and the numerator of the
    /// adaptive window at 1 Hz.
    pub w2_factor: f64,
    pub w3_factor: f64,
    pub alpha_factor: f64,
    /// STFT half-window, seconds.
    pub stft_half_window_s: f64,
    /// Fourier modes per Hz of sampling rate.
    pub stft_modes_per_hz: f64,
    pub m_lo: usize,
    pub m_hi: usize,
    pub lambda: f64,
    pub algorithm: Algorithm,
}

impl Default for DetectorParams {
    fn default() -> Self {
        DetectorParams {
            band_lo: 8.0,
            band_hi: 20.0,
            order: 3,
            w1_factor: 0.097,
            w2_factor: 0.611,
            w3_factor: 5.0,
            alpha_factor: 0.08,
            stft_half_window_s: 2.5,
            stft_modes_per_hz: 2.0,
            m_lo: 3,
            m_hi: 25,
            lambda: 0.01,
            algorithm: Algorithm::Adaptive,
        }
    }
}

impl DetectorParams {
    pub fn baseline() -> Self {
        DetectorParams {
            algorithm: Algorithm::Baseline,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("band_lo", self.band_lo),
            ("band_hi", self.band_hi),
            ("w1_factor", self.w1_factor),
            ("w2_factor", self.w2_factor),
            ("w3_factor", self.w3_factor),
            ("stft_half_window_s", self.stft_half_window_s),
            ("stft_modes_per_hz", self.stft_modes_per_hz),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParam(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.alpha_factor.is_finite() && self.alpha_factor >= 0.0) {
            return Err(Error::InvalidParam(format!(
                "alpha_factor must be >= 0, got {}",
                self.alpha_factor
            )));
        }
        if self.band_lo >= self.band_hi {
            return Err(Error::InvalidParam(format!(
                "band_lo ({}) must be below band_hi ({})",
                self.band_lo, self.band_hi
            )));
        }
        if self.order == 0 {
            return Err(Error::InvalidParam("order must be positive".into()));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::InvalidParam(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if !(2 <= self.m_lo && self.m_lo <= self.m_hi) {
            return Err(Error::InvalidParam(format!(
                "need 2 <= m_lo ({}) <= m_hi ({})",
                self.m_lo, self.m_hi
            )));
        }
        Ok(())
    }

    /// Checks that these parameters can run at `fs`.
    pub fn validate_for(&self, fs: f64) -> Result<()> {
        self.validate()?;
        if !(fs.is_finite() && fs > 2.0 * self.band_hi) {
            return Err(Error::SamplingRate(fs));
        }
        self.stft(fs).validate()?;
        let w = self.windows(fs);
        if w.w1 >= w.w2_fixed {
            return Err(Error::InvalidParam(format!(
                "W1 ({}) must be smaller than W2 ({})",
                w.w1, w.w2_fixed
            )));
        }
        Ok(())
    }

    pub fn stft(&self, fs: f64) -> StftParams {
        StftParams {
            half_window: (self.stft_half_window_s * fs).floor() as usize,
            modes: (self.stft_modes_per_hz * fs).round() as usize,
            m_lo: self.m_lo,
            m_hi: self.m_hi,
            lambda: self.lambda,
        }
    }

    /// Window sizes in samples at `fs`.
    pub fn windows(&self, fs: f64) -> Windows {
        let stft = self.stft(fs);
        let lowest_hz = stft.bin_hz(stft.m_lo, fs);
        // bin 1 is DC; validate() rejects m_lo < 2
        let w2_max = window_for_rate(lowest_hz, fs, self.w2_factor).unwrap_or(1) as usize;
        Windows {
            w1: odd_ceil(self.w1_factor * fs),
            w2_fixed: odd_ceil(self.w2_factor * fs),
            w3: odd_ceil(self.w3_factor * fs),
            w2_max,
        }
    }
}

/// Odd window lengths in samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Windows {
    pub w1: usize,
    pub w2_fixed: usize,
    pub w3: usize,
    /// Largest adaptive window (at the lowest trackable rate).
    pub w2_max: usize,
}
