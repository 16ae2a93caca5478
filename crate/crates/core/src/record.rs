//! Core data carried between the readers, detectors, and evaluator.

use crate::error::{Error, Result};

/// A single-channel ECG recording in physical units.
#[derive(Debug, Clone, PartialEq)]
pub struct EcgRecord {
    pub samples: Vec<f64>,
    /// Sampling rate in Hz.
    pub fs: f64,
    pub source_label: String,
    pub lead_index: usize,
}

impl EcgRecord {
    pub fn new(samples: Vec<f64>, fs: f64) -> Result<Self> {
        if !(fs.is_finite() && fs > 0.0) {
            return Err(Error::InvalidParam(format!("sampling rate must be positive, got {fs}")));
        }
        Ok(EcgRecord {
            samples,
            fs,
            source_label: String::new(),
            lead_index: 0,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.source_label = label.into();
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Duration in seconds, `n / fs`.
    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.fs
    }

    /// Returns a copy with every sample multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        EcgRecord {
            samples: self.samples.iter().map(|&v| v * c).collect(),
            ..self.clone()
        }
    }
}

/// Strictly increasing 0-based sample indices of QRS complexes.
#[derive(Debug, Clone, PartialEq)]
pub struct BeatList {
    indices: Vec<usize>,
    pub fs: f64,
}

impl BeatList {
    /// Builds a list, rejecting anything that is not strictly increasing.
    pub fn new(indices: Vec<usize>, fs: f64) -> Result<Self> {
        if let Some(w) = indices.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParam(format!(
                "beat indices must be strictly increasing (position {}: {} then {})",
                w + 1,
                indices[w],
                indices[w + 1]
            )));
        }
        Ok(BeatList { indices, fs })
    }

    pub fn empty(fs: f64) -> Self {
        BeatList {
            indices: Vec::new(),
            fs,
        }
    }

    pub(crate) fn from_sorted_unchecked(indices: Vec<usize>, fs: f64) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        BeatList { indices, fs }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn into_indices(self) -> Vec<usize> {
        self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Beat times in seconds.
    pub fn times_s(&self) -> impl Iterator<Item = f64> + '_ {
        self.indices.iter().map(move |&i| i as f64 / self.fs)
    }
}
