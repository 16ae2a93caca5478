//! Heart-rate tracking from the short-time Fourier transform of `v1`.
//!
//! One Hann-windowed column is computed per second, restricted to the bins
//! covering roughly 0.5–6 Hz. A penalized ridge through those bins gives the
//! dominant rate, which is spread to every sample by nearest-neighbour
//! interpolation and turned into an odd averaging window whose length
//! follows the Bazett relation between heart rate and QT interval.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dsp::odd_ceil;
use crate::error::{Error, Result};

/// STFT submatrix and ridge settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StftParams {
    /// Half-width of the Hann window in samples (window has `2K + 1` taps).
    pub half_window: usize,
    /// Number of Fourier modes; bin `m` sits at `(m - 1) * fs / (2 * modes)` Hz.
    pub modes: usize,
    pub m_lo: usize,
    pub m_hi: usize,
    /// Penalty on squared bin jumps between consecutive seconds.
    pub lambda: f64,
}

impl StftParams {
    /// `K = floor(2.5 fs)`, `M = round(2 fs)`, bins 3..=25, `lambda = 0.01`.
    pub fn for_fs(fs: f64) -> Self {
        StftParams {
            half_window: (2.5 * fs).floor() as usize,
            modes: (2.0 * fs).round() as usize,
            m_lo: 3,
            m_hi: 25,
            lambda: 0.01,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParam(m));
        if self.half_window < 1 {
            return bad("STFT half-window must be >= 1".into());
        }
        if !(1 <= self.m_lo && self.m_lo <= self.m_hi) {
            return bad(format!("need 1 <= m_lo ({}) <= m_hi ({})", self.m_lo, self.m_hi));
        }
        if self.modes < self.m_hi {
            return bad(format!("modes ({}) must be >= m_hi ({})", self.modes, self.m_hi));
        }
        if !(self.lambda >= 0.0) {
            return bad(format!("lambda must be >= 0, got {}", self.lambda));
        }
        Ok(())
    }

    pub fn bins(&self) -> usize {
        self.m_hi - self.m_lo + 1
    }

    /// Frequency in Hz of bin `m`.
    pub fn bin_hz(&self, m: usize, fs: f64) -> f64 {
        (m as f64 - 1.0) * fs / (2.0 * self.modes as f64)
    }
}

/// Hann window of `2K + 1` taps: zero at both ends, one at the centre.
pub fn hann_window(k: usize) -> Result<Vec<f64>> {
    if k < 1 {
        return Err(Error::InvalidParam("Hann half-width must be >= 1".into()));
    }
    Ok((0..=2 * k)
        .map(|i| 0.5 * (1.0 - (PI * i as f64 / k as f64).cos()))
        .collect())
}

/// Row-major `columns x bins` complex matrix; row `t` is second `t + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StftMatrix {
    pub columns: usize,
    pub m_lo: usize,
    pub m_hi: usize,
    pub data: Vec<Complex64>,
}

impl StftMatrix {
    pub fn bins(&self) -> usize {
        self.m_hi - self.m_lo + 1
    }

    pub fn row(&self, t: usize) -> &[Complex64] {
        let b = self.bins();
        &self.data[t * b..(t + 1) * b]
    }
}

/// 0-based index of the sample at `t * fs` (1-based) for second `t >= 1`.
fn second_center(t: usize, fs: f64) -> i64 {
    (t as f64 * fs).round() as i64 - 1
}

/// Number of one-second columns, `ceil(n / fs)`.
pub fn column_count(n: usize, fs: f64) -> usize {
    ((n as f64 / fs).ceil() as usize).max(1)
}

/// Computes the Hann-windowed, mean-removed transform of `v1` at one column
/// per second for bins `m_lo..=m_hi` only.
///
/// Samples outside the record count as zero, and each window mean divides by
/// the full `2K + 1` taps.
pub fn stft_submatrix(v1: &[f64], fs: f64, params: &StftParams) -> Result<StftMatrix> {
    params.validate()?;
    if v1.is_empty() {
        return Err(Error::InvalidParam("empty signal".into()));
    }
    let k = params.half_window;
    let taps = 2 * k + 1;
    let hann = hann_window(k)?;
    let bins = params.bins();
    let two_m = 2.0 * params.modes as f64;

    // kernel[b] holds h(j) * exp(-2 pi i j (m - 1) / 2M) split into re/im.
    let kernels: Vec<(Vec<f64>, Vec<f64>)> = (params.m_lo..=params.m_hi)
        .map(|m| {
            let step = -2.0 * PI / two_m;
            hann.iter()
                .enumerate()
                .map(|(j, &h)| {
                    // reduce the phase index mod 2M before scaling for accuracy
                    let ph = step * ((j * (m - 1)) % (2 * params.modes)) as f64;
                    (h * ph.cos(), h * ph.sin())
                })
                .unzip()
        })
        .collect();

    let n = v1.len() as i64;
    let columns = column_count(v1.len(), fs);
    let mut data = vec![Complex64::new(0.0, 0.0); columns * bins];

    data.par_chunks_mut(bins)
        .enumerate()
        .for_each_init(
            || vec![0.0; taps],
            |seg, (t, row)| {
                let start = second_center(t + 1, fs) - k as i64;
                let mut sum = 0.0;
                for (j, s) in seg.iter_mut().enumerate() {
                    let l = start + j as i64;
                    *s = if (0..n).contains(&l) { v1[l as usize] } else { 0.0 };
                    sum += *s;
                }
                let mean = sum / taps as f64;
                for s in seg.iter_mut() {
                    *s -= mean;
                }
                for (out, (kr, ki)) in row.iter_mut().zip(&kernels) {
                    let mut re = 0.0;
                    let mut im = 0.0;
                    for ((&s, &a), &b) in seg.iter().zip(kr).zip(ki) {
                        re += s * a;
                        im += s * b;
                    }
                    *out = Complex64::new(re, im);
                }
            },
        );

    Ok(StftMatrix {
        columns,
        m_lo: params.m_lo,
        m_hi: params.m_hi,
        data,
    })
}

/// Index of the first maximum.
fn argmax_first(scores: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in scores.enumerate() {
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

/// Penalized ridge through the power of `g`, one bin number `m` per row.
///
/// The first row takes the raw power maximum. Later rows maximize the
/// row-normalized power minus `lambda * (m - previous)^2`. Rows with zero
/// power contribute only the penalty. Ties go to the smallest `m`.
pub fn extract_ridge(g: &StftMatrix, lambda: f64) -> Vec<usize> {
    let bins = g.bins();
    let mut p = Vec::with_capacity(g.columns);
    let mut power = vec![0.0; bins];
    for t in 0..g.columns {
        for (pw, c) in power.iter_mut().zip(g.row(t)) {
            *pw = c.norm_sqr();
        }
        let idx = if t == 0 {
            argmax_first(power.iter().copied())
        } else {
            let prev = (p[t - 1] - g.m_lo) as f64;
            let total: f64 = power.iter().sum();
            argmax_first(power.iter().enumerate().map(|(i, &pw)| {
                let norm = if total > 0.0 { pw / total } else { 0.0 };
                let d = i as f64 - prev;
                norm - lambda * d * d
            }))
        };
        p.push(idx + g.m_lo);
    }
    p
}

/// 0-based anchor sample of each ridge column, capped to the record.
fn anchors(columns: usize, fs: f64, n: usize) -> Vec<usize> {
    (1..=columns)
        .map(|t| second_center(t, fs).clamp(0, n as i64 - 1) as usize)
        .collect()
}

/// Fills `out` by nearest-neighbour interpolation of `values` placed at
/// `anchors`; exact midpoints take the earlier anchor.
fn nearest_fill<T: Copy>(anchors: &[usize], values: &[T], out: &mut [T]) {
    let n = out.len();
    let mut start = 0;
    for t in 0..anchors.len() {
        let end = match anchors.get(t + 1) {
            Some(&next) => ((anchors[t] + next) / 2 + 1).min(n),
            None => n,
        };
        if end > start {
            out[start..end].fill(values[t]);
            start = end;
        }
    }
}

/// Per-sample heart rate in Hz from ridge bins `p`.
pub fn hr_signal(p: &[usize], fs: f64, modes: usize, n: usize) -> Vec<f64> {
    if p.is_empty() || n == 0 {
        return vec![0.0; n];
    }
    let hz: Vec<f64> = p
        .iter()
        .map(|&m| (m as f64 - 1.0) * fs / (2.0 * modes as f64))
        .collect();
    let mut out = vec![0.0; n];
    nearest_fill(&anchors(p.len(), fs, n), &hz, &mut out);
    out
}

/// Odd window length for one heart-rate value: `ceil(factor * fs / sqrt(hz))`,
/// bumped to the next odd integer.
pub fn window_for_rate(hz: f64, fs: f64, factor: f64) -> Result<u32> {
    if !(hz > 0.0) {
        return Err(Error::InvalidParam(format!("heart rate must be positive, got {hz}")));
    }
    Ok(odd_ceil(factor * fs / hz.sqrt()) as u32)
}

/// Per-sample adaptive window from per-sample heart rate (Hz).
pub fn adaptive_window(f: &[f64], fs: f64) -> Result<Vec<u32>> {
    adaptive_window_with_factor(f, fs, 0.611)
}

pub fn adaptive_window_with_factor(f: &[f64], fs: f64, factor: f64) -> Result<Vec<u32>> {
    f.iter().map(|&hz| window_for_rate(hz, fs, factor)).collect()
}

/// Ridge output plus everything needed to expand it per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct HrTrack {
    pub p: Vec<usize>,
    pub fs: f64,
    pub modes: usize,
    pub n: usize,
}

impl HrTrack {
    /// Per-sample heart rate in Hz.
    pub fn hr_hz(&self) -> Vec<f64> {
        hr_signal(&self.p, self.fs, self.modes, self.n)
    }

    /// Per-second anchors as `(t_seconds, hz)`.
    pub fn anchors(&self) -> Vec<(f64, f64)> {
        self.p
            .iter()
            .enumerate()
            .map(|(t, &m)| {
                let hz = (m as f64 - 1.0) * self.fs / (2.0 * self.modes as f64);
                ((t + 1) as f64, hz)
            })
            .collect()
    }

    /// Per-sample odd windows; equivalent to `adaptive_window(hr_hz())` but
    /// computed once per ridge column.
    pub fn window(&self, factor: f64) -> Result<Vec<u32>> {
        let mut out = vec![1u32; self.n];
        if self.p.is_empty() || self.n == 0 {
            return Ok(out);
        }
        let per_col: Vec<u32> = self
            .anchors()
            .iter()
            .map(|&(_, hz)| window_for_rate(hz, self.fs, factor))
            .collect::<Result<_>>()?;
        nearest_fill(&anchors(self.p.len(), self.fs, self.n), &per_col, &mut out);
        Ok(out)
    }
}

/// Runs the STFT and ridge extraction on `v1`.
pub fn track(v1: &[f64], fs: f64, params: &StftParams) -> Result<HrTrack> {
    let g = stft_submatrix(v1, fs, params)?;
    Ok(HrTrack {
        p: extract_ridge(&g, params.lambda),
        fs,
        modes: params.modes,
        n: v1.len(),
    })
}
