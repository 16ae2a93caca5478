//! Synthetic ECG-like signals with exact beat positions.
//!
//! Each beat is a raised-cosine QRS pulse, optionally followed by a wider,
//! lower T-wave pulse. Beats are placed where the cumulative beat phase
//! `integral(hr / 60)` crosses `k + 0.5`, so the beat count equals the
//! integral of the rate schedule.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{BeatList, EcgRecord};

/// Raised-cosine pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub width_ms: f64,
    pub amplitude: f64,
}

impl Default for Pulse {
    fn default() -> Self {
        Pulse {
            width_ms: 80.0,
            amplitude: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TWave {
    pub width_ms: f64,
    /// Amplitude relative to the QRS pulse.
    pub ratio: f64,
    /// Delay after the QRS centre at 60 bpm; scaled by `sqrt(RR / 1 s)`.
    pub delay_ms: f64,
}

impl Default for TWave {
    fn default() -> Self {
        TWave {
            width_ms: 200.0,
            ratio: 0.4,
            delay_ms: 250.0,
        }
    }
}

/// Gain applied to `[start_s, end_s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainSegment {
    pub start_s: f64,
    pub end_s: f64,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub fs: f64,
    pub duration_s: f64,
    /// Piecewise-constant rate as `(segment seconds, bpm)`; the last segment
    /// extends to the end of the record.
    pub hr_schedule: Vec<(f64, f64)>,
    pub qrs: Pulse,
    pub t_wave: Option<TWave>,
    pub noise_rms: f64,
    pub amplitude_profile: Vec<GainSegment>,
    pub seed: u64,
}

impl SynthSpec {
    /// Constant-rate, noiseless, QRS-only record.
    pub fn constant(fs: f64, duration_s: f64, bpm: f64) -> Self {
        SynthSpec {
            fs,
            duration_s,
            hr_schedule: vec![(duration_s, bpm)],
            qrs: Pulse::default(),
            t_wave: None,
            noise_rms: 0.0,
            amplitude_profile: Vec::new(),
            seed: 0,
        }
    }

    pub fn with_t_wave(mut self, t: TWave) -> Self {
        self.t_wave = Some(t);
        self
    }

    pub fn with_noise(mut self, rms: f64, seed: u64) -> Self {
        self.noise_rms = rms;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParam(m));
        if !(self.fs > 40.0 && self.fs.is_finite()) {
            return bad(format!("fs must exceed 40 Hz, got {}", self.fs));
        }
        if !(self.duration_s > 0.0 && self.duration_s.is_finite()) {
            return bad(format!("duration must be positive, got {}", self.duration_s));
        }
        if self.hr_schedule.is_empty() {
            return bad("heart-rate schedule is empty".into());
        }
        for &(len, bpm) in &self.hr_schedule {
            if !(len > 0.0) {
                return bad(format!("schedule segment length must be positive, got {len}"));
            }
            if !(30.0..=360.0).contains(&bpm) {
                return bad(format!("heart rate {bpm} bpm outside 30..=360"));
            }
        }
        if !(self.qrs.width_ms > 0.0) {
            return bad("QRS width must be positive".into());
        }
        if let Some(t) = &self.t_wave {
            if !(t.width_ms > 0.0 && t.delay_ms >= 0.0 && t.ratio.is_finite()) {
                return bad("T-wave needs positive width and non-negative delay".into());
            }
        }
        if !(self.noise_rms >= 0.0) {
            return bad(format!("noise level must be >= 0, got {}", self.noise_rms));
        }
        Ok(())
    }

    /// Heart rate in bpm at time `t`.
    pub fn bpm_at(&self, t: f64) -> f64 {
        let mut edge = 0.0;
        for &(len, bpm) in &self.hr_schedule {
            edge += len;
            if t < edge {
                return bpm;
            }
        }
        self.hr_schedule.last().map_or(60.0, |s| s.1)
    }

    /// Beat times in seconds.
    pub fn beat_times(&self) -> Vec<f64> {
        let mut times = Vec::new();
        let mut seg_start = 0.0;
        let mut phase_start = 0.0;
        let n_seg = self.hr_schedule.len();
        for (k, &(len, bpm)) in self.hr_schedule.iter().enumerate() {
            let seg_end = if k + 1 == n_seg {
                self.duration_s
            } else {
                (seg_start + len).min(self.duration_s)
            };
            let rate = bpm / 60.0;
            let phase_end = phase_start + (seg_end - seg_start) * rate;
            // beats at phase k + 0.5 inside [phase_start, phase_end)
            let mut beat = (phase_start - 0.5).ceil().max(0.0) + 0.5;
            while beat < phase_end {
                times.push(seg_start + (beat - phase_start) / rate);
                beat += 1.0;
            }
            seg_start = seg_end;
            phase_start = phase_end;
            if seg_start >= self.duration_s {
                break;
            }
        }
        times
    }
}

fn add_pulse(x: &mut [f64], fs: f64, center: f64, width_s: f64, amp: f64) {
    let half = width_s / 2.0;
    let lo = ((center - half) * fs).ceil().max(0.0) as usize;
    let hi = (((center + half) * fs).floor() as usize).min(x.len().saturating_sub(1));
    for (i, v) in x.iter_mut().enumerate().take(hi + 1).skip(lo) {
        let dt = i as f64 / fs - center;
        if dt.abs() < half {
            *v += amp * 0.5 * (1.0 + (std::f64::consts::PI * dt / half).cos());
        }
    }
}

/// Generates the signal and its ground-truth beat indices.
pub fn generate(spec: &SynthSpec) -> Result<(EcgRecord, BeatList)> {
    spec.validate()?;
    let fs = spec.fs;
    let n = (spec.duration_s * fs).floor() as usize;
    let mut x = vec![0.0; n];
    let mut truth = Vec::new();

    for t in spec.beat_times() {
        let idx = (t * fs).round() as usize;
        if idx >= n {
            continue;
        }
        let center = idx as f64 / fs;
        add_pulse(&mut x, fs, center, spec.qrs.width_ms / 1000.0, spec.qrs.amplitude);
        if let Some(tw) = &spec.t_wave {
            let rr = 60.0 / spec.bpm_at(t);
            let delay = tw.delay_ms / 1000.0 * rr.sqrt();
            add_pulse(
                &mut x,
                fs,
                center + delay,
                tw.width_ms / 1000.0,
                tw.ratio * spec.qrs.amplitude,
            );
        }
        if truth.last() != Some(&idx) {
            truth.push(idx);
        }
    }

    if spec.noise_rms > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let normal = Normal::new(0.0, spec.noise_rms)
            .map_err(|e| Error::InvalidParam(format!("noise: {e}")))?;
        for v in &mut x {
            *v += normal.sample(&mut rng);
        }
    }

    let mut rec = EcgRecord::new(x, fs)?.with_label("synthetic");
    for seg in &spec.amplitude_profile {
        rec = amplitude_step(&rec, (seg.start_s, seg.end_s), seg.gain)?;
    }
    Ok((rec, BeatList::from_sorted_unchecked(truth, fs)))
}

/// Multiplies the samples in `[start_s, end_s)` by `gain`.
pub fn amplitude_step(rec: &EcgRecord, segment: (f64, f64), gain: f64) -> Result<EcgRecord> {
    let (start_s, end_s) = segment;
    let dur = rec.duration_s();
    if !(0.0 <= start_s && start_s <= end_s && end_s <= dur) {
        return Err(Error::InvalidParam(format!(
            "segment [{start_s}, {end_s}) outside record of {dur} s"
        )));
    }
    let lo = (start_s * rec.fs).round() as usize;
    let hi = ((end_s * rec.fs).round() as usize).min(rec.len());
    let mut out = rec.clone();
    for v in &mut out.samples[lo..hi] {
        *v *= gain;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_rate_count() {
        let (rec, truth) = generate(&SynthSpec::constant(200.0, 120.0, 60.0)).unwrap();
        assert_eq!(rec.len(), 24_000);
        assert_eq!(truth.len(), 120);
        assert!(truth.indices().windows(2).all(|w| w[1] - w[0] == 200));
    }

    #[test]
    fn schedule_count() {
        let spec = SynthSpec {
            hr_schedule: vec![(60.0, 60.0), (60.0, 180.0)],
            ..SynthSpec::constant(200.0, 120.0, 60.0)
        };
        let (_, truth) = generate(&spec).unwrap();
        assert_eq!(truth.len(), 240);
    }

    #[test]
    fn seeded_noise_is_deterministic() {
        let spec = SynthSpec::constant(250.0, 10.0, 75.0).with_noise(0.05, 42);
        let (a, _) = generate(&spec).unwrap();
        let (b, _) = generate(&spec).unwrap();
        assert_eq!(a, b);
        let (c, _) = generate(&SynthSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn pulse_peaks_at_truth() {
        let (rec, truth) = generate(&SynthSpec::constant(200.0, 5.0, 60.0)).unwrap();
        for &i in truth.indices() {
            assert_eq!(rec.samples[i], 1.0);
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(generate(&SynthSpec::constant(40.0, 10.0, 60.0)).is_err());
        assert!(generate(&SynthSpec::constant(200.0, 0.0, 60.0)).is_err());
        assert!(generate(&SynthSpec::constant(200.0, 10.0, 400.0)).is_err());
        assert!(generate(&SynthSpec::constant(200.0, 10.0, 20.0)).is_err());
    }

    #[test]
    fn amplitude_step_cases() {
        let (rec, _) = generate(&SynthSpec::constant(200.0, 30.0, 60.0).with_noise(0.1, 1)).unwrap();
        assert_eq!(amplitude_step(&rec, (10.0, 20.0), 1.0).unwrap(), rec);

        let big = amplitude_step(&rec, (10.0, 20.0), 100.0).unwrap();
        for i in (0..2000).chain(4000..rec.len()) {
            assert_eq!(big.samples[i].to_bits(), rec.samples[i].to_bits());
        }
        assert_eq!(big.samples[3000], rec.samples[3000] * 100.0);

        let silent = amplitude_step(&rec, (10.0, 20.0), 0.0).unwrap();
        assert!(silent.samples[2000..4000].iter().all(|&v| v == 0.0));

        assert!(amplitude_step(&rec, (20.0, 31.0), 2.0).is_err());
        assert!(amplitude_step(&rec, (20.0, 10.0), 2.0).is_err());
    }
}
