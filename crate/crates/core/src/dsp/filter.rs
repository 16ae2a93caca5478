//! Butterworth bandpass design and forward-backward (zero-phase) filtering.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// One biquad, `a0` normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Biquad {
    /// Steady-state transposed direct-form II state for a constant input of 1.
    fn unit_step_state(&self) -> [f64; 2] {
        let g = self.dc_gain();
        [g - self.b[0], self.b[2] - self.a[1] * g]
    }

    fn dc_gain(&self) -> f64 {
        (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[0] + self.a[1])
    }

    #[inline]
    fn run(&self, x: &mut [f64], mut s: [f64; 2]) {
        let [b0, b1, b2] = self.b;
        let [a1, a2] = self.a;
        for v in x.iter_mut() {
            let xi = *v;
            let y = b0 * xi + s[0];
            s[0] = b1 * xi - a1 * y + s[1];
            s[1] = b2 * xi - a2 * y;
            *v = y;
        }
    }
}

/// A digital Butterworth bandpass filter.
#[derive(Debug, Clone, PartialEq)]
pub struct BandpassDesign {
    /// Order of the analog lowpass prototype; the bandpass has twice this.
    pub order: usize,
    pub low_hz: f64,
    pub high_hz: f64,
    pub fs: f64,
    pub sections: Vec<Biquad>,
    /// Direct-form numerator, length `2 * order + 1`.
    pub b: Vec<f64>,
    /// Direct-form denominator, `a[0] == 1`.
    pub a: Vec<f64>,
    /// Digital poles (conjugate pairs adjacent).
    pub poles: Vec<Complex64>,
}

impl BandpassDesign {
    /// Samples of odd-reflection padding at each end: 3 × (coefficient count − 1).
    pub fn pad_len(&self) -> usize {
        3 * (self.b.len().max(self.a.len()) - 1)
    }

    /// Evaluates the single-pass transfer function at `hz`.
    pub fn response(&self, hz: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, 2.0 * PI * hz / self.fs);
        self.sections
            .iter()
            .map(|s| {
                let zi = z.inv();
                let num = s.b[0] + zi * (s.b[1] + zi * s.b[2]);
                let den = 1.0 + zi * (s.a[0] + zi * s.a[1]);
                num / den
            })
            .product()
    }

    /// Runs the cascade forward over `x` in place, starting from `state`
    /// scaled by the entry level `x0`.
    fn run_forward(&self, x: &mut [f64], x0: f64) {
        let mut level = x0;
        for s in &self.sections {
            let zi = s.unit_step_state();
            s.run(x, [zi[0] * level, zi[1] * level]);
            level *= s.dc_gain();
        }
    }
}

/// The toolkit's fixed bandpass: 3rd-order Butterworth, 8–20 Hz.
pub fn design_bandpass(fs: f64) -> Result<BandpassDesign> {
    if !(fs > 40.0) || !fs.is_finite() {
        return Err(Error::SamplingRate(fs));
    }
    butterworth_bandpass(3, 8.0, 20.0, fs)
}

/// Butterworth bandpass via the bilinear transform with frequency prewarping.
pub fn butterworth_bandpass(order: usize, low_hz: f64, high_hz: f64, fs: f64) -> Result<BandpassDesign> {
    if order == 0 {
        return Err(Error::InvalidParam("filter order must be positive".into()));
    }
    if !(0.0 < low_hz && low_hz < high_hz && high_hz < fs / 2.0) {
        return Err(Error::InvalidParam(format!(
            "need 0 < low ({low_hz}) < high ({high_hz}) < fs/2 ({})",
            fs / 2.0
        )));
    }
    let k2 = 2.0 * fs;
    let w_lo = k2 * (PI * low_hz / fs).tan();
    let w_hi = k2 * (PI * high_hz / fs).tan();
    let bw = w_hi - w_lo;
    let w0_sq = w_lo * w_hi;

    // Analog lowpass prototype poles on the left half of the unit circle,
    // mapped lowpass -> bandpass -> z-plane.
    let mut analog = Vec::with_capacity(2 * order);
    for k in 0..order {
        let theta = PI * (2 * k + order + 1) as f64 / (2 * order) as f64;
        let p = Complex64::from_polar(1.0, theta) * (bw / 2.0);
        let disc = (p * p - w0_sq).sqrt();
        analog.push(p + disc);
        analog.push(p - disc);
    }
    let gain_analog = bw.powi(order as i32);
    // Finite analog zeros: `order` at s = 0 -> z = 1. The remaining `order`
    // zeros at infinity map to z = -1.
    let num_k: Complex64 = Complex64::new(k2, 0.0).powi(order as i32);
    let den_k: Complex64 = analog.iter().map(|&p| k2 - p).product();
    let gain = gain_analog * (num_k / den_k).re;
    let poles: Vec<Complex64> = analog.iter().map(|&p| (k2 + p) / (k2 - p)).collect();

    let poles = pair_conjugates(poles);
    let sections: Vec<Biquad> = poles
        .chunks(2)
        .enumerate()
        .map(|(i, pair)| {
            let (p, q) = (pair[0], pair[1]);
            let a1 = -(p + q).re;
            let a2 = (p * q).re;
            // (1 - z^-1)(1 + z^-1)
            let g = if i == 0 { gain } else { 1.0 };
            Biquad {
                b: [g, 0.0, -g],
                a: [a1, a2],
            }
        })
        .collect();

    let mut b = vec![1.0];
    let mut a = vec![1.0];
    for s in &sections {
        b = poly_mul(&b, &s.b);
        a = poly_mul(&a, &[1.0, s.a[0], s.a[1]]);
    }

    Ok(BandpassDesign {
        order,
        low_hz,
        high_hz,
        fs,
        sections,
        b,
        a,
        poles,
    })
}

/// Orders poles so each consecutive pair is a conjugate pair or two reals.
fn pair_conjugates(poles: Vec<Complex64>) -> Vec<Complex64> {
    const TOL: f64 = 1e-12;
    let (mut reals, complex): (Vec<_>, Vec<_>) = poles.into_iter().partition(|p| p.im.abs() <= TOL);
    let mut upper: Vec<Complex64> = complex.into_iter().filter(|p| p.im > 0.0).collect();
    upper.sort_by(|x, y| x.re.total_cmp(&y.re));
    reals.sort_by(|x, y| x.re.total_cmp(&y.re));
    let mut out = Vec::new();
    for p in upper {
        out.push(p);
        out.push(p.conj());
    }
    out.extend(reals.into_iter().map(|p| Complex64::new(p.re, 0.0)));
    out
}

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, &pi) in p.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            out[i + j] += pi * qj;
        }
    }
    out
}

/// Zero-phase filtering: forward pass, reverse, forward pass, reverse.
///
/// Ends are extended by odd reflection about the endpoint values, and each
/// pass starts from the steady state of the padded endpoint.
pub fn filtfilt(x: &[f64], d: &BandpassDesign) -> Result<Vec<f64>> {
    let pad = d.pad_len();
    let n = x.len();
    if n <= pad {
        return Err(Error::TooShort { len: n, min: pad });
    }
    let mut buf = Vec::with_capacity(n + 2 * pad);
    let (first, last) = (x[0], x[n - 1]);
    buf.extend((1..=pad).rev().map(|k| 2.0 * first - x[k]));
    buf.extend_from_slice(x);
    buf.extend((1..=pad).map(|k| 2.0 * last - x[n - 1 - k]));

    let x0 = buf[0];
    d.run_forward(&mut buf, x0);
    buf.reverse();
    let x0 = buf[0];
    d.run_forward(&mut buf, x0);
    buf.reverse();

    buf.truncate(n + pad);
    buf.drain(..pad);
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn db(v: f64) -> f64 {
        20.0 * v.log10()
    }

    /// Independent evaluation of the direct-form polynomials on the unit circle.
    fn poly_response(d: &BandpassDesign, hz: f64) -> f64 {
        let w = 2.0 * PI * hz / d.fs;
        let eval = |c: &[f64]| -> Complex64 {
            c.iter()
                .enumerate()
                .map(|(k, &ck)| Complex64::from_polar(ck, -w * k as f64))
                .sum()
        };
        (eval(&d.b) / eval(&d.a)).norm()
    }

    #[test]
    fn cutoffs_are_minus_3db_at_200hz() {
        let d = design_bandpass(200.0).unwrap();
        for hz in [8.0, 20.0] {
            let g = db(poly_response(&d, hz));
            assert!((-3.1..=-2.9).contains(&g), "{hz} Hz: {g} dB");
        }
    }

    #[test]
    fn zeros_at_dc_and_nyquist() {
        let d = design_bandpass(200.0).unwrap();
        assert!(poly_response(&d, 0.0) < 1e-6);
        assert!(poly_response(&d, 100.0) < 1e-6);
    }

    #[test]
    fn sections_match_direct_form() {
        // At 1 kHz all six poles crowd z = 1 and the rounded direct-form
        // coefficients alone move the response by ~5e-9.
        for fs in [128.0, 200.0, 250.0, 257.0, 360.0, 500.0, 1000.0] {
            let tol = if fs > 500.0 { 1e-8 } else { 1e-9 };
            let d = design_bandpass(fs).unwrap();
            for k in 1..200 {
                let hz = k as f64 * fs / 400.0;
                let diff = (d.response(hz).norm() - poly_response(&d, hz)).abs();
                assert!(diff < tol, "fs={fs} hz={hz} diff={diff}");
            }
        }
    }

    #[test]
    fn rejects_low_fs() {
        assert!(matches!(design_bandpass(40.0), Err(Error::SamplingRate(_))));
        assert!(matches!(design_bandpass(-1.0), Err(Error::SamplingRate(_))));
    }

    #[test]
    fn six_pole_design_and_pad() {
        let d = design_bandpass(200.0).unwrap();
        assert_eq!(d.poles.len(), 6);
        assert_eq!(d.b.len(), 7);
        assert_eq!(d.a.len(), 7);
        assert_eq!(d.pad_len(), 18);
    }

    #[test]
    fn filtfilt_zero_and_short() {
        let d = design_bandpass(200.0).unwrap();
        assert_eq!(filtfilt(&[0.0; 100], &d).unwrap(), vec![0.0; 100]);
        assert!(matches!(filtfilt(&[1.0; 18], &d), Err(Error::TooShort { .. })));
        assert_eq!(filtfilt(&[1.0; 19], &d).unwrap().len(), 19);
    }
}
