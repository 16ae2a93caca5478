//! STFT submatrix against a direct DFT, and ridge tracking on signals with
//! a known dominant rate.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qrs_core::detect::{energy_envelope, DetectorParams};
use qrs_core::hr::{extract_ridge, stft_submatrix, track, StftMatrix, StftParams};
use qrs_core::synth::{generate, SynthSpec};

/// Column for second `t` (1-based): window centred on the 0-based sample
/// `round(t * fs) - 1`, zero outside the record, mean over all taps removed.
fn dft_column(v: &[f64], fs: f64, p: &StftParams, t: usize) -> Vec<Complex64> {
    let k = p.half_window as i64;
    let c = (t as f64 * fs).round() as i64 - 1;
    let seg: Vec<f64> = (-k..=k)
        .map(|d| {
            let l = c + d;
            if l >= 0 && (l as usize) < v.len() { v[l as usize] } else { 0.0 }
        })
        .collect();
    let mean = seg.iter().sum::<f64>() / seg.len() as f64;
    (p.m_lo..=p.m_hi)
        .map(|m| {
            seg.iter()
                .enumerate()
                .map(|(j, &s)| {
                    let h = 0.5 - 0.5 * (2.0 * PI * j as f64 / (2 * k) as f64).cos();
                    let ph = -2.0 * PI * j as f64 * (m - 1) as f64 / (2 * p.modes) as f64;
                    Complex64::from_polar(h * (s - mean), ph)
                })
                .sum()
        })
        .collect()
}

fn small_params() -> StftParams {
    StftParams { half_window: 12, modes: 20, m_lo: 2, m_hi: 9, lambda: 0.01 }
}

#[test]
fn submatrix_matches_direct_dft_at_200hz() {
    let fs = 200.0;
    let p = StftParams::for_fs(fs);
    let v: Vec<f64> = (0..2345).map(|i| ((i * 37 % 101) as f64 / 50.0 - 1.0).powi(2)).collect();
    let g = stft_submatrix(&v, fs, &p).unwrap();
    assert_eq!(g.columns, 12);
    for t in 0..g.columns {
        let want = dft_column(&v, fs, &p, t + 1);
        for (a, b) in g.row(t).iter().zip(&want) {
            assert!((a - b).norm() < 1e-8 * (1.0 + b.norm()), "t={t}: {a} vs {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn submatrix_matches_direct_dft(
        v in prop::collection::vec(0.0f64..5.0, 30..200),
        fs in prop::sample::select(vec![20.0, 25.0, 31.0]),
    ) {
        let p = small_params();
        let g = stft_submatrix(&v, fs, &p).unwrap();
        for t in 0..g.columns {
            let want = dft_column(&v, fs, &p, t + 1);
            for (a, b) in g.row(t).iter().zip(&want) {
                prop_assert!((a - b).norm() < 1e-9 * (1.0 + b.norm()));
            }
        }
    }

    #[test]
    fn ridge_is_scale_invariant(
        raw in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 8..160),
        shift in -20i32..20,
    ) {
        let bins = 8;
        let columns = raw.len() / bins;
        let data: Vec<Complex64> = raw[..columns * bins].iter().map(|&(r, i)| Complex64::new(r, i)).collect();
        let g = StftMatrix { columns, m_lo: 3, m_hi: 10, data: data.clone() };
        let c = 2f64.powi(shift);
        let scaled = StftMatrix { data: data.iter().map(|z| z * c).collect(), ..g.clone() };
        prop_assert_eq!(extract_ridge(&g, 0.01), extract_ridge(&scaled, 0.01));
    }
}

#[test]
fn constant_input_has_no_interior_energy() {
    let fs = 200.0;
    let p = StftParams::for_fs(fs);
    let v = vec![3.25; 20 * 200];
    let g = stft_submatrix(&v, fs, &p).unwrap();
    let k = p.half_window as f64;
    for t in 1..=g.columns {
        let c = t as f64 * fs - 1.0;
        if c - k >= 0.0 && c + k < v.len() as f64 {
            for z in g.row(t - 1) {
                assert!(z.norm() < 1e-9, "t={t}: {z}");
            }
        }
    }
}

#[test]
fn two_hz_sinusoid_lands_on_bin_nine() {
    let fs = 200.0;
    let p = StftParams::for_fs(fs);
    let v: Vec<f64> = (0..30 * 200)
        .map(|i| 1.0 + (2.0 * PI * 2.0 * i as f64 / fs).sin())
        .collect();
    let g = stft_submatrix(&v, fs, &p).unwrap();
    let ridge = extract_ridge(&g, p.lambda);
    assert!(ridge.iter().all(|&m| m == 9), "{ridge:?}");
}

#[test]
fn pulse_train_rate_is_tracked() {
    for (bpm, bin) in [(60.0, 5), (90.0, 7), (150.0, 11)] {
        let (rec, _) = generate(&SynthSpec::constant(200.0, 40.0, bpm)).unwrap();
        let params = DetectorParams::default();
        let v1 = energy_envelope(&rec, &params).unwrap();
        let tr = track(&v1, 200.0, &params.stft(200.0)).unwrap();
        assert_eq!(tr.p.len(), 40);
        let inner = &tr.p[3..37];
        assert!(inner.iter().all(|&m| m == bin), "{bpm} bpm: {inner:?}");
        let f = tr.hr_hz();
        assert!((f[20 * 200] - bpm / 60.0).abs() < 1e-12);
    }
}
