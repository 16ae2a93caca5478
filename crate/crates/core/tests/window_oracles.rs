//! Moving averages against naive per-sample loops.

use proptest::prelude::*;
use qrs_core::dsp::{moving_count, moving_mean, moving_sum, variable_moving_mean};

fn naive_sum(x: &[f64], i: usize, w: usize) -> f64 {
    let h = w / 2;
    let lo = i.saturating_sub(h);
    let hi = (i + h).min(x.len() - 1);
    x[lo..=hi].iter().sum()
}

/// Mean over the in-range part of the window.
fn naive_mean(x: &[f64], i: usize, w: usize) -> f64 {
    let h = w / 2;
    let lo = i.saturating_sub(h);
    let hi = (i + h).min(x.len() - 1);
    naive_sum(x, i, w) / (hi - lo + 1) as f64
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

fn odd() -> impl Strategy<Value = usize> {
    (0usize..40).prop_map(|k| 2 * k + 1)
}

proptest! {
    #[test]
    fn mean_and_sum_match_loops(x in prop::collection::vec(-1e3f64..1e3, 1..300), w in odd()) {
        let m = moving_mean(&x, w).unwrap();
        let s = moving_sum(&x, w).unwrap();
        for i in 0..x.len() {
            let want = naive_sum(&x, i, w);
            prop_assert!(close(s[i], want), "sum i={} {} vs {}", i, s[i], want);
            prop_assert!(close(m[i], naive_mean(&x, i, w)), "mean i={}", i);
        }
    }

    #[test]
    fn count_matches_loop(l in prop::collection::vec(any::<bool>(), 1..300), w in odd()) {
        let c = moving_count(&l, w).unwrap();
        let h = w / 2;
        for i in 0..l.len() {
            let lo = i.saturating_sub(h);
            let hi = (i + h).min(l.len() - 1);
            let want = l[lo..=hi].iter().filter(|&&b| b).count() as u32;
            prop_assert_eq!(c[i], want);
        }
    }

    #[test]
    fn variable_mean_matches_loop(
        pairs in prop::collection::vec((-1e3f64..1e3, 0u32..30), 1..300)
    ) {
        let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let w: Vec<u32> = pairs.iter().map(|p| 2 * p.1 + 1).collect();
        let m = variable_moving_mean(&x, &w).unwrap();
        for i in 0..x.len() {
            let want = naive_mean(&x, i, w[i] as usize);
            prop_assert!(close(m[i], want), "i={} {} vs {}", i, m[i], want);
        }
    }

    #[test]
    fn variable_with_constant_window_is_fixed(x in prop::collection::vec(-10f64..10.0, 1..200), w in odd()) {
        let a = moving_mean(&x, w).unwrap();
        let b = variable_moving_mean(&x, &vec![w as u32; x.len()]).unwrap();
        for i in 0..x.len() {
            prop_assert!(close(a[i], b[i]));
        }
    }
}

#[test]
fn edge_truncation() {
    assert_eq!(moving_mean(&[1.0, 2.0, 3.0], 3).unwrap(), vec![1.5, 2.0, 2.5]);
    assert_eq!(moving_sum(&[1.0, 2.0, 3.0], 3).unwrap(), vec![3.0, 6.0, 5.0]);
}

#[test]
fn long_input_crosses_blocks() {
    let x: Vec<f64> = (0..50_000).map(|i| ((i * 7919) % 1000) as f64 / 10.0).collect();
    let m = moving_mean(&x, 1001).unwrap();
    for i in [0, 499, 500, 8191, 8192, 8193, 20_000, 49_999] {
        assert!(close(m[i], naive_mean(&x, i, 1001)), "i={i}");
    }
}
