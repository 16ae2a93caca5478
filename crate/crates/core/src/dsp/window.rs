//! Centered moving sums and means with edge truncation.
//!
//! All three filters share one blocked prefix-sum kernel. Prefix sums are
//! rebuilt for every block so rounding error stays proportional to the local
//! signal level rather than growing with record length.

use crate::error::{Error, Result};

const BLOCK: usize = 8192;

fn check_odd(w: usize) -> Result<()> {
    if w == 0 || w % 2 == 0 {
        return Err(Error::InvalidParam(format!("window must be odd and >= 1, got {w}")));
    }
    Ok(())
}

/// Calls `emit(i, sum, count)` for every index with the sum of `x` over the
/// in-range part of `[i - h, i + h]`, where `h = half(i) <= max_half`.
fn windowed_sums(
    x: &[f64],
    max_half: usize,
    half: impl Fn(usize) -> usize,
    mut emit: impl FnMut(usize, f64, usize),
) {
    let n = x.len();
    let mut prefix = Vec::with_capacity(BLOCK + 2 * max_half + 1);
    let mut start = 0;
    while start < n {
        let end = (start + BLOCK).min(n);
        let lo = start.saturating_sub(max_half);
        let hi = (end + max_half).min(n);
        prefix.clear();
        prefix.push(0.0);
        let mut acc = 0.0;
        for &v in &x[lo..hi] {
            acc += v;
            prefix.push(acc);
        }
        for i in start..end {
            let h = half(i);
            debug_assert!(h <= max_half);
            let a = i.saturating_sub(h);
            let b = (i + h + 1).min(n);
            emit(i, prefix[b - lo] - prefix[a - lo], b - a);
        }
        start = end;
    }
}

/// Centered mean over an odd window, dividing by the number of in-range samples.
pub fn moving_mean(x: &[f64], w: usize) -> Result<Vec<f64>> {
    check_odd(w)?;
    let h = (w - 1) / 2;
    let mut out = vec![0.0; x.len()];
    windowed_sums(x, h, |_| h, |i, s, c| out[i] = s / c as f64);
    Ok(out)
}

/// Centered sum over an odd window; out-of-range samples contribute nothing.
pub fn moving_sum(x: &[f64], w: usize) -> Result<Vec<f64>> {
    check_odd(w)?;
    let h = (w - 1) / 2;
    let mut out = vec![0.0; x.len()];
    windowed_sums(x, h, |_| h, |i, s, _| out[i] = s);
    Ok(out)
}

/// Centered count of `true` entries over an odd window (exact integer arithmetic).
pub fn moving_count(flags: &[bool], w: usize) -> Result<Vec<u32>> {
    check_odd(w)?;
    let h = (w - 1) / 2;
    let n = flags.len();
    let mut out = vec![0u32; n];
    let mut count: u32 = flags[..h.min(n)].iter().map(|&b| u32::from(b)).sum();
    for i in 0..n {
        if i + h < n && flags[i + h] {
            count += 1;
        }
        if i > h && flags[i - h - 1] {
            count -= 1;
        }
        out[i] = count;
    }
    Ok(out)
}

/// Centered mean with a per-sample odd window, edge-truncated.
pub fn variable_moving_mean(x: &[f64], w: &[u32]) -> Result<Vec<f64>> {
    if w.len() != x.len() {
        return Err(Error::InvalidParam(format!(
            "window vector length {} does not match signal length {}",
            w.len(),
            x.len()
        )));
    }
    let mut max_w = 1;
    for &wi in w {
        check_odd(wi as usize)?;
        max_w = max_w.max(wi as usize);
    }
    let max_half = (max_w - 1) / 2;
    let mut out = vec![0.0; x.len()];
    windowed_sums(
        x,
        max_half,
        |i| (w[i] as usize - 1) / 2,
        |i, s, c| out[i] = s / c as f64,
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_edges() {
        assert_eq!(moving_mean(&[1.0, 2.0, 3.0], 3).unwrap(), vec![1.5, 2.0, 2.5]);
    }

    #[test]
    fn mean_of_constant() {
        for w in [1, 3, 21, 1001] {
            let m = moving_mean(&[2.5; 300], w).unwrap();
            assert!(m.iter().all(|&v| v == 2.5), "w={w}");
        }
    }

    #[test]
    fn even_or_zero_window_rejected() {
        assert!(moving_mean(&[1.0], 2).is_err());
        assert!(moving_sum(&[1.0], 0).is_err());
        assert!(moving_count(&[true], 4).is_err());
        assert!(variable_moving_mean(&[1.0, 2.0], &[1, 2]).is_err());
    }

    #[test]
    fn sum_of_ones() {
        assert_eq!(moving_sum(&[1.0; 5], 3).unwrap(), vec![2.0, 3.0, 3.0, 3.0, 2.0]);
        assert_eq!(moving_sum(&[0.0; 5], 3).unwrap(), vec![0.0; 5]);
    }

    #[test]
    fn count_matches_sum() {
        let flags: Vec<bool> = (0..50).map(|i| (i * 7) % 5 < 3).collect();
        let f: Vec<f64> = flags.iter().map(|&b| f64::from(u8::from(b))).collect();
        for w in [1, 3, 5, 21, 99] {
            let c = moving_count(&flags, w).unwrap();
            let s = moving_sum(&f, w).unwrap();
            assert!(c.iter().zip(&s).all(|(&a, &b)| f64::from(a) == b), "w={w}");
        }
    }

    #[test]
    fn variable_width_one_ends() {
        let v = variable_moving_mean(&[2.0, 4.0, 6.0], &[1, 3, 1]).unwrap();
        assert_eq!(v, vec![2.0, 4.0, 6.0]);
    }

    #[test]
    fn variable_length_mismatch() {
        assert!(variable_moving_mean(&[1.0, 2.0], &[1]).is_err());
    }

    #[test]
    fn empty_inputs() {
        assert!(moving_mean(&[], 3).unwrap().is_empty());
        assert!(moving_count(&[], 3).unwrap().is_empty());
    }
}
