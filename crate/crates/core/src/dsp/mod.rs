//! Filtering and windowed-average primitives shared by both detectors.

mod filter;
mod window;

pub use filter::{butterworth_bandpass, design_bandpass, filtfilt, BandpassDesign, Biquad};
pub use window::{moving_count, moving_mean, moving_sum, variable_moving_mean};

/// Smallest odd integer greater than or equal to `v` (at least 1).
///
/// Products such as `0.097 * 1000.0` land a few ulps above the integer, so
/// the ceiling is taken after a 1e-9 relative nudge down.
pub fn odd_ceil(v: f64) -> usize {
    let c = (v - v.abs() * 1e-9).ceil().max(1.0) as usize;
    if c % 2 == 0 {
        c + 1
    } else {
        c
    }
}
