//! Overlapped chunk processing for records too long to hold in memory.
//!
//! The stream is cut into core regions `[k * core, (k + 1) * core)`. Each
//! core is detected together with `overlap` samples of context on both sides
//! and keeps only the beats that fall inside its own core, so every beat has
//! exactly one owning chunk.

use rayon::prelude::*;
use serde::Serialize;

use super::{detect, DetectorParams};
use crate::error::{Error, Result};
use crate::record::{BeatList, EcgRecord};

/// Seconds added on top of the widest window's reach for filter transients.
const TRANSIENT_MARGIN_S: f64 = 10.0;
const MIN_CORE_S: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChunkConfig {
    pub core_s: f64,
    pub overlap_s: f64,
    /// Chunks detected concurrently; 1 runs everything on the caller's thread.
    pub threads: usize,
}

impl Default for ChunkConfig {
    fn default() -> Self {
        ChunkConfig {
            core_s: 3600.0,
            overlap_s: 15.0,
            threads: 1,
        }
    }
}

/// Smallest overlap in seconds: the largest half-width among the noise
/// window, the STFT window, and the largest adaptive window, plus a 10 s
/// margin for filter transients. 12.5 s at the defaults.
pub fn min_overlap_s(params: &DetectorParams, fs: f64) -> f64 {
    let w = params.windows(fs);
    let k = params.stft(fs).half_window;
    let reach = ((w.w3 - 1) / 2).max(k).max((w.w2_max - 1) / 2);
    reach as f64 / fs + TRANSIENT_MARGIN_S
}

impl ChunkConfig {
    pub fn validate(&self, params: &DetectorParams, fs: f64) -> Result<()> {
        if !(self.core_s >= MIN_CORE_S) {
            return Err(Error::InvalidParam(format!(
                "chunk core must be at least {MIN_CORE_S} s, got {}",
                self.core_s
            )));
        }
        let min = min_overlap_s(params, fs);
        if !(self.overlap_s >= min) {
            return Err(Error::InvalidParam(format!(
                "chunk overlap must be at least {min} s at {fs} Hz, got {}",
                self.overlap_s
            )));
        }
        if self.threads == 0 {
            return Err(Error::InvalidParam("threads must be >= 1".into()));
        }
        Ok(())
    }
}

/// One chunk's samples and the global positions that frame it.
struct Chunk {
    /// Global index of `samples[0]`.
    offset: usize,
    core_start: usize,
    core_end: usize,
    rec: EcgRecord,
}

fn run_chunk(chunk: &Chunk, params: &DetectorParams) -> Result<Vec<usize>> {
    let beats = detect(&chunk.rec, params)?;
    Ok(beats
        .indices()
        .iter()
        .map(|&j| j + chunk.offset)
        .filter(|&j| (chunk.core_start..chunk.core_end).contains(&j))
        .collect())
}

/// Detects beats in a sample stream chunk by chunk.
///
/// A stream no longer than one core is detected in one piece, giving exactly
/// the same result as the unchunked detector.
pub fn detect_chunked(
    source: impl IntoIterator<Item = f64>,
    fs: f64,
    params: &DetectorParams,
    cfg: &ChunkConfig,
) -> Result<BeatList> {
    params.validate_for(fs)?;
    cfg.validate(params, fs)?;
    let core = (cfg.core_s * fs).round() as usize;
    let overlap = (cfg.overlap_s * fs).ceil() as usize;

    let pool = if cfg.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .map_err(|e| Error::InvalidParam(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let mut source = source.into_iter();
    // `buf[0]` is global sample `buf_start`.
    let mut buf: Vec<f64> = Vec::new();
    let mut buf_start = 0usize;
    let mut exhausted = false;
    let mut next_core = 0usize;
    let mut beats = Vec::new();
    let mut pending: Vec<Chunk> = Vec::with_capacity(cfg.threads);

    let flush = |pending: &mut Vec<Chunk>, beats: &mut Vec<usize>| -> Result<()> {
        let results: Vec<Result<Vec<usize>>> = match &pool {
            Some(pool) => pool.install(|| pending.par_iter().map(|c| run_chunk(c, params)).collect()),
            None => pending.iter().map(|c| run_chunk(c, params)).collect(),
        };
        for r in results {
            beats.extend(r?);
        }
        pending.clear();
        Ok(())
    };

    loop {
        let core_start = next_core;
        let want_end = core_start + core + overlap;
        while !exhausted && buf_start + buf.len() < want_end {
            match source.next() {
                Some(v) => buf.push(v),
                None => exhausted = true,
            }
        }
        let total_known = buf_start + buf.len();
        if total_known == 0 {
            return Err(Error::InvalidParam("empty sample stream".into()));
        }
        if core_start >= total_known {
            break;
        }
        if core_start == 0 && exhausted && total_known <= core {
            // whole record fits one core: no context trimming at all
            pending.push(Chunk {
                offset: 0,
                core_start: 0,
                core_end: total_known,
                rec: EcgRecord::new(std::mem::take(&mut buf), fs)?,
            });
            break;
        }
        let core_end = (core_start + core).min(total_known);
        let win_start = core_start.saturating_sub(overlap);
        let win_end = want_end.min(total_known);
        pending.push(Chunk {
            offset: win_start,
            core_start,
            core_end,
            rec: EcgRecord::new(buf[win_start - buf_start..win_end - buf_start].to_vec(), fs)?,
        });
        if pending.len() == cfg.threads {
            flush(&mut pending, &mut beats)?;
        }
        next_core = core_end;
        // keep only what the next window needs
        let keep_from = next_core.saturating_sub(overlap);
        if keep_from > buf_start {
            buf.drain(..keep_from - buf_start);
            buf_start = keep_from;
        }
        if exhausted && next_core >= buf_start + buf.len() {
            break;
        }
    }
    flush(&mut pending, &mut beats)?;
    Ok(BeatList::from_sorted_unchecked(beats, fs))
}
