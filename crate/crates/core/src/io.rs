//! Readers and writers for ECG samples, beat annotations, and intermediate
//! detector signals.
//!
//! Every reader converts to physical units on the way in, so the detectors
//! never see gain or baseline. Indices on disk are 0-based.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::detect::BlockEvidence;
use crate::error::{Error, Result};
use crate::record::{BeatList, EcgRecord};

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Reads one column of a numeric CSV file.
///
/// The sampling rate comes from `fs` when given, otherwise from a
/// `# fs=<value>` header line. Other lines starting with `#` are ignored.
/// Blank or non-numeric rows are errors.
pub fn read_csv(path: impl AsRef<Path>, column: usize, fs: Option<f64>) -> Result<EcgRecord> {
    let path = path.as_ref();
    let reader = BufReader::new(open(path)?);
    let mut header_fs = None;
    let mut samples = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("fs=") {
                let v: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, format!("bad fs header {v:?}")))?;
                header_fs = Some(v);
            }
            continue;
        }
        if trimmed.is_empty() {
            return Err(Error::parse(path, lineno, "blank row"));
        }
        let field = trimmed
            .split(',')
            .nth(column)
            .ok_or_else(|| Error::parse(path, lineno, format!("no column {column}")))?
            .trim();
        let v: f64 = field
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("not a number: {field:?}")))?;
        samples.push(v);
    }

    let fs = fs.or(header_fs).ok_or_else(|| {
        Error::Format(format!(
            "{}: sampling rate not given (pass --fs or add a '# fs=' header)",
            path.display()
        ))
    })?;
    Ok(EcgRecord::new(samples, fs)?.with_label(path.display().to_string()))
}

/// Writes a record as a CSV column with a `# fs=` header.
pub fn write_csv(rec: &EcgRecord, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let res = (|| -> std::io::Result<()> {
        writeln!(w, "# fs={}", rec.fs)?;
        for v in &rec.samples {
            writeln!(w, "{v}")?;
        }
        w.flush()
    })();
    res.map_err(|e| Error::io(path, e))
}

/// Sidecar metadata for headerless 16-bit recordings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawHeader {
    pub fs: f64,
    pub gain: f64,
    #[serde(default)]
    pub baseline: f64,
}

impl RawHeader {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = BufReader::new(open(path)?);
        serde_json::from_reader(f)
            .map_err(|e| Error::Format(format!("{}: bad sidecar: {e}", path.display())))
    }

    /// The conventional sidecar location: `<signal path>.json`.
    pub fn sidecar_path(signal: &Path) -> PathBuf {
        let mut s = signal.as_os_str().to_owned();
        s.push(".json");
        PathBuf::from(s)
    }
}

fn to_physical(raw: impl Iterator<Item = i32>, gain: f64, baseline: f64) -> Vec<f64> {
    raw.map(|r| (f64::from(r) - baseline) / gain).collect()
}

fn decode_i16(bytes: &[u8]) -> impl Iterator<Item = i32> + '_ {
    bytes
        .chunks_exact(2)
        .map(|b| i32::from(i16::from_le_bytes([b[0], b[1]])))
}

/// Reads little-endian signed 16-bit samples; value = (raw - baseline) / gain.
pub fn read_raw_i16(path: impl AsRef<Path>, header: &RawHeader) -> Result<EcgRecord> {
    let path = path.as_ref();
    if header.gain == 0.0 || !header.gain.is_finite() {
        return Err(Error::InvalidParam(format!("gain must be non-zero, got {}", header.gain)));
    }
    let mut bytes = Vec::new();
    open(path)?
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io(path, e))?;
    if bytes.len() % 2 != 0 {
        return Err(Error::Format(format!(
            "{}: odd byte count {} for 16-bit samples",
            path.display(),
            bytes.len()
        )));
    }
    let samples = to_physical(decode_i16(&bytes), header.gain, header.baseline);
    Ok(EcgRecord::new(samples, header.fs)?.with_label(path.display().to_string()))
}

/// Unpacks WFDB format 212: two 12-bit two's-complement values per 3 bytes.
///
/// Decodes at most `count` values. A final odd value may occupy only two bytes.
pub fn unpack_212(bytes: &[u8], count: usize) -> Vec<i32> {
    fn sext12(v: i32) -> i32 {
        if v & 0x800 != 0 {
            v - 0x1000
        } else {
            v
        }
    }
    let mut out = Vec::with_capacity(count);
    let mut i = 0;
    while out.len() < count && i + 1 < bytes.len() {
        let b0 = i32::from(bytes[i]);
        let b1 = i32::from(bytes[i + 1]);
        out.push(sext12(b0 | ((b1 & 0x0F) << 8)));
        if out.len() < count && i + 2 < bytes.len() {
            let b2 = i32::from(bytes[i + 2]);
            out.push(sext12(b2 | ((b1 >> 4) << 8)));
        }
        i += 3;
    }
    out
}

/// One signal line of a WFDB header.
#[derive(Debug, Clone, PartialEq)]
pub struct WfdbSignal {
    pub file_name: String,
    pub format: u32,
    pub byte_offset: u64,
    pub gain: f64,
    pub baseline: f64,
    pub description: String,
}

/// The parts of a WFDB header this crate uses.
#[derive(Debug, Clone, PartialEq)]
pub struct WfdbHeader {
    pub record_name: String,
    pub fs: f64,
    pub n_samples: Option<usize>,
    pub signals: Vec<WfdbSignal>,
}

const WFDB_DEFAULT_FS: f64 = 250.0;
const WFDB_DEFAULT_GAIN: f64 = 200.0;

impl WfdbHeader {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (lineno, record_line) = lines
            .next()
            .ok_or_else(|| Error::parse(origin, 1, "empty header"))?;
        let mut fields = record_line.split_whitespace();
        let name = fields.next().unwrap_or_default();
        if name.contains('/') {
            return Err(Error::Format(format!(
                "{}: multi-segment records are not supported",
                origin.display()
            )));
        }
        let n_sig: usize = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(origin, lineno, "missing signal count"))?;
        let fs = match fields.next() {
            Some(f) => {
                let f = f.split(['/', '(']).next().unwrap_or(f);
                f.parse::<f64>()
                    .map_err(|_| Error::parse(origin, lineno, format!("bad sampling frequency {f:?}")))?
            }
            None => WFDB_DEFAULT_FS,
        };
        let n_samples = match fields.next() {
            Some(s) => Some(
                s.parse::<usize>()
                    .map_err(|_| Error::parse(origin, lineno, format!("bad sample count {s:?}")))?,
            ),
            None => None,
        };
        let n_samples = n_samples.filter(|&n| n > 0);

        let mut signals = Vec::with_capacity(n_sig);
        for _ in 0..n_sig {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| Error::Format(format!("{}: fewer signal lines than declared", origin.display())))?;
            signals.push(parse_signal_line(line, lineno, origin)?);
        }
        Ok(WfdbHeader {
            record_name: name.to_string(),
            fs,
            n_samples,
            signals,
        })
    }
}

fn parse_signal_line(line: &str, lineno: usize, origin: &Path) -> Result<WfdbSignal> {
    let mut fields = line.split_whitespace();
    let file_name = fields
        .next()
        .ok_or_else(|| Error::parse(origin, lineno, "missing file name"))?
        .to_string();
    let fmt_field = fields
        .next()
        .ok_or_else(|| Error::parse(origin, lineno, "missing format"))?;
    let (fmt_part, byte_offset) = match fmt_field.split_once('+') {
        Some((f, off)) => (
            f,
            off.parse::<u64>()
                .map_err(|_| Error::parse(origin, lineno, format!("bad byte offset {off:?}")))?,
        ),
        None => (fmt_field, 0),
    };
    let digits: String = fmt_part.chars().take_while(|c| c.is_ascii_digit()).collect();
    let format: u32 = digits
        .parse()
        .map_err(|_| Error::parse(origin, lineno, format!("bad format {fmt_field:?}")))?;

    let mut gain = WFDB_DEFAULT_GAIN;
    let mut baseline = None;
    if let Some(g) = fields.next() {
        let g = g.split('/').next().unwrap_or(g);
        let (gain_str, base_str) = match g.split_once('(') {
            Some((a, b)) => (a, Some(b.trim_end_matches(')'))),
            None => (g, None),
        };
        let parsed: f64 = gain_str
            .parse()
            .map_err(|_| Error::parse(origin, lineno, format!("bad gain {gain_str:?}")))?;
        if parsed != 0.0 {
            gain = parsed;
        }
        if let Some(b) = base_str {
            baseline = Some(
                b.parse::<f64>()
                    .map_err(|_| Error::parse(origin, lineno, format!("bad baseline {b:?}")))?,
            );
        }
    }
    let _adc_res = fields.next();
    let adc_zero = fields.next().and_then(|s| s.parse::<f64>().ok()).unwrap_or(0.0);
    // initial value, checksum, block size
    let rest: Vec<&str> = fields.skip(3).collect();
    Ok(WfdbSignal {
        file_name,
        format,
        byte_offset,
        gain,
        baseline: baseline.unwrap_or(adc_zero),
        description: rest.join(" "),
    })
}

/// Reads one signal of a single-segment WFDB record (formats 212 and 16).
pub fn read_wfdb(header_path: impl AsRef<Path>, signal_index: usize) -> Result<EcgRecord> {
    let header_path = header_path.as_ref();
    let mut text = String::new();
    open(header_path)?
        .read_to_string(&mut text)
        .map_err(|e| Error::io(header_path, e))?;
    let header = WfdbHeader::parse(&text, header_path)?;

    let sig = header.signals.get(signal_index).ok_or_else(|| {
        Error::InvalidParam(format!(
            "signal index {signal_index} out of range ({} signals)",
            header.signals.len()
        ))
    })?;
    if sig.format != 212 && sig.format != 16 {
        return Err(Error::Format(format!(
            "{}: unsupported signal format {}",
            header_path.display(),
            sig.format
        )));
    }

    // Signals sharing a file are interleaved frame by frame.
    let group: Vec<usize> = header
        .signals
        .iter()
        .enumerate()
        .filter(|(_, s)| s.file_name == sig.file_name)
        .map(|(i, _)| i)
        .collect();
    if group.iter().any(|&i| header.signals[i].format != sig.format) {
        return Err(Error::Format(format!(
            "{}: mixed formats within {}",
            header_path.display(),
            sig.file_name
        )));
    }
    let width = group.len();
    let slot = group.iter().position(|&i| i == signal_index).unwrap_or(0);

    let dat_path = header_path
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .join(&sig.file_name);
    let mut bytes = Vec::new();
    open(&dat_path)?
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io(&dat_path, e))?;
    let offset = usize::try_from(sig.byte_offset).unwrap_or(usize::MAX);
    let payload = bytes.get(offset..).unwrap_or(&[]);

    let available = match sig.format {
        212 => payload.len() * 2 / 3,
        _ => payload.len() / 2,
    };
    let frames = match header.n_samples {
        Some(n) => {
            let need = n * width;
            if available < need {
                return Err(Error::Format(format!(
                    "{}: truncated, {} samples declared but only {} present",
                    dat_path.display(),
                    need,
                    available
                )));
            }
            n
        }
        None => available / width,
    };
    let count = frames * width;
    let raw: Vec<i32> = match sig.format {
        212 => unpack_212(payload, count),
        _ => decode_i16(payload).take(count).collect(),
    };
    let samples = to_physical(
        raw.into_iter().skip(slot).step_by(width),
        sig.gain,
        sig.baseline,
    );
    let mut rec = EcgRecord::new(samples, header.fs)?
        .with_label(format!("{}:{}", header.record_name, signal_index));
    rec.lead_index = signal_index;
    Ok(rec)
}

/// Result of reading an annotation file.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotations {
    pub beats: BeatList,
    /// Number of exact duplicate indices that were collapsed.
    pub duplicates: usize,
}

/// Reads plain-text annotations, one 0-based sample index per line.
///
/// Blank lines and `#` comments are skipped. The sequence must be
/// non-decreasing; exact repeats are collapsed and counted.
pub fn read_annotations(path: impl AsRef<Path>, fs: f64) -> Result<Annotations> {
    let path = path.as_ref();
    let reader = BufReader::new(open(path)?);
    let mut indices: Vec<usize> = Vec::new();
    let mut duplicates = 0;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: usize = t
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("not a sample index: {t:?}")))?;
        match indices.last() {
            Some(&last) if v < last => {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("index {v} is smaller than the previous {last}"),
                ))
            }
            Some(&last) if v == last => duplicates += 1,
            _ => indices.push(v),
        }
    }
    if duplicates > 0 {
        log::warn!("{}: collapsed {duplicates} duplicate annotation(s)", path.display());
    }
    Ok(Annotations {
        beats: BeatList::from_sorted_unchecked(indices, fs),
        duplicates,
    })
}

/// Writes one index per line.
pub fn write_beats(beats: &BeatList, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let res = (|| -> std::io::Result<()> {
        for (k, i) in beats.indices().iter().enumerate() {
            if k > 0 {
                w.write_all(b"\n")?;
            }
            write!(w, "{i}")?;
        }
        w.flush()
    })();
    res.map_err(|e| Error::io(path, e))
}

/// Writes the detector's intermediate signals as CSV, one row per sample:
/// `sample,v1,threshold,L,v3` where `threshold` is `v2 + alpha`.
pub fn write_signal_dump(ev: &BlockEvidence, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let res = (|| -> std::io::Result<()> {
        writeln!(w, "sample,v1,threshold,L,v3")?;
        for i in 0..ev.v1.len() {
            writeln!(
                w,
                "{},{},{},{},{}",
                i,
                ev.v1[i],
                ev.v2[i] + ev.alpha[i],
                u8::from(ev.above[i]),
                ev.v3[i]
            )?;
        }
        w.flush()
    })();
    res.map_err(|e| Error::io(path, e))
}

/// Writes the per-second heart-rate anchors as `t_seconds,hz,bpm`.
pub fn write_hr_csv(anchors: &[(f64, f64)], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "t_seconds,hz,bpm")?;
    for &(t, hz) in anchors {
        writeln!(w, "{t},{hz},{}", hz * 60.0)?;
    }
    w.flush()
}
