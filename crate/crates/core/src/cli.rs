//! The `qrs` command-line tool.
//!
//! Exit codes: 0 success, 1 file I/O or format failure, 2 invalid
//! configuration, 3 detection precondition failure (record too short,
//! sampling rate too low, non-finite samples).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::detect::{detect_chunked, detect_with, energy_envelope, Algorithm, ChunkConfig, DetectorParams};
use crate::error::Error;
use crate::eval::{evaluate_corpus, match_beats, pool, CorpusRecord, CorpusReport, RecordResult, DEFAULT_GRACE_MS};
use crate::hr;
use crate::io::{self, RawHeader};
use crate::record::EcgRecord;
use crate::synth::{self, SynthSpec, TWave};

pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DETECT: i32 = 3;

/// Samples in 14 days at 200 Hz; the bench extrapolates to this length.
const FOURTEEN_DAYS_S: f64 = 14.0 * 86_400.0;

#[derive(Debug, Parser)]
#[command(name = "qrs", version, about = "Adaptive QRS detection for long-term ECG")]
pub struct Cli {
    /// Print the effective configuration as JSON and exit without running.
    #[arg(long, global = true)]
    pub print_config: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect beats and write one sample index per line.
    Detect(DetectArgs),
    /// Compare predictions with annotations and write a report CSV.
    Evaluate(EvaluateArgs),
    /// Write the tracked heart rate as per-second anchors.
    Hr(HrArgs),
    /// Generate a synthetic record and its ground-truth beats.
    Synth(SynthArgs),
    /// Time the chunked detector on a long record.
    Bench(BenchArgs),
    /// Write the detector's intermediate signals for one record.
    Dump(DumpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Text, one sample per row; fs from `--fs` or a `# fs=` header.
    Csv,
    /// Little-endian i16 with a `<file>.json` sidecar `{fs, gain, baseline}`.
    Raw16,
    /// WFDB header (`.hea`) with format 212 or 16 signal files.
    Wfdb,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// Signal file (the `.hea` header for WFDB).
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Sampling rate in Hz; overrides any rate stored with the signal.
    #[arg(long)]
    pub fs: Option<f64>,
    /// CSV column to read.
    #[arg(long, default_value_t = 0)]
    pub column: usize,
    /// WFDB signal (lead) index.
    #[arg(long, default_value_t = 0)]
    pub signal: usize,
    /// Sidecar for raw16 input; defaults to `<input>.json`.
    #[arg(long)]
    pub header: Option<PathBuf>,
}

/// Overrides for every detector constant; unset fields keep their defaults.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ParamArgs {
    #[arg(long, value_enum)]
    pub algorithm: Option<Algorithm>,
    #[arg(long)]
    pub band_lo: Option<f64>,
    #[arg(long)]
    pub band_hi: Option<f64>,
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub w1_factor: Option<f64>,
    #[arg(long)]
    pub w2_factor: Option<f64>,
    #[arg(long)]
    pub w3_factor: Option<f64>,
    #[arg(long)]
    pub alpha_factor: Option<f64>,
    #[arg(long)]
    pub stft_half_window_s: Option<f64>,
    #[arg(long)]
    pub stft_modes_per_hz: Option<f64>,
    #[arg(long)]
    pub m_lo: Option<usize>,
    #[arg(long)]
    pub m_hi: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
}

impl ParamArgs {
    pub fn resolve(&self) -> DetectorParams {
        let d = DetectorParams::default();
        DetectorParams {
            algorithm: self.algorithm.unwrap_or(d.algorithm),
            band_lo: self.band_lo.unwrap_or(d.band_lo),
            band_hi: self.band_hi.unwrap_or(d.band_hi),
            order: self.order.unwrap_or(d.order),
            w1_factor: self.w1_factor.unwrap_or(d.w1_factor),
            w2_factor: self.w2_factor.unwrap_or(d.w2_factor),
            w3_factor: self.w3_factor.unwrap_or(d.w3_factor),
            alpha_factor: self.alpha_factor.unwrap_or(d.alpha_factor),
            stft_half_window_s: self.stft_half_window_s.unwrap_or(d.stft_half_window_s),
            stft_modes_per_hz: self.stft_modes_per_hz.unwrap_or(d.stft_modes_per_hz),
            m_lo: self.m_lo.unwrap_or(d.m_lo),
            m_hi: self.m_hi.unwrap_or(d.m_hi),
            lambda: self.lambda.unwrap_or(d.lambda),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChunkArgs {
    #[arg(long, default_value_t = 3600.0)]
    pub chunk_core_s: f64,
    #[arg(long, default_value_t = 15.0)]
    pub chunk_overlap_s: f64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

impl ChunkArgs {
    fn config(&self) -> ChunkConfig {
        ChunkConfig {
            core_s: self.chunk_core_s,
            overlap_s: self.chunk_overlap_s,
            threads: self.threads,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct DetectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Beat file to write.
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub chunk: ChunkArgs,
    /// Also write `sample,v1,threshold,L,v3` for the whole record.
    #[arg(long)]
    pub dump_evidence: Option<PathBuf>,
    /// Print detection wall time (excluding reading and writing) to stdout.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct EvaluateArgs {
    /// Annotation files, one per record.
    #[arg(long = "ann", required = true, num_args = 1..)]
    pub annotations: Vec<PathBuf>,
    /// Prediction files paired with `--ann` by position.
    #[arg(long = "pred", num_args = 1.., conflicts_with = "records")]
    pub predictions: Vec<PathBuf>,
    /// Signal files to detect on instead of reading predictions.
    #[arg(long = "record", num_args = 1..)]
    pub records: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Sampling rate; required with `--pred`, optional override with `--record`.
    #[arg(long)]
    pub fs: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub signal: usize,
    #[arg(long, default_value_t = DEFAULT_GRACE_MS)]
    pub grace_ms: f64,
    /// Report CSV; written to stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct HrArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// CSV `t_seconds,hz,bpm`; written to stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SynthArgs {
    /// Signal CSV to write.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Ground-truth beat file to write.
    #[arg(short, long)]
    pub annotations: PathBuf,
    #[arg(long, default_value_t = 200.0)]
    pub fs: f64,
    #[arg(long, default_value_t = 60.0)]
    pub duration_s: f64,
    /// Constant heart rate; ignored when `--schedule` is given.
    #[arg(long, default_value_t = 60.0)]
    pub bpm: f64,
    /// Piecewise rate as `seconds:bpm,seconds:bpm,...`.
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long, default_value_t = 80.0)]
    pub qrs_width_ms: f64,
    /// Add T waves with this amplitude relative to the QRS.
    #[arg(long)]
    pub t_ratio: Option<f64>,
    #[arg(long, default_value_t = 200.0)]
    pub t_width_ms: f64,
    #[arg(long, default_value_t = 250.0)]
    pub t_delay_ms: f64,
    #[arg(long, default_value_t = 0.0)]
    pub noise_rms: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    /// Record to time; a synthetic one is generated when omitted.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value_t = 200.0)]
    pub fs: f64,
    /// Length of the synthetic record in days.
    #[arg(long, default_value_t = 1.0)]
    pub days: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub chunk: ChunkArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct DumpArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Evidence CSV to write.
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub error: Error,
}

impl CliError {
    fn config(error: Error) -> Self {
        CliError { code: EXIT_CONFIG, error }
    }
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        let code = if error.is_io() { EXIT_IO } else { EXIT_DETECT };
        CliError { code, error }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn stdout_error(e: std::io::Error) -> CliError {
    Error::Io {
        path: "<stdout>".into(),
        source: e,
    }
    .into()
}

/// Writes machine-readable output to stdout.
fn emit(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .map_err(stdout_error)
}

/// Parses the process arguments, runs the command, and returns the exit code.
pub fn main() -> i32 {
    run(Cli::parse())
}

pub fn run(cli: Cli) -> i32 {
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qrs: {}", e.error);
            e.code
        }
    }
}

#[derive(Serialize)]
struct EffectiveConfig<'a, T: Serialize> {
    command: &'static str,
    detector: Option<DetectorParams>,
    chunk: Option<ChunkConfigView>,
    args: &'a T,
}

#[derive(Serialize)]
struct ChunkConfigView {
    core_s: f64,
    overlap_s: f64,
    threads: usize,
}

impl From<&ChunkArgs> for ChunkConfigView {
    fn from(c: &ChunkArgs) -> Self {
        ChunkConfigView {
            core_s: c.chunk_core_s,
            overlap_s: c.chunk_overlap_s,
            threads: c.threads,
        }
    }
}

fn print_config<T: Serialize>(
    command: &'static str,
    params: Option<&ParamArgs>,
    chunk: Option<&ChunkArgs>,
    args: &T,
) -> CliResult<()> {
    let cfg = EffectiveConfig {
        command,
        detector: params.map(ParamArgs::resolve),
        chunk: chunk.map(ChunkConfigView::from),
        args,
    };
    let json = serde_json::to_string_pretty(&cfg)
        .map_err(|e| CliError::config(Error::Format(e.to_string())))?;
    emit(&format!("{json}\n"))
}

fn execute(cli: &Cli) -> CliResult<()> {
    if cli.print_config {
        return match &cli.command {
            Command::Detect(a) => print_config("detect", Some(&a.params), Some(&a.chunk), a),
            Command::Evaluate(a) => print_config("evaluate", Some(&a.params), None, a),
            Command::Hr(a) => print_config("hr", Some(&a.params), None, a),
            Command::Synth(a) => print_config("synth", None, None, a),
            Command::Bench(a) => print_config("bench", Some(&a.params), Some(&a.chunk), a),
            Command::Dump(a) => print_config("dump", Some(&a.params), None, a),
        };
    }
    match &cli.command {
        Command::Detect(a) => cmd_detect(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Hr(a) => cmd_hr(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Dump(a) => cmd_dump(a),
    }
}

fn read_signal(path: &Path, format: Format, fs: Option<f64>, column: usize, signal: usize, header: Option<&Path>) -> CliResult<EcgRecord> {
    let mut rec = match format {
        Format::Csv => io::read_csv(path, column, fs)?,
        Format::Raw16 => {
            let sidecar = header.map_or_else(|| RawHeader::sidecar_path(path), Path::to_path_buf);
            let mut h = RawHeader::from_json_file(&sidecar)?;
            if let Some(fs) = fs {
                h.fs = fs;
            }
            io::read_raw_i16(path, &h).map_err(config_if_param)?
        }
        Format::Wfdb => io::read_wfdb(path, signal)?,
    };
    if let Some(fs) = fs {
        rec.fs = fs;
    }
    Ok(rec)
}

fn read_input(a: &InputArgs) -> CliResult<EcgRecord> {
    read_signal(&a.input, a.format, a.fs, a.column, a.signal, a.header.as_deref())
}

fn config_if_param(e: Error) -> CliError {
    match e {
        Error::InvalidParam(_) | Error::SamplingRate(_) => CliError::config(e),
        e => e.into(),
    }
}

fn check_params(params: &DetectorParams, fs: f64) -> CliResult<()> {
    params.validate_for(fs).map_err(CliError::config)
}

fn cmd_detect(a: &DetectArgs) -> CliResult<()> {
    let params = a.params.resolve();
    params.validate().map_err(CliError::config)?;
    let rec = read_input(&a.input)?;
    check_params(&params, rec.fs)?;
    let cfg = a.chunk.config();
    cfg.validate(&params, rec.fs).map_err(CliError::config)?;

    let start = Instant::now();
    let beats = detect_chunked(rec.samples.iter().copied(), rec.fs, &params, &cfg)?;
    let elapsed = start.elapsed();

    io::write_beats(&beats, &a.output)?;
    if let Some(path) = &a.dump_evidence {
        let det = detect_with(&rec, &params, true)?;
        if let Some(ev) = det.evidence {
            io::write_signal_dump(&ev, path)?;
        }
    }
    log::info!("{} beats from {} samples", beats.len(), rec.len());
    if a.timing {
        emit(&format!("detect_ms,{:.3}\n", elapsed.as_secs_f64() * 1000.0))?;
    }
    Ok(())
}

fn file_id(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn cmd_evaluate(a: &EvaluateArgs) -> CliResult<()> {
    let params = a.params.resolve();
    params.validate().map_err(CliError::config)?;
    if !(a.grace_ms >= 0.0 && a.grace_ms.is_finite()) {
        return Err(CliError::config(Error::InvalidParam(format!(
            "grace must be >= 0 ms, got {}",
            a.grace_ms
        ))));
    }
    let sources = if a.records.is_empty() { &a.predictions } else { &a.records };
    if sources.len() != a.annotations.len() {
        return Err(CliError::config(Error::InvalidParam(format!(
            "{} annotation files but {} prediction or record files",
            a.annotations.len(),
            sources.len()
        ))));
    }

    let report = if a.records.is_empty() {
        let fs = a.fs.ok_or_else(|| {
            CliError::config(Error::InvalidParam("--fs is required with --pred".into()))
        })?;
        let mut records = Vec::new();
        for (ann, pred) in a.annotations.iter().zip(&a.predictions) {
            let truth = io::read_annotations(ann, fs)?.beats;
            let found = io::read_annotations(pred, fs)?.beats;
            let report = match_beats(&truth, &found, a.grace_ms)?;
            records.push(RecordResult {
                record_id: file_id(ann),
                n_beats: truth.len(),
                report,
                detect_ms: 0.0,
            });
        }
        CorpusReport {
            pooled: pool(records.iter().map(|r| &r.report), a.grace_ms),
            records,
            excluded: Vec::new(),
            mean_detect_ms: 0.0,
        }
    } else {
        let mut corpus = Vec::new();
        for (ann, path) in a.annotations.iter().zip(&a.records) {
            let record = match read_signal(path, a.format, a.fs, 0, a.signal, None) {
                Ok(r) => Some(r),
                Err(e) if e.code == EXIT_IO => {
                    eprintln!("qrs: excluding {}: {}", path.display(), e.error);
                    None
                }
                Err(e) => return Err(e),
            };
            let fs = match (&record, a.fs) {
                (Some(r), _) => r.fs,
                (None, Some(fs)) => fs,
                (None, None) => 1.0,
            };
            if let Some(r) = &record {
                check_params(&params, r.fs)?;
            }
            corpus.push(CorpusRecord {
                id: file_id(path),
                record,
                annotations: io::read_annotations(ann, fs)?.beats,
            });
        }
        let p = params.clone();
        evaluate_corpus(&corpus, move |r| crate::detect::detect(r, &p), a.grace_ms)?
    };

    eprint!("{}", report.to_table());
    let csv = report.to_csv();
    match &a.output {
        Some(path) => std::fs::write(path, csv).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?,
        None => emit(&csv)?,
    }
    Ok(())
}

fn cmd_hr(a: &HrArgs) -> CliResult<()> {
    let params = a.params.resolve();
    params.validate().map_err(CliError::config)?;
    let rec = read_input(&a.input)?;
    check_params(&params, rec.fs)?;
    let v1 = energy_envelope(&rec, &params)?;
    let track = hr::track(&v1, rec.fs, &params.stft(rec.fs))?;
    let anchors = track.anchors();
    match &a.output {
        Some(path) => {
            let f = std::fs::File::create(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            io::write_hr_csv(&anchors, std::io::BufWriter::new(f)).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
        }
        None => {
            io::write_hr_csv(&anchors, std::io::stdout().lock()).map_err(stdout_error)?;
        }
    }
    Ok(())
}

/// Parses `seconds:bpm,seconds:bpm,...`.
pub fn parse_schedule(s: &str) -> crate::Result<Vec<(f64, f64)>> {
    s.split(',')
        .map(|seg| {
            let (len, bpm) = seg
                .split_once(':')
                .ok_or_else(|| Error::InvalidParam(format!("schedule segment {seg:?} is not seconds:bpm")))?;
            let num = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParam(format!("bad number {v:?} in schedule")))
            };
            Ok((num(len)?, num(bpm)?))
        })
        .collect()
}

fn synth_spec(a: &SynthArgs) -> crate::Result<SynthSpec> {
    let mut spec = SynthSpec::constant(a.fs, a.duration_s, a.bpm).with_noise(a.noise_rms, a.seed);
    if let Some(s) = &a.schedule {
        spec.hr_schedule = parse_schedule(s)?;
    }
    spec.qrs.width_ms = a.qrs_width_ms;
    if let Some(ratio) = a.t_ratio {
        spec.t_wave = Some(TWave {
            width_ms: a.t_width_ms,
            ratio,
            delay_ms: a.t_delay_ms,
        });
    }
    spec.validate()?;
    Ok(spec)
}

fn cmd_synth(a: &SynthArgs) -> CliResult<()> {
    let spec = synth_spec(a).map_err(CliError::config)?;
    let (rec, truth) = synth::generate(&spec).map_err(CliError::config)?;
    io::write_csv(&rec, &a.output)?;
    io::write_beats(&truth, &a.annotations)?;
    emit(&format!("samples,{}\nbeats,{}\n", rec.len(), truth.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchReport {
    pub samples: usize,
    pub beats: usize,
    pub detect_ms: f64,
    pub samples_per_s: f64,
    pub extrapolated_14day_s: f64,
}

/// Times the chunked detector on `rec`; generation and reading are excluded.
pub fn bench_record(rec: &EcgRecord, params: &DetectorParams, cfg: &ChunkConfig) -> crate::Result<BenchReport> {
    let start = Instant::now();
    let beats = detect_chunked(rec.samples.iter().copied(), rec.fs, params, cfg)?;
    let secs = start.elapsed().as_secs_f64();
    let samples_per_s = rec.len() as f64 / secs;
    Ok(BenchReport {
        samples: rec.len(),
        beats: beats.len(),
        detect_ms: secs * 1000.0,
        samples_per_s,
        extrapolated_14day_s: FOURTEEN_DAYS_S * rec.fs / samples_per_s,
    })
}

/// A long noisy record with slowly varying rate, for benchmarking.
pub fn bench_spec(fs: f64, days: f64, seed: u64) -> SynthSpec {
    let duration_s = days * 86_400.0;
    let rates = [62.0, 75.0, 90.0, 110.0, 84.0, 68.0];
    let seg = 600.0;
    let hr_schedule = (0..((duration_s / seg).ceil() as usize).max(1))
        .map(|k| (seg, rates[k % rates.len()]))
        .collect();
    SynthSpec {
        hr_schedule,
        t_wave: Some(TWave::default()),
        ..SynthSpec::constant(fs, duration_s, 60.0).with_noise(0.05, seed)
    }
}

fn cmd_bench(a: &BenchArgs) -> CliResult<()> {
    let params = a.params.resolve();
    params.validate().map_err(CliError::config)?;
    let rec = match &a.input {
        Some(path) => read_signal(path, a.format, Some(a.fs), 0, 0, None)?,
        None => {
            if !(a.days > 0.0) {
                return Err(CliError::config(Error::InvalidParam(format!(
                    "days must be positive, got {}",
                    a.days
                ))));
            }
            synth::generate(&bench_spec(a.fs, a.days, a.seed)).map_err(CliError::config)?.0
        }
    };
    check_params(&params, rec.fs)?;
    let cfg = a.chunk.config();
    cfg.validate(&params, rec.fs).map_err(CliError::config)?;
    let r = bench_record(&rec, &params, &cfg)?;
    eprintln!(
        "{} samples in {:.1} ms ({:.3e} samples/s); 14 days at {} Hz would take ~{:.1} s",
        r.samples, r.detect_ms, r.samples_per_s, rec.fs, r.extrapolated_14day_s
    );
    emit(&format!(
        "samples,beats,detect_ms,samples_per_s,extrapolated_14day_s\n{},{},{:.3},{:.1},{:.3}\n",
        r.samples, r.beats, r.detect_ms, r.samples_per_s, r.extrapolated_14day_s
    ))
}

fn cmd_dump(a: &DumpArgs) -> CliResult<()> {
    let params = a.params.resolve();
    params.validate().map_err(CliError::config)?;
    let rec = read_input(&a.input)?;
    check_params(&params, rec.fs)?;
    let det = detect_with(&rec, &params, true)?;
    let ev = det.evidence.expect("evidence requested");
    io::write_signal_dump(&ev, &a.output)?;
    emit(&format!("beats,{}\n", det.beats.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults_resolve_to_detector_defaults() {
        assert_eq!(ParamArgs::default().resolve(), DetectorParams::default());
    }

    #[test]
    fn schedule_parsing() {
        assert_eq!(parse_schedule("60:60,60:120").unwrap(), vec![(60.0, 60.0), (60.0, 120.0)]);
        assert!(parse_schedule("60").is_err());
        assert!(parse_schedule("a:60").is_err());
    }
}
