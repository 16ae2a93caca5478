//! Beat-by-beat comparison against reference annotations.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::record::{BeatList, EcgRecord};

pub const DEFAULT_GRACE_MS: f64 = 150.0;

/// Counts, pairs, and derived percentages for one comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    /// `(annotation index, prediction index)` positions into the input lists.
    pub pairs: Vec<(usize, usize)>,
    pub se: f64,
    pub ppv: f64,
    pub f1: f64,
    pub grace_ms: f64,
}

/// Sensitivity, positive predictive value, and their harmonic mean, in percent.
///
/// With no annotations SE is 100; with no predictions PPV is 100; F1 is 0
/// when both SE and PPV are 0.
pub fn metrics(tp: usize, fp: usize, fn_: usize) -> (f64, f64, f64) {
    let pct = |num: usize, den: usize| {
        if den == 0 {
            100.0
        } else {
            100.0 * num as f64 / den as f64
        }
    };
    let se = pct(tp, tp + fn_);
    let ppv = pct(tp, tp + fp);
    let f1 = if se + ppv == 0.0 {
        0.0
    } else {
        2.0 * se * ppv / (se + ppv)
    };
    (se, ppv, f1)
}

/// Grace period in whole samples.
pub fn grace_samples(grace_ms: f64, fs: f64) -> usize {
    (grace_ms * fs / 1000.0).round().max(0.0) as usize
}

/// Matches predictions to annotations with a single time-ordered sweep.
///
/// When the current annotation and prediction are within the grace period
/// (inclusive) they are paired and both advance; otherwise the earlier of the
/// two is counted as unmatched and skipped.
pub fn match_beats(ann: &BeatList, pred: &BeatList, grace_ms: f64) -> Result<MatchReport> {
    if ann.fs != pred.fs {
        return Err(Error::InvalidParam(format!(
            "sampling rates differ: annotations {} Hz, predictions {} Hz",
            ann.fs, pred.fs
        )));
    }
    if !(grace_ms >= 0.0) {
        return Err(Error::InvalidParam(format!("grace must be >= 0 ms, got {grace_ms}")));
    }
    let grace = grace_samples(grace_ms, ann.fs);
    let (a, p) = (ann.indices(), pred.indices());
    let (mut i, mut j) = (0, 0);
    let mut pairs = Vec::new();
    while i < a.len() && j < p.len() {
        if a[i].abs_diff(p[j]) <= grace {
            pairs.push((i, j));
            i += 1;
            j += 1;
        } else if a[i] < p[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    let tp = pairs.len();
    let fp = p.len() - tp;
    let fn_ = a.len() - tp;
    let (se, ppv, f1) = metrics(tp, fp, fn_);
    Ok(MatchReport {
        tp,
        fp,
        fn_,
        pairs,
        se,
        ppv,
        f1,
        grace_ms,
    })
}

/// One entry of an evaluation corpus.
#[derive(Debug, Clone)]
pub struct CorpusRecord {
    pub id: String,
    /// `None` marks a record flagged unreadable; it is excluded and listed.
    pub record: Option<EcgRecord>,
    pub annotations: BeatList,
}

/// Per-record results of a corpus run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordResult {
    pub record_id: String,
    pub n_beats: usize,
    pub report: MatchReport,
    pub detect_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusReport {
    pub records: Vec<RecordResult>,
    /// Counts summed over records before computing percentages.
    pub pooled: MatchReport,
    pub excluded: Vec<String>,
    pub mean_detect_ms: f64,
}

/// Runs `detector` on every readable record and pools the counts.
///
/// Detection time excludes reading. A detector failure aborts the run with
/// the record id attached.
pub fn evaluate_corpus<D>(records: &[CorpusRecord], detector: D, grace_ms: f64) -> Result<CorpusReport>
where
    D: Fn(&EcgRecord) -> Result<BeatList>,
{
    if records.is_empty() {
        return Err(Error::InvalidParam("empty corpus".into()));
    }
    let mut out = Vec::new();
    let mut excluded = Vec::new();
    for r in records {
        let Some(rec) = &r.record else {
            excluded.push(r.id.clone());
            continue;
        };
        let start = Instant::now();
        let pred = detector(rec).map_err(|e| Error::Record {
            id: r.id.clone(),
            source: Box::new(e),
        })?;
        let detect_ms = start.elapsed().as_secs_f64() * 1000.0;
        let report = match_beats(&r.annotations, &pred, grace_ms).map_err(|e| Error::Record {
            id: r.id.clone(),
            source: Box::new(e),
        })?;
        out.push(RecordResult {
            record_id: r.id.clone(),
            n_beats: r.annotations.len(),
            report,
            detect_ms,
        });
    }
    let pooled = pool(out.iter().map(|r| &r.report), grace_ms);
    let mean_detect_ms = if out.is_empty() {
        0.0
    } else {
        out.iter().map(|r| r.detect_ms).sum::<f64>() / out.len() as f64
    };
    Ok(CorpusReport {
        records: out,
        pooled,
        excluded,
        mean_detect_ms,
    })
}

/// Sums counts across reports and recomputes the percentages.
pub fn pool<'a>(reports: impl Iterator<Item = &'a MatchReport>, grace_ms: f64) -> MatchReport {
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for r in reports {
        tp += r.tp;
        fp += r.fp;
        fn_ += r.fn_;
    }
    let (se, ppv, f1) = metrics(tp, fp, fn_);
    MatchReport {
        tp,
        fp,
        fn_,
        pairs: Vec::new(),
        se,
        ppv,
        f1,
        grace_ms,
    }
}

pub const CSV_HEADER: &str = "record_id,n_beats,tp,fp,fn,se,ppv,f1,detect_ms";

impl CorpusReport {
    /// CSV with one row per record, a `pooled` row, and `# excluded:` footer lines.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{CSV_HEADER}");
        for r in &self.records {
            let m = &r.report;
            let _ = writeln!(
                s,
                "{},{},{},{},{},{:.4},{:.4},{:.4},{:.3}",
                r.record_id, r.n_beats, m.tp, m.fp, m.fn_, m.se, m.ppv, m.f1, r.detect_ms
            );
        }
        let m = &self.pooled;
        let n: usize = self.records.iter().map(|r| r.n_beats).sum();
        let _ = writeln!(
            s,
            "pooled,{},{},{},{},{:.4},{:.4},{:.4},{:.3}",
            n, m.tp, m.fp, m.fn_, m.se, m.ppv, m.f1, self.mean_detect_ms
        );
        for id in &self.excluded {
            let _ = writeln!(s, "# excluded: {id}");
        }
        s
    }

    /// Aligned plain-text table of the same content.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<[String; 9]> = vec![[
            "record".into(),
            "beats".into(),
            "TP".into(),
            "FP".into(),
            "FN".into(),
            "SE%".into(),
            "PPV%".into(),
            "F1%".into(),
            "ms".into(),
        ]];
        let fmt = |id: &str, n: usize, m: &MatchReport, ms: f64| -> [String; 9] {
            [
                id.to_string(),
                n.to_string(),
                m.tp.to_string(),
                m.fp.to_string(),
                m.fn_.to_string(),
                format!("{:.2}", m.se),
                format!("{:.2}", m.ppv),
                format!("{:.2}", m.f1),
                format!("{ms:.1}"),
            ]
        };
        for r in &self.records {
            rows.push(fmt(&r.record_id, r.n_beats, &r.report, r.detect_ms));
        }
        let n: usize = self.records.iter().map(|r| r.n_beats).sum();
        rows.push(fmt("pooled", n, &self.pooled, self.mean_detect_ms));

        let mut widths = [0usize; 9];
        for row in &rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut s = String::new();
        for row in &rows {
            let line: Vec<String> = row
                .iter()
                .zip(widths)
                .enumerate()
                .map(|(k, (c, w))| if k == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            let _ = writeln!(s, "{}", line.join("  ").trim_end());
        }
        if !self.excluded.is_empty() {
            let _ = writeln!(s, "excluded (unreadable): {}", self.excluded.join(", "));
        }
        s
    }
}
