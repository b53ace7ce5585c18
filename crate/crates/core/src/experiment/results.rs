//! The results table: one row per (setting, sequence, repetition, epoch).

use std::io::{Read, Write};
use std::path::Path;

use crate::ea::{EpochRecord, Operator};
use crate::tour::Tour;
use crate::error::{Error, Result};

pub const RESULTS_HEADER: [&str; 14] = [
    "instance",
    "mu",
    "operator",
    "tau",
    "L",
    "U",
    "c",
    "seq_id",
    "rep_id",
    "epoch",
    "best_cost",
    "baseline_cost",
    "perf",
    "evals_used",
];

/// A results row. Rows for settings that failed carry `None` in every
/// measured field and are written as `NA`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub instance: String,
    pub mu: usize,
    pub operator: Operator,
    pub tau: u64,
    pub lower: u32,
    pub upper: u32,
    pub c: u32,
    pub seq_id: usize,
    pub rep_id: usize,
    pub epoch: Option<usize>,
    pub best_cost: Option<f64>,
    pub baseline_cost: Option<f64>,
    pub perf: Option<f64>,
    pub evals_used: Option<u64>,
}

impl ResultRow {
    pub fn is_diagnostic(&self) -> bool {
        self.epoch.is_none()
    }

    fn to_record(&self) -> Vec<String> {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map_or_else(|| "NA".to_string(), |v| v.to_string())
        }
        fn optf(v: Option<f64>) -> String {
            v.map_or_else(|| "NA".to_string(), format_float)
        }
        vec![
            self.instance.clone(),
            self.mu.to_string(),
            self.operator.to_string(),
            self.tau.to_string(),
            self.lower.to_string(),
            self.upper.to_string(),
            self.c.to_string(),
            self.seq_id.to_string(),
            self.rep_id.to_string(),
            opt(self.epoch),
            optf(self.best_cost),
            optf(self.baseline_cost),
            optf(self.perf),
            opt(self.evals_used),
        ]
    }
}

/// Formats like C's `%.6g`: six significant digits, trailing zeros dropped.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_results_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io_err = |e: csv::Error| Error::validation(format!("writing results: {e}"));
    w.write_record(RESULTS_HEADER).map_err(io_err)?;
    for row in rows {
        w.write_record(row.to_record()).map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::validation(format!("writing results: {e}")))?;
    Ok(())
}

/// Reads a results table written by [`write_results_csv`].
pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_results(file, path)
}

pub(crate) fn read_results<R: Read>(input: R, path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = r.headers().map_err(|e| Error::parse(path, 1, e.to_string()))?.clone();
    if headers.iter().ne(RESULTS_HEADER.iter().copied()) {
        return Err(Error::parse(path, 1, format!("expected header {}", RESULTS_HEADER.join(","))));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::parse(path, line, e.to_string()))?;
        let field = |k: usize| rec.get(k).unwrap_or("");
        fn req<T: std::str::FromStr>(s: &str, name: &str, path: &Path, line: usize) -> Result<T> {
            s.parse().map_err(|_| Error::parse(path, line, format!("bad {name} value {s:?}")))
        }
        fn opt<T: std::str::FromStr>(s: &str, name: &str, path: &Path, line: usize) -> Result<Option<T>> {
            if s == "NA" {
                Ok(None)
            } else {
                req(s, name, path, line).map(Some)
            }
        }
        rows.push(ResultRow {
            instance: field(0).to_string(),
            mu: req(field(1), "mu", path, line)?,
            operator: field(2).parse().map_err(|_| Error::parse(path, line, format!("bad operator {:?}", field(2))))?,
            tau: req(field(3), "tau", path, line)?,
            lower: req(field(4), "L", path, line)?,
            upper: req(field(5), "U", path, line)?,
            c: req(field(6), "c", path, line)?,
            seq_id: req(field(7), "seq_id", path, line)?,
            rep_id: req(field(8), "rep_id", path, line)?,
            epoch: opt(field(9), "epoch", path, line)?,
            best_cost: opt(field(10), "best_cost", path, line)?,
            baseline_cost: opt(field(11), "baseline_cost", path, line)?,
            perf: opt(field(12), "perf", path, line)?,
            evals_used: opt(field(13), "evals_used", path, line)?,
        });
    }
    Ok(rows)
}

pub const RUN_HEADER: [&str; 4] = ["epoch", "best_cost", "evals_used", "tour"];

/// Writes a single run's epoch records; tours are space-separated 1-based ids.
pub fn write_run_csv<W: Write>(records: &[EpochRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let err = |e: csv::Error| Error::validation(format!("writing run: {e}"));
    w.write_record(RUN_HEADER).map_err(err)?;
    for r in records {
        w.write_record([
            r.epoch.to_string(),
            format_float(r.best_cost),
            r.evals_used.to_string(),
            r.best_tour.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::validation(format!("writing run: {e}")))?;
    Ok(())
}

pub fn read_run_csv(path: &Path) -> Result<Vec<EpochRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let headers = r.headers().map_err(|e| Error::parse(path, 1, e.to_string()))?.clone();
    if headers.iter().ne(RUN_HEADER.iter().copied()) {
        return Err(Error::parse(path, 1, format!("expected header {}", RUN_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::parse(path, line, e.to_string()))?;
        let bad = |what: &str| Error::parse(path, line, format!("bad {what}"));
        let ids: Vec<usize> = rec[3]
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("tour")))
            .collect::<Result<_>>()?;
        out.push(EpochRecord {
            epoch: rec[0].parse().map_err(|_| bad("epoch"))?,
            best_cost: rec[1].parse().map_err(|_| bad("best_cost"))?,
            evals_used: rec[2].parse().map_err(|_| bad("evals_used"))?,
            best_tour: Tour::from_one_based(&ids).map_err(|e| Error::parse(path, line, e.to_string()))?,
        });
    }
    Ok(out)
}
