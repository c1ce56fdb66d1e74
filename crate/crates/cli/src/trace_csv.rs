//! CSV form of averaged traces.
//!
//! A `#` preamble records the tool version, the configuration and the seeds,
//! followed by a header row and one row per tick. Reals are printed with six
//! significant digits.

use std::io::{self, Write};
use std::path::Path;

use netslice::{MeanRecord, MeanTrace};
use thiserror::Error;

use crate::config::render_config;

pub const COLUMNS: [&str; 12] = [
    "t",
    "arrivals",
    "activated",
    "rejected",
    "u",
    "queue_len",
    "delta",
    "w",
    "free_core_hard",
    "free_core_soft",
    "free_access_hard",
    "free_access_soft",
];

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("header mismatch: expected {expected:?}, found {found:?}")]
    Header { expected: String, found: String },
    #[error("row {row}: bad value {value:?} in column {column}")]
    Value {
        row: usize,
        column: &'static str,
        value: String,
    },
}

/// Formats `x` rounded to six significant digits, shortest form.
pub fn fmt6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    rounded.to_string()
}

fn row(r: &MeanRecord) -> [String; 12] {
    [
        r.t.to_string(),
        fmt6(r.arrivals),
        fmt6(r.activated),
        fmt6(r.rejected),
        fmt6(r.u),
        fmt6(r.queue_len),
        fmt6(r.delta),
        fmt6(r.w),
        fmt6(r.free_core_hard),
        fmt6(r.free_core_soft),
        fmt6(r.free_access_hard),
        fmt6(r.free_access_soft),
    ]
}

pub fn write_trace<W: Write>(mut out: W, trace: &MeanTrace) -> Result<(), CsvError> {
    writeln!(out, "# netslice {}", env!("CARGO_PKG_VERSION"))?;
    for line in render_config(&trace.config).lines() {
        writeln!(out, "# config {line}")?;
    }
    let seeds: Vec<String> = trace.seeds.iter().map(u64::to_string).collect();
    writeln!(out, "# seeds {}", seeds.join(","))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in &trace.records {
        w.write_record(row(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes to a temporary file next to `path` and renames it into place, so a
/// failed write never leaves a partial CSV behind.
pub fn write_trace_file(path: &Path, trace: &MeanTrace) -> Result<(), CsvError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    write_trace(io::BufWriter::new(tmp.as_file_mut()), trace)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Reads the data rows of a trace CSV, ignoring the preamble.
pub fn read_records<R: io::Read>(input: R) -> Result<Vec<MeanRecord>, CsvError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(COLUMNS) {
        return Err(CsvError::Header {
            expected: COLUMNS.join(","),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let num = |col: usize| -> Result<f64, CsvError> {
            rec[col].parse().map_err(|_| CsvError::Value {
                row: i + 1,
                column: COLUMNS[col],
                value: rec[col].to_string(),
            })
        };
        let t = rec[0].parse().map_err(|_| CsvError::Value {
            row: i + 1,
            column: "t",
            value: rec[0].to_string(),
        })?;
        out.push(MeanRecord {
            t,
            arrivals: num(1)?,
            activated: num(2)?,
            rejected: num(3)?,
            u: num(4)?,
            queue_len: num(5)?,
            delta: num(6)?,
            w: num(7)?,
            free_core_hard: num(8)?,
            free_core_soft: num(9)?,
            free_access_hard: num(10)?,
            free_access_soft: num(11)?,
        });
    }
    Ok(out)
}
