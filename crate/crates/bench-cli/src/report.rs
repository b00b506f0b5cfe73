//! Benchmark report rows and their CSV/JSON encodings.
//!
//! Floats are written in their shortest round-trip form (times in
//! scientific notation), so the CSV and JSON encodings of one run hold
//! identical values.

use std::io::Write;

use serde::{Deserialize, Serialize};

/// One benchmark cell.
///
/// `setup_seconds` covers dataset generation and planning; there is no
/// device, so it stands in for host/device transfer time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReportRow {
    pub kernel: String,
    pub terms: usize,
    pub items: u64,
    pub kernel_seconds: f64,
    /// Translation reduction time; FMM kernels only.
    pub reduction_seconds: Option<f64>,
    pub setup_seconds: f64,
    pub gops: f64,
    pub gbps: f64,
    pub items_per_second: f64,
    /// Present when an oracle check ran.
    pub max_rel_error: Option<f64>,
    pub threads: usize,
    pub precision: String,
}

pub const CSV_HEADER: [&str; 12] = [
    "kernel",
    "terms",
    "items",
    "kernel_seconds",
    "reduction_seconds",
    "setup_seconds",
    "gops",
    "gbps",
    "items_per_second",
    "max_rel_error",
    "threads",
    "precision",
];

fn sci(x: f64) -> String {
    format!("{x:e}")
}

fn opt(x: Option<f64>, f: fn(f64) -> String) -> String {
    x.map(f).unwrap_or_default()
}

impl BenchReportRow {
    pub fn csv_record(&self) -> [String; 12] {
        [
            self.kernel.clone(),
            self.terms.to_string(),
            self.items.to_string(),
            sci(self.kernel_seconds),
            opt(self.reduction_seconds, sci),
            sci(self.setup_seconds),
            self.gops.to_string(),
            self.gbps.to_string(),
            self.items_per_second.to_string(),
            opt(self.max_rel_error, sci),
            self.threads.to_string(),
            self.precision.clone(),
        ]
    }

    pub fn from_csv_record(rec: &csv::StringRecord) -> Result<Self, String> {
        if rec.len() != CSV_HEADER.len() {
            return Err(format!("expected {} fields, got {}", CSV_HEADER.len(), rec.len()));
        }
        let f = |i: usize| -> Result<f64, String> {
            rec[i].parse().map_err(|e| format!("{}: {e}", CSV_HEADER[i]))
        };
        let of = |i: usize| -> Result<Option<f64>, String> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                f(i).map(Some)
            }
        };
        let u = |i: usize| -> Result<u64, String> {
            rec[i].parse().map_err(|e| format!("{}: {e}", CSV_HEADER[i]))
        };
        Ok(Self {
            kernel: rec[0].to_string(),
            terms: u(1)? as usize,
            items: u(2)?,
            kernel_seconds: f(3)?,
            reduction_seconds: of(4)?,
            setup_seconds: f(5)?,
            gops: f(6)?,
            gbps: f(7)?,
            items_per_second: f(8)?,
            max_rel_error: of(9)?,
            threads: u(10)? as usize,
            precision: rec[11].to_string(),
        })
    }
}

/// JSON document: the parsed command configuration, the rows, and the
/// library version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: serde_json::Value,
    pub rows: Vec<BenchReportRow>,
    pub library_version: String,
}

pub fn write_csv(rows: &[BenchReportRow], out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(text: &str) -> Result<Vec<BenchReportRow>, String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(format!("unexpected header {header:?}"));
    }
    r.records()
        .map(|rec| rec.map_err(|e| e.to_string()).and_then(|rec| BenchReportRow::from_csv_record(&rec)))
        .collect()
}

pub fn write_json(report: &Report, mut out: impl Write) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> BenchReportRow {
        BenchReportRow {
            kernel: "m2l".into(),
            terms: 8,
            items: 2_359_152,
            kernel_seconds: 1.44e-2,
            reduction_seconds: Some(3.1e-3),
            setup_seconds: 0.1 + 0.2,
            gops: 1.0 / 3.0,
            gbps: 12.5,
            items_per_second: 2_359_152.0 / 1.44e-2,
            max_rel_error: None,
            threads: 4,
            precision: "f32".into(),
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut buf = Vec::new();
        write_csv(&[row()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("kernel,terms,items,kernel_seconds,"));
        assert!(text.contains("1.44e-2"));
        assert_eq!(read_csv(&text).unwrap(), vec![row()]);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let report = Report {
            config: serde_json::json!({"terms": [8]}),
            rows: vec![row()],
            library_version: "0.1.0".into(),
        };
        let mut buf = Vec::new();
        write_json(&report, &mut buf).unwrap();
        let back: Report = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, report);
    }
}
