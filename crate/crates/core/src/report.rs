//! Serialized verification reports: JSON, CSV and plain text.
//!
//! Every report carries the fixtures version so that a change of sign
//! conventions shows up in the output. Files are written atomically.

use std::fmt::{self, Write as _};
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::invariants::fixtures_version;
use crate::solver::{GradedReport, ReportRow};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "txt",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<OutputFormat> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" | "txt" => Ok(OutputFormat::Text),
            _ => Err(Error::Parse(format!("unknown output format {s:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
        })
    }
}

/// The on-disk shape of a [`GradedReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub family: String,
    #[serde(rename = "dimV")]
    pub dim_v: [usize; 2],
    pub copies: [usize; 4],
    pub max_degree: u32,
    pub rows: Vec<ReportRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub fixtures_version: String,
}

impl ReportDocument {
    pub fn new(report: &GradedReport) -> ReportDocument {
        let c = &report.config;
        ReportDocument {
            family: c.spec.family.to_string(),
            dim_v: [c.spec.n, c.spec.m],
            copies: c.copies.as_array(),
            max_degree: c.max_degree,
            rows: report.rows.clone(),
            notes: report.notes.clone(),
            fixtures_version: fixtures_version(),
        }
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

pub fn to_json(doc: &ReportDocument) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<ReportDocument> {
    Ok(serde_json::from_str(text)?)
}

/// One line per degree under a header; report-level fields repeat on each row.
pub fn to_csv(doc: &ReportDocument) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "family",
        "dimV",
        "copies",
        "max_degree",
        "degree",
        "dim_invariants",
        "dim_closure",
        "pass",
        "fixtures_version",
    ])?;
    let dim_v = format!("{},{}", doc.dim_v[0], doc.dim_v[1]);
    let copies = doc.copies.map(|c| c.to_string()).join(",");
    for r in &doc.rows {
        w.write_record([
            doc.family.as_str(),
            &dim_v,
            &copies,
            &doc.max_degree.to_string(),
            &r.degree.to_string(),
            &r.dim_invariants.to_string(),
            &r.dim_closure.to_string(),
            &r.pass.to_string(),
            &doc.fixtures_version,
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

pub fn to_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let [n, m] = doc.dim_v;
    let [k, l, p, q] = doc.copies;
    writeln!(
        out,
        "family {} on V = ({n}|{m}), copies k={k} l={l} p={p} q={q}, degrees 0..={}",
        doc.family, doc.max_degree
    )
    .unwrap();
    writeln!(out, "fixtures {}", doc.fixtures_version).unwrap();
    writeln!(
        out,
        "{:>6} {:>10} {:>8}  result",
        "degree", "invariants", "closure"
    )
    .unwrap();
    for r in &doc.rows {
        let verdict = if r.pass { "ok" } else { "DEFICIT" };
        writeln!(
            out,
            "{:>6} {:>10} {:>8}  {verdict}",
            r.degree, r.dim_invariants, r.dim_closure
        )
        .unwrap();
    }
    for note in &doc.notes {
        writeln!(out, "note: {note}").unwrap();
    }
    writeln!(out, "{}", if doc.passed() { "PASS" } else { "FAIL" }).unwrap();
    out
}

pub fn render(doc: &ReportDocument, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(doc),
        OutputFormat::Csv => to_csv(doc),
        OutputFormat::Text => Ok(to_text(doc)),
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory,
/// so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn write_report(doc: &ReportDocument, format: OutputFormat, path: &Path) -> Result<()> {
    write_atomic(path, &render(doc, format)?)
}
