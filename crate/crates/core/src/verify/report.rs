//! Report rows, serialization, and per-claim digests.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::{format_rational, Rational};

/// Where a row was evaluated. Field order is the sort order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "crate::exact::serde_rational")]
    pub alpha: Rational,
    #[serde(with = "crate::exact::serde_rational")]
    pub beta: Rational,
    #[serde(with = "crate::exact::serde_rational")]
    pub gamma: Rational,
    #[serde(with = "crate::exact::serde_rational")]
    pub x: Rational,
    pub lambda: usize,
    pub r: usize,
    pub n: usize,
    pub f: Option<usize>,
    pub m: Option<usize>,
    pub delta: Option<usize>,
}

impl fmt::Display for Point {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "alpha={} beta={} gamma={} x={} lambda={} r={} n={}",
            format_rational(&self.alpha),
            format_rational(&self.beta),
            format_rational(&self.gamma),
            format_rational(&self.x),
            self.lambda,
            self.r,
            self.n
        )?;
        if let Some(f) = self.f {
            write!(out, " f={f}")?;
        }
        if let Some(m) = self.m {
            write!(out, " m={m}")?;
        }
        if let Some(d) = self.delta {
            write!(out, " delta={d}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Equal,
    Unequal,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Equal => "EQUAL",
            Self::Unequal => "UNEQUAL",
            Self::Skipped => "SKIPPED",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated (claim, point) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub claim: String,
    pub point: Point,
    #[serde(with = "crate::exact::serde_rational_opt")]
    pub lhs: Option<Rational>,
    #[serde(with = "crate::exact::serde_rational_opt")]
    pub rhs: Option<Rational>,
    pub status: Status,
    /// Whether equality is required here; a strict row that is not EQUAL is a failure.
    pub strict: bool,
    pub note: String,
}

impl Row {
    pub fn compared(claim: &str, point: Point, lhs: Rational, rhs: Rational, strict: bool, note: String) -> Self {
        let status = if lhs == rhs { Status::Equal } else { Status::Unequal };
        Self {
            claim: claim.to_string(),
            point,
            lhs: Some(lhs),
            rhs: Some(rhs),
            status,
            strict,
            note,
        }
    }

    pub fn skipped(claim: &str, point: Point, strict: bool, note: String) -> Self {
        Self {
            claim: claim.to_string(),
            point,
            lhs: None,
            rhs: None,
            status: Status::Skipped,
            strict,
            note,
        }
    }

    pub fn is_failure(&self) -> bool {
        self.strict && self.status != Status::Equal
    }
}

/// Rows ordered by claim id, then point.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub rows: Vec<Row>,
}

impl VerificationReport {
    pub fn new(mut rows: Vec<Row>) -> Self {
        rows.sort_by(|a, b| (&a.claim, &a.point).cmp(&(&b.claim, &b.point)));
        Self { rows }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.is_failure())
    }

    /// True when every strict row is EQUAL.
    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn claim_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.rows.iter().map(|r| r.claim.as_str()).collect();
        ids.dedup();
        ids
    }

    pub fn rows_for<'a>(&'a self, claim: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.claim == claim)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "markdown" | "md" => Ok(Self::Markdown),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize)]
struct CsvRecord<'a> {
    claim: &'a str,
    alpha: String,
    beta: String,
    gamma: String,
    x: String,
    lambda: usize,
    r: usize,
    n: usize,
    f: Option<usize>,
    m: Option<usize>,
    delta: Option<usize>,
    lhs: Option<String>,
    rhs: Option<String>,
    status: &'static str,
    strict: bool,
    note: &'a str,
}

const CSV_HEADER: [&str; 16] = [
    "claim", "alpha", "beta", "gamma", "x", "lambda", "r", "n", "f", "m", "delta", "lhs", "rhs", "status", "strict",
    "note",
];

fn ser_err(e: impl fmt::Display) -> Error {
    Error::Serialization(e.to_string())
}

/// Serializes a report. Output is a pure function of the report.
pub fn emit_report(report: &VerificationReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(ser_err)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(CSV_HEADER).map_err(ser_err)?;
            for row in &report.rows {
                let p = &row.point;
                w.serialize(CsvRecord {
                    claim: &row.claim,
                    alpha: format_rational(&p.alpha),
                    beta: format_rational(&p.beta),
                    gamma: format_rational(&p.gamma),
                    x: format_rational(&p.x),
                    lambda: p.lambda,
                    r: p.r,
                    n: p.n,
                    f: p.f,
                    m: p.m,
                    delta: p.delta,
                    lhs: row.lhs.as_ref().map(format_rational),
                    rhs: row.rhs.as_ref().map(format_rational),
                    status: row.status.as_str(),
                    strict: row.strict,
                    note: &row.note,
                })
                .map_err(ser_err)?;
            }
            w.into_inner().map_err(ser_err)
        }
        Format::Markdown => Ok(markdown(report).into_bytes()),
    }
}

/// Inverse of the JSON emitter.
pub fn parse_report_json(bytes: &[u8]) -> Result<VerificationReport> {
    serde_json::from_slice(bytes).map_err(ser_err)
}

fn markdown(report: &VerificationReport) -> String {
    let opt = |v: &Option<Rational>| v.as_ref().map(format_rational).unwrap_or_default();
    let mut out = String::from("# Verification report\n");
    if report.rows.is_empty() {
        out.push_str("\nNo rows.\n");
        return out;
    }
    for id in report.claim_ids() {
        out.push_str(&format!(
            "\n## {id}\n\n| point | lhs | rhs | status | strict | note |\n|---|---|---|---|---|---|\n"
        ));
        for row in report.rows_for(id) {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} |\n",
                row.point,
                opt(&row.lhs),
                opt(&row.rhs),
                row.status,
                if row.strict { "yes" } else { "no" },
                row.note.replace('|', "\\|")
            ));
        }
    }
    out
}

/// Outcome counts and a content digest for one claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub rows: usize,
    pub equal: usize,
    pub unequal: usize,
    pub skipped: usize,
    pub strict_failures: usize,
    /// SHA-256 of the claim's rows as compact JSON.
    pub digest: String,
}

/// Per-claim summaries keyed by claim id.
pub fn summarize(report: &VerificationReport) -> Result<BTreeMap<String, ClaimSummary>> {
    let mut out = BTreeMap::new();
    for id in report.claim_ids() {
        let rows: Vec<&Row> = report.rows_for(id).collect();
        let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
        let bytes = serde_json::to_vec(&rows).map_err(ser_err)?;
        out.insert(
            id.to_string(),
            ClaimSummary {
                rows: rows.len(),
                equal: count(Status::Equal),
                unequal: count(Status::Unequal),
                skipped: count(Status::Skipped),
                strict_failures: rows.iter().filter(|r| r.is_failure()).count(),
                digest: hex::encode(Sha256::digest(&bytes)),
            },
        );
    }
    Ok(out)
}
