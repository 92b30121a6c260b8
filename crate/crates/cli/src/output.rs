//! Report rows rendered as a table or CSV.

use std::fmt::Write as _;

use bmlab::rational::format_rational;
use bmlab::report::{show_enclosure, CheckReport};
use bmlab::CertifiedReal;
use serde::{Deserialize, Serialize};

const DIGITS: usize = 20;

/// One checker result. `*_lo` and `*_hi` hold the exact rational endpoints,
/// `lhs` and `rhs` the readable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub inequality_id: String,
    pub verdict: String,
    pub lhs: String,
    pub rhs: String,
    pub slack: String,
    pub lhs_lo: String,
    pub lhs_hi: String,
    pub rhs_lo: String,
    pub rhs_hi: String,
    pub slack_lo: String,
    pub slack_hi: String,
    pub runtime_ms: u64,
}

fn shown(x: &CertifiedReal) -> String {
    match x.exact_value() {
        Some(_) => show_enclosure(x, DIGITS),
        None => x.to_decimal_string(DIGITS),
    }
}

impl ReportRow {
    pub fn from_report(r: &CheckReport, timing: bool) -> Self {
        ReportRow {
            inequality_id: r.inequality_id.clone(),
            verdict: r.verdict.to_string(),
            lhs: shown(&r.lhs),
            rhs: shown(&r.rhs),
            slack: shown(&r.slack),
            lhs_lo: format_rational(r.lhs.lo()),
            lhs_hi: format_rational(r.lhs.hi()),
            rhs_lo: format_rational(r.rhs.lo()),
            rhs_hi: format_rational(r.rhs.hi()),
            slack_lo: format_rational(r.slack.lo()),
            slack_hi: format_rational(r.slack.hi()),
            runtime_ms: if timing { r.runtime_ms } else { 0 },
        }
    }
}

pub fn write_csv(rows: &[ReportRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

/// Parses CSV written by [`write_csv`]; `#` lines are skipped.
pub fn read_csv(text: &str) -> Result<Vec<ReportRow>, csv::Error> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
        .deserialize()
        .collect()
}

pub fn write_table(r: &CheckReport, row: &ReportRow) -> String {
    let mut s = String::new();
    let w = r.witness.iter().map(|(k, _)| k.chars().count() + 4).max().unwrap_or(0).max(14);
    let mut line = |k: &str, v: &str| writeln!(s, "{k:<w$}{v}").unwrap();
    line("inequality", &row.inequality_id);
    line("verdict", &row.verdict);
    line("lhs", &row.lhs);
    line("rhs", &row.rhs);
    line("slack", &row.slack);
    line("runtime_ms", &row.runtime_ms.to_string());
    for (k, v) in &r.witness {
        line(&format!("  {k}"), v);
    }
    s
}
