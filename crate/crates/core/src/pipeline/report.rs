use std::fmt::Display;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use super::GroupReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    JsonLines,
    Tsv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" | "json-lines" => Ok(ReportFormat::JsonLines),
            "tsv" => Ok(ReportFormat::Tsv),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

pub const TSV_COLUMNS: [&str; 19] = [
    "id",
    "provenance",
    "balanced",
    "order_tc",
    "order_kb",
    "order_pq",
    "exponent_p_class",
    "series_orders",
    "abelian_invariants",
    "d_mod_2",
    "multiplier_trivial",
    "multiplicator_rank",
    "tc_ms",
    "kb_ms",
    "abelian_ms",
    "pq_ms",
    "multiplier_ms",
    "verdict",
    "problems",
];

fn list<T: Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn optional<T: Display>(x: &Option<T>) -> String {
    x.as_ref()
        .map_or_else(|| "-".to_string(), ToString::to_string)
}

fn tsv_row(r: &GroupReport) -> String {
    let t = &r.timings;
    [
        r.id.clone(),
        r.provenance.clone(),
        r.balanced.to_string(),
        r.order_tc.to_string(),
        r.order_kb.to_string(),
        r.order_pq.to_string(),
        optional(&r.exponent_p_class),
        list(&r.series_orders),
        list(&r.abelian_invariants),
        r.d_mod_2.to_string(),
        optional(&r.multiplier_trivial),
        optional(&r.multiplicator_rank),
        t.tc_ms.to_string(),
        t.kb_ms.to_string(),
        t.abelian_ms.to_string(),
        t.pq_ms.to_string(),
        t.multiplier_ms.to_string(),
        r.verdict.to_string(),
        r.problems.join("; "),
    ]
    .map(|field| field.replace(['\t', '\n'], " "))
    .join("\t")
}

/// Writes one line per report: a JSON object, or a TSV row after a header
/// line. An empty report list writes nothing.
pub fn emit_report(
    reports: &[GroupReport],
    format: ReportFormat,
    out: &mut impl Write,
) -> io::Result<()> {
    if reports.is_empty() {
        return Ok(());
    }
    match format {
        ReportFormat::JsonLines => {
            for r in reports {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
        }
        ReportFormat::Tsv => {
            writeln!(out, "{}", TSV_COLUMNS.join("\t"))?;
            for r in reports {
                writeln!(out, "{}", tsv_row(r))?;
            }
        }
    }
    out.flush()
}

pub fn write_report(reports: &[GroupReport], format: ReportFormat, path: &Path) -> io::Result<()> {
    let mut file = io::BufWriter::new(std::fs::File::create(path)?);
    emit_report(reports, format, &mut file)
}
