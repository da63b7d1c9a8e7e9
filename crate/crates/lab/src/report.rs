//! Report serialization: JSON, CSV (one row per estimate) and a text table.

use ontic_core::CheckReport;
use serde::Serialize;

use crate::config::OutputFormat;

#[derive(Serialize)]
struct CsvRow<'a> {
    check_name: &'a str,
    model_name: &'a str,
    verdict: &'a str,
    label: &'a str,
    mean: Option<f64>,
    std_error: Option<f64>,
    tolerance: f64,
    n_samples: u64,
    seed: u64,
    duration_ms: u64,
}

pub fn emit_report(reports: &[CheckReport], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(reports),
        OutputFormat::Csv => to_csv(reports),
        OutputFormat::Text => to_text(reports),
    }
}

fn to_json(reports: &[CheckReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

/// A report without estimates still gets one row, with the estimate
/// columns empty, so its verdict shows up.
fn to_csv(reports: &[CheckReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        let row = |label, mean, std_error| CsvRow {
            check_name: &r.check_name,
            model_name: &r.model_name,
            verdict: r.verdict.as_str(),
            label,
            mean,
            std_error,
            tolerance: r.tolerance,
            n_samples: r.n_samples,
            seed: r.seed,
            duration_ms: r.duration_ms,
        };
        if r.estimates.is_empty() {
            w.serialize(row("", None, None)).expect("in-memory write");
        }
        for e in &r.estimates {
            w.serialize(row(&e.label, Some(e.mean), Some(e.std_error)))
                .expect("in-memory write");
        }
    }
    if reports.is_empty() {
        return String::new();
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

fn to_text(reports: &[CheckReport]) -> String {
    let header = [
        "check",
        "model",
        "verdict",
        "samples",
        "tolerance",
        "estimates",
        "ms",
        "details",
    ];
    let rows: Vec<[String; 8]> = reports
        .iter()
        .map(|r| {
            [
                r.check_name.clone(),
                r.model_name.clone(),
                r.verdict.to_string(),
                r.n_samples.to_string(),
                format!("{:e}", r.tolerance),
                r.estimates.len().to_string(),
                r.duration_ms.to_string(),
                r.details.clone(),
            ]
        })
        .collect();
    let mut widths = header.map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| {
                if i + 1 == cells.len() {
                    c.clone()
                } else {
                    format!("{c}{}", " ".repeat(w - c.chars().count()))
                }
            })
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(&header.map(String::from));
    for row in &rows {
        out.push_str(&line(row));
    }
    out
}
