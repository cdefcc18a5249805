//! Text renderings of a [`MetricsReport`].

use std::fmt::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::metrics::MetricsReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderFormat {
    /// Column-aligned text.
    #[default]
    Table,
    /// Pretty-printed JSON.
    Structured,
    /// Comma-separated sections (components, classes, methods), each with a
    /// header row, separated by one blank line.
    Csv,
}

impl FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(RenderFormat::Table),
            "structured" | "json" => Ok(RenderFormat::Structured),
            "csv" => Ok(RenderFormat::Csv),
            other => Err(format!("unknown format `{other}` (table, structured, csv)")),
        }
    }
}

const COMPONENT_HEADER: [&str; 4] = ["component", "wcm", "dit", "cbom"];
const CLASS_HEADER: [&str; 5] = ["class", "component", "wmc", "dit", "noc"];
const METHOD_HEADER: [&str; 5] = [
    "class",
    "method",
    "complexity",
    "cfg_complexity",
    "formula_mismatch",
];

fn rows(report: &MetricsReport) -> [Vec<Vec<String>>; 3] {
    let components = report
        .components
        .iter()
        .map(|c| {
            vec![
                c.component.clone(),
                c.wcm.to_string(),
                c.dit.to_string(),
                c.cbom.to_string(),
            ]
        })
        .collect();
    let classes = report
        .classes
        .iter()
        .map(|c| {
            vec![
                c.class.clone(),
                c.component.clone(),
                c.wmc.to_string(),
                c.dit.to_string(),
                c.noc.to_string(),
            ]
        })
        .collect();
    let methods = report
        .methods
        .iter()
        .map(|m| {
            vec![
                m.class.clone(),
                m.method.clone(),
                m.complexity.to_string(),
                m.cfg_complexity.map(|g| g.to_string()).unwrap_or_default(),
                if m.formula_mismatch { "yes" } else { "no" }.to_string(),
            ]
        })
        .collect();
    [components, classes, methods]
}

pub fn render_report(report: &MetricsReport, format: RenderFormat) -> String {
    let headers: [&[&str]; 3] = [&COMPONENT_HEADER, &CLASS_HEADER, &METHOD_HEADER];
    let sections = rows(report);
    match format {
        RenderFormat::Structured => to_json(report),
        RenderFormat::Csv => {
            let blocks: Vec<String> = headers
                .iter()
                .zip(&sections)
                .map(|(header, rows)| csv_block(header, rows))
                .collect();
            blocks.join("\n")
        }
        RenderFormat::Table => {
            let titles = ["Components", "Classes", "Methods"];
            let mut out = String::new();
            for (i, ((title, header), rows)) in
                titles.iter().zip(headers).zip(&sections).enumerate()
            {
                if i > 0 {
                    out.push('\n');
                }
                let _ = writeln!(out, "{title}");
                out.push_str(&table(header, rows));
            }
            out
        }
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("in-memory JSON serialization");
    out.push('\n');
    out
}

pub(crate) fn csv_block(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    // Writing into a Vec only fails on serializer bugs.
    writer.write_record(header).expect("csv header");
    for row in rows {
        writer.write_record(row).expect("csv row");
    }
    String::from_utf8(writer.into_inner().expect("csv flush")).expect("utf-8 csv")
}

/// Left-aligned text columns, two spaces apart. Numeric columns are
/// right-aligned.
pub(crate) fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let numeric: Vec<bool> = (0..header.len())
        .map(|i| !rows.is_empty() && rows.iter().all(|r| r[i].parse::<i64>().is_ok()))
        .collect();
    let line = |cells: Vec<&str>| {
        let mut text = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                text.push_str("  ");
            }
            if numeric[i] {
                let _ = write!(text, "{cell:>width$}", width = widths[i]);
            } else {
                let _ = write!(text, "{cell:<width$}", width = widths[i]);
            }
        }
        text.truncate(text.trim_end().len());
        text.push('\n');
        text
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}
