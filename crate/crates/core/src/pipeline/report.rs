use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::run::{ModelSection, ModelStatus, ReportRow, RunReport};
use crate::error::{Error, Result};
use crate::unitroot::Integration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::InvalidArgument(format!("unknown format `{s}`"))),
        }
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn tables(report: &RunReport) -> Vec<(&str, Vec<&ModelSection>)> {
    let mut out: Vec<(&str, Vec<&ModelSection>)> = Vec::new();
    for s in &report.sections {
        match out.iter_mut().find(|(t, _)| *t == s.table) {
            Some((_, v)) => v.push(s),
            None => out.push((&s.table, vec![s])),
        }
    }
    out
}

/// Variables in order of first appearance across `columns`.
fn row_labels<'a>(columns: &[(&'a ModelSection, &'a [ReportRow])]) -> Vec<&'a str> {
    let mut labels: Vec<&str> = Vec::new();
    for (_, rows) in columns {
        for r in *rows {
            if !labels.contains(&r.variable.as_str()) {
                labels.push(&r.variable);
            }
        }
    }
    labels
}

fn markdown_grid(out: &mut String, columns: &[(&ModelSection, &[ReportRow])]) {
    let labels = row_labels(columns);
    out.push_str("| variable |");
    for (s, _) in columns {
        let _ = write!(out, " {} |", s.column);
    }
    out.push_str("\n|---|");
    for _ in columns {
        out.push_str("---|");
    }
    out.push('\n');
    for label in labels {
        let _ = write!(out, "| {label} |");
        for (_, rows) in columns {
            let cell = rows
                .iter()
                .find(|r| r.variable == label)
                .map(|r| r.cell.as_str())
                .unwrap_or("");
            let _ = write!(out, " {cell} |");
        }
        out.push('\n');
    }
}

fn conclusion_text(s: &ModelSection, level: f64) -> String {
    s.bounds
        .as_ref()
        .and_then(|b| b.conclusion_at(level))
        .map(|c| c.to_string())
        .unwrap_or_default()
}

fn breaks_text(s: &ModelSection) -> String {
    s.breaks
        .iter()
        .map(|b| format!("{}@{}", b.dummy, b.date))
        .collect::<Vec<_>>()
        .join(";")
}

fn integration_text(s: &ModelSection) -> String {
    s.integration
        .iter()
        .map(|v| {
            let o = match v.order {
                Integration::I0 => "I0",
                Integration::I1 => "I1",
                Integration::I2OrHigher => "I2+",
            };
            format!("{}:{o}", v.name)
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn status_text(s: &ModelSection) -> (&'static str, String) {
    match &s.status {
        ModelStatus::Completed => ("completed", String::new()),
        ModelStatus::Skipped { reason, .. } => ("skipped", reason.clone()),
    }
}

pub fn render_markdown(report: &RunReport) -> String {
    let level = report.bounds_level;
    let mut out = String::new();
    out.push_str("# ARDL bounds-test report\n\n");
    let _ = writeln!(
        out,
        "Seed {}. Long-run blocks are shown for models cointegrated at the {}% level. \
         Cells give the coefficient sign and significance (*** 1%, ** 5%, * 10%); \
         short-run cells also count the significant lags, the contemporaneous one included.\n",
        report.seed,
        num_level(level)
    );
    for (table, sections) in tables(report) {
        let _ = writeln!(out, "## {table}\n");
        out.push_str("### Long-run relationships\n\n");
        let lr: Vec<(&ModelSection, &[ReportRow])> = sections
            .iter()
            .filter_map(|s| s.long_run.as_deref().map(|r| (*s, r)))
            .collect();
        if lr.is_empty() {
            out.push_str("No cointegrated model.\n");
        } else {
            markdown_grid(&mut out, &lr);
        }
        out.push_str("\n### Short-run relationships\n\n");
        let sr: Vec<(&ModelSection, &[ReportRow])> = sections
            .iter()
            .filter(|s| !s.is_skipped())
            .map(|s| (*s, s.short_run.as_slice()))
            .collect();
        if sr.is_empty() {
            out.push_str("No estimated model.\n");
        } else {
            markdown_grid(&mut out, &sr);
        }
        out.push_str("\n### Diagnostics\n\n");
        out.push_str(
            "| model | dependent | status | p | q | nobs | F | case | I(0) bound | I(1) bound | conclusion | alpha | breaks |\n\
             |---|---|---|---|---|---|---|---|---|---|---|---|---|\n",
        );
        for s in sections {
            let (status, reason) = status_text(s);
            let status = if reason.is_empty() {
                status.to_string()
            } else {
                format!("{status}: {reason}")
            };
            let at = s.bounds.as_ref().and_then(|b| b.at(level));
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                s.id,
                s.dependent,
                status,
                s.p.map(|v| v.to_string()).unwrap_or_default(),
                s.q.map(|v| v.to_string()).unwrap_or_default(),
                s.diagnostics
                    .as_ref()
                    .map(|d| d.nobs.to_string())
                    .unwrap_or_default(),
                opt_num(s.bounds.as_ref().map(|b| b.f_statistic)),
                s.bounds
                    .as_ref()
                    .map(|b| b.case_id.to_string())
                    .unwrap_or_default(),
                opt_num(at.map(|l| l.lower_bound)),
                opt_num(at.map(|l| l.upper_bound)),
                conclusion_text(s, level),
                opt_num(s.diagnostics.as_ref().map(|d| d.alpha)),
                breaks_text(s),
            );
        }
        out.push('\n');
    }
    out
}

fn num_level(level: f64) -> String {
    crate::unitroot::tables::format_level(level)
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn estimate_rows(s: &ModelSection, rows: &[ReportRow], with_lag: bool) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for r in rows {
        for (lag, e) in r.estimates.iter().enumerate() {
            let mut rec = vec![
                s.id.clone(),
                s.table.clone(),
                s.column.clone(),
                r.variable.clone(),
                e.term.clone(),
            ];
            if with_lag {
                rec.push(lag.to_string());
            }
            rec.extend([
                num(e.estimate),
                num(e.std_error),
                num(e.t_value),
                num(e.p_value),
                r.cell.clone(),
            ]);
            out.push(rec);
        }
    }
    out
}

/// `long_run.csv`, `short_run.csv` and `diagnostics.csv`.
pub fn render_csv(report: &RunReport) -> Result<Vec<(&'static str, String)>> {
    let level = report.bounds_level;
    let mut lr = Vec::new();
    let mut sr = Vec::new();
    let mut diag = Vec::new();
    for s in &report.sections {
        if let Some(rows) = &s.long_run {
            lr.extend(estimate_rows(s, rows, false));
        }
        sr.extend(estimate_rows(s, &s.short_run, true));
        let (status, reason) = status_text(s);
        let at = s.bounds.as_ref().and_then(|b| b.at(level));
        let d = s.diagnostics.as_ref();
        diag.push(vec![
            s.id.clone(),
            s.table.clone(),
            s.column.clone(),
            s.dependent.clone(),
            status.to_string(),
            reason,
            s.p.map(|v| v.to_string()).unwrap_or_default(),
            s.q.map(|v| v.to_string()).unwrap_or_default(),
            d.map(|d| d.nobs.to_string()).unwrap_or_default(),
            d.map(|d| d.sample_start.to_string()).unwrap_or_default(),
            d.map(|d| d.sample_end.to_string()).unwrap_or_default(),
            opt_num(s.bounds.as_ref().map(|b| b.f_statistic)),
            s.bounds
                .as_ref()
                .map(|b| b.case_id.to_string())
                .unwrap_or_default(),
            s.bounds
                .as_ref()
                .map(|b| b.k.to_string())
                .unwrap_or_default(),
            opt_num(at.map(|l| l.lower_bound)),
            opt_num(at.map(|l| l.upper_bound)),
            conclusion_text(s, level),
            opt_num(d.map(|d| d.alpha)),
            opt_num(d.map(|d| d.alpha_std_error)),
            opt_num(d.map(|d| d.sigma2)),
            opt_num(d.map(|d| d.criterion_value)),
            breaks_text(s),
            integration_text(s),
        ]);
    }
    let common = ["model", "table", "column", "variable", "term"];
    let tail = ["estimate", "std_error", "t_value", "p_value", "cell"];
    let lr_header: Vec<&str> = common.iter().chain(&tail).copied().collect();
    let sr_header: Vec<&str> = common
        .iter()
        .chain(&["lag"])
        .chain(&tail)
        .copied()
        .collect();
    Ok(vec![
        ("long_run.csv", csv_string(&lr_header, lr)?),
        ("short_run.csv", csv_string(&sr_header, sr)?),
        (
            "diagnostics.csv",
            csv_string(
                &[
                    "model",
                    "table",
                    "column",
                    "dependent",
                    "status",
                    "reason",
                    "p",
                    "q",
                    "nobs",
                    "sample_start",
                    "sample_end",
                    "f_statistic",
                    "bounds_case",
                    "k",
                    "lower_bound",
                    "upper_bound",
                    "conclusion",
                    "alpha",
                    "alpha_std_error",
                    "sigma2",
                    "criterion",
                    "breaks",
                    "integration",
                ],
                diag,
            )?,
        ),
    ])
}

pub fn render_json(report: &RunReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

/// Writes the report files for `format` into `out_dir` and returns their
/// paths.
pub fn render_reports(
    report: &RunReport,
    format: ReportFormat,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let files: Vec<(&str, String)> = match format {
        ReportFormat::Markdown => vec![("report.md", render_markdown(report))],
        ReportFormat::Csv => render_csv(report)?,
        ReportFormat::Json => vec![("report.json", render_json(report)?)],
    };
    let mut paths = Vec::new();
    for (name, content) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, content)?;
        paths.push(path);
    }
    Ok(paths)
}
