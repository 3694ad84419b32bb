//! Embedded critical-value tables.
//!
//! Unit-root rows: `test,case,level,t_range,value`, where `t_range` is
//! `lo-hi` or `lo-inf` in effective observations. Bounds rows:
//! `case,k,level,I0_bound,I1_bound`. Lines starting with `#` are comments.

use std::io::{Read, Write};
use std::sync::OnceLock;

use serde::Deserialize;

use crate::error::{Error, Result};

const UNITROOT_TABLE: &str = include_str!("../../data/unitroot_critical_values.csv");
pub(crate) const BOUNDS_TABLE: &str = include_str!("../../data/bounds_critical_values.csv");

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CriticalValueRow {
    pub test: String,
    pub case: String,
    pub level: f64,
    pub t_range: String,
    pub value: f64,
}

impl CriticalValueRow {
    fn range(&self) -> Result<(usize, usize)> {
        parse_range(&self.t_range)
    }
}

pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidArgument(format!("bad T range `{s}`"));
    let (lo, hi) = s.split_once('-').ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = match hi.trim() {
        "inf" => usize::MAX,
        h => h.parse().map_err(|_| bad())?,
    };
    if hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn read_unitroot_rows<R: Read>(reader: R) -> Result<Vec<CriticalValueRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let rows = rdr
        .deserialize()
        .collect::<std::result::Result<Vec<CriticalValueRow>, _>>()?;
    for r in &rows {
        r.range()?;
    }
    Ok(rows)
}

pub fn write_unitroot_rows<W: Write>(writer: W, rows: &[CriticalValueRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["test", "case", "level", "t_range", "value"])?;
    for r in rows {
        w.write_record([
            r.test.clone(),
            r.case.clone(),
            format_level(r.level),
            r.t_range.clone(),
            format!("{:.4}", r.value),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn format_level(level: f64) -> String {
    if level.fract() == 0.0 {
        format!("{}", level as i64)
    } else {
        format!("{level}")
    }
}

fn unitroot_rows() -> &'static [CriticalValueRow] {
    static ROWS: OnceLock<Vec<CriticalValueRow>> = OnceLock::new();
    ROWS.get_or_init(|| {
        read_unitroot_rows(UNITROOT_TABLE.as_bytes()).expect("embedded unit-root table parses")
    })
}

/// Embedded critical value for `test`/`case` at significance `level`
/// (percent) for a regression with `nobs` observations.
pub fn unitroot_critical_value(test: &str, case: &str, level: f64, nobs: usize) -> Result<f64> {
    unitroot_rows()
        .iter()
        .find(|r| {
            r.test == test
                && r.case == case
                && (r.level - level).abs() < 1e-9
                && r.range().is_ok_and(|(lo, hi)| lo <= nobs && nobs <= hi)
        })
        .map(|r| r.value)
        .ok_or_else(|| Error::MissingCriticalValue {
            test: test.into(),
            case: case.into(),
            nobs,
        })
}

/// All embedded unit-root rows.
pub fn embedded_unitroot_table() -> &'static [CriticalValueRow] {
    unitroot_rows()
}
