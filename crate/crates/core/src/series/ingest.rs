use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use super::{Frequency, TimeSeries};
use crate::error::{Error, Result};

/// Reads a `date,value` CSV with ISO-8601 dates. Rows with an empty or
/// non-finite value are dropped.
pub fn read_series_csv(path: &Path, name: &str, frequency: Frequency) -> Result<TimeSeries> {
    let file = std::fs::File::open(path)?;
    read_series(file, &path.display().to_string(), name, frequency)
}

pub(crate) fn read_series<R: Read>(
    reader: R,
    source: &str,
    name: &str,
    frequency: Frequency,
) -> Result<TimeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let parse_err = |line: usize, message: String| Error::Parse {
        file: source.to_string(),
        line,
        message,
    };

    let headers = rdr.headers()?.clone();
    let col = |want: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(want));
    let (Some(date_col), Some(value_col)) = (col("date"), col("value")) else {
        return Err(parse_err(1, "expected header `date,value`".into()));
    };

    let mut dates = Vec::new();
    let mut values = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let raw_date = record.get(date_col).unwrap_or_default();
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d")
            .map_err(|e| parse_err(line, format!("date `{raw_date}`: {e}")))?;
        let raw_value = record.get(value_col).unwrap_or_default();
        if raw_value.is_empty() || raw_value.eq_ignore_ascii_case("na") {
            continue;
        }
        let value: f64 = raw_value
            .parse()
            .map_err(|_| parse_err(line, format!("value `{raw_value}` is not a number")))?;
        if !value.is_finite() {
            continue;
        }
        if dates.last().is_some_and(|last| *last >= date) {
            return Err(parse_err(
                line,
                format!("date {date} is not after the previous row"),
            ));
        }
        dates.push(date);
        values.push(value);
    }
    TimeSeries::new(name, dates, values, frequency)
}

pub fn write_series_csv(path: &Path, series: &TimeSeries) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_series(file, series)
}

pub(crate) fn write_series<W: Write>(writer: W, series: &TimeSeries) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["date", "value"])?;
    for (d, v) in series.dates().iter().zip(series.values()) {
        w.write_record([d.format("%Y-%m-%d").to_string(), format!("{v}")])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_cleans() {
        let text = "date,value\n2014-01-01,1.5\n2014-01-02,\n2014-01-03,NaN\n2014-01-04,2\n";
        let s = read_series(text.as_bytes(), "mem", "x", Frequency::Daily).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.values(), &[1.5, 2.0]);
    }

    #[test]
    fn rejects_non_iso_dates() {
        let text = "date,value\n01/02/2014,1.5\n";
        let err = read_series(text.as_bytes(), "mem", "x", Frequency::Daily).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn rejects_out_of_order_rows() {
        let text = "date,value\n2014-01-02,1\n2014-01-01,2\n";
        assert!(read_series(text.as_bytes(), "mem", "x", Frequency::Daily).is_err());
    }

    #[test]
    fn write_then_read() {
        let s = TimeSeries::daily_from("x", "2014-01-01".parse().unwrap(), vec![0.1, -2.5, 3.0])
            .unwrap();
        let mut buf = Vec::new();
        write_series(&mut buf, &s).unwrap();
        let back = read_series(buf.as_slice(), "mem", "x", Frequency::Daily).unwrap();
        assert_eq!(back, s);
    }
}
