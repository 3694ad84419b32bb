use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use super::{Frequency, Panel, TimeSeries};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateRange {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Self {
        Self { start, end }
    }

    /// The widest representable range.
    pub fn unbounded() -> Self {
        Self {
            start: NaiveDate::MIN,
            end: NaiveDate::MAX,
        }
    }
}

/// Treatment of days on which a daily series has no observation.
/// Weekly series are always forward-filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FillPolicy {
    #[default]
    ForwardFill,
    DropRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlignOptions {
    pub fill: FillPolicy,
    /// Start the panel at the latest series start instead of failing when a
    /// series begins after the requested start.
    pub trim_leading: bool,
}

impl Default for AlignOptions {
    fn default() -> Self {
        Self {
            fill: FillPolicy::ForwardFill,
            trim_leading: true,
        }
    }
}

impl From<FillPolicy> for AlignOptions {
    fn from(fill: FillPolicy) -> Self {
        Self {
            fill,
            ..Self::default()
        }
    }
}

fn coverage_end(s: &TimeSeries) -> NaiveDate {
    let last = s.last_date().expect("non-empty series");
    match s.frequency() {
        Frequency::Daily => last,
        // a weekly observation stands for the following six days as well
        Frequency::Weekly => last.checked_add_days(Days::new(6)).unwrap_or(last),
    }
}

/// Aligns series onto a common daily calendar over their shared coverage.
pub fn align_panel(
    series: &[TimeSeries],
    range: DateRange,
    options: impl Into<AlignOptions>,
) -> Result<Panel> {
    let options = options.into();
    if series.is_empty() {
        return Err(Error::InvalidArgument("no series to align".into()));
    }
    if range.start > range.end {
        return Err(Error::InvalidArgument(format!(
            "empty date range {}..{}",
            range.start, range.end
        )));
    }
    if let Some(s) = series.iter().find(|s| s.is_empty()) {
        return Err(Error::InvalidSeries(format!("`{}` is empty", s.name())));
    }

    let mut start = range.start;
    for s in series {
        let first = s.first_date().expect("non-empty series");
        if first > start {
            if !options.trim_leading && first > range.start {
                return Err(Error::LeadingGap {
                    series: s.name().to_string(),
                    first,
                    start: range.start,
                });
            }
            start = first;
        }
    }
    let end = series
        .iter()
        .map(coverage_end)
        .fold(range.end, NaiveDate::min);
    if start > end {
        return Err(Error::EmptyOverlap);
    }

    let mut cursors = vec![0usize; series.len()];
    let mut dates = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); series.len()];
    let mut row = vec![0.0; series.len()];

    for day in start.iter_days().take_while(|d| *d <= end) {
        let mut keep = true;
        for (j, s) in series.iter().enumerate() {
            let obs = s.dates();
            while cursors[j] + 1 < obs.len() && obs[cursors[j] + 1] <= day {
                cursors[j] += 1;
            }
            let at = cursors[j];
            if obs[at] > day {
                // only possible before the first observation, excluded above
                keep = false;
                break;
            }
            let exact = obs[at] == day;
            if !exact && s.frequency() == Frequency::Daily && options.fill == FillPolicy::DropRow {
                keep = false;
            }
            row[j] = s.values()[at];
        }
        if keep {
            dates.push(day);
            for (col, v) in columns.iter_mut().zip(&row) {
                col.push(*v);
            }
        }
    }
    if dates.is_empty() {
        return Err(Error::EmptyOverlap);
    }

    Panel::new(
        dates,
        series
            .iter()
            .map(|s| s.name().to_string())
            .zip(columns)
            .collect(),
    )
}
