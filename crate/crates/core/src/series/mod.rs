//! Date-indexed series, aligned panels, transforms and lag designs.

mod align;
mod design;
mod ingest;
mod transform;

use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use align::{align_panel, AlignOptions, DateRange, FillPolicy};
pub use design::{
    build_lag_design, build_lag_design_with, DesignLayout, ExogenousForm, LagDesign,
    LagDesignOptions,
};
pub use ingest::{read_series_csv, write_series_csv};
pub use transform::{apply_transform, Transform};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frequency {
    Daily,
    Weekly,
}

/// Deterministic terms entering a regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeterministicCase {
    None,
    Constant,
    ConstantTrend,
}

impl DeterministicCase {
    pub fn has_constant(self) -> bool {
        !matches!(self, DeterministicCase::None)
    }

    pub fn has_trend(self) -> bool {
        matches!(self, DeterministicCase::ConstantTrend)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DeterministicCase::None => "none",
            DeterministicCase::Constant => "constant",
            DeterministicCase::ConstantTrend => "constant_trend",
        }
    }
}

impl fmt::Display for DeterministicCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DeterministicCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" | "n" => Ok(DeterministicCase::None),
            "constant" | "c" => Ok(DeterministicCase::Constant),
            "constant_trend" | "ct" => Ok(DeterministicCase::ConstantTrend),
            other => Err(Error::InvalidArgument(format!(
                "unknown deterministic case `{other}`"
            ))),
        }
    }
}

/// A named, date-indexed sequence of finite observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    name: String,
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
    frequency: Frequency,
}

impl TimeSeries {
    pub fn new(
        name: impl Into<String>,
        dates: Vec<NaiveDate>,
        values: Vec<f64>,
        frequency: Frequency,
    ) -> Result<Self> {
        let name = name.into();
        if dates.len() != values.len() {
            return Err(Error::InvalidSeries(format!(
                "`{name}`: {} dates but {} values",
                dates.len(),
                values.len()
            )));
        }
        if let Some(w) = dates.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSeries(format!(
                "`{name}`: dates not strictly increasing at {}",
                w[1]
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "`{name}`: non-finite value at {}",
                dates[i]
            )));
        }
        Ok(Self {
            name,
            dates,
            values,
            frequency,
        })
    }

    /// Consecutive daily dates starting at `start`; used for synthetic data.
    pub fn daily_from(name: impl Into<String>, start: NaiveDate, values: Vec<f64>) -> Result<Self> {
        let dates = start.iter_days().take(values.len()).collect();
        Self::new(name, dates, values, Frequency::Daily)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first_date(&self) -> Option<NaiveDate> {
        self.dates.first().copied()
    }

    pub fn last_date(&self) -> Option<NaiveDate> {
        self.dates.last().copied()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Dependent,
    DynamicRegressor,
    ExogenousRegressor,
    Dummy,
}

/// Columns sharing one date index, optionally tagged with model roles.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    dates: Vec<NaiveDate>,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    roles: BTreeMap<String, Role>,
}

impl Panel {
    pub fn new(dates: Vec<NaiveDate>, columns: Vec<(String, Vec<f64>)>) -> Result<Self> {
        if let Some(w) = dates.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidPanel(format!(
                "dates not strictly increasing at {}",
                w[1]
            )));
        }
        let mut names = Vec::with_capacity(columns.len());
        let mut values = Vec::with_capacity(columns.len());
        for (name, col) in columns {
            if col.len() != dates.len() {
                return Err(Error::InvalidPanel(format!(
                    "column `{name}` has {} values for {} dates",
                    col.len(),
                    dates.len()
                )));
            }
            if names.contains(&name) {
                return Err(Error::InvalidPanel(format!("duplicate column `{name}`")));
            }
            if col.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidPanel(format!(
                    "column `{name}` has non-finite values"
                )));
            }
            names.push(name);
            values.push(col);
        }
        Ok(Self {
            dates,
            names,
            columns: values,
            roles: BTreeMap::new(),
        })
    }

    /// Panel over consecutive daily dates from `start`.
    pub fn daily_from(start: NaiveDate, columns: Vec<(String, Vec<f64>)>) -> Result<Self> {
        let len = columns.first().map_or(0, |c| c.1.len());
        Self::new(start.iter_days().take(len).collect(), columns)
    }

    /// Attaches roles. Exactly one dependent is required and dummy columns
    /// must be binary.
    pub fn with_roles<I, S>(mut self, roles: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Role)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (name, role) in roles {
            let name = name.into();
            let Some(col) = self.column(&name) else {
                return Err(Error::InvalidPanel(format!(
                    "role assigned to unknown column `{name}`"
                )));
            };
            if role == Role::Dummy && col.iter().any(|&v| v != 0.0 && v != 1.0) {
                return Err(Error::InvalidPanel(format!(
                    "dummy column `{name}` is not binary"
                )));
            }
            map.insert(name, role);
        }
        let dependents = map.values().filter(|r| **r == Role::Dependent).count();
        if dependents != 1 {
            return Err(Error::InvalidPanel(format!(
                "expected exactly one dependent column, found {dependents}"
            )));
        }
        self.roles = map;
        Ok(self)
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.names
            .iter()
            .map(String::as_str)
            .zip(self.columns.iter().map(Vec::as_slice))
    }

    pub fn role(&self, name: &str) -> Option<Role> {
        self.roles.get(name).copied()
    }

    pub fn has_roles(&self) -> bool {
        !self.roles.is_empty()
    }

    pub fn dependent(&self) -> Option<&str> {
        self.with_role(Role::Dependent).into_iter().next()
    }

    /// Column names carrying `role`, in column order.
    pub fn with_role(&self, role: Role) -> Vec<&str> {
        self.names
            .iter()
            .filter(|n| self.roles.get(n.as_str()) == Some(&role))
            .map(String::as_str)
            .collect()
    }

    /// Position of the first date on or after `date`.
    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        let i = self.dates.partition_point(|d| *d < date);
        (i < self.dates.len()).then_some(i)
    }

    /// Replaces a column by a length-preserving transform of itself.
    pub fn transform_column(mut self, name: &str, transform: Transform) -> Result<Self> {
        if !transform.preserves_length() {
            return Err(Error::InvalidArgument(format!(
                "transform {transform} changes the column length"
            )));
        }
        let i = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidPanel(format!("unknown column `{name}`")))?;
        self.columns[i] = apply_transform(&self.columns[i], transform)?;
        Ok(self)
    }

    /// New panel restricted to `names`, in that order, without roles.
    pub fn select(&self, names: &[&str]) -> Result<Self> {
        let cols = names
            .iter()
            .map(|n| {
                self.column(n)
                    .map(|c| (n.to_string(), c.to_vec()))
                    .ok_or_else(|| Error::InvalidPanel(format!("unknown column `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.dates.clone(), cols)
    }

    pub fn push_column(mut self, name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.len() != self.dates.len() {
            return Err(Error::InvalidPanel(format!(
                "column `{name}` has {} values for {} dates",
                values.len(),
                self.dates.len()
            )));
        }
        if self.names.contains(&name) {
            return Err(Error::InvalidPanel(format!("duplicate column `{name}`")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPanel(format!(
                "column `{name}` has non-finite values"
            )));
        }
        self.names.push(name);
        self.columns.push(values);
        Ok(self)
    }

    /// Rows in `[start, end)`. Roles are kept.
    pub fn slice_rows(&self, start: usize, end: usize) -> Self {
        let end = end.min(self.len());
        let start = start.min(end);
        Self {
            dates: self.dates[start..end].to_vec(),
            names: self.names.clone(),
            columns: self
                .columns
                .iter()
                .map(|c| c[start..end].to_vec())
                .collect(),
            roles: self.roles.clone(),
        }
    }
}

/// Step dummy equal to 1 strictly after `break_date`.
pub fn step_dummy(dates: &[NaiveDate], break_date: NaiveDate) -> Vec<f64> {
    dates
        .iter()
        .map(|d| if *d > break_date { 1.0 } else { 0.0 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    #[test]
    fn series_rejects_unsorted_dates() {
        let err = TimeSeries::new(
            "a",
            vec![d("2014-01-02"), d("2014-01-01")],
            vec![1.0, 2.0],
            Frequency::Daily,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSeries(_)));
    }

    #[test]
    fn series_rejects_non_finite() {
        let err = TimeSeries::new(
            "a",
            vec![d("2014-01-01"), d("2014-01-02")],
            vec![1.0, f64::NAN],
            Frequency::Daily,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSeries(_)));
    }

    #[test]
    fn panel_requires_single_dependent() {
        let p = Panel::daily_from(
            d("2014-01-01"),
            vec![("y".into(), vec![1.0, 2.0]), ("x".into(), vec![1.0, 3.0])],
        )
        .unwrap();
        assert!(p
            .clone()
            .with_roles([("y", Role::Dependent), ("x", Role::Dependent)])
            .is_err());
        assert!(p
            .clone()
            .with_roles([("x", Role::DynamicRegressor)])
            .is_err());
        let p = p
            .with_roles([("y", Role::Dependent), ("x", Role::DynamicRegressor)])
            .unwrap();
        assert_eq!(p.dependent(), Some("y"));
    }

    #[test]
    fn dummy_role_requires_binary_column() {
        let p = Panel::daily_from(
            d("2014-01-01"),
            vec![("y".into(), vec![1.0, 2.0]), ("du".into(), vec![0.0, 0.5])],
        )
        .unwrap();
        assert!(p
            .with_roles([("y", Role::Dependent), ("du", Role::Dummy)])
            .is_err());
    }

    #[test]
    fn step_dummy_is_one_after_break() {
        let dates: Vec<_> = d("2014-01-01").iter_days().take(4).collect();
        assert_eq!(
            step_dummy(&dates, d("2014-01-02")),
            vec![0.0, 0.0, 1.0, 1.0]
        );
    }
}
