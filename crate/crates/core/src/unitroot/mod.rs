//! Unit-root tests (ADF, DF-GLS, Zivot-Andrews) and integration-order
//! classification.
//!
//! All tests are left-tailed: the unit root is rejected at level `L` when the
//! statistic falls below the critical value for `L`.

mod adf;
mod classify;
mod dfgls;
pub mod tables;
mod za;

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::series::DeterministicCase;

pub use adf::{adf_regression, adf_test, select_adf_lags};
pub use classify::{classify_integration, Integration, IntegrationConfig, IntegrationOrder};
pub use dfgls::{dfgls_test, gls_detrend};
pub use za::{za_candidate_statistic, za_candidates, za_test};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Adf,
    Dfgls,
    Za,
}

impl TestKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TestKind::Adf => "adf",
            TestKind::Dfgls => "dfgls",
            TestKind::Za => "za",
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TestKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adf" => Ok(TestKind::Adf),
            "dfgls" | "df-gls" | "ers" => Ok(TestKind::Dfgls),
            "za" | "zivot-andrews" => Ok(TestKind::Za),
            _ => Err(Error::InvalidArgument(format!(
                "unknown unit-root test `{s}`"
            ))),
        }
    }
}

/// Deterministic component that shifts at the break date.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakModel {
    Intercept,
    Trend,
    Both,
}

impl BreakModel {
    pub fn as_str(self) -> &'static str {
        match self {
            BreakModel::Intercept => "intercept",
            BreakModel::Trend => "trend",
            BreakModel::Both => "both",
        }
    }
}

impl FromStr for BreakModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intercept" | "a" | "A" => Ok(BreakModel::Intercept),
            "trend" | "b" | "B" => Ok(BreakModel::Trend),
            "both" | "c" | "C" => Ok(BreakModel::Both),
            _ => Err(Error::InvalidArgument(format!("unknown break model `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "lags")]
pub enum LagSelection {
    Fixed(usize),
    Aic,
    Bic,
}

impl FromStr for LagSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aic" => Ok(LagSelection::Aic),
            "bic" => Ok(LagSelection::Bic),
            _ => s
                .strip_prefix("fixed:")
                .or_else(|| s.strip_prefix("fixed="))
                .and_then(|k| k.parse().ok())
                .map(LagSelection::Fixed)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown lag selection `{s}`"))),
        }
    }
}

/// `floor(12 * (n / 100)^(1/4))`.
pub fn default_max_lags(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Conventional test levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "1%")]
    One,
    #[serde(rename = "5%")]
    Five,
    #[serde(rename = "10%")]
    Ten,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::One, Level::Five, Level::Ten];

    pub fn percent(self) -> f64 {
        match self {
            Level::One => 1.0,
            Level::Five => 5.0,
            Level::Ten => 10.0,
        }
    }

    pub fn from_percent(p: f64) -> Result<Self> {
        Level::ALL
            .into_iter()
            .find(|l| (l.percent() - p).abs() < 1e-9)
            .ok_or_else(|| Error::InvalidArgument(format!("unsupported level {p}%")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    pub one: f64,
    pub five: f64,
    pub ten: f64,
}

impl CriticalValues {
    pub fn lookup(test: TestKind, case: &str, nobs: usize) -> Result<Self> {
        let get =
            |l: Level| tables::unitroot_critical_value(test.as_str(), case, l.percent(), nobs);
        Ok(Self {
            one: get(Level::One)?,
            five: get(Level::Five)?,
            ten: get(Level::Ten)?,
        })
    }

    pub fn at(&self, level: Level) -> f64 {
        match level {
            Level::One => self.one,
            Level::Five => self.five,
            Level::Ten => self.ten,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootResult {
    pub test: TestKind,
    pub statistic: f64,
    pub lags_used: usize,
    /// Observations in the final test regression.
    pub nobs: usize,
    pub case: DeterministicCase,
    pub critical_values: CriticalValues,
    /// Number of observations before the break; the step dummy is one from
    /// this index on. Zivot-Andrews only.
    pub break_index: Option<usize>,
    /// Last pre-break date, when the series carried dates.
    pub break_date: Option<NaiveDate>,
    pub break_model: Option<BreakModel>,
}

impl UnitRootResult {
    pub fn rejects(&self, level: Level) -> bool {
        self.statistic < self.critical_values.at(level)
    }

    /// Resolves `break_date` from the dates of the tested series.
    pub fn with_dates(mut self, dates: &[NaiveDate]) -> Self {
        if let Some(tb) = self.break_index {
            self.break_date = tb.checked_sub(1).and_then(|i| dates.get(i)).copied();
        }
        self
    }
}

pub(crate) fn check_finite(y: &[f64]) -> Result<()> {
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSeries("non-finite values".into()));
    }
    Ok(())
}
