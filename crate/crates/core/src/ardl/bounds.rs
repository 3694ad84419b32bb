use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::ecm::ecm_regression;
use super::ArdlSpec;
use crate::error::{Error, Result};
use crate::linreg::{wald_f_test, WaldTest};
use crate::series::{DeterministicCase, Panel};
use crate::unitroot::tables::BOUNDS_TABLE;

/// Significance levels (percent) of the embedded bounds table.
pub const BOUNDS_LEVELS: [f64; 4] = [10.0, 5.0, 2.5, 1.0];

/// Deterministic specification of the bounds test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundsCase {
    /// No intercept, no trend.
    I,
    /// Restricted intercept, no trend.
    II,
    /// Unrestricted intercept, no trend.
    III,
    /// Unrestricted intercept, restricted trend.
    IV,
    /// Unrestricted intercept, unrestricted trend.
    V,
}

impl BoundsCase {
    pub fn default_for(case: DeterministicCase) -> Self {
        match case {
            DeterministicCase::None => BoundsCase::I,
            DeterministicCase::Constant => BoundsCase::III,
            DeterministicCase::ConstantTrend => BoundsCase::V,
        }
    }

    /// Deterministic terms the ECM regression must contain.
    pub fn deterministic_case(self) -> DeterministicCase {
        match self {
            BoundsCase::I => DeterministicCase::None,
            BoundsCase::II | BoundsCase::III => DeterministicCase::Constant,
            BoundsCase::IV | BoundsCase::V => DeterministicCase::ConstantTrend,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundsCase::I => "I",
            BoundsCase::II => "II",
            BoundsCase::III => "III",
            BoundsCase::IV => "IV",
            BoundsCase::V => "V",
        }
    }

    fn restricted_deterministics(self) -> &'static [&'static str] {
        match self {
            BoundsCase::II => &["const"],
            BoundsCase::IV => &["trend"],
            _ => &[],
        }
    }
}

impl fmt::Display for BoundsCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundsCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(BoundsCase::I),
            "II" | "2" => Ok(BoundsCase::II),
            "III" | "3" => Ok(BoundsCase::III),
            "IV" | "4" => Ok(BoundsCase::IV),
            "V" | "5" => Ok(BoundsCase::V),
            _ => Err(Error::InvalidArgument(format!("unknown bounds case `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Cointegrated,
    NotCointegrated,
    Inconclusive,
}

impl Conclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Conclusion::Cointegrated => "cointegrated",
            Conclusion::NotCointegrated => "not_cointegrated",
            Conclusion::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn conclude(f_statistic: f64, lower: f64, upper: f64) -> Conclusion {
    if f_statistic > upper {
        Conclusion::Cointegrated
    } else if f_statistic < lower {
        Conclusion::NotCointegrated
    } else {
        Conclusion::Inconclusive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub case: BoundsCase,
    pub k: usize,
    pub level: f64,
    #[serde(rename = "I0_bound")]
    pub i0_bound: f64,
    #[serde(rename = "I1_bound")]
    pub i1_bound: f64,
}

pub fn read_bounds_rows<R: Read>(reader: R) -> Result<Vec<BoundsRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let rows = rdr
        .deserialize()
        .collect::<std::result::Result<Vec<BoundsRow>, _>>()?;
    Ok(rows)
}

pub fn write_bounds_rows<W: Write>(writer: W, rows: &[BoundsRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["case", "k", "level", "I0_bound", "I1_bound"])?;
    for r in rows {
        w.write_record([
            r.case.as_str().to_string(),
            r.k.to_string(),
            crate::unitroot::tables::format_level(r.level),
            format!("{:.4}", r.i0_bound),
            format!("{:.4}", r.i1_bound),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn embedded_bounds_table() -> &'static [BoundsRow] {
    static TABLE: OnceLock<Vec<BoundsRow>> = OnceLock::new();
    TABLE.get_or_init(|| {
        read_bounds_rows(BOUNDS_TABLE.as_bytes()).expect("embedded bounds table parses")
    })
}

/// Embedded bounds for `(case, k)` at every tabulated level, from 10% down
/// to 1%.
pub fn bounds_critical_values(case: BoundsCase, k: usize) -> Result<Vec<BoundsRow>> {
    let rows: Vec<BoundsRow> = BOUNDS_LEVELS
        .iter()
        .filter_map(|&level| {
            embedded_bounds_table()
                .iter()
                .find(|r| r.case == case && r.k == k && r.level == level)
                .cloned()
        })
        .collect();
    if rows.len() != BOUNDS_LEVELS.len() {
        return Err(Error::MissingBoundsEntry {
            case: case.to_string(),
            k,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsLevel {
    pub level: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub conclusion: Conclusion,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsResult {
    pub f_statistic: f64,
    pub df1: usize,
    pub df2: usize,
    pub k: usize,
    pub case_id: BoundsCase,
    pub levels: Vec<BoundsLevel>,
}

impl BoundsResult {
    pub fn at(&self, level: f64) -> Option<&BoundsLevel> {
        self.levels.iter().find(|l| l.level == level)
    }

    pub fn conclusion_at(&self, level: f64) -> Option<Conclusion> {
        self.at(level).map(|l| l.conclusion)
    }
}

fn resolve_case(spec: &ArdlSpec, case: Option<BoundsCase>) -> Result<BoundsCase> {
    let case = case.unwrap_or_else(|| BoundsCase::default_for(spec.case));
    if case.deterministic_case() != spec.case {
        return Err(Error::InvalidArgument(format!(
            "bounds case {case} needs deterministic case {}, model has {}",
            case.deterministic_case(),
            spec.case
        )));
    }
    Ok(case)
}

/// Wald F on the lagged levels of the conditional ECM, plus the restricted
/// deterministic term for cases II and IV.
pub fn bounds_f_statistic(
    panel: &Panel,
    spec: &ArdlSpec,
    case: Option<BoundsCase>,
) -> Result<WaldTest> {
    let case = resolve_case(spec, case)?;
    let prepared = spec.prepare_panel(panel)?;
    let (fit, design) = ecm_regression(&prepared, spec, None)?;
    let names = fit.column_names();
    let mut restricted: Vec<&str> = vec![names[design.layout.y_level].as_str()];
    restricted.extend(design.layout.x_levels.iter().map(|&j| names[j].as_str()));
    restricted.extend(case.restricted_deterministics());
    wald_f_test(&fit, &restricted)
}

/// Pesaran-Shin-Smith bounds test. `case` defaults from the model's
/// deterministic terms.
pub fn bounds_test(
    panel: &Panel,
    spec: &ArdlSpec,
    case: Option<BoundsCase>,
) -> Result<BoundsResult> {
    let case_id = resolve_case(spec, case)?;
    let k = spec.dynamic_regressors.len();
    let table = bounds_critical_values(case_id, k)?;
    let wald = bounds_f_statistic(panel, spec, Some(case_id))?;
    let levels = table
        .iter()
        .map(|r| BoundsLevel {
            level: r.level,
            lower_bound: r.i0_bound,
            upper_bound: r.i1_bound,
            conclusion: conclude(wald.f_statistic, r.i0_bound, r.i1_bound),
        })
        .collect();
    Ok(BoundsResult {
        f_statistic: wald.f_statistic,
        df1: wald.df1,
        df2: wald.df2,
        k,
        case_id,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tri_state_conclusion() {
        assert_eq!(conclude(4.0, 3.0, 5.0), Conclusion::Inconclusive);
        assert_eq!(conclude(5.0, 3.0, 5.0), Conclusion::Inconclusive);
        assert_eq!(conclude(5.01, 3.0, 5.0), Conclusion::Cointegrated);
        assert_eq!(conclude(2.99, 3.0, 5.0), Conclusion::NotCointegrated);
    }

    #[test]
    fn table_is_complete_and_ordered() {
        for case in [
            BoundsCase::I,
            BoundsCase::II,
            BoundsCase::III,
            BoundsCase::IV,
            BoundsCase::V,
        ] {
            let ks = if matches!(case, BoundsCase::III | BoundsCase::V) {
                0..=10
            } else {
                1..=10
            };
            for k in ks {
                let rows = bounds_critical_values(case, k).unwrap();
                for w in rows.windows(2) {
                    assert!(w[0].i0_bound < w[1].i0_bound, "{case} {k}");
                    assert!(w[0].i1_bound < w[1].i1_bound, "{case} {k}");
                }
                for r in &rows {
                    assert!(r.i0_bound <= r.i1_bound);
                }
            }
        }
        assert_eq!(
            bounds_critical_values(BoundsCase::III, 1).unwrap()[1],
            BoundsRow {
                case: BoundsCase::III,
                k: 1,
                level: 5.0,
                i0_bound: 4.94,
                i1_bound: 5.73
            }
        );
    }

    #[test]
    fn missing_entry() {
        assert!(matches!(
            bounds_critical_values(BoundsCase::III, 11),
            Err(Error::MissingBoundsEntry { .. })
        ));
    }

    #[test]
    fn round_trip() {
        let rows = bounds_critical_values(BoundsCase::V, 3).unwrap();
        let mut buf = Vec::new();
        write_bounds_rows(&mut buf, &rows).unwrap();
        assert_eq!(read_bounds_rows(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn case_parsing() {
        assert_eq!("iv".parse::<BoundsCase>().unwrap(), BoundsCase::IV);
        assert_eq!("3".parse::<BoundsCase>().unwrap(), BoundsCase::III);
        assert!("VI".parse::<BoundsCase>().is_err());
    }
}
