use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Level,
    Log,
    FirstDifference,
    Lag(usize),
}

impl Transform {
    pub fn preserves_length(self) -> bool {
        matches!(self, Transform::Level | Transform::Log)
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Level => f.write_str("level"),
            Transform::Log => f.write_str("log"),
            Transform::FirstDifference => f.write_str("first_difference"),
            Transform::Lag(k) => write!(f, "lag({k})"),
        }
    }
}

impl FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "level" | "levels" | "" => Ok(Transform::Level),
            "log" | "ln" => Ok(Transform::Log),
            "first_difference" | "diff" | "d" => Ok(Transform::FirstDifference),
            _ => {
                let k = s
                    .strip_prefix("lag(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|k| *k >= 1)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown transform `{s}`")))?;
                Ok(Transform::Lag(k))
            }
        }
    }
}

/// Applies `transform` to a column. Differences and lags shorten the output by
/// their order; `lag(k)` returns `v[t-k]` for `t = k..n`.
pub fn apply_transform(values: &[f64], transform: Transform) -> Result<Vec<f64>> {
    match transform {
        Transform::Level => Ok(values.to_vec()),
        Transform::Log => values
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                if value > 0.0 {
                    Ok(value.ln())
                } else {
                    Err(Error::NonPositiveLog { index, value })
                }
            })
            .collect(),
        Transform::FirstDifference => {
            if values.len() <= 1 {
                return Err(Error::InsufficientLength {
                    needed: 1,
                    got: values.len(),
                });
            }
            Ok(values.windows(2).map(|w| w[1] - w[0]).collect())
        }
        Transform::Lag(0) => Err(Error::InvalidArgument("lag order must be >= 1".into())),
        Transform::Lag(k) => {
            if values.len() <= k {
                return Err(Error::InsufficientLength {
                    needed: k,
                    got: values.len(),
                });
            }
            Ok(values[..values.len() - k].to_vec())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn log_of_exponentials() {
        let e = std::f64::consts::E;
        let out = apply_transform(&[1.0, e, e * e], Transform::Log).unwrap();
        for (a, b) in out.iter().zip([0.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn log_rejects_non_positive() {
        let err = apply_transform(&[1.0, 0.0], Transform::Log).unwrap_err();
        assert!(matches!(err, Error::NonPositiveLog { index: 1, .. }));
    }

    #[test]
    fn difference_example() {
        assert_eq!(
            apply_transform(&[5.0, 7.0, 4.0], Transform::FirstDifference).unwrap(),
            vec![2.0, -3.0]
        );
    }

    #[test]
    fn lag_aligns_to_later_positions() {
        let out = apply_transform(&[1.0, 2.0, 3.0, 4.0], Transform::Lag(2)).unwrap();
        assert_eq!(out, vec![1.0, 2.0]);
    }

    #[test]
    fn short_inputs_are_rejected() {
        assert!(matches!(
            apply_transform(&[1.0], Transform::FirstDifference),
            Err(Error::InsufficientLength { .. })
        ));
        assert!(matches!(
            apply_transform(&[1.0, 2.0], Transform::Lag(2)),
            Err(Error::InsufficientLength { .. })
        ));
    }

    #[test]
    fn parse_round_trip() {
        for t in [
            Transform::Level,
            Transform::Log,
            Transform::FirstDifference,
            Transform::Lag(3),
        ] {
            assert_eq!(t.to_string().parse::<Transform>().unwrap(), t);
        }
        assert!("lag(0)".parse::<Transform>().is_err());
    }

    proptest! {
        #[test]
        fn difference_inverts_cumulative_sum(v in prop::collection::vec(-1e3f64..1e3, 2..60)) {
            let mut acc = 0.0;
            let cumsum: Vec<f64> = v.iter().map(|x| { acc += x; acc }).collect();
            let back = apply_transform(&cumsum, Transform::FirstDifference).unwrap();
            for (a, b) in back.iter().zip(&v[1..]) {
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()) + 1e-9);
            }
        }

        #[test]
        fn level_is_identity(v in prop::collection::vec(-1e6f64..1e6, 0..40)) {
            prop_assert_eq!(apply_transform(&v, Transform::Level).unwrap(), v);
        }
    }
}
