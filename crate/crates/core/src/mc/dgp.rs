use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::replication_rng;
use crate::error::{Error, Result};
use crate::series::{Frequency, Panel, TimeSeries};

/// Observations discarded before a stationary autoregression is recorded.
pub const STATIONARY_BURN_IN: usize = 100;

const MIN_LENGTH: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DgpKind {
    WhiteNoise,
    Ar1 {
        rho: f64,
    },
    RandomWalk,
    RandomWalkDrift {
        mu: f64,
    },
    /// `x` is a random walk and
    /// `y_t = y_{t-1} - α (y_{t-1} - θ x_{t-1}) + ε_t`.
    CointegratedPair {
        theta: f64,
        alpha: f64,
    },
    /// White noise plus `size` from index `tau` on.
    LevelShift {
        tau: usize,
        size: f64,
    },
    /// `x` is a random walk and
    /// `y_t = c + Σ φ_i y_{t-i} + Σ β_i x_{t-i} + ε_t`.
    ArdlProcess {
        phi: Vec<f64>,
        beta: Vec<f64>,
        #[serde(default)]
        intercept: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dgp {
    pub kind: DgpKind,
    /// Number of recorded observations.
    pub length: usize,
    pub seed: u64,
}

impl Dgp {
    pub fn new(kind: DgpKind, length: usize, seed: u64) -> Self {
        Self { kind, length, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDgp(m));
        if self.length < MIN_LENGTH {
            return bad(format!("length {} below {MIN_LENGTH}", self.length));
        }
        match &self.kind {
            DgpKind::Ar1 { rho } if rho.is_nan() || rho.abs() > 1.0 => {
                bad(format!("|rho| = {rho} exceeds 1"))
            }
            DgpKind::RandomWalkDrift { mu } if !mu.is_finite() => bad("drift not finite".into()),
            DgpKind::CointegratedPair { theta, alpha } => {
                if !(alpha.abs() > 0.0 && alpha.abs() <= 1.0) || !theta.is_finite() {
                    bad(format!("need 0 < |alpha| <= 1, got {alpha}"))
                } else {
                    Ok(())
                }
            }
            DgpKind::LevelShift { tau, size } => {
                if *tau == 0 || *tau >= self.length || !size.is_finite() {
                    bad(format!("shift index {tau} outside 1..{}", self.length))
                } else {
                    Ok(())
                }
            }
            DgpKind::ArdlProcess {
                phi,
                beta,
                intercept,
            } => {
                if phi.is_empty() || beta.is_empty() {
                    bad("ardl_process needs p >= 1 and at least one beta".into())
                } else if phi.iter().chain(beta).any(|v| !v.is_finite()) || !intercept.is_finite() {
                    bad("non-finite coefficient".into())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn has_regressor(&self) -> bool {
        matches!(
            self.kind,
            DgpKind::CointegratedPair { .. } | DgpKind::ArdlProcess { .. }
        )
    }
}

/// One draw of a DGP: `y`, plus `x` for bivariate processes.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulated {
    pub y: Vec<f64>,
    pub x: Option<Vec<f64>>,
}

impl Simulated {
    /// Daily series named `y` and `x` starting at `start`.
    pub fn to_series(&self, start: NaiveDate) -> Result<Vec<TimeSeries>> {
        let mut out = vec![TimeSeries::daily_from("y", start, self.y.clone())?];
        if let Some(x) = &self.x {
            out.push(TimeSeries::daily_from("x", start, x.clone())?);
        }
        debug_assert!(out.iter().all(|s| s.frequency() == Frequency::Daily));
        Ok(out)
    }

    pub fn to_panel(&self, start: NaiveDate) -> Result<Panel> {
        let mut cols = vec![("y".to_string(), self.y.clone())];
        if let Some(x) = &self.x {
            cols.push(("x".to_string(), x.clone()));
        }
        Panel::daily_from(start, cols)
    }
}

fn normals(rng: &mut ChaCha20Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let e: f64 = StandardNormal.sample(rng);
            e
        })
        .collect()
}

fn cumsum(e: &[f64], drift: f64) -> Vec<f64> {
    e.iter()
        .scan(0.0, |acc, v| {
            *acc += drift + v;
            Some(*acc)
        })
        .collect()
}

/// Draw from stream 0 of the DGP's seed.
pub fn generate(dgp: &Dgp) -> Result<Simulated> {
    generate_replication(dgp, 0)
}

/// Draw from stream `replication` of the DGP's seed.
pub fn generate_replication(dgp: &Dgp, replication: u64) -> Result<Simulated> {
    dgp.validate()?;
    let n = dgp.length;
    let mut rng = replication_rng(dgp.seed, replication);
    let out = match &dgp.kind {
        DgpKind::WhiteNoise => Simulated {
            y: normals(&mut rng, n),
            x: None,
        },
        DgpKind::Ar1 { rho } => {
            let burn = if rho.abs() < 1.0 {
                STATIONARY_BURN_IN
            } else {
                0
            };
            let e = normals(&mut rng, n + burn);
            let mut y = Vec::with_capacity(n + burn);
            let mut prev = 0.0;
            for v in e {
                prev = rho * prev + v;
                y.push(prev);
            }
            Simulated {
                y: y.split_off(burn),
                x: None,
            }
        }
        DgpKind::RandomWalk => Simulated {
            y: cumsum(&normals(&mut rng, n), 0.0),
            x: None,
        },
        DgpKind::RandomWalkDrift { mu } => Simulated {
            y: cumsum(&normals(&mut rng, n), *mu),
            x: None,
        },
        DgpKind::CointegratedPair { theta, alpha } => {
            let x = cumsum(&normals(&mut rng, n), 0.0);
            let e = normals(&mut rng, n);
            let mut y = vec![0.0; n];
            y[0] = theta * x[0] + e[0];
            for t in 1..n {
                y[t] = y[t - 1] - alpha * (y[t - 1] - theta * x[t - 1]) + e[t];
            }
            Simulated { y, x: Some(x) }
        }
        DgpKind::LevelShift { tau, size } => {
            let mut y = normals(&mut rng, n);
            for v in &mut y[*tau..] {
                *v += size;
            }
            Simulated { y, x: None }
        }
        DgpKind::ArdlProcess {
            phi,
            beta,
            intercept,
        } => {
            let x = cumsum(&normals(&mut rng, n), 0.0);
            let e = normals(&mut rng, n);
            let mut y = vec![0.0; n];
            for t in 0..n {
                let mut v = intercept + e[t];
                for (i, f) in phi.iter().enumerate() {
                    if t > i {
                        v += f * y[t - i - 1];
                    }
                }
                for (i, b) in beta.iter().enumerate() {
                    if t >= i {
                        v += b * x[t - i];
                    }
                }
                y[t] = v;
            }
            Simulated { y, x: Some(x) }
        }
    };
    Ok(out)
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|v| !v.trim().is_empty())
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidDgp(format!("bad number `{v}`")))
        })
        .collect()
}

impl FromStr for DgpKind {
    type Err = Error;

    /// `white_noise`, `ar1(0.5)`, `random_walk`, `random_walk_drift(0.1)`,
    /// `cointegrated_pair(2,0.5)`, `level_shift(150,10)`,
    /// `ardl_process(0.5;1.0,0.25)` or `ardl_process(0.5;1.0,0.25;0.3)` with
    /// `φ`, `β` and an optional intercept.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once('(') {
            Some((n, rest)) => (
                n.trim(),
                rest.strip_suffix(')')
                    .ok_or_else(|| Error::InvalidDgp(format!("unbalanced `{s}`")))?,
            ),
            None => (s, ""),
        };
        let nums = || parse_list(args);
        let arity = |v: Vec<f64>, k: usize| -> Result<Vec<f64>> {
            if v.len() == k {
                Ok(v)
            } else {
                Err(Error::InvalidDgp(format!("`{name}` takes {k} argument(s)")))
            }
        };
        match name {
            "white_noise" => Ok(DgpKind::WhiteNoise),
            "random_walk" => Ok(DgpKind::RandomWalk),
            "ar1" => Ok(DgpKind::Ar1 {
                rho: arity(nums()?, 1)?[0],
            }),
            "random_walk_drift" => Ok(DgpKind::RandomWalkDrift {
                mu: arity(nums()?, 1)?[0],
            }),
            "cointegrated_pair" => {
                let v = arity(nums()?, 2)?;
                Ok(DgpKind::CointegratedPair {
                    theta: v[0],
                    alpha: v[1],
                })
            }
            "level_shift" => {
                let v = arity(nums()?, 2)?;
                if v[0] < 0.0 || v[0].fract() != 0.0 {
                    return Err(Error::InvalidDgp(format!("bad shift index {}", v[0])));
                }
                Ok(DgpKind::LevelShift {
                    tau: v[0] as usize,
                    size: v[1],
                })
            }
            "ardl_process" => {
                let parts: Vec<&str> = args.split(';').collect();
                if !(2..=3).contains(&parts.len()) {
                    return Err(Error::InvalidDgp(
                        "ardl_process(phi..;beta..[;intercept])".into(),
                    ));
                }
                let intercept = match parts.get(2) {
                    Some(c) => arity(parse_list(c)?, 1)?[0],
                    None => 0.0,
                };
                Ok(DgpKind::ArdlProcess {
                    phi: parse_list(parts[0])?,
                    beta: parse_list(parts[1])?,
                    intercept,
                })
            }
            _ => Err(Error::InvalidDgp(format!("unknown process `{name}`"))),
        }
    }
}

impl fmt::Display for DgpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            DgpKind::WhiteNoise => write!(f, "white_noise"),
            DgpKind::RandomWalk => write!(f, "random_walk"),
            DgpKind::Ar1 { rho } => write!(f, "ar1({rho})"),
            DgpKind::RandomWalkDrift { mu } => write!(f, "random_walk_drift({mu})"),
            DgpKind::CointegratedPair { theta, alpha } => {
                write!(f, "cointegrated_pair({theta},{alpha})")
            }
            DgpKind::LevelShift { tau, size } => write!(f, "level_shift({tau},{size})"),
            DgpKind::ArdlProcess {
                phi,
                beta,
                intercept,
            } => write!(f, "ardl_process({};{};{intercept})", join(phi), join(beta)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_is_bit_identical() {
        for kind in [
            DgpKind::WhiteNoise,
            DgpKind::Ar1 { rho: 0.7 },
            DgpKind::CointegratedPair {
                theta: 2.0,
                alpha: 0.5,
            },
        ] {
            let dgp = Dgp::new(kind, 200, 42);
            assert_eq!(generate(&dgp).unwrap(), generate(&dgp).unwrap());
        }
    }

    #[test]
    fn streams_differ() {
        let dgp = Dgp::new(DgpKind::WhiteNoise, 50, 42);
        assert_ne!(
            generate_replication(&dgp, 0).unwrap().y,
            generate_replication(&dgp, 1).unwrap().y
        );
    }

    #[test]
    fn white_noise_mean() {
        let y = generate(&Dgp::new(DgpKind::WhiteNoise, 100, 2024))
            .unwrap()
            .y;
        let mean = y.iter().sum::<f64>() / 100.0;
        assert!(mean.abs() < 0.4, "{mean}");
    }

    #[test]
    fn invalid_parameters() {
        let bad = [
            Dgp::new(DgpKind::Ar1 { rho: 1.2 }, 100, 0),
            Dgp::new(DgpKind::WhiteNoise, 10, 0),
            Dgp::new(
                DgpKind::CointegratedPair {
                    theta: 1.0,
                    alpha: 0.0,
                },
                100,
                0,
            ),
            Dgp::new(
                DgpKind::LevelShift {
                    tau: 100,
                    size: 1.0,
                },
                100,
                0,
            ),
        ];
        for d in bad {
            assert!(matches!(generate(&d), Err(Error::InvalidDgp(_))), "{d:?}");
        }
    }

    #[test]
    fn level_shift_adds_size() {
        let dgp = Dgp::new(DgpKind::LevelShift { tau: 40, size: 5.0 }, 80, 3);
        let shifted = generate(&dgp).unwrap().y;
        let base = generate(&Dgp::new(DgpKind::WhiteNoise, 80, 3)).unwrap().y;
        for t in 0..80 {
            let expect = base[t] + if t >= 40 { 5.0 } else { 0.0 };
            assert_eq!(shifted[t], expect);
        }
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "white_noise",
            "ar1(0.5)",
            "random_walk",
            "random_walk_drift(0.1)",
            "cointegrated_pair(2,0.5)",
            "level_shift(150,10)",
            "ardl_process(0.5;1,0.25;0)",
        ] {
            let k: DgpKind = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert!("ar1".parse::<DgpKind>().is_err());
        assert!("levy".parse::<DgpKind>().is_err());
    }
}
