use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::dgp::{generate_replication, Dgp, DgpKind, Simulated};
use super::replication_rng;
use crate::ardl::{
    bounds_f_statistic, bounds_test, fit_ardl, to_ecm, ArdlSpec, BoundsCase, BoundsRow, Conclusion,
};
use crate::error::{Error, Result};
use crate::series::{DeterministicCase, Panel};
use crate::unitroot::tables::CriticalValueRow;
use crate::unitroot::{
    adf_test, dfgls_test, za_test, BreakModel, IntegrationConfig, LagSelection, Level,
};

/// Nominal levels (percent) reported by the experiments.
pub const MC_LEVELS: [f64; 3] = [1.0, 5.0, 10.0];

const ZA_TRIM: f64 = 0.15;

fn sim_start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2000, 1, 1).expect("valid date")
}

/// Which tail of the null distribution rejects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    Lower,
    Upper,
}

impl Tail {
    fn probability(self, level: f64) -> f64 {
        match self {
            Tail::Lower => level / 100.0,
            Tail::Upper => 1.0 - level / 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantileEstimate {
    /// Tail probability in percent.
    pub level: f64,
    pub value: f64,
    /// Monte Carlo standard error from order-statistic spacings.
    pub std_error: f64,
}

/// Empirical quantile of `sorted` at probability `prob` (linear
/// interpolation between order statistics) and its standard error,
/// half the distance between the order statistics at `np ± sqrt(np(1-p))`.
pub fn quantile_estimate(sorted: &[f64], prob: f64) -> (f64, f64) {
    let n = sorted.len();
    assert!(n > 0, "quantile of an empty sample");
    let h = (n - 1) as f64 * prob;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let value = sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]);
    let np = n as f64 * prob;
    let m = (np * (1.0 - prob)).sqrt();
    let a = ((np - m).floor().max(0.0) as usize).min(n - 1);
    let b = ((np + m).ceil().max(0.0) as usize).min(n - 1);
    (value, 0.5 * (sorted[b] - sorted[a]))
}

fn sorted_copy(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn quantiles(values: &[f64], tail: Tail, levels: &[f64]) -> Vec<QuantileEstimate> {
    let sorted = sorted_copy(values);
    levels
        .iter()
        .map(|&level| {
            let (value, std_error) = quantile_estimate(&sorted, tail.probability(level));
            QuantileEstimate {
                level,
                value,
                std_error,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

impl MeanSd {
    pub fn from_values(v: &[f64]) -> Self {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = if v.len() > 1 {
            v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            sd: var.sqrt(),
        }
    }
}

/// Statistic whose null distribution is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "test")]
pub enum CritTest {
    Adf { case: DeterministicCase },
    Dfgls { case: DeterministicCase },
    Za { model: BreakModel },
    Bounds { case: BoundsCase, k: usize },
}

impl CritTest {
    pub fn tail(self) -> Tail {
        match self {
            CritTest::Bounds { .. } => Tail::Upper,
            _ => Tail::Lower,
        }
    }

    fn levels(self) -> &'static [f64] {
        match self {
            CritTest::Bounds { .. } => &crate::ardl::BOUNDS_LEVELS,
            _ => &MC_LEVELS,
        }
    }
}

impl fmt::Display for CritTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CritTest::Adf { case } => write!(f, "adf:{case}"),
            CritTest::Dfgls { case } => write!(f, "dfgls:{case}"),
            CritTest::Za { model } => write!(f, "za:{}", model.as_str()),
            CritTest::Bounds { case, k } => write!(f, "bounds:{case}:{k}"),
        }
    }
}

impl FromStr for CritTest {
    type Err = Error;

    /// `adf:constant`, `dfgls:constant_trend`, `za:intercept`, `bounds:III:1`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidArgument(format!("bad test `{s}`"));
        match parts.as_slice() {
            ["adf", case] => Ok(CritTest::Adf {
                case: case.parse()?,
            }),
            ["dfgls", case] => Ok(CritTest::Dfgls {
                case: case.parse()?,
            }),
            ["za", model] => Ok(CritTest::Za {
                model: model.parse()?,
            }),
            ["bounds", case, k] => Ok(CritTest::Bounds {
                case: case.parse()?,
                k: k.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

/// Simulated null quantiles of a test statistic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalValueTable {
    pub test: CritTest,
    pub length: usize,
    pub replications: usize,
    pub seed: u64,
    /// Unit-root tests: lower-tail quantiles at 1, 5 and 10%. Bounds test:
    /// upper-tail quantiles with all regressors I(1).
    pub quantiles: Vec<QuantileEstimate>,
    /// Bounds test only: upper-tail quantiles with all regressors I(0).
    pub lower_bounds: Vec<QuantileEstimate>,
}

impl CriticalValueTable {
    pub fn value_at(&self, level: f64) -> Option<f64> {
        self.quantiles
            .iter()
            .find(|q| q.level == level)
            .map(|q| q.value)
    }

    pub fn lower_bound_at(&self, level: f64) -> Option<f64> {
        self.lower_bounds
            .iter()
            .find(|q| q.level == level)
            .map(|q| q.value)
    }

    /// Rows in the embedded unit-root table format.
    pub fn to_unitroot_rows(&self, t_range: &str) -> Result<Vec<CriticalValueRow>> {
        let (test, case) = match self.test {
            CritTest::Adf { case } => ("adf", case.as_str()),
            CritTest::Dfgls { case } => ("dfgls", case.as_str()),
            CritTest::Za { model } => ("za", model.as_str()),
            CritTest::Bounds { .. } => {
                return Err(Error::InvalidArgument(
                    "bounds quantiles use the bounds table format".into(),
                ))
            }
        };
        crate::unitroot::tables::parse_range(t_range)?;
        Ok(self
            .quantiles
            .iter()
            .map(|q| CriticalValueRow {
                test: test.into(),
                case: case.into(),
                level: q.level,
                t_range: t_range.into(),
                value: q.value,
            })
            .collect())
    }

    /// Rows in the embedded bounds table format.
    pub fn to_bounds_rows(&self) -> Result<Vec<BoundsRow>> {
        let CritTest::Bounds { case, k } = self.test else {
            return Err(Error::InvalidArgument(
                "unit-root quantiles use the unit-root table format".into(),
            ));
        };
        Ok(self
            .quantiles
            .iter()
            .zip(&self.lower_bounds)
            .map(|(hi, lo)| BoundsRow {
                case,
                k,
                level: hi.level,
                i0_bound: lo.value,
                i1_bound: hi.value,
            })
            .collect())
    }
}

fn collect_ordered<T: Send>(
    replications: usize,
    f: impl Fn(u64) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    (0..replications as u64)
        .into_par_iter()
        .map(f)
        .collect::<Result<Vec<T>>>()
}

fn bounds_null_statistics(
    case: BoundsCase,
    k: usize,
    length: usize,
    seed: u64,
    r: u64,
) -> Result<(f64, f64)> {
    let mut rng = replication_rng(seed, r);
    let mut draw = |n: usize| -> Vec<f64> {
        (0..n)
            .map(|_| {
                let e: f64 = StandardNormal.sample(&mut rng);
                e
            })
            .collect()
    };
    let walk = |e: &[f64]| -> Vec<f64> {
        e.iter()
            .scan(0.0, |a, v| {
                *a += v;
                Some(*a)
            })
            .collect()
    };
    let y = walk(&draw(length));
    let shocks: Vec<Vec<f64>> = (0..k).map(|_| draw(length)).collect();
    let names: Vec<String> = (1..=k).map(|j| format!("x{j}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let spec = ArdlSpec::new("y", &refs, case.deterministic_case(), 1, 1);
    let stat = |xs: Vec<Vec<f64>>| -> Result<f64> {
        let mut cols = vec![("y".to_string(), y.clone())];
        cols.extend(names.iter().cloned().zip(xs));
        let panel = Panel::daily_from(sim_start(), cols)?;
        Ok(bounds_f_statistic(&panel, &spec, Some(case))?.f_statistic)
    };
    let i0 = stat(shocks.clone())?;
    let i1 = stat(shocks.iter().map(|e| walk(e)).collect())?;
    Ok((i0, i1))
}

/// Null quantiles of `test` from `replications` series of length `length`.
///
/// Unit-root statistics use driftless random walks and no augmentation
/// lags; the bounds F uses a random-walk `y` with `k` independent regressors
/// that are white noise (lower bound) or random walks (upper bound), in an
/// ARDL(1, 1).
pub fn simulate_critical_values(
    test: CritTest,
    length: usize,
    replications: usize,
    seed: u64,
) -> Result<CriticalValueTable> {
    if replications < 2 {
        return Err(Error::InvalidArgument(
            "need at least two replications".into(),
        ));
    }
    let levels = test.levels();
    let tail = test.tail();
    let (quantiles, lower_bounds) = match test {
        CritTest::Bounds { case, k } => {
            let stats = collect_ordered(replications, |r| {
                bounds_null_statistics(case, k, length, seed, r)
            })?;
            let (i0, i1): (Vec<f64>, Vec<f64>) = stats.into_iter().unzip();
            (quantiles(&i1, tail, levels), quantiles(&i0, tail, levels))
        }
        _ => {
            let dgp = Dgp::new(DgpKind::RandomWalk, length, seed);
            dgp.validate()?;
            let stats = collect_ordered(replications, |r| {
                let y = generate_replication(&dgp, r)?.y;
                let fixed = LagSelection::Fixed(0);
                let res = match test {
                    CritTest::Adf { case } => adf_test(&y, case, Some(0), fixed)?,
                    CritTest::Dfgls { case } => dfgls_test(&y, case, Some(0), fixed)?,
                    CritTest::Za { model } => za_test(&y, model, Some(0), fixed, ZA_TRIM)?,
                    CritTest::Bounds { .. } => unreachable!(),
                };
                Ok(res.statistic)
            })?;
            (quantiles(&stats, tail, levels), Vec::new())
        }
    };
    Ok(CriticalValueTable {
        test,
        length,
        replications,
        seed,
        quantiles,
        lower_bounds,
    })
}

/// A test applied to simulated data in size and power experiments.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TestConfig {
    /// Unit-root test on `y` with the configuration's deterministic case.
    UnitRoot(IntegrationConfig),
    /// Bounds test of `y` on `x`; rejection means a cointegrated conclusion.
    Bounds {
        case: DeterministicCase,
        bounds_case: Option<BoundsCase>,
        p: usize,
        q: usize,
    },
}

struct Outcome {
    statistic: f64,
    rejects: [bool; 3],
}

impl TestConfig {
    fn tail(&self) -> Tail {
        match self {
            TestConfig::UnitRoot(_) => Tail::Lower,
            TestConfig::Bounds { .. } => Tail::Upper,
        }
    }

    fn apply(&self, sim: &Simulated) -> Result<Outcome> {
        match self {
            TestConfig::UnitRoot(cfg) => {
                let res = cfg.run(&sim.y, cfg.case)?;
                let rejects = [Level::One, Level::Five, Level::Ten].map(|l| res.rejects(l));
                Ok(Outcome {
                    statistic: res.statistic,
                    rejects,
                })
            }
            TestConfig::Bounds {
                case,
                bounds_case,
                p,
                q,
            } => {
                if sim.x.is_none() {
                    return Err(Error::InvalidDgp(
                        "bounds experiments need a bivariate process".into(),
                    ));
                }
                let panel = sim.to_panel(sim_start())?;
                let spec = ArdlSpec::new("y", &["x"], *case, *p, *q);
                let res = bounds_test(&panel, &spec, *bounds_case)?;
                let rejects =
                    MC_LEVELS.map(|l| res.conclusion_at(l) == Some(Conclusion::Cointegrated));
                Ok(Outcome {
                    statistic: res.f_statistic,
                    rejects,
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSummary {
    pub replications: usize,
    pub tail: Tail,
    /// Statistic quantiles at the rejecting tail for 1, 5 and 10%.
    pub quantiles: Vec<QuantileEstimate>,
    /// `(level, rate)` for 1, 5 and 10%.
    pub rejection_rates: Vec<(f64, f64)>,
    pub statistic: MeanSd,
}

impl McSummary {
    fn from_outcomes(outcomes: &[Outcome], tail: Tail) -> Self {
        let stats: Vec<f64> = outcomes.iter().map(|o| o.statistic).collect();
        let n = outcomes.len();
        let rejection_rates = MC_LEVELS
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let hits = outcomes.iter().filter(|o| o.rejects[i]).count();
                (l, hits as f64 / n as f64)
            })
            .collect();
        Self {
            replications: n,
            tail,
            quantiles: quantiles(&stats, tail, &MC_LEVELS),
            rejection_rates,
            statistic: MeanSd::from_values(&stats),
        }
    }

    pub fn rate_at(&self, level: f64) -> Option<f64> {
        self.rejection_rates
            .iter()
            .find(|(l, _)| *l == level)
            .map(|(_, r)| *r)
    }

    /// Binomial standard error of the rejection rate at `level`.
    pub fn rate_std_error(&self, level: f64) -> Option<f64> {
        self.rate_at(level)
            .map(|r| (r * (1.0 - r) / self.replications as f64).sqrt())
    }
}

fn run_outcomes(
    test: &TestConfig,
    dgp: &Dgp,
    replications: usize,
    seed: u64,
) -> Result<Vec<Outcome>> {
    let dgp = Dgp {
        seed,
        ..dgp.clone()
    };
    dgp.validate()?;
    collect_ordered(replications, |r| {
        test.apply(&generate_replication(&dgp, r)?)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerExperiment {
    pub null: McSummary,
    pub alternative: McSummary,
}

/// Rejection rates of `test` under `null` and `alternative`. Both processes
/// are driven by `seed`, so replication `r` of each uses the same stream.
pub fn size_power_experiment(
    test: &TestConfig,
    null: &Dgp,
    alternative: &Dgp,
    replications: usize,
    seed: u64,
) -> Result<PowerExperiment> {
    let tail = test.tail();
    let n = run_outcomes(test, null, replications, seed)?;
    let a = run_outcomes(test, alternative, replications, seed)?;
    Ok(PowerExperiment {
        null: McSummary::from_outcomes(&n, tail),
        alternative: McSummary::from_outcomes(&a, tail),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedComparison {
    pub level: f64,
    pub first: McSummary,
    pub second: McSummary,
    pub both: usize,
    pub only_first: usize,
    pub only_second: usize,
}

impl PairedComparison {
    /// Difference in rejection rates, second minus first.
    pub fn rate_difference(&self) -> f64 {
        (self.only_second as f64 - self.only_first as f64) / self.first.replications as f64
    }
}

/// Two tests applied to the same simulated series.
pub fn paired_comparison(
    first: &TestConfig,
    second: &TestConfig,
    dgp: &Dgp,
    replications: usize,
    seed: u64,
    level: Level,
) -> Result<PairedComparison> {
    let idx = MC_LEVELS
        .iter()
        .position(|&l| l == level.percent())
        .expect("every level is simulated");
    let dgp = Dgp {
        seed,
        ..dgp.clone()
    };
    dgp.validate()?;
    let pairs = collect_ordered(replications, |r| {
        let sim = generate_replication(&dgp, r)?;
        Ok((first.apply(&sim)?, second.apply(&sim)?))
    })?;
    let (a, b): (Vec<Outcome>, Vec<Outcome>) = pairs.into_iter().unzip();
    let mut both = 0;
    let mut only_first = 0;
    let mut only_second = 0;
    for (x, y) in a.iter().zip(&b) {
        match (x.rejects[idx], y.rejects[idx]) {
            (true, true) => both += 1,
            (true, false) => only_first += 1,
            (false, true) => only_second += 1,
            _ => {}
        }
    }
    Ok(PairedComparison {
        level: level.percent(),
        first: McSummary::from_outcomes(&a, first.tail()),
        second: McSummary::from_outcomes(&b, second.tail()),
        both,
        only_first,
        only_second,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongRunRecovery {
    pub truth: f64,
    pub replications: usize,
    pub theta: MeanSd,
    pub alpha: MeanSd,
    /// Share of 95% intervals for `θ` that contain the truth.
    pub coverage: f64,
}

/// Estimates the long-run coefficient of a cointegrated pair with `spec`
/// (variables `y` and `x`) in every replication.
pub fn long_run_recovery(
    dgp: &Dgp,
    spec: &ArdlSpec,
    replications: usize,
    seed: u64,
) -> Result<LongRunRecovery> {
    let DgpKind::CointegratedPair { theta, .. } = dgp.kind else {
        return Err(Error::InvalidDgp(
            "long-run recovery needs a cointegrated pair".into(),
        ));
    };
    let dgp = Dgp {
        seed,
        ..dgp.clone()
    };
    dgp.validate()?;
    let fits = collect_ordered(replications, |r| {
        let panel = generate_replication(&dgp, r)?.to_panel(sim_start())?;
        let ecm = to_ecm(&fit_ardl(&panel, spec)?)?;
        let t = &ecm.theta[0];
        let crit = StudentsT::new(0.0, 1.0, ecm.df_resid as f64)
            .expect("valid t distribution")
            .inverse_cdf(0.975);
        let covered = (t.estimate - theta).abs() <= crit * t.std_error;
        Ok((t.estimate, ecm.alpha.estimate, covered))
    })?;
    let thetas: Vec<f64> = fits.iter().map(|f| f.0).collect();
    let alphas: Vec<f64> = fits.iter().map(|f| f.1).collect();
    let covered = fits.iter().filter(|f| f.2).count();
    Ok(LongRunRecovery {
        truth: theta,
        replications,
        theta: MeanSd::from_values(&thetas),
        alpha: MeanSd::from_values(&alphas),
        coverage: covered as f64 / replications as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_of_uniform_grid() {
        let v: Vec<f64> = (0..=100).map(f64::from).collect();
        let (q, se) = quantile_estimate(&v, 0.05);
        assert!((q - 5.0).abs() < 1e-12);
        assert!(se > 0.0);
    }

    #[test]
    fn smoke_run_returns_monotone_quantiles() {
        let t = simulate_critical_values(
            CritTest::Adf {
                case: DeterministicCase::Constant,
            },
            100,
            100,
            1,
        )
        .unwrap();
        assert_eq!(t.quantiles.len(), 3);
        assert!(t.quantiles[0].value <= t.quantiles[1].value);
        assert!(t.quantiles[1].value <= t.quantiles[2].value);
        assert!(t.quantiles.iter().all(|q| q.std_error >= 0.0));
        assert_eq!(t.to_unitroot_rows("75-149").unwrap().len(), 3);
    }

    #[test]
    fn bounds_smoke_run() {
        let t = simulate_critical_values(
            CritTest::Bounds {
                case: BoundsCase::III,
                k: 1,
            },
            100,
            50,
            1,
        )
        .unwrap();
        let rows = t.to_bounds_rows().unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.windows(2).all(|w| w[0].i1_bound <= w[1].i1_bound));
    }

    #[test]
    fn identical_null_and_alternative() {
        let cfg = TestConfig::UnitRoot(IntegrationConfig {
            lag_selection: LagSelection::Fixed(0),
            max_lags: Some(0),
            ..IntegrationConfig::default()
        });
        let dgp = Dgp::new(DgpKind::RandomWalk, 100, 0);
        let e = size_power_experiment(&cfg, &dgp, &dgp, 50, 3).unwrap();
        assert_eq!(e.null, e.alternative);
    }

    #[test]
    fn crit_test_parsing() {
        for s in [
            "adf:constant",
            "dfgls:constant_trend",
            "za:both",
            "bounds:III:2",
        ] {
            assert_eq!(s.parse::<CritTest>().unwrap().to_string(), s);
        }
        assert!("bounds:III".parse::<CritTest>().is_err());
    }
}
