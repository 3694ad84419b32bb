//! ARDL(p, q) estimation, the bounds cointegration test and the
//! error-correction representation.
//!
//! The levels model is
//!
//! ```text
//! y_t = c0 + c1 t + Σ_{i=1..p} φ_i y_{t-i} + Σ_j Σ_{i=0..q} β_{j,i} x_{j,t-i}
//!       + δ w_t + Σ c_D DU_t + u_t
//! ```
//!
//! with one lag order `q` shared by all dynamic regressors. Exogenous
//! regressors enter differenced unless the spec asks for levels, and step
//! dummies are one strictly after their break date.

mod bounds;
mod ecm;
mod select;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linreg::{ols_fit, RegressionFit};
use crate::series::{
    build_lag_design_with, step_dummy, DesignLayout, DeterministicCase, ExogenousForm,
    LagDesignOptions, Panel, Role,
};

pub use bounds::{
    bounds_critical_values, bounds_f_statistic, bounds_test, conclude, read_bounds_rows,
    write_bounds_rows, BoundsCase, BoundsLevel, BoundsResult, BoundsRow, Conclusion, BOUNDS_LEVELS,
};
pub use ecm::{
    build_ecm_design, fit_ecm_direct, fit_ecm_with_dummies, to_ecm, EcmDesign, EcmFit, EcmLayout,
};
pub use select::{select_lags, LagChoice};

/// Extra usable rows required beyond the number of estimated coefficients.
pub const MIN_RESIDUAL_DF: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DummySpec {
    pub name: String,
    /// Last date with the dummy at zero.
    pub break_date: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArdlSpec {
    pub dependent: String,
    pub dynamic_regressors: Vec<String>,
    pub exogenous: Vec<String>,
    pub case: DeterministicCase,
    pub p: usize,
    pub q: usize,
    pub dummies: Vec<DummySpec>,
    #[serde(default)]
    pub exogenous_form: ExogenousForm,
}

impl ArdlSpec {
    pub fn new(
        dependent: impl Into<String>,
        dynamic_regressors: &[&str],
        case: DeterministicCase,
        p: usize,
        q: usize,
    ) -> Self {
        Self {
            dependent: dependent.into(),
            dynamic_regressors: dynamic_regressors.iter().map(|s| s.to_string()).collect(),
            exogenous: Vec::new(),
            case,
            p,
            q,
            dummies: Vec::new(),
            exogenous_form: ExogenousForm::default(),
        }
    }

    pub fn with_exogenous(mut self, names: &[&str]) -> Self {
        self.exogenous = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_dummy(mut self, name: impl Into<String>, break_date: NaiveDate) -> Self {
        self.dummies.push(DummySpec {
            name: name.into(),
            break_date,
        });
        self
    }

    pub fn with_lags(mut self, p: usize, q: usize) -> Self {
        self.p = p;
        self.q = q;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::InvalidArgument("p must be at least 1".into()));
        }
        let mut names: Vec<&str> = vec![self.dependent.as_str()];
        names.extend(self.dynamic_regressors.iter().map(String::as_str));
        names.extend(self.exogenous.iter().map(String::as_str));
        names.extend(self.dummies.iter().map(|d| d.name.as_str()));
        let mut sorted = names.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "variable `{}` appears twice in the model",
                w[0]
            )));
        }
        Ok(())
    }

    /// Selects the model's columns from `panel`, appends step dummies and
    /// assigns roles.
    pub fn prepare_panel(&self, panel: &Panel) -> Result<Panel> {
        self.validate()?;
        let mut names: Vec<&str> = vec![self.dependent.as_str()];
        names.extend(self.dynamic_regressors.iter().map(String::as_str));
        names.extend(self.exogenous.iter().map(String::as_str));
        let mut out = panel.select(&names)?;
        let dates = panel.dates();
        for d in &self.dummies {
            let inside = dates
                .first()
                .zip(dates.last())
                .is_some_and(|(first, last)| *first <= d.break_date && d.break_date < *last);
            if !inside {
                return Err(Error::DummyOutsideSample {
                    name: d.name.clone(),
                    date: d.break_date,
                });
            }
            out = out.push_column(d.name.clone(), step_dummy(dates, d.break_date))?;
        }
        let mut roles = vec![(self.dependent.clone(), Role::Dependent)];
        roles.extend(
            self.dynamic_regressors
                .iter()
                .map(|x| (x.clone(), Role::DynamicRegressor)),
        );
        roles.extend(
            self.exogenous
                .iter()
                .map(|w| (w.clone(), Role::ExogenousRegressor)),
        );
        roles.extend(self.dummies.iter().map(|d| (d.name.clone(), Role::Dummy)));
        out.with_roles(roles)
    }

    pub(crate) fn design_options(&self, first_row: Option<usize>) -> LagDesignOptions {
        LagDesignOptions {
            p: self.p,
            q: self.q,
            case: self.case,
            exogenous_form: self.exogenous_form,
            first_row,
        }
    }
}

/// Role of one levels coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CoefficientRole {
    Intercept,
    Trend,
    /// `φ_lag`
    OwnLag {
        lag: usize,
    },
    /// `β_{regressor, lag}`
    Regressor {
        regressor: usize,
        lag: usize,
    },
    Exogenous {
        index: usize,
    },
    Dummy {
        index: usize,
    },
}

#[derive(Debug, Clone)]
pub struct ArdlFit {
    pub spec: ArdlSpec,
    pub fit: RegressionFit,
    pub layout: DesignLayout,
    /// Panel row of the first estimation observation.
    pub first_row: usize,
    /// Dates of the estimation sample.
    pub dates: Vec<NaiveDate>,
}

impl ArdlFit {
    fn coef(&self, j: usize) -> f64 {
        self.fit.coefficients[j]
    }

    /// `φ_1 .. φ_p`
    pub fn phi(&self) -> Vec<f64> {
        self.layout.y_lags.iter().map(|&j| self.coef(j)).collect()
    }

    /// `β_{j,0} .. β_{j,q}` for dynamic regressor `j`.
    pub fn beta(&self, j: usize) -> Vec<f64> {
        self.layout.x_lags[j]
            .iter()
            .map(|&c| self.coef(c))
            .collect()
    }

    pub fn delta(&self) -> Vec<f64> {
        self.layout
            .exogenous
            .iter()
            .map(|&j| self.coef(j))
            .collect()
    }

    pub fn intercept(&self) -> Option<f64> {
        self.layout.intercept.map(|j| self.coef(j))
    }

    pub fn trend(&self) -> Option<f64> {
        self.layout.trend.map(|j| self.coef(j))
    }

    pub fn dummy_coefficients(&self) -> Vec<f64> {
        self.layout.dummies.iter().map(|&j| self.coef(j)).collect()
    }

    /// Role of every design column, in column order.
    pub fn coefficient_roles(&self) -> Vec<CoefficientRole> {
        let mut roles = vec![None; self.fit.ncoef()];
        if let Some(j) = self.layout.intercept {
            roles[j] = Some(CoefficientRole::Intercept);
        }
        if let Some(j) = self.layout.trend {
            roles[j] = Some(CoefficientRole::Trend);
        }
        for (i, &j) in self.layout.y_lags.iter().enumerate() {
            roles[j] = Some(CoefficientRole::OwnLag { lag: i + 1 });
        }
        for (r, cols) in self.layout.x_lags.iter().enumerate() {
            for (lag, &j) in cols.iter().enumerate() {
                roles[j] = Some(CoefficientRole::Regressor { regressor: r, lag });
            }
        }
        for (i, &j) in self.layout.exogenous.iter().enumerate() {
            roles[j] = Some(CoefficientRole::Exogenous { index: i });
        }
        for (i, &j) in self.layout.dummies.iter().enumerate() {
            roles[j] = Some(CoefficientRole::Dummy { index: i });
        }
        roles
            .into_iter()
            .map(|r| r.expect("every column has a role"))
            .collect()
    }
}

pub(crate) fn fit_prepared(
    prepared: &Panel,
    spec: &ArdlSpec,
    first_row: Option<usize>,
) -> Result<ArdlFit> {
    let design = build_lag_design_with(prepared, &spec.design_options(first_row))?;
    let rows = design.design.nrows();
    let cols = design.design.ncols();
    if rows < cols + MIN_RESIDUAL_DF {
        return Err(Error::TooFewObservations {
            rows,
            columns: cols,
        });
    }
    let fit = ols_fit(&design.design, &design.response)?;
    Ok(ArdlFit {
        spec: spec.clone(),
        fit,
        layout: design.layout,
        first_row: design.first_row,
        dates: prepared.dates()[design.first_row..].to_vec(),
    })
}

/// OLS estimate of the levels ARDL model described by `spec`.
pub fn fit_ardl(panel: &Panel, spec: &ArdlSpec) -> Result<ArdlFit> {
    let prepared = spec.prepare_panel(panel)?;
    fit_prepared(&prepared, spec, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn start() -> NaiveDate {
        "2014-01-01".parse().unwrap()
    }

    fn irregular(n: usize, a: f64) -> Vec<f64> {
        (0..n)
            .map(|i| (i as f64 * a).sin() + ((i * 37) % 17) as f64 * 0.1)
            .collect()
    }

    #[test]
    fn zero_regressor_is_rank_deficient() {
        let panel = Panel::daily_from(
            start(),
            vec![
                ("y".into(), irregular(80, 0.7)),
                ("x".into(), vec![0.0; 80]),
            ],
        )
        .unwrap();
        let spec = ArdlSpec::new("y", &["x"], DeterministicCase::Constant, 1, 1);
        match fit_ardl(&panel, &spec) {
            Err(Error::RankDeficient { columns }) => {
                assert!(columns.iter().all(|c| c.starts_with("x.")), "{columns:?}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn minimal_spec_has_two_coefficients() {
        let panel = Panel::daily_from(
            start(),
            vec![
                ("y".into(), irregular(60, 0.3)),
                ("x".into(), irregular(60, 1.1)),
            ],
        )
        .unwrap();
        let spec = ArdlSpec::new("y", &["x"], DeterministicCase::None, 1, 0);
        let fit = fit_ardl(&panel, &spec).unwrap();
        assert_eq!(fit.fit.ncoef(), 2);
        assert_eq!(
            fit.coefficient_roles(),
            vec![
                CoefficientRole::OwnLag { lag: 1 },
                CoefficientRole::Regressor {
                    regressor: 0,
                    lag: 0
                }
            ]
        );
    }

    #[test]
    fn dependent_cannot_be_a_regressor() {
        let spec = ArdlSpec::new("y", &["y"], DeterministicCase::None, 1, 0);
        assert!(spec.validate().is_err());
        assert!(ArdlSpec::new("y", &["x"], DeterministicCase::None, 0, 0)
            .validate()
            .is_err());
    }

    #[test]
    fn too_few_rows_for_residual_margin() {
        let panel = Panel::daily_from(
            start(),
            vec![
                ("y".into(), irregular(13, 0.3)),
                ("x".into(), irregular(13, 1.1)),
            ],
        )
        .unwrap();
        let spec = ArdlSpec::new("y", &["x"], DeterministicCase::Constant, 1, 1);
        assert!(matches!(
            fit_ardl(&panel, &spec),
            Err(Error::TooFewObservations { .. })
        ));
    }

    #[test]
    fn dummy_after_sample_is_rejected() {
        let panel = Panel::daily_from(
            start(),
            vec![
                ("y".into(), irregular(60, 0.3)),
                ("x".into(), irregular(60, 1.1)),
            ],
        )
        .unwrap();
        let spec = ArdlSpec::new("y", &["x"], DeterministicCase::Constant, 1, 1)
            .with_dummy("DU", "2020-01-01".parse().unwrap());
        assert!(matches!(
            fit_ardl(&panel, &spec),
            Err(Error::DummyOutsideSample { .. })
        ));
    }
}
