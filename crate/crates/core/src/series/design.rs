use serde::{Deserialize, Serialize};

use super::{DeterministicCase, Panel, Role};
use crate::error::{Error, Result};
use crate::linreg::DesignMatrix;

/// How exogenous regressors enter a regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExogenousForm {
    /// `Δw_t`: short-run effect only.
    #[default]
    Differenced,
    /// `w_t` in levels.
    Level,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LagDesignOptions {
    pub p: usize,
    pub q: usize,
    pub case: DeterministicCase,
    pub exogenous_form: ExogenousForm,
    /// First panel row used; defaults to `max(p, q)`. Lag scans pass a common
    /// value so that every candidate is estimated on the same sample.
    pub first_row: Option<usize>,
}

impl LagDesignOptions {
    pub fn new(p: usize, q: usize, case: DeterministicCase) -> Self {
        Self {
            p,
            q,
            case,
            exogenous_form: ExogenousForm::default(),
            first_row: None,
        }
    }
}

/// Column positions of each block of an ARDL levels design.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignLayout {
    pub intercept: Option<usize>,
    pub trend: Option<usize>,
    /// `y_{t-1} .. y_{t-p}`
    pub y_lags: Vec<usize>,
    /// Per dynamic regressor, `x_t .. x_{t-q}`.
    pub x_lags: Vec<Vec<usize>>,
    pub exogenous: Vec<usize>,
    pub dummies: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct LagDesign {
    pub design: DesignMatrix,
    pub response: Vec<f64>,
    /// Panel row of the first observation in the design.
    pub first_row: usize,
    pub layout: DesignLayout,
    pub dependent: String,
    pub regressors: Vec<String>,
    pub exogenous: Vec<String>,
    pub dummies: Vec<String>,
}

/// Levels ARDL(p, q) design with the default options.
///
/// Column order is `[const, trend, y.L1..y.Lp, x.L0..x.Lq per regressor,
/// exogenous, dummies]`, where the constant and trend are present as the
/// deterministic case dictates. Rows run from panel index `max(p, q)` to the
/// end, so the design has `T - max(p, q)` rows.
pub fn build_lag_design(
    panel: &Panel,
    p: usize,
    q: usize,
    case: DeterministicCase,
) -> Result<LagDesign> {
    build_lag_design_with(panel, &LagDesignOptions::new(p, q, case))
}

pub fn build_lag_design_with(panel: &Panel, opts: &LagDesignOptions) -> Result<LagDesign> {
    let (p, q) = (opts.p, opts.q);
    if p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let dependent = panel
        .dependent()
        .ok_or_else(|| Error::InvalidPanel("panel has no dependent column".into()))?
        .to_string();
    let regressors: Vec<String> = panel
        .with_role(Role::DynamicRegressor)
        .into_iter()
        .map(String::from)
        .collect();
    let exogenous: Vec<String> = panel
        .with_role(Role::ExogenousRegressor)
        .into_iter()
        .map(String::from)
        .collect();
    let dummies: Vec<String> = panel
        .with_role(Role::Dummy)
        .into_iter()
        .map(String::from)
        .collect();

    let min_first = p.max(q);
    let first = opts.first_row.unwrap_or(min_first);
    if first < min_first {
        return Err(Error::InvalidArgument(format!(
            "first row {first} leaves no room for {min_first} lags"
        )));
    }
    let t_end = panel.len();
    let rows = t_end.saturating_sub(first);

    let col = |name: &str| panel.column(name).expect("role refers to a column");
    let lagged = |v: &[f64], k: usize| -> Vec<f64> { (first..t_end).map(|t| v[t - k]).collect() };

    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    let mut layout = DesignLayout::default();
    let push = |columns: &mut Vec<(String, Vec<f64>)>, name: String, v: Vec<f64>| {
        columns.push((name, v));
        columns.len() - 1
    };

    if opts.case.has_constant() {
        layout.intercept = Some(push(&mut columns, "const".into(), vec![1.0; rows]));
    }
    if opts.case.has_trend() {
        let trend = (first..t_end).map(|t| (t + 1) as f64).collect();
        layout.trend = Some(push(&mut columns, "trend".into(), trend));
    }
    let y = col(&dependent);
    for i in 1..=p {
        layout.y_lags.push(push(
            &mut columns,
            format!("{dependent}.L{i}"),
            lagged(y, i),
        ));
    }
    for x in &regressors {
        let v = col(x);
        let idx = (0..=q)
            .map(|i| push(&mut columns, format!("{x}.L{i}"), lagged(v, i)))
            .collect();
        layout.x_lags.push(idx);
    }
    for w in &exogenous {
        let v = col(w);
        let (name, values) = match opts.exogenous_form {
            ExogenousForm::Level => (w.clone(), lagged(v, 0)),
            ExogenousForm::Differenced => (
                format!("D.{w}"),
                (first..t_end).map(|t| v[t] - v[t - 1]).collect(),
            ),
        };
        layout.exogenous.push(push(&mut columns, name, values));
    }
    for du in &dummies {
        layout
            .dummies
            .push(push(&mut columns, du.clone(), lagged(col(du), 0)));
    }

    let ncols = columns.len();
    if rows <= ncols {
        return Err(Error::TooFewObservations {
            rows,
            columns: ncols,
        });
    }
    let design = DesignMatrix::from_columns(columns)?;
    Ok(LagDesign {
        design,
        response: lagged(y, 0),
        first_row: first,
        layout,
        dependent,
        regressors,
        exogenous,
        dummies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linreg::ols_fit;

    fn panel(y: Vec<f64>, x: Vec<f64>) -> Panel {
        Panel::daily_from(
            "2014-01-01".parse().unwrap(),
            vec![("y".into(), y), ("x".into(), x)],
        )
        .unwrap()
        .with_roles([("y", Role::Dependent), ("x", Role::DynamicRegressor)])
        .unwrap()
    }

    fn names(d: &LagDesign) -> Vec<&str> {
        d.design.column_names().iter().map(String::as_str).collect()
    }

    #[test]
    fn ardl11_columns_and_rows() {
        let v: Vec<f64> = (0..10).map(|i| (i * i) as f64).collect();
        let d =
            build_lag_design(&panel(v.clone(), v), 1, 1, DeterministicCase::ConstantTrend).unwrap();
        assert_eq!(names(&d), ["const", "trend", "y.L1", "x.L0", "x.L1"]);
        assert_eq!(d.design.nrows(), 9);
        assert_eq!(d.first_row, 1);
        // trend counts panel positions from one
        assert_eq!(d.design.column(1)[0], 2.0);
    }

    #[test]
    fn ardl20_columns() {
        let v: Vec<f64> = (0..12).map(|i| (i as f64).sin()).collect();
        let d =
            build_lag_design(&panel(v.clone(), v), 2, 0, DeterministicCase::ConstantTrend).unwrap();
        assert_eq!(names(&d), ["const", "trend", "y.L1", "y.L2", "x.L0"]);
        assert_eq!(d.layout.y_lags, vec![2, 3]);
        assert_eq!(d.layout.x_lags, vec![vec![4]]);
    }

    #[test]
    fn row_count_is_sample_minus_max_lag() {
        for t in 20..=40 {
            let v: Vec<f64> = (0..t).map(|i| ((i * 7919) % 31) as f64).collect();
            let pnl = panel(v.clone(), v.iter().map(|a| a * 0.5 + 1.0).collect());
            for p in 1..=4 {
                for q in 1..=4 {
                    let d = build_lag_design(&pnl, p, q, DeterministicCase::Constant).unwrap();
                    assert_eq!(d.design.nrows(), t - p.max(q));
                    assert_eq!(d.response.len(), t - p.max(q));
                }
            }
        }
    }

    #[test]
    fn lagged_copy_is_recovered_exactly() {
        // y_t = x_{t-1}, with x a deterministic but irregular sequence
        let x: Vec<f64> = (0..40)
            .map(|i| ((i as f64) * 1.7).sin() * 3.0 + ((i * i) % 11) as f64)
            .collect();
        let mut y = vec![0.3];
        y.extend_from_slice(&x[..39]);
        let d = build_lag_design(&panel(y, x), 1, 1, DeterministicCase::Constant).unwrap();
        let fit = ols_fit(&d.design, &d.response).unwrap();
        let expect = [0.0, 0.0, 0.0, 1.0]; // const, y.L1, x.L0, x.L1
        for (b, e) in fit.coefficients.iter().zip(expect) {
            assert!((b - e).abs() < 1e-10, "{b} vs {e}");
        }
    }

    #[test]
    fn short_panel_is_rejected() {
        let v: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let err = build_lag_design(&panel(v.clone(), v), 3, 3, DeterministicCase::ConstantTrend)
            .unwrap_err();
        assert!(matches!(err, Error::TooFewObservations { .. }));
    }

    #[test]
    fn exogenous_enters_differenced_by_default() {
        let pnl = Panel::daily_from(
            "2014-01-01".parse().unwrap(),
            vec![
                ("y".into(), (0..20).map(|i| (i as f64).cos()).collect()),
                ("w".into(), (0..20).map(|i| (i * i) as f64).collect()),
            ],
        )
        .unwrap()
        .with_roles([("y", Role::Dependent), ("w", Role::ExogenousRegressor)])
        .unwrap();
        let d = build_lag_design(&pnl, 1, 0, DeterministicCase::None).unwrap();
        assert_eq!(names(&d), ["y.L1", "D.w"]);
        assert_eq!(d.design.column(1)[0], 1.0); // w_1 - w_0
    }
}
