use chrono::NaiveDate;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{fit_prepared, ArdlFit, ArdlSpec, MIN_RESIDUAL_DF};
use crate::error::{Error, Result};
use crate::linreg::{ols_fit, CoefficientTest, DesignMatrix, RegressionFit};
use crate::series::{ExogenousForm, Panel};

/// Smallest admissible `|α|`.
pub const ALPHA_TOLERANCE: f64 = 1e-6;

/// Column positions of the error-correction regression
///
/// ```text
/// Δy_t = c0 + c1 t + π_y y_{t-1} + Σ_j π_j x_{j,t-1} + Σ_{i=1..p-1} φ_yi Δy_{t-i}
///        + Σ_j Σ_{i=0..q-1} φ_{j,i} Δx_{j,t-i} + δ w_t + Σ c_D DU_t + u_t
/// ```
///
/// with `π_y = -α` and `π_j = α θ_j`. When `q = 0` the regressor enters as
/// `x_t` and there are no `Δx` terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EcmLayout {
    pub intercept: Option<usize>,
    pub trend: Option<usize>,
    pub y_level: usize,
    pub x_levels: Vec<usize>,
    pub dy_lags: Vec<usize>,
    pub dx_lags: Vec<Vec<usize>>,
    pub exogenous: Vec<usize>,
    pub dummies: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct EcmDesign {
    pub design: DesignMatrix,
    pub response: Vec<f64>,
    pub first_row: usize,
    pub layout: EcmLayout,
}

fn exogenous_name(spec: &ArdlSpec, w: &str) -> String {
    match spec.exogenous_form {
        ExogenousForm::Differenced => format!("D.{w}"),
        ExogenousForm::Level => w.to_string(),
    }
}

/// Column names and layout of the ECM regression for `spec`.
fn ecm_columns(spec: &ArdlSpec) -> (Vec<String>, EcmLayout) {
    let y = &spec.dependent;
    let mut names = Vec::new();
    let mut layout = EcmLayout::default();
    let push = |names: &mut Vec<String>, n: String| {
        names.push(n);
        names.len() - 1
    };
    if spec.case.has_constant() {
        layout.intercept = Some(push(&mut names, "const".into()));
    }
    if spec.case.has_trend() {
        layout.trend = Some(push(&mut names, "trend".into()));
    }
    layout.y_level = push(&mut names, format!("{y}.L1"));
    let level_lag = usize::from(spec.q >= 1);
    for x in &spec.dynamic_regressors {
        layout
            .x_levels
            .push(push(&mut names, format!("{x}.L{level_lag}")));
    }
    for i in 1..spec.p {
        layout.dy_lags.push(push(&mut names, format!("D.{y}.L{i}")));
    }
    for x in &spec.dynamic_regressors {
        let cols = (0..spec.q)
            .map(|i| push(&mut names, format!("D.{x}.L{i}")))
            .collect();
        layout.dx_lags.push(cols);
    }
    for w in &spec.exogenous {
        layout
            .exogenous
            .push(push(&mut names, exogenous_name(spec, w)));
    }
    for d in &spec.dummies {
        layout.dummies.push(push(&mut names, d.name.clone()));
    }
    (names, layout)
}

/// Builds the ECM regression on a panel prepared by [`ArdlSpec::prepare_panel`].
pub fn build_ecm_design(
    prepared: &Panel,
    spec: &ArdlSpec,
    first_row: Option<usize>,
) -> Result<EcmDesign> {
    spec.validate()?;
    let first = first_row.unwrap_or(spec.p.max(spec.q));
    if first < spec.p.max(spec.q) {
        return Err(Error::InvalidArgument(format!(
            "first row {first} leaves no room for the lags"
        )));
    }
    let t_end = prepared.len();
    let rows = t_end.saturating_sub(first);
    let col = |name: &str| {
        prepared
            .column(name)
            .ok_or_else(|| Error::InvalidPanel(format!("missing column `{name}`")))
    };
    let at = |v: &[f64], k: usize| -> Vec<f64> { (first..t_end).map(|t| v[t - k]).collect() };
    let diff = |v: &[f64], k: usize| -> Vec<f64> {
        (first..t_end).map(|t| v[t - k] - v[t - k - 1]).collect()
    };

    let (names, layout) = ecm_columns(spec);
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    if let Some(j) = layout.intercept {
        columns[j] = vec![1.0; rows];
    }
    if let Some(j) = layout.trend {
        columns[j] = (first..t_end).map(|t| (t + 1) as f64).collect();
    }
    let y = col(&spec.dependent)?;
    columns[layout.y_level] = at(y, 1);
    for (i, &j) in layout.dy_lags.iter().enumerate() {
        columns[j] = diff(y, i + 1);
    }
    let level_lag = usize::from(spec.q >= 1);
    for (r, x) in spec.dynamic_regressors.iter().enumerate() {
        let v = col(x)?;
        columns[layout.x_levels[r]] = at(v, level_lag);
        for (i, &j) in layout.dx_lags[r].iter().enumerate() {
            columns[j] = diff(v, i);
        }
    }
    for (w, &j) in spec.exogenous.iter().zip(&layout.exogenous) {
        let v = col(w)?;
        columns[j] = match spec.exogenous_form {
            ExogenousForm::Differenced => diff(v, 0),
            ExogenousForm::Level => at(v, 0),
        };
    }
    for (d, &j) in spec.dummies.iter().zip(&layout.dummies) {
        columns[j] = at(col(&d.name)?, 0);
    }
    if rows < names.len() + MIN_RESIDUAL_DF {
        return Err(Error::TooFewObservations {
            rows,
            columns: names.len(),
        });
    }
    let design = DesignMatrix::from_columns(names.into_iter().zip(columns).collect())?;
    Ok(EcmDesign {
        design,
        response: diff(y, 0),
        first_row: first,
        layout,
    })
}

pub(crate) fn ecm_regression(
    prepared: &Panel,
    spec: &ArdlSpec,
    first_row: Option<usize>,
) -> Result<(RegressionFit, EcmDesign)> {
    let design = build_ecm_design(prepared, spec, first_row)?;
    let fit = ols_fit(&design.design, &design.response)?;
    Ok((fit, design))
}

/// Error-correction form of an ARDL model.
#[derive(Debug, Clone, Serialize)]
pub struct EcmFit {
    pub dependent: String,
    pub regressors: Vec<String>,
    /// Speed of adjustment, positive when deviations from the long run decay.
    pub alpha: CoefficientTest,
    /// Long-run coefficient of each dynamic regressor.
    pub theta: Vec<CoefficientTest>,
    /// `φ_y1 .. φ_y(p-1)`
    pub own_lags: Vec<CoefficientTest>,
    /// Contemporaneous effect `ω` of each `Δx`.
    pub omega: Vec<CoefficientTest>,
    /// `φ_x1 .. φ_x(q-1)` per regressor.
    pub lagged_differences: Vec<Vec<CoefficientTest>>,
    pub exogenous: Vec<CoefficientTest>,
    pub intercept: Option<CoefficientTest>,
    pub trend: Option<CoefficientTest>,
    pub dummies: Vec<CoefficientTest>,
    /// Coefficients of the ECM regression in column order.
    pub coefficients: Vec<CoefficientTest>,
    #[serde(skip)]
    pub covariance: DMatrix<f64>,
    #[serde(skip)]
    pub layout: EcmLayout,
    pub residuals: Vec<f64>,
    pub dates: Vec<NaiveDate>,
    pub nobs: usize,
    pub df_resid: usize,
    pub sigma2: f64,
}

struct EcmParts<'a> {
    spec: &'a ArdlSpec,
    names: Vec<String>,
    layout: EcmLayout,
    coefficients: DVector<f64>,
    covariance: DMatrix<f64>,
    residuals: Vec<f64>,
    dates: Vec<NaiveDate>,
    df_resid: usize,
    sigma2: f64,
}

impl EcmFit {
    fn from_parts(parts: EcmParts<'_>) -> Result<Self> {
        let EcmParts {
            spec,
            names,
            layout,
            coefficients: g,
            covariance: cov,
            residuals,
            dates,
            df_resid,
            sigma2,
        } = parts;
        let df = df_resid;
        let alpha_hat = -g[layout.y_level];
        if !alpha_hat.is_finite() || alpha_hat.abs() <= ALPHA_TOLERANCE {
            return Err(Error::NearSingularAdjustment { alpha: alpha_hat });
        }
        let se = |j: usize| cov[(j, j)].max(0.0).sqrt();
        let test = |j: usize| CoefficientTest::new(names[j].clone(), g[j], se(j), df);
        let coefficients: Vec<CoefficientTest> = (0..names.len()).map(test).collect();
        let pick = |idx: &[usize]| idx.iter().map(|&j| coefficients[j].clone()).collect();

        let alpha = CoefficientTest::new("alpha", alpha_hat, se(layout.y_level), df);
        let theta = layout
            .x_levels
            .iter()
            .zip(&spec.dynamic_regressors)
            .map(|(&j, x)| long_run_test(&g, &cov, layout.y_level, j, x, df))
            .collect();
        let omega = layout
            .dx_lags
            .iter()
            .zip(&layout.x_levels)
            .map(|(lags, &level)| match lags.first() {
                Some(&j) => coefficients[j].clone(),
                None => coefficients[level].clone(),
            })
            .collect();
        let lagged_differences = layout
            .dx_lags
            .iter()
            .map(|lags| {
                lags.iter()
                    .skip(1)
                    .map(|&j| coefficients[j].clone())
                    .collect()
            })
            .collect();
        Ok(Self {
            dependent: spec.dependent.clone(),
            regressors: spec.dynamic_regressors.clone(),
            alpha,
            theta,
            own_lags: pick(&layout.dy_lags),
            omega,
            lagged_differences,
            exogenous: pick(&layout.exogenous),
            intercept: layout.intercept.map(|j| coefficients[j].clone()),
            trend: layout.trend.map(|j| coefficients[j].clone()),
            dummies: pick(&layout.dummies),
            nobs: residuals.len(),
            coefficients,
            covariance: cov,
            layout,
            residuals,
            dates,
            df_resid,
            sigma2,
        })
    }

    pub fn coefficient(&self, name: &str) -> Option<&CoefficientTest> {
        self.coefficients.iter().find(|c| c.name == name)
    }

    /// Long-run multiplier `-π_c / π_y` of any ECM column, e.g. a dummy or
    /// the constant, with a delta-method standard error.
    pub fn long_run(&self, name: &str) -> Option<CoefficientTest> {
        let j = self.coefficients.iter().position(|c| c.name == name)?;
        let g = DVector::from_iterator(
            self.coefficients.len(),
            self.coefficients.iter().map(|c| c.estimate),
        );
        Some(long_run_test(
            &g,
            &self.covariance,
            self.layout.y_level,
            j,
            name,
            self.df_resid,
        ))
    }
}

fn long_run_test(
    g: &DVector<f64>,
    cov: &DMatrix<f64>,
    y: usize,
    j: usize,
    name: &str,
    df: usize,
) -> CoefficientTest {
    let (gy, gj) = (g[y], g[j]);
    let estimate = -gj / gy;
    // gradient of -g_j / g_y
    let dy = gj / (gy * gy);
    let dj = -1.0 / gy;
    let var = dy * dy * cov[(y, y)] + 2.0 * dy * dj * cov[(y, j)] + dj * dj * cov[(j, j)];
    CoefficientTest::new(name, estimate, var.max(0.0).sqrt(), df)
}

/// Maps levels coefficients `b` to ECM coefficients `M b + c`.
fn levels_to_ecm_map(ardl: &ArdlFit, ecm: &EcmLayout) -> (DMatrix<f64>, DVector<f64>) {
    let k = ardl.fit.ncoef();
    let lv = &ardl.layout;
    let mut m = DMatrix::zeros(k, k);
    let mut c = DVector::zeros(k);
    if let (Some(e), Some(l)) = (ecm.intercept, lv.intercept) {
        m[(e, l)] = 1.0;
    }
    if let (Some(e), Some(l)) = (ecm.trend, lv.trend) {
        m[(e, l)] = 1.0;
    }
    for &l in &lv.y_lags {
        m[(ecm.y_level, l)] = 1.0;
    }
    c[ecm.y_level] = -1.0;
    for (i, &e) in ecm.dy_lags.iter().enumerate() {
        // φ_yi = -Σ_{m>i} φ_m; dy_lags[i] is lag i + 1
        for &l in &lv.y_lags[i + 1..] {
            m[(e, l)] = -1.0;
        }
    }
    for (r, lags) in lv.x_lags.iter().enumerate() {
        for &l in lags {
            m[(ecm.x_levels[r], l)] = 1.0;
        }
        for (i, &e) in ecm.dx_lags[r].iter().enumerate() {
            if i == 0 {
                m[(e, lags[0])] = 1.0;
            } else {
                for &l in &lags[i + 1..] {
                    m[(e, l)] = -1.0;
                }
            }
        }
    }
    for (&e, &l) in ecm.exogenous.iter().zip(&lv.exogenous) {
        m[(e, l)] = 1.0;
    }
    for (&e, &l) in ecm.dummies.iter().zip(&lv.dummies) {
        m[(e, l)] = 1.0;
    }
    (m, c)
}

/// Reparameterizes a levels fit into error-correction form. Standard errors
/// follow from the levels covariance; long-run coefficients use the delta
/// method.
pub fn to_ecm(ardl: &ArdlFit) -> Result<EcmFit> {
    let (names, layout) = ecm_columns(&ardl.spec);
    debug_assert_eq!(names.len(), ardl.fit.ncoef());
    let (m, c) = levels_to_ecm_map(ardl, &layout);
    let g = &m * &ardl.fit.coefficients + c;
    let cov = &m * &ardl.fit.covariance * m.transpose();
    let cov = (&cov + cov.transpose()) * 0.5;
    EcmFit::from_parts(EcmParts {
        spec: &ardl.spec,
        names,
        layout,
        coefficients: g,
        covariance: cov,
        residuals: ardl.fit.residuals.iter().copied().collect(),
        dates: ardl.dates.clone(),
        df_resid: ardl.fit.df_resid,
        sigma2: ardl.fit.sigma2,
    })
}

/// Estimates the ECM regression directly by OLS.
pub fn fit_ecm_direct(panel: &Panel, spec: &ArdlSpec) -> Result<EcmFit> {
    let prepared = spec.prepare_panel(panel)?;
    let (fit, design) = ecm_regression(&prepared, spec, None)?;
    EcmFit::from_parts(EcmParts {
        spec,
        names: fit.column_names().to_vec(),
        layout: design.layout,
        coefficients: fit.coefficients.clone(),
        covariance: fit.covariance.clone(),
        residuals: fit.residuals.iter().copied().collect(),
        dates: prepared.dates()[design.first_row..].to_vec(),
        df_resid: fit.df_resid,
        sigma2: fit.sigma2,
    })
}

/// Minimum estimation-sample observations on each side of a break.
pub const MIN_DUMMY_SIDE: usize = 10;

/// Levels fit with step dummies followed by [`to_ecm`].
pub fn fit_ecm_with_dummies(panel: &Panel, spec: &ArdlSpec) -> Result<EcmFit> {
    let prepared = spec.prepare_panel(panel)?;
    let first = spec.p.max(spec.q);
    let sample = prepared.dates().get(first..).unwrap_or(&[]);
    for d in &spec.dummies {
        let before = sample.iter().filter(|&&t| t <= d.break_date).count();
        let after = sample.len() - before;
        if before < MIN_DUMMY_SIDE || after < MIN_DUMMY_SIDE {
            return Err(Error::DummyOutsideSample {
                name: d.name.clone(),
                date: d.break_date,
            });
        }
    }
    to_ecm(&fit_prepared(&prepared, spec, None)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ardl::fit_ardl;
    use crate::series::DeterministicCase;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let e: f64 = StandardNormal.sample(&mut rng);
                e
            })
            .collect()
    }

    fn panel(n: usize, seed: u64) -> Panel {
        let ex = noise(n, seed);
        let ey = noise(n, seed + 1);
        let ew = noise(n, seed + 2);
        let mut x = vec![0.0; n];
        let mut y = vec![0.0; n];
        for t in 1..n {
            x[t] = x[t - 1] + ex[t];
            y[t] = 0.5 * y[t - 1] + 1.0 * x[t] + 0.25 * x[t - 1] + ey[t];
        }
        Panel::daily_from(
            "2015-01-01".parse().unwrap(),
            vec![("y".into(), y), ("x".into(), x), ("w".into(), ew)],
        )
        .unwrap()
    }

    #[test]
    fn mapping_matches_direct_regression() {
        let p = panel(300, 7);
        for (pp, q) in [(1, 0), (1, 1), (2, 2), (3, 1), (1, 3)] {
            let spec = ArdlSpec::new("y", &["x"], DeterministicCase::ConstantTrend, pp, q)
                .with_exogenous(&["w"])
                .with_dummy("DU", "2015-05-01".parse().unwrap());
            let mapped = to_ecm(&fit_ardl(&p, &spec).unwrap()).unwrap();
            let direct = fit_ecm_direct(&p, &spec).unwrap();
            for (a, b) in mapped.coefficients.iter().zip(&direct.coefficients) {
                assert_eq!(a.name, b.name);
                assert!((a.estimate - b.estimate).abs() < 1e-8, "{a:?} {b:?}");
                assert!((a.std_error - b.std_error).abs() < 1e-8, "{a:?} {b:?}");
            }
            for (a, b) in mapped.residuals.iter().zip(&direct.residuals) {
                assert!((a - b).abs() < 1e-8);
            }
            assert!((mapped.theta[0].std_error - direct.theta[0].std_error).abs() < 1e-8);
        }
    }

    #[test]
    fn recovers_long_run_of_simulated_process() {
        let p = panel(2000, 11);
        let spec = ArdlSpec::new("y", &["x"], DeterministicCase::Constant, 1, 1);
        let ecm = to_ecm(&fit_ardl(&p, &spec).unwrap()).unwrap();
        assert!((ecm.alpha.estimate - 0.5).abs() < 0.05);
        assert!((ecm.theta[0].estimate - 2.5).abs() < 0.05);
        assert!((ecm.omega[0].estimate - 1.0).abs() < 0.1);
    }

    #[test]
    fn unit_root_in_levels_is_near_singular() {
        let n = 100;
        let x = noise(n, 3);
        let y: Vec<f64> = (0..n).map(|t| if t == 0 { 0.0 } else { x[t] }).collect();
        let p = Panel::daily_from(
            "2015-01-01".parse().unwrap(),
            vec![("y".into(), y.clone()), ("x".into(), x)],
        )
        .unwrap();
        let spec = ArdlSpec::new("y", &["x"], DeterministicCase::None, 1, 0);
        let mut fit = fit_ardl(&p, &spec).unwrap();
        fit.fit.coefficients[0] = 1.0;
        assert!(matches!(
            to_ecm(&fit),
            Err(Error::NearSingularAdjustment { .. })
        ));
    }

    #[test]
    fn dummy_near_edge_needs_ten_observations() {
        let p = panel(100, 5);
        let spec = ArdlSpec::new("y", &["x"], DeterministicCase::Constant, 1, 1)
            .with_dummy("DU", "2015-01-08".parse().unwrap());
        assert!(matches!(
            fit_ecm_with_dummies(&p, &spec),
            Err(Error::DummyOutsideSample { .. })
        ));
        let spec = ArdlSpec::new("y", &["x"], DeterministicCase::Constant, 1, 1)
            .with_dummy("DU", "2015-02-15".parse().unwrap());
        let ecm = fit_ecm_with_dummies(&p, &spec).unwrap();
        assert_eq!(ecm.dummies.len(), 1);
    }

    #[test]
    fn identical_dummies_are_rank_deficient() {
        let p = panel(100, 5);
        let date: NaiveDate = "2015-02-15".parse().unwrap();
        let spec = ArdlSpec::new("y", &["x"], DeterministicCase::Constant, 1, 1)
            .with_dummy("DU1", date)
            .with_dummy("DU2", date);
        assert!(matches!(
            fit_ecm_with_dummies(&p, &spec),
            Err(Error::RankDeficient { .. })
        ));
    }
}
