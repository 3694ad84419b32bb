use super::adf::{adf_regression, reject_constant, resolve_max_lags, select_adf_lags};
use super::{check_finite, CriticalValues, LagSelection, TestKind, UnitRootResult};
use crate::error::{Error, Result};
use crate::linreg::{ols_fit, DesignMatrix};
use crate::series::DeterministicCase;

fn cbar(case: DeterministicCase) -> Result<f64> {
    match case {
        DeterministicCase::Constant => Ok(-7.0),
        DeterministicCase::ConstantTrend => Ok(-13.5),
        DeterministicCase::None => Err(Error::InvalidArgument(
            "DF-GLS requires a constant or constant_trend case".into(),
        )),
    }
}

/// GLS detrending with local-to-unity coefficient `1 + c̄/T`.
///
/// The first observation enters unchanged; later ones are quasi-differenced.
/// Returns `y - z β̂` where `β̂` comes from regressing the quasi-differenced
/// series on the quasi-differenced deterministics `z`.
pub fn gls_detrend(y: &[f64], case: DeterministicCase) -> Result<Vec<f64>> {
    let n = y.len();
    let a = 1.0 + cbar(case)? / n as f64;
    let trend = case.has_trend();

    let quasi = |v: &dyn Fn(usize) -> f64| -> Vec<f64> {
        (0..n)
            .map(|t| if t == 0 { v(0) } else { v(t) - a * v(t - 1) })
            .collect()
    };
    let yq = quasi(&|t| y[t]);
    let mut cols = vec![("const".to_string(), quasi(&|_| 1.0))];
    if trend {
        cols.push(("trend".to_string(), quasi(&|t| (t + 1) as f64)));
    }
    let fit = ols_fit(&DesignMatrix::from_columns(cols)?, &yq)?;
    let b0 = fit.coefficients[0];
    let b1 = if trend { fit.coefficients[1] } else { 0.0 };
    let detrended: Vec<f64> = (0..n).map(|t| y[t] - b0 - b1 * (t + 1) as f64).collect();

    let scale = y
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let size = detrended.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if size <= 1e-9 * scale {
        return Err(Error::DegenerateAfterDetrend);
    }
    Ok(detrended)
}

/// Elliott-Rothenberg-Stock DF-GLS test: an ADF regression without
/// deterministic terms on the GLS-detrended series.
pub fn dfgls_test(
    y: &[f64],
    case: DeterministicCase,
    max_lags: Option<usize>,
    selection: LagSelection,
) -> Result<UnitRootResult> {
    check_finite(y)?;
    cbar(case)?;
    reject_constant(y)?;
    let max = resolve_max_lags(y.len(), max_lags, selection)?;
    let yd = gls_detrend(y, case)?;
    let lags = select_adf_lags(&yd, DeterministicCase::None, max, selection)?;
    let reg = adf_regression(&yd, lags, DeterministicCase::None, lags + 1, &[])?;
    let nobs = reg.fit.nobs;
    Ok(UnitRootResult {
        test: TestKind::Dfgls,
        statistic: reg.statistic,
        lags_used: lags,
        nobs,
        case,
        critical_values: CriticalValues::lookup(TestKind::Dfgls, case.as_str(), nobs)?,
        break_index: None,
        break_date: None,
        break_model: None,
    })
}
