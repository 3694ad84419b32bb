use super::{
    check_finite, default_max_lags, CriticalValues, LagSelection, TestKind, UnitRootResult,
};
use crate::error::{Error, Result};
use crate::linreg::{information_criteria, ols_fit, DesignMatrix, RegressionFit};
use crate::series::DeterministicCase;

/// Minimum observations beyond the largest lag order.
pub(crate) const MIN_EXTRA_OBS: usize = 15;

#[derive(Debug, Clone)]
pub struct AdfRegression {
    pub fit: RegressionFit,
    /// Column of `y_{t-1}`.
    pub gamma_index: usize,
    pub statistic: f64,
}

/// Dickey-Fuller regression of `Δy_t` on `[const, trend, extra.., y_{t-1},
/// Δy_{t-1}..Δy_{t-lags}]` over `t = start..n`.
///
/// `extra` columns are indexed like `y`. The trend is the one-based position
/// `t + 1`.
pub fn adf_regression(
    y: &[f64],
    lags: usize,
    case: DeterministicCase,
    start: usize,
    extra: &[(&str, &[f64])],
) -> Result<AdfRegression> {
    let n = y.len();
    if start < lags + 1 {
        return Err(Error::InvalidArgument(format!(
            "sample start {start} too early for {lags} lags"
        )));
    }
    if start >= n {
        return Err(Error::TooShort {
            needed: start + 1,
            got: n,
        });
    }
    let rows = start..n;
    let mut cols: Vec<(String, Vec<f64>)> = Vec::with_capacity(3 + extra.len() + lags);
    if case.has_constant() {
        cols.push(("const".into(), vec![1.0; n - start]));
    }
    if case.has_trend() {
        cols.push((
            "trend".into(),
            rows.clone().map(|t| (t + 1) as f64).collect(),
        ));
    }
    for (name, v) in extra {
        cols.push((name.to_string(), rows.clone().map(|t| v[t]).collect()));
    }
    let gamma_index = cols.len();
    cols.push(("y.L1".into(), rows.clone().map(|t| y[t - 1]).collect()));
    for j in 1..=lags {
        cols.push((
            format!("D.y.L{j}"),
            rows.clone().map(|t| y[t - j] - y[t - j - 1]).collect(),
        ));
    }
    let response: Vec<f64> = rows.map(|t| y[t] - y[t - 1]).collect();
    let design = DesignMatrix::from_columns(cols)?;
    let fit = ols_fit(&design, &response)?;
    let statistic = fit.t_value(gamma_index);
    if !statistic.is_finite() {
        return Err(Error::InvalidSeries("degenerate test regression".into()));
    }
    Ok(AdfRegression {
        fit,
        gamma_index,
        statistic,
    })
}

/// Chooses the augmentation order. Information-criterion scans estimate every
/// order on the common sample starting at `max_lags + 1`; ties go to the
/// smaller order.
pub fn select_adf_lags(
    y: &[f64],
    case: DeterministicCase,
    max_lags: usize,
    selection: LagSelection,
) -> Result<usize> {
    let criterion = match selection {
        LagSelection::Fixed(k) => return Ok(k),
        LagSelection::Aic => |f: &RegressionFit| information_criteria(f).aic,
        LagSelection::Bic => |f: &RegressionFit| information_criteria(f).bic,
    };
    let start = max_lags + 1;
    let mut best = (0, f64::INFINITY);
    for k in 0..=max_lags {
        let reg = adf_regression(y, k, case, start, &[])?;
        let ic = criterion(&reg.fit);
        if ic < best.1 {
            best = (k, ic);
        }
    }
    Ok(best.0)
}

pub(crate) fn resolve_max_lags(
    n: usize,
    max_lags: Option<usize>,
    selection: LagSelection,
) -> Result<usize> {
    let max = match (max_lags, selection) {
        (_, LagSelection::Fixed(k)) => k,
        (Some(m), _) => m,
        (None, _) => default_max_lags(n).min(n.saturating_sub(MIN_EXTRA_OBS)),
    };
    if n < max + MIN_EXTRA_OBS {
        return Err(Error::TooShort {
            needed: max + MIN_EXTRA_OBS,
            got: n,
        });
    }
    Ok(max)
}

pub(crate) fn reject_constant(y: &[f64]) -> Result<()> {
    if y.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::RankDeficient {
            columns: vec!["y.L1".into()],
        });
    }
    Ok(())
}

/// Augmented Dickey-Fuller test.
///
/// `max_lags` defaults to `floor(12 (n/100)^{1/4})`. After selection the
/// regression is re-estimated on the largest sample the chosen order allows.
pub fn adf_test(
    y: &[f64],
    case: DeterministicCase,
    max_lags: Option<usize>,
    selection: LagSelection,
) -> Result<UnitRootResult> {
    check_finite(y)?;
    reject_constant(y)?;
    let max = resolve_max_lags(y.len(), max_lags, selection)?;
    let lags = select_adf_lags(y, case, max, selection)?;
    let reg = adf_regression(y, lags, case, lags + 1, &[])?;
    let nobs = reg.fit.nobs;
    Ok(UnitRootResult {
        test: TestKind::Adf,
        statistic: reg.statistic,
        lags_used: lags,
        nobs,
        case,
        critical_values: CriticalValues::lookup(TestKind::Adf, case.as_str(), nobs)?,
        break_index: None,
        break_date: None,
        break_model: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitroot::Level;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn walk(n: usize, seed: u64) -> Vec<f64> {
        let mut acc = 0.0;
        noise(n, seed)
            .into_iter()
            .map(|e| {
                acc += e;
                acc
            })
            .collect()
    }

    #[test]
    fn fixed_lags_match_hand_built_regression() {
        let y: Vec<f64> = walk(30, 7);
        let k = 2;
        let res = adf_test(
            &y,
            DeterministicCase::Constant,
            None,
            LagSelection::Fixed(k),
        )
        .unwrap();
        assert_eq!(res.lags_used, k);

        // hand-built: rows t = 3..30
        let mut rows = Vec::new();
        let mut dy = Vec::new();
        for t in (k + 1)..30 {
            rows.push(vec![
                1.0,
                y[t - 1],
                y[t - 1] - y[t - 2],
                y[t - 2] - y[t - 3],
            ]);
            dy.push(y[t] - y[t - 1]);
        }
        let names = ["c", "g", "d1", "d2"].map(String::from).to_vec();
        let fit = ols_fit(&DesignMatrix::from_rows(names, &rows).unwrap(), &dy).unwrap();
        assert_eq!(res.nobs, 27);
        assert!((res.statistic - fit.t_value(1)).abs() < 1e-12);
    }

    #[test]
    fn trend_stationary_ramp_is_rejected() {
        let e = noise(200, 3);
        let y: Vec<f64> = (0..200).map(|t| t as f64 + 0.1 * e[t]).collect();
        let res = adf_test(
            &y,
            DeterministicCase::ConstantTrend,
            None,
            LagSelection::Aic,
        )
        .unwrap();
        assert!(res.statistic < -5.0, "{}", res.statistic);
        assert!(res.rejects(Level::One));
    }

    #[test]
    fn pure_ramp_is_rank_deficient() {
        let y: Vec<f64> = (0..100).map(|t| t as f64).collect();
        assert!(matches!(
            adf_test(
                &y,
                DeterministicCase::ConstantTrend,
                None,
                LagSelection::Fixed(0)
            ),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn constant_series_is_rank_deficient() {
        let y = vec![3.0; 80];
        for case in [
            DeterministicCase::None,
            DeterministicCase::Constant,
            DeterministicCase::ConstantTrend,
        ] {
            assert!(matches!(
                adf_test(&y, case, None, LagSelection::Aic),
                Err(Error::RankDeficient { .. })
            ));
        }
    }

    #[test]
    fn too_short() {
        let y = walk(20, 1);
        assert!(matches!(
            adf_test(&y, DeterministicCase::Constant, Some(10), LagSelection::Aic),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn affine_invariance() {
        let y = walk(150, 11);
        for case in [
            DeterministicCase::Constant,
            DeterministicCase::ConstantTrend,
        ] {
            let base = adf_test(&y, case, None, LagSelection::Aic).unwrap();
            let z: Vec<f64> = y.iter().map(|v| 3.5 * v - 20.0).collect();
            let moved = adf_test(&z, case, None, LagSelection::Aic).unwrap();
            assert_eq!(base.lags_used, moved.lags_used);
            assert!((base.statistic - moved.statistic).abs() < 1e-9);
        }
        let z: Vec<f64> = y
            .iter()
            .enumerate()
            .map(|(t, v)| 0.7 * v + 0.05 * t as f64 + 4.0)
            .collect();
        let base = adf_test(
            &y,
            DeterministicCase::ConstantTrend,
            None,
            LagSelection::Bic,
        )
        .unwrap();
        let moved = adf_test(
            &z,
            DeterministicCase::ConstantTrend,
            None,
            LagSelection::Bic,
        )
        .unwrap();
        assert!((base.statistic - moved.statistic).abs() < 1e-9);
    }

    #[test]
    fn stationary_ar_is_rejected() {
        let e = noise(400, 5);
        let mut y = vec![0.0; 400];
        for t in 1..400 {
            y[t] = 0.5 * y[t - 1] + e[t];
        }
        let res = adf_test(&y, DeterministicCase::Constant, None, LagSelection::Aic).unwrap();
        assert!(res.rejects(Level::One));
    }
}
