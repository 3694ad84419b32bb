use rayon::prelude::*;

use super::adf::{adf_regression, reject_constant, resolve_max_lags, select_adf_lags};
use super::{check_finite, BreakModel, CriticalValues, LagSelection, TestKind, UnitRootResult};
use crate::error::{Error, Result};
use crate::series::DeterministicCase;

pub(crate) const MIN_ZA_OBS: usize = 50;

/// Candidate break positions for a sample of `n` observations: the number of
/// pre-break observations ranges over `[ceil(trim n), floor((1 - trim) n)]`.
pub fn za_candidates(n: usize, trim: f64) -> std::ops::RangeInclusive<usize> {
    let lo = ((trim * n as f64).ceil() as usize).max(2);
    let hi = ((1.0 - trim) * n as f64).floor() as usize;
    lo..=hi.min(n - 2)
}

fn break_columns(n: usize, model: BreakModel, tb: usize) -> Vec<(&'static str, Vec<f64>)> {
    let du = || (0..n).map(|i| if i >= tb { 1.0 } else { 0.0 }).collect();
    let dt = || {
        (0..n)
            .map(|i| if i >= tb { (i + 1 - tb) as f64 } else { 0.0 })
            .collect()
    };
    match model {
        BreakModel::Intercept => vec![("DU", du())],
        BreakModel::Trend => vec![("DT", dt())],
        BreakModel::Both => vec![("DU", du()), ("DT", dt())],
    }
}

/// t-ratio on `y_{t-1}` in the break-augmented regression for one candidate
/// break `tb` (pre-break observation count).
pub fn za_candidate_statistic(y: &[f64], model: BreakModel, lags: usize, tb: usize) -> Result<f64> {
    let cols = break_columns(y.len(), model, tb);
    let extra: Vec<(&str, &[f64])> = cols.iter().map(|(n, v)| (*n, v.as_slice())).collect();
    Ok(adf_regression(y, lags, DeterministicCase::ConstantTrend, lags + 1, &extra)?.statistic)
}

/// Zivot-Andrews test with one endogenous break.
///
/// The augmentation order is chosen once on the trend-and-constant ADF
/// regression, then every candidate break in the trimmed range is fitted with
/// that order. The statistic is the smallest t-ratio over candidates; ties go
/// to the earliest break. Candidates whose regression is rank deficient are
/// skipped.
pub fn za_test(
    y: &[f64],
    model: BreakModel,
    max_lags: Option<usize>,
    selection: LagSelection,
    trim: f64,
) -> Result<UnitRootResult> {
    check_finite(y)?;
    let n = y.len();
    if n < MIN_ZA_OBS {
        return Err(Error::TooShort {
            needed: MIN_ZA_OBS,
            got: n,
        });
    }
    if !(trim > 0.0 && trim < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "trim must lie in (0, 0.5), got {trim}"
        )));
    }
    reject_constant(y)?;
    let max = resolve_max_lags(n, max_lags, selection)?;
    let lags = select_adf_lags(y, DeterministicCase::ConstantTrend, max, selection)?;

    let candidates: Vec<usize> = za_candidates(n, trim).collect();
    let stats: Vec<(usize, Result<f64>)> = candidates
        .par_iter()
        .map(|&tb| (tb, za_candidate_statistic(y, model, lags, tb)))
        .collect();

    let mut best: Option<(usize, f64)> = None;
    for (tb, stat) in stats {
        match stat {
            Ok(s) => {
                if best.is_none_or(|(_, b)| s < b) {
                    best = Some((tb, s));
                }
            }
            Err(e) => log::debug!("za: skipping break candidate {tb}: {e}"),
        }
    }
    let (tb, statistic) = best.ok_or(Error::NoBreakCandidates)?;
    let nobs = n - lags - 1;
    Ok(UnitRootResult {
        test: TestKind::Za,
        statistic,
        lags_used: lags,
        nobs,
        case: DeterministicCase::ConstantTrend,
        critical_values: CriticalValues::lookup(TestKind::Za, model.as_str(), nobs)?,
        break_index: Some(tb),
        break_date: None,
        break_model: Some(model),
    })
}
