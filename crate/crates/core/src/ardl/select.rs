use serde::Serialize;

use super::{fit_prepared, ArdlSpec};
use crate::error::{Error, Result};
use crate::linreg::InformationCriterion;
use crate::series::Panel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagChoice {
    pub p: usize,
    pub q: usize,
    pub criterion: InformationCriterion,
    pub value: f64,
    /// `(p, q, criterion)` for every candidate that could be estimated.
    pub candidates: Vec<(usize, usize, f64)>,
}

/// Exhaustive search over `p in 1..=p_max`, `q in 0..=q_max` on the common
/// sample starting at `max(p_max, q_max)`. Ties go to the smaller `p`, then
/// the smaller `q`.
pub fn select_lags(
    panel: &Panel,
    template: &ArdlSpec,
    p_max: usize,
    q_max: usize,
    criterion: InformationCriterion,
) -> Result<LagChoice> {
    if p_max == 0 {
        return Err(Error::InvalidArgument("p_max must be at least 1".into()));
    }
    let prepared = template.prepare_panel(panel)?;
    let first_row = p_max.max(q_max);
    let mut best: Option<(usize, usize, f64)> = None;
    let mut candidates = Vec::new();
    let mut last_err = None;
    for p in 1..=p_max {
        for q in 0..=q_max {
            let spec = template.clone().with_lags(p, q);
            match fit_prepared(&prepared, &spec, Some(first_row)) {
                Ok(fit) => {
                    let value = criterion.evaluate(&fit.fit);
                    candidates.push((p, q, value));
                    if best.is_none_or(|(_, _, b)| value < b) {
                        best = Some((p, q, value));
                    }
                }
                Err(e) => {
                    log::debug!("ARDL({p},{q}) for {} skipped: {e}", template.dependent);
                    last_err = Some(e);
                }
            }
        }
    }
    match best {
        Some((p, q, value)) => Ok(LagChoice {
            p,
            q,
            criterion,
            value,
            candidates,
        }),
        None => Err(last_err.expect("at least one candidate was tried")),
    }
}
