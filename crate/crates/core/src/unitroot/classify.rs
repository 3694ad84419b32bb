use serde::{Deserialize, Serialize};

use super::{
    adf_test, dfgls_test, za_test, BreakModel, LagSelection, Level, TestKind, UnitRootResult,
};
use crate::error::Result;
use crate::series::{apply_transform, DeterministicCase, Transform};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    pub test: TestKind,
    /// Deterministics for the level test; the difference is tested with a
    /// constant only (none stays none, except for DF-GLS which needs one).
    pub case: DeterministicCase,
    pub break_model: BreakModel,
    pub max_lags: Option<usize>,
    pub lag_selection: LagSelection,
    pub trim: f64,
    pub level: Level,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            test: TestKind::Adf,
            case: DeterministicCase::Constant,
            break_model: BreakModel::Intercept,
            max_lags: None,
            lag_selection: LagSelection::Aic,
            trim: 0.15,
            level: Level::Five,
        }
    }
}

impl IntegrationConfig {
    /// Runs the configured test on `y` with deterministic terms `case`.
    pub fn run(&self, y: &[f64], case: DeterministicCase) -> Result<UnitRootResult> {
        match self.test {
            TestKind::Adf => adf_test(y, case, self.max_lags, self.lag_selection),
            TestKind::Dfgls => {
                let case = if case == DeterministicCase::None {
                    DeterministicCase::Constant
                } else {
                    case
                };
                dfgls_test(y, case, self.max_lags, self.lag_selection)
            }
            TestKind::Za => za_test(
                y,
                self.break_model,
                self.max_lags,
                self.lag_selection,
                self.trim,
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Integration {
    I0,
    I1,
    I2OrHigher,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrationOrder {
    pub order: Integration,
    pub level: UnitRootResult,
    pub difference: UnitRootResult,
    pub test_level: Level,
}

/// Tests the level and the first difference and maps the outcomes:
/// level rejects → I(0); level fails, difference rejects → I(1); both fail →
/// I(2) or higher.
pub fn classify_integration(y: &[f64], config: &IntegrationConfig) -> Result<IntegrationOrder> {
    let level = config.run(y, config.case)?;
    let dy = apply_transform(y, Transform::FirstDifference)?;
    let diff_case = match config.case {
        DeterministicCase::ConstantTrend => DeterministicCase::Constant,
        c => c,
    };
    let difference = config.run(&dy, diff_case)?;
    let order = if level.rejects(config.level) {
        Integration::I0
    } else if difference.rejects(config.level) {
        Integration::I1
    } else {
        Integration::I2OrHigher
    };
    Ok(IntegrationOrder {
        order,
        level,
        difference,
        test_level: config.level,
    })
}
