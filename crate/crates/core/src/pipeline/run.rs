use std::collections::BTreeMap;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::Serialize;

use super::cells::{long_run_cell, short_run_cell};
use super::config::{Dummies, Manifest, ModelConfig, RunConfig, Settings};
use crate::ardl::{
    bounds_test, fit_ecm_with_dummies, select_lags, ArdlSpec, BoundsResult, Conclusion, DummySpec,
    EcmFit,
};
use crate::error::{Error, Result};
use crate::linreg::CoefficientTest;
use crate::series::{
    align_panel, apply_transform, read_series_csv, ExogenousForm, Panel, TimeSeries, Transform,
};
use crate::unitroot::{classify_integration, za_test, Integration, TestKind};

/// Raw (untransformed) series keyed by manifest name.
pub type DataSet = BTreeMap<String, TimeSeries>;

/// Reads every manifest series referenced by `config`.
pub fn load_data(manifest: &Manifest, config: &RunConfig) -> Result<DataSet> {
    let mut data = DataSet::new();
    for m in &config.models {
        for name in m.variables() {
            if data.contains_key(name) {
                continue;
            }
            let entry = manifest.get(name).ok_or_else(|| Error::UnknownVariable {
                model: m.id.clone(),
                name: name.into(),
            })?;
            data.insert(
                name.to_string(),
                read_series_csv(&entry.path, name, entry.frequency)?,
            );
        }
    }
    Ok(data)
}

pub(crate) fn round6(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r = (x * 1e6).round() / 1e6;
    // avoid "-0"
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowEstimate {
    pub term: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_value: f64,
    pub p_value: f64,
}

impl From<&CoefficientTest> for RowEstimate {
    fn from(c: &CoefficientTest) -> Self {
        Self {
            term: c.name.clone(),
            estimate: round6(c.estimate),
            std_error: round6(c.std_error),
            t_value: round6(c.t_value),
            p_value: round6(c.p_value),
        }
    }
}

/// One variable of a long-run or short-run table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub variable: String,
    pub cell: String,
    pub estimates: Vec<RowEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariableIntegration {
    pub name: String,
    pub test: TestKind,
    pub order: Integration,
    pub level_statistic: f64,
    pub difference_statistic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakInfo {
    pub dummy: String,
    pub date: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum ModelStatus {
    Completed,
    Skipped {
        reason: String,
        /// Variables classified I(2) or higher, when that caused the skip.
        i2_variables: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub nobs: usize,
    pub sample_start: NaiveDate,
    pub sample_end: NaiveDate,
    pub alpha: f64,
    pub alpha_std_error: f64,
    pub sigma2: f64,
    pub criterion_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSection {
    pub id: String,
    pub table: String,
    pub column: String,
    pub dependent: String,
    pub status: ModelStatus,
    pub integration: Vec<VariableIntegration>,
    pub breaks: Vec<BreakInfo>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub bounds: Option<BoundsResult>,
    pub cointegrated: bool,
    /// Present only when the bounds test concludes cointegration.
    pub long_run: Option<Vec<ReportRow>>,
    pub short_run: Vec<ReportRow>,
    pub diagnostics: Option<Diagnostics>,
}

impl ModelSection {
    fn new(model: &ModelConfig) -> Self {
        Self {
            id: model.id.clone(),
            table: model.table.clone(),
            column: model.column.clone(),
            dependent: model.dependent.clone(),
            status: ModelStatus::Completed,
            integration: Vec::new(),
            breaks: Vec::new(),
            p: None,
            q: None,
            bounds: None,
            cointegrated: false,
            long_run: None,
            short_run: Vec::new(),
            diagnostics: None,
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.status, ModelStatus::Skipped { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub seed: u64,
    pub bounds_level: f64,
    pub sections: Vec<ModelSection>,
}

impl RunReport {
    /// 0 when every model ran, 2 when some were skipped.
    pub fn exit_code(&self) -> i32 {
        if self.sections.iter().any(ModelSection::is_skipped) {
            2
        } else {
            0
        }
    }
}

fn model_panel(
    data: &DataSet,
    manifest: &Manifest,
    settings: &Settings,
    model: &ModelConfig,
) -> Result<Panel> {
    let mut series = Vec::new();
    for name in model.variables() {
        let raw = data.get(name).ok_or_else(|| Error::UnknownVariable {
            model: model.id.clone(),
            name: name.into(),
        })?;
        let transform = match model.transforms.get(name) {
            Some(t) => *t,
            None => manifest.get(name).map_or(Transform::Level, |e| e.transform),
        };
        let values = apply_transform(raw.values(), transform)?;
        series.push(TimeSeries::new(
            name,
            raw.dates().to_vec(),
            values,
            raw.frequency(),
        )?);
    }
    align_panel(&series, model.sample, settings.fill)
}

fn row(variable: &str, coefs: &[CoefficientTest], short_run: bool) -> ReportRow {
    ReportRow {
        variable: variable.into(),
        cell: if short_run {
            short_run_cell(coefs)
        } else {
            coefs.first().map(long_run_cell).unwrap_or_default()
        },
        estimates: coefs.iter().map(RowEstimate::from).collect(),
    }
}

fn long_run_rows(ecm: &EcmFit, spec: &ArdlSpec) -> Vec<ReportRow> {
    let mut rows: Vec<ReportRow> = spec
        .dynamic_regressors
        .iter()
        .zip(&ecm.theta)
        .map(|(x, t)| row(x, std::slice::from_ref(t), false))
        .collect();
    for d in &spec.dummies {
        if let Some(c) = ecm.long_run(&d.name) {
            rows.push(row(&d.name, &[c], false));
        }
    }
    if let Some(c) = ecm.long_run("const") {
        rows.push(row("constant", &[c], false));
    }
    if let Some(c) = ecm.long_run("trend") {
        rows.push(row("trend", &[c], false));
    }
    rows
}

fn short_run_rows(ecm: &EcmFit, spec: &ArdlSpec) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for (j, x) in spec.dynamic_regressors.iter().enumerate() {
        let mut coefs = vec![ecm.omega[j].clone()];
        coefs.extend(ecm.lagged_differences[j].iter().cloned());
        rows.push(row(x, &coefs, true));
    }
    rows.push(row("own_lags", &ecm.own_lags, true));
    for (w, c) in spec.exogenous.iter().zip(&ecm.exogenous) {
        rows.push(row(w, std::slice::from_ref(c), true));
    }
    for (d, c) in spec.dummies.iter().zip(&ecm.dummies) {
        rows.push(row(&d.name, std::slice::from_ref(c), true));
    }
    rows.push(row(
        "ect",
        std::slice::from_ref(&ecm.coefficients[ecm.layout.y_level]),
        true,
    ));
    if let Some(t) = &ecm.trend {
        rows.push(row("trend", std::slice::from_ref(t), true));
    }
    if let Some(c) = &ecm.intercept {
        rows.push(row("constant", std::slice::from_ref(c), true));
    }
    rows
}

fn run_inner(
    section: &mut ModelSection,
    data: &DataSet,
    manifest: &Manifest,
    settings: &Settings,
    model: &ModelConfig,
) -> Result<()> {
    let panel = model_panel(data, manifest, settings, model)?;

    let mut i2 = Vec::new();
    for name in model.variables() {
        let values = panel.column(name).expect("aligned column");
        let order = classify_integration(values, &settings.unit_root)?;
        if order.order == Integration::I2OrHigher {
            i2.push(name.to_string());
        }
        section.integration.push(VariableIntegration {
            name: name.into(),
            test: settings.unit_root.test,
            order: order.order,
            level_statistic: round6(order.level.statistic),
            difference_statistic: round6(order.difference.statistic),
        });
    }
    if !i2.is_empty() {
        return Err(Error::I2VariableDetected(i2));
    }

    let dummies: Vec<DummySpec> = match &model.dummies {
        Dummies::None => Vec::new(),
        Dummies::AutoZa { model: bm, trim } => {
            let y = panel.column(&model.dependent).expect("aligned column");
            let za = za_test(
                y,
                *bm,
                settings.unit_root.max_lags,
                settings.unit_root.lag_selection,
                *trim,
            )?
            .with_dates(panel.dates());
            let date = za.break_date.ok_or(Error::NoBreakCandidates)?;
            vec![DummySpec {
                name: format!("DU_{}", model.dependent),
                break_date: date,
            }]
        }
        Dummies::Explicit { dates } => dates
            .iter()
            .map(|d| DummySpec {
                name: format!("DU_{d}"),
                break_date: *d,
            })
            .collect(),
    };
    section.breaks = dummies
        .iter()
        .map(|d| BreakInfo {
            dummy: d.name.clone(),
            date: d.break_date,
        })
        .collect();

    let template = ArdlSpec {
        dependent: model.dependent.clone(),
        dynamic_regressors: model.dynamic_regressors.clone(),
        exogenous: model.exogenous.clone(),
        case: model.case,
        p: 1,
        q: 0,
        dummies,
        exogenous_form: ExogenousForm::Differenced,
    };
    let choice = select_lags(&panel, &template, model.p_max, model.q_max, model.criterion)?;
    let spec = template.with_lags(choice.p, choice.q);
    section.p = Some(choice.p);
    section.q = Some(choice.q);

    let bounds = bounds_test(&panel, &spec, model.bounds_case)?;
    let ecm = fit_ecm_with_dummies(&panel, &spec)?;
    section.cointegrated =
        bounds.conclusion_at(settings.bounds_level) == Some(Conclusion::Cointegrated);
    section.bounds = Some(round_bounds(bounds));
    if section.cointegrated {
        section.long_run = Some(long_run_rows(&ecm, &spec));
    }
    section.short_run = short_run_rows(&ecm, &spec);
    section.diagnostics = Some(Diagnostics {
        nobs: ecm.nobs,
        sample_start: *ecm.dates.first().expect("non-empty sample"),
        sample_end: *ecm.dates.last().expect("non-empty sample"),
        alpha: round6(ecm.alpha.estimate),
        alpha_std_error: round6(ecm.alpha.std_error),
        sigma2: round6(ecm.sigma2),
        criterion_value: round6(choice.value),
    });
    Ok(())
}

fn round_bounds(mut b: BoundsResult) -> BoundsResult {
    b.f_statistic = round6(b.f_statistic);
    b
}

/// Runs one model. Failures, including the I(2) guard, are recorded in the
/// returned section rather than returned as errors.
pub fn run_model(
    data: &DataSet,
    manifest: &Manifest,
    settings: &Settings,
    model: &ModelConfig,
) -> ModelSection {
    let mut section = ModelSection::new(model);
    if let Err(e) = run_inner(&mut section, data, manifest, settings, model) {
        log::warn!("model {} skipped: {e}", model.id);
        let i2_variables = match &e {
            Error::I2VariableDetected(v) => v.clone(),
            _ => Vec::new(),
        };
        section.status = ModelStatus::Skipped {
            reason: e.to_string(),
            i2_variables,
        };
        section.bounds = None;
        section.cointegrated = false;
        section.long_run = None;
        section.short_run.clear();
        section.diagnostics = None;
    }
    section
}

/// Runs every model on `jobs` threads (0 = rayon default) and returns the
/// sections in configuration order.
pub fn run_all(
    data: &DataSet,
    manifest: &Manifest,
    config: &RunConfig,
    jobs: usize,
    seed: u64,
) -> Result<RunReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let sections = pool.install(|| {
        config
            .models
            .par_iter()
            .map(|m| run_model(data, manifest, &config.settings, m))
            .collect()
    });
    Ok(RunReport {
        seed,
        bounds_level: config.settings.bounds_level,
        sections,
    })
}
