//! C ABI over `ardl-core`.
//!
//! Every function returns an [`ArdlStatus`]; on failure a message is kept in
//! thread-local storage and can be read with [`ardl_last_error`]. Panels and
//! ECM fits are opaque handles released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use ardl_core::ardl::{bounds_test, fit_ecm_direct, ArdlSpec, BoundsCase, Conclusion, EcmFit};
use ardl_core::linreg::CoefficientTest;
use ardl_core::pipeline::{
    load_data, load_manifest_and_config, render_reports, run_all, ReportFormat,
};
use ardl_core::series::{DeterministicCase, Panel};
use ardl_core::unitroot::{adf_test, dfgls_test, za_test, BreakModel, LagSelection, Level};
use ardl_core::Error;
use chrono::NaiveDate;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArdlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    TooShort = 3,
    RankDeficient = 4,
    Degenerate = 5,
    MissingCriticalValues = 6,
    DummyOutsideSample = 7,
    Parse = 8,
    UnknownVariable = 9,
    I2Detected = 10,
    Io = 11,
    Panic = 12,
}

impl From<&Error> for ArdlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InsufficientLength { .. }
            | Error::TooFewObservations { .. }
            | Error::TooShort { .. } => ArdlStatus::TooShort,
            Error::RankDeficient { .. } => ArdlStatus::RankDeficient,
            Error::DegenerateAfterDetrend
            | Error::NoBreakCandidates
            | Error::NearSingularAdjustment { .. } => ArdlStatus::Degenerate,
            Error::MissingBoundsEntry { .. } | Error::MissingCriticalValue { .. } => {
                ArdlStatus::MissingCriticalValues
            }
            Error::DummyOutsideSample { .. } => ArdlStatus::DummyOutsideSample,
            Error::Parse { .. } => ArdlStatus::Parse,
            Error::UnknownVariable { .. } => ArdlStatus::UnknownVariable,
            Error::I2VariableDetected(_) => ArdlStatus::I2Detected,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => ArdlStatus::Io,
            _ => ArdlStatus::InvalidArgument,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: ArdlStatus, message: impl Into<String>) -> ArdlStatus {
    set_error(message.into());
    status
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), ArdlStatus>) -> ArdlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ArdlStatus::Ok,
        Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(ArdlStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn core<T>(r: ardl_core::Result<T>) -> Result<T, ArdlStatus> {
    r.map_err(|e| fail(ArdlStatus::from(&e), e.to_string()))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), ArdlStatus> {
    if p.is_null() {
        Err(fail(ArdlStatus::NullPointer, format!("`{what}` is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` must be null or point to a nul-terminated string.
unsafe fn string_arg(p: *const c_char, what: &str) -> Result<String, ArdlStatus> {
    non_null(p, what)?;
    CStr::from_ptr(p).to_str().map(str::to_owned).map_err(|_| {
        fail(
            ArdlStatus::InvalidArgument,
            format!("`{what}` is not UTF-8"),
        )
    })
}

/// # Safety
/// `p` must be null only when `len` is zero, else point to `len` doubles.
unsafe fn slice_arg<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], ArdlStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, what)?;
    Ok(std::slice::from_raw_parts(p, len))
}

/// # Safety
/// `p` must point to `len` valid string pointers when `len > 0`.
unsafe fn names_arg(
    p: *const *const c_char,
    len: usize,
    what: &str,
) -> Result<Vec<String>, ArdlStatus> {
    if len == 0 {
        return Ok(Vec::new());
    }
    non_null(p, what)?;
    std::slice::from_raw_parts(p, len)
        .iter()
        .map(|s| string_arg(*s, what))
        .collect()
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn ardl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn ardl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArdlCase {
    None = 0,
    Constant = 1,
    ConstantTrend = 2,
}

impl From<ArdlCase> for DeterministicCase {
    fn from(c: ArdlCase) -> Self {
        match c {
            ArdlCase::None => DeterministicCase::None,
            ArdlCase::Constant => DeterministicCase::Constant,
            ArdlCase::ConstantTrend => DeterministicCase::ConstantTrend,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArdlTest {
    Adf = 0,
    Dfgls = 1,
    Za = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArdlLagSelection {
    Aic = 0,
    Bic = 1,
    Fixed = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArdlBreakModel {
    Intercept = 0,
    Trend = 1,
    Both = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ArdlUnitRootOptions {
    pub test: ArdlTest,
    pub case_: ArdlCase,
    /// Negative for the default `floor(12 (T/100)^(1/4))`.
    pub max_lags: i64,
    pub lag_selection: ArdlLagSelection,
    /// Lag order when `lag_selection` is fixed.
    pub fixed_lags: usize,
    /// Zivot-Andrews only.
    pub break_model: ArdlBreakModel,
    /// Zivot-Andrews only.
    pub trim: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ArdlUnitRootResult {
    pub statistic: f64,
    pub lags_used: usize,
    pub nobs: usize,
    /// Critical values at 1, 5 and 10%.
    pub critical_values: [f64; 3],
    /// Unit root rejected at 1, 5 and 10%.
    pub rejects: [bool; 3],
    /// Observations before the break, -1 when not applicable.
    pub break_index: i64,
}

/// ADF with a constant, AIC lag selection and the default maximum lag.
#[no_mangle]
pub extern "C" fn ardl_unit_root_options_default() -> ArdlUnitRootOptions {
    ArdlUnitRootOptions {
        test: ArdlTest::Adf,
        case_: ArdlCase::Constant,
        max_lags: -1,
        lag_selection: ArdlLagSelection::Aic,
        fixed_lags: 0,
        break_model: ArdlBreakModel::Intercept,
        trim: 0.15,
    }
}

/// Unit-root test of `values[0..len]`.
///
/// # Safety
/// `values` must point to `len` doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ardl_unit_root(
    values: *const f64,
    len: usize,
    options: ArdlUnitRootOptions,
    out: *mut ArdlUnitRootResult,
) -> ArdlStatus {
    guard(|| {
        let y = slice_arg(values, len, "values")?;
        non_null(out, "out")?;
        let max_lags = usize::try_from(options.max_lags).ok();
        let selection = match options.lag_selection {
            ArdlLagSelection::Aic => LagSelection::Aic,
            ArdlLagSelection::Bic => LagSelection::Bic,
            ArdlLagSelection::Fixed => LagSelection::Fixed(options.fixed_lags),
        };
        let case = options.case_.into();
        let res = core(match options.test {
            ArdlTest::Adf => adf_test(y, case, max_lags, selection),
            ArdlTest::Dfgls => dfgls_test(y, case, max_lags, selection),
            ArdlTest::Za => {
                let model = match options.break_model {
                    ArdlBreakModel::Intercept => BreakModel::Intercept,
                    ArdlBreakModel::Trend => BreakModel::Trend,
                    ArdlBreakModel::Both => BreakModel::Both,
                };
                za_test(y, model, max_lags, selection, options.trim)
            }
        })?;
        let levels = [Level::One, Level::Five, Level::Ten];
        *out = ArdlUnitRootResult {
            statistic: res.statistic,
            lags_used: res.lags_used,
            nobs: res.nobs,
            critical_values: levels.map(|l| res.critical_values.at(l)),
            rejects: levels.map(|l| res.rejects(l)),
            break_index: res.break_index.map_or(-1, |b| b as i64),
        };
        Ok(())
    })
}

/// Columns of equal length on a daily calendar.
pub struct ArdlPanel {
    nobs: usize,
    columns: Vec<(String, Vec<f64>)>,
}

impl ArdlPanel {
    fn to_panel(&self) -> ardl_core::Result<Panel> {
        let start = NaiveDate::from_ymd_opt(2000, 1, 1).expect("valid date");
        Panel::daily_from(start, self.columns.clone())
    }
}

/// New empty panel with `nobs` rows; null when `nobs` is zero.
#[no_mangle]
pub extern "C" fn ardl_panel_new(nobs: usize) -> *mut ArdlPanel {
    if nobs == 0 {
        set_error("panel needs at least one row".into());
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(ArdlPanel {
        nobs,
        columns: Vec::new(),
    }))
}

/// Copies `values[0..len]` into a new column `name`.
///
/// # Safety
/// `panel` must come from [`ardl_panel_new`], `name` must be a nul-terminated
/// string and `values` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ardl_panel_add_column(
    panel: *mut ArdlPanel,
    name: *const c_char,
    values: *const f64,
    len: usize,
) -> ArdlStatus {
    guard(|| {
        non_null(panel, "panel")?;
        let panel = &mut *panel;
        let name = string_arg(name, "name")?;
        let values = slice_arg(values, len, "values")?;
        if len != panel.nobs {
            return Err(fail(
                ArdlStatus::InvalidArgument,
                format!(
                    "column `{name}` has {len} values, panel has {} rows",
                    panel.nobs
                ),
            ));
        }
        if panel.columns.iter().any(|(n, _)| *n == name) {
            return Err(fail(
                ArdlStatus::InvalidArgument,
                format!("duplicate column `{name}`"),
            ));
        }
        panel.columns.push((name, values.to_vec()));
        Ok(())
    })
}

/// # Safety
/// `panel` must be null or come from [`ardl_panel_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ardl_panel_free(panel: *mut ArdlPanel) {
    if !panel.is_null() {
        drop(Box::from_raw(panel));
    }
}

/// Model specification; regressor names refer to panel columns.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ArdlModelSpec {
    pub dependent: *const c_char,
    pub regressors: *const *const c_char,
    pub n_regressors: usize,
    /// Exogenous variables, entering in first differences. May be null.
    pub exogenous: *const *const c_char,
    pub n_exogenous: usize,
    pub case_: ArdlCase,
    pub p: usize,
    pub q: usize,
}

/// # Safety
/// All pointers in `spec` must be valid as documented on [`ArdlModelSpec`].
unsafe fn spec_arg(spec: *const ArdlModelSpec) -> Result<ArdlSpec, ArdlStatus> {
    non_null(spec, "spec")?;
    let s = &*spec;
    let dependent = string_arg(s.dependent, "dependent")?;
    let regressors = names_arg(s.regressors, s.n_regressors, "regressors")?;
    let exogenous = names_arg(s.exogenous, s.n_exogenous, "exogenous")?;
    let xs: Vec<&str> = regressors.iter().map(String::as_str).collect();
    let ws: Vec<&str> = exogenous.iter().map(String::as_str).collect();
    Ok(ArdlSpec::new(&dependent, &xs, s.case_.into(), s.p, s.q).with_exogenous(&ws))
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ArdlCoefficient {
    pub estimate: f64,
    pub std_error: f64,
    pub t_value: f64,
    pub p_value: f64,
}

impl From<&CoefficientTest> for ArdlCoefficient {
    fn from(c: &CoefficientTest) -> Self {
        Self {
            estimate: c.estimate,
            std_error: c.std_error,
            t_value: c.t_value,
            p_value: c.p_value,
        }
    }
}

/// Estimated error-correction model.
pub struct ArdlEcm {
    fit: EcmFit,
    names: Vec<CString>,
}

/// Estimates the error-correction regression of `spec` on `panel`.
///
/// # Safety
/// `panel` must be a live panel handle, `spec` valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ardl_ecm_fit(
    panel: *const ArdlPanel,
    spec: *const ArdlModelSpec,
    out: *mut *mut ArdlEcm,
) -> ArdlStatus {
    guard(|| {
        non_null(panel, "panel")?;
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let spec = spec_arg(spec)?;
        let panel = core((*panel).to_panel())?;
        let fit = core(fit_ecm_direct(&panel, &spec))?;
        let names = fit
            .coefficients
            .iter()
            .map(|c| CString::new(c.name.clone()).expect("names have no nul"))
            .collect();
        *out = Box::into_raw(Box::new(ArdlEcm { fit, names }));
        Ok(())
    })
}

/// # Safety
/// `ecm` must be null or come from [`ardl_ecm_fit`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ardl_ecm_free(ecm: *mut ArdlEcm) {
    if !ecm.is_null() {
        drop(Box::from_raw(ecm));
    }
}

/// Speed of adjustment.
///
/// # Safety
/// `ecm` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ardl_ecm_alpha(
    ecm: *const ArdlEcm,
    out: *mut ArdlCoefficient,
) -> ArdlStatus {
    guard(|| {
        non_null(ecm, "ecm")?;
        non_null(out, "out")?;
        *out = (&(*ecm).fit.alpha).into();
        Ok(())
    })
}

/// Long-run coefficient of regressor `index` (in specification order).
///
/// # Safety
/// `ecm` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ardl_ecm_long_run(
    ecm: *const ArdlEcm,
    index: usize,
    out: *mut ArdlCoefficient,
) -> ArdlStatus {
    guard(|| {
        non_null(ecm, "ecm")?;
        non_null(out, "out")?;
        let theta = &(*ecm).fit.theta;
        let c = theta.get(index).ok_or_else(|| {
            fail(
                ArdlStatus::InvalidArgument,
                format!(
                    "regressor index {index} out of range (model has {})",
                    theta.len()
                ),
            )
        })?;
        *out = c.into();
        Ok(())
    })
}

/// Number of regression coefficients; 0 for a null handle.
///
/// # Safety
/// `ecm` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ardl_ecm_num_coefficients(ecm: *const ArdlEcm) -> usize {
    if ecm.is_null() {
        0
    } else {
        (*ecm).fit.coefficients.len()
    }
}

/// Coefficient `index` of the regression and, when `name` is not null, its
/// column name. The name pointer lives as long as the handle.
///
/// # Safety
/// `ecm` must be a live handle; `out` writable; `name` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ardl_ecm_coefficient(
    ecm: *const ArdlEcm,
    index: usize,
    out: *mut ArdlCoefficient,
    name: *mut *const c_char,
) -> ArdlStatus {
    guard(|| {
        non_null(ecm, "ecm")?;
        non_null(out, "out")?;
        let ecm = &*ecm;
        let c = ecm.fit.coefficients.get(index).ok_or_else(|| {
            fail(
                ArdlStatus::InvalidArgument,
                format!("coefficient index {index} out of range"),
            )
        })?;
        *out = c.into();
        if !name.is_null() {
            *name = ecm.names[index].as_ptr();
        }
        Ok(())
    })
}

/// Number of observations in the estimation sample; 0 for a null handle.
///
/// # Safety
/// `ecm` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ardl_ecm_nobs(ecm: *const ArdlEcm) -> usize {
    if ecm.is_null() {
        0
    } else {
        (*ecm).fit.nobs
    }
}

/// Copies up to `len` residuals into `buf`.
///
/// # Safety
/// `ecm` must be a live handle and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ardl_ecm_residuals(
    ecm: *const ArdlEcm,
    buf: *mut f64,
    len: usize,
) -> ArdlStatus {
    guard(|| {
        non_null(ecm, "ecm")?;
        non_null(buf, "buf")?;
        let r = &(*ecm).fit.residuals;
        let n = r.len().min(len);
        ptr::copy_nonoverlapping(r.as_ptr(), buf, n);
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArdlConclusion {
    #[default]
    Inconclusive = 0,
    Cointegrated = 1,
    NotCointegrated = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ArdlBoundsLevel {
    /// Significance level in percent.
    pub level: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub conclusion: ArdlConclusion,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ArdlBoundsResult {
    pub f_statistic: f64,
    pub df1: usize,
    pub df2: usize,
    pub k: usize,
    /// Bounds case 1 to 5.
    pub bounds_case: u32,
    /// 10, 5, 2.5 and 1%.
    pub levels: [ArdlBoundsLevel; 4],
}

/// Bounds F-test. `bounds_case` is 1 to 5, or 0 for the default of the
/// deterministic case.
///
/// # Safety
/// `panel` must be a live handle, `spec` valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ardl_bounds_test(
    panel: *const ArdlPanel,
    spec: *const ArdlModelSpec,
    bounds_case: u32,
    out: *mut ArdlBoundsResult,
) -> ArdlStatus {
    guard(|| {
        non_null(panel, "panel")?;
        non_null(out, "out")?;
        let spec = spec_arg(spec)?;
        let case = match bounds_case {
            0 => None,
            1 => Some(BoundsCase::I),
            2 => Some(BoundsCase::II),
            3 => Some(BoundsCase::III),
            4 => Some(BoundsCase::IV),
            5 => Some(BoundsCase::V),
            other => {
                return Err(fail(
                    ArdlStatus::InvalidArgument,
                    format!("bounds case {other}"),
                ))
            }
        };
        let panel = core((*panel).to_panel())?;
        let res = core(bounds_test(&panel, &spec, case))?;
        let mut levels = [ArdlBoundsLevel::default(); 4];
        for (slot, l) in levels.iter_mut().zip(&res.levels) {
            *slot = ArdlBoundsLevel {
                level: l.level,
                lower_bound: l.lower_bound,
                upper_bound: l.upper_bound,
                conclusion: match l.conclusion {
                    Conclusion::Cointegrated => ArdlConclusion::Cointegrated,
                    Conclusion::NotCointegrated => ArdlConclusion::NotCointegrated,
                    Conclusion::Inconclusive => ArdlConclusion::Inconclusive,
                },
            };
        }
        *out = ArdlBoundsResult {
            f_statistic: res.f_statistic,
            df1: res.df1,
            df2: res.df2,
            k: res.k,
            bounds_case: match res.case_id {
                BoundsCase::I => 1,
                BoundsCase::II => 2,
                BoundsCase::III => 3,
                BoundsCase::IV => 4,
                BoundsCase::V => 5,
            },
            levels,
        };
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArdlReportFormat {
    Markdown = 0,
    Csv = 1,
    Json = 2,
}

/// Runs a manifest and configuration and writes the reports into `out_dir`.
/// `exit_code` receives 0 when every model ran and 2 when some were skipped.
///
/// # Safety
/// String arguments must be nul-terminated; `exit_code` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ardl_run_pipeline(
    manifest: *const c_char,
    config: *const c_char,
    out_dir: *const c_char,
    format: ArdlReportFormat,
    seed: u64,
    jobs: usize,
    exit_code: *mut i32,
) -> ArdlStatus {
    guard(|| {
        let manifest = string_arg(manifest, "manifest")?;
        let config = string_arg(config, "config")?;
        let out_dir = string_arg(out_dir, "out_dir")?;
        let (manifest, config) = core(load_manifest_and_config(
            Path::new(&manifest),
            Path::new(&config),
        ))?;
        let data = core(load_data(&manifest, &config))?;
        let report = core(run_all(&data, &manifest, &config, jobs, seed))?;
        let format = match format {
            ArdlReportFormat::Markdown => ReportFormat::Markdown,
            ArdlReportFormat::Csv => ReportFormat::Csv,
            ArdlReportFormat::Json => ReportFormat::Json,
        };
        core(render_reports(&report, format, Path::new(&out_dir)))?;
        if !exit_code.is_null() {
            *exit_code = report.exit_code();
        }
        Ok(())
    })
}
