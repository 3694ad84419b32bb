use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series have no common date coverage")]
    EmptyOverlap,
    #[error("series `{series}` starts on {first}, after the requested start {start}")]
    LeadingGap {
        series: String,
        first: NaiveDate,
        start: NaiveDate,
    },
    #[error("log transform requires positive values, found {value} at index {index}")]
    NonPositiveLog { index: usize, value: f64 },
    #[error("need more than {needed} observations, got {got}")]
    InsufficientLength { needed: usize, got: usize },
    #[error("too few observations: {rows} usable rows for {columns} columns")]
    TooFewObservations { rows: usize, columns: usize },
    #[error("series too short: need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("design matrix is rank deficient in column(s): {}", .columns.join(", "))]
    RankDeficient { columns: Vec<String> },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("invalid panel: {0}")]
    InvalidPanel(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("series is numerically zero after detrending")]
    DegenerateAfterDetrend,
    #[error("no candidate break date could be estimated")]
    NoBreakCandidates,
    #[error("no bounds critical values for case {case} with k = {k}")]
    MissingBoundsEntry { case: String, k: usize },
    #[error("no critical values for {test}/{case} at T = {nobs}")]
    MissingCriticalValue {
        test: String,
        case: String,
        nobs: usize,
    },
    #[error("speed of adjustment {alpha} is too close to zero; long-run coefficients undefined")]
    NearSingularAdjustment { alpha: f64 },
    #[error("dummy `{name}` break date {date} is outside the estimation sample")]
    DummyOutsideSample { name: String, date: NaiveDate },
    #[error("invalid data-generating process: {0}")]
    InvalidDgp(String),
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error("model {model}: unknown variable `{name}`")]
    UnknownVariable { model: String, name: String },
    #[error("variables integrated of order two or higher: {}", .0.join(", "))]
    I2VariableDetected(Vec<String>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
