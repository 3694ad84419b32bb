//! End-to-end workflow: ingest a manifest of series, classify integration
//! orders, detect breaks, select lags, run the bounds test, estimate the
//! error-correction model and render long-run and short-run tables.

mod cells;
mod config;
mod report;
mod run;
pub mod synthetic;

pub use cells::{long_run_cell, short_run_cell};
pub use config::{
    load_config, load_manifest, load_manifest_and_config, parse_config, parse_manifest,
    validate_against, Dummies, Manifest, ManifestEntry, ModelConfig, RunConfig, Settings,
};
pub use report::{render_csv, render_json, render_markdown, render_reports, ReportFormat};
pub use run::{
    load_data, run_all, run_model, BreakInfo, DataSet, Diagnostics, ModelSection, ModelStatus,
    ReportRow, RowEstimate, RunReport, VariableIntegration,
};
