//! Time-series econometrics for price panels: unit-root testing, ARDL
//! estimation, bounds cointegration testing and error-correction models
//! with structural-break dummies.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`] holds date-indexed data, panel alignment and lag designs.
//! * [`linreg`] is the least-squares engine every test is built on.
//! * [`unitroot`] implements ADF, DF-GLS and Zivot-Andrews tests and the
//!   integration-order classifier.
//! * [`ardl`] estimates ARDL models, runs the bounds test and maps levels
//!   fits into error-correction form.
//! * [`mc`] is a seeded Monte Carlo harness for critical values and
//!   size/power experiments.
//! * [`pipeline`] drives the end-to-end workflow and renders reports.

pub mod ardl;
pub mod error;
pub mod linreg;
pub mod mc;
pub mod pipeline;
pub mod series;
pub mod unitroot;

pub use error::{Error, Result};
