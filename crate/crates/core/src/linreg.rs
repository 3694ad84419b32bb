//! Ordinary least squares with coefficient inference, information criteria
//! and Wald F-tests.
//!
//! Coefficients are obtained from a Householder QR decomposition of the
//! design; `XᵀX` is never formed for the solve. A column whose QR diagonal is
//! at most `RANK_TOLERANCE` times its own norm is treated as linearly
//! dependent on the preceding columns and the fit fails with
//! [`Error::RankDeficient`].

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use crate::error::{Error, Result};

pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    column_names: Vec<String>,
    rows: DMatrix<f64>,
}

impl DesignMatrix {
    pub fn new(column_names: Vec<String>, rows: DMatrix<f64>) -> Result<Self> {
        if column_names.len() != rows.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{} column names for {} columns",
                column_names.len(),
                rows.ncols()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = column_names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::DimensionMismatch(format!(
                "duplicate column `{dup}`"
            )));
        }
        if rows.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "design has non-finite entries".into(),
            ));
        }
        if rows.nrows() <= rows.ncols() {
            return Err(Error::TooFewObservations {
                rows: rows.nrows(),
                columns: rows.ncols(),
            });
        }
        Ok(Self { column_names, rows })
    }

    /// Builds a design from column vectors of equal length.
    pub fn from_columns(columns: Vec<(String, Vec<f64>)>) -> Result<Self> {
        let n = columns.first().map_or(0, |c| c.1.len());
        if let Some((name, c)) = columns.iter().find(|c| c.1.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "column `{name}` has {} rows, expected {n}",
                c.len()
            )));
        }
        let k = columns.len();
        let mut names = Vec::with_capacity(k);
        let mut data = Vec::with_capacity(n * k);
        for (name, c) in columns {
            names.push(name);
            data.extend(c);
        }
        Self::new(names, DMatrix::from_vec(n, k, data))
    }

    /// Builds a design from row slices; `rows[i][j]` is observation `i` of
    /// column `j`.
    pub fn from_rows(column_names: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let k = column_names.len();
        if let Some(r) = rows.iter().find(|r| r.len() != k) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} for {k} columns",
                r.len()
            )));
        }
        let m = DMatrix::from_fn(rows.len(), k, |i, j| rows[i][j]);
        Self::new(column_names, m)
    }

    pub fn nrows(&self) -> usize {
        self.rows.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.rows.ncols()
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.column_names.iter().position(|n| n == name)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.column(j).iter().copied().collect()
    }

    /// Design without `names`; `None` when nothing is left.
    pub fn without_columns(&self, names: &[&str]) -> Result<Option<Self>> {
        for n in names {
            if self.position(n).is_none() {
                return Err(Error::InvalidArgument(format!("unknown column `{n}`")));
            }
        }
        let keep: Vec<usize> = (0..self.ncols())
            .filter(|&j| !names.contains(&self.column_names[j].as_str()))
            .collect();
        if keep.is_empty() {
            return Ok(None);
        }
        let m = self.rows.select_columns(&keep);
        let names = keep.iter().map(|&j| self.column_names[j].clone()).collect();
        Ok(Some(Self {
            column_names: names,
            rows: m,
        }))
    }
}

#[derive(Debug, Clone)]
pub struct RegressionFit {
    design: DesignMatrix,
    response: DVector<f64>,
    pub coefficients: DVector<f64>,
    pub covariance: DMatrix<f64>,
    pub residuals: DVector<f64>,
    pub rss: f64,
    pub sigma2: f64,
    pub loglik: f64,
    pub nobs: usize,
    pub df_resid: usize,
}

impl RegressionFit {
    pub fn column_names(&self) -> &[String] {
        self.design.column_names()
    }

    pub fn design(&self) -> &DesignMatrix {
        &self.design
    }

    pub fn response(&self) -> &DVector<f64> {
        &self.response
    }

    pub fn ncoef(&self) -> usize {
        self.coefficients.len()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.design.position(name)
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.position(name).map(|j| self.coefficients[j])
    }

    pub fn std_error(&self, j: usize) -> f64 {
        self.covariance[(j, j)].max(0.0).sqrt()
    }

    pub fn t_value(&self, j: usize) -> f64 {
        self.coefficients[j] / self.std_error(j)
    }

    pub fn fitted(&self) -> DVector<f64> {
        &self.response - &self.residuals
    }
}

/// Least-squares fit of `response` on `design`.
pub fn ols_fit(design: &DesignMatrix, response: &[f64]) -> Result<RegressionFit> {
    let n = design.nrows();
    let k = design.ncols();
    if response.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "response has {} rows, design has {n}",
            response.len()
        )));
    }
    if response.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "response has non-finite entries".into(),
        ));
    }

    let x = design.matrix();
    let qr = x.clone().qr();
    let r = qr.r();

    let deficient: Vec<String> = (0..k)
        .filter(|&j| {
            let norm = x.column(j).norm();
            norm == 0.0 || r[(j, j)].abs() <= RANK_TOLERANCE * norm
        })
        .map(|j| design.column_names[j].clone())
        .collect();
    if !deficient.is_empty() {
        return Err(Error::RankDeficient { columns: deficient });
    }

    let y = DVector::from_column_slice(response);
    let mut qty = y.clone();
    qr.q_tr_mul(&mut qty);
    let beta = r
        .solve_upper_triangular(&qty.rows(0, k).into_owned())
        .ok_or_else(|| Error::RankDeficient {
            columns: design.column_names.clone(),
        })?;

    let residuals = &y - x * &beta;
    let rss = residuals.norm_squared();
    let df_resid = n - k;
    let sigma2 = rss / df_resid as f64;

    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| Error::RankDeficient {
            columns: design.column_names.clone(),
        })?;
    let mut covariance = (&r_inv * r_inv.transpose()) * sigma2;
    for i in 0..k {
        for j in 0..i {
            let avg = 0.5 * (covariance[(i, j)] + covariance[(j, i)]);
            covariance[(i, j)] = avg;
            covariance[(j, i)] = avg;
        }
    }

    let nf = n as f64;
    let loglik = -0.5 * nf * ((2.0 * std::f64::consts::PI).ln() + (rss / nf).ln() + 1.0);

    Ok(RegressionFit {
        design: design.clone(),
        response: y,
        coefficients: beta,
        covariance,
        residuals,
        rss,
        sigma2,
        loglik,
        nobs: n,
        df_resid,
    })
}

/// Conventional 1% / 5% / 10% significance marks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Significance {
    None,
    Ten,
    Five,
    One,
}

impl Significance {
    pub fn from_p_value(p: f64) -> Self {
        if p < 0.01 {
            Significance::One
        } else if p < 0.05 {
            Significance::Five
        } else if p < 0.10 {
            Significance::Ten
        } else {
            Significance::None
        }
    }

    pub fn stars(self) -> &'static str {
        match self {
            Significance::None => "",
            Significance::Ten => "*",
            Significance::Five => "**",
            Significance::One => "***",
        }
    }

    pub fn is_significant(self) -> bool {
        self != Significance::None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTest {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_value: f64,
    pub p_value: f64,
    pub significance: Significance,
}

impl CoefficientTest {
    /// Inference for an estimate with standard error `std_error` and a
    /// Student-t reference distribution with `df` degrees of freedom.
    pub fn new(name: impl Into<String>, estimate: f64, std_error: f64, df: usize) -> Self {
        let t_value = if std_error > 0.0 {
            estimate / std_error
        } else if estimate == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(estimate)
        };
        let p_value = student_t_two_sided(t_value, df);
        Self {
            name: name.into(),
            estimate,
            std_error,
            t_value,
            p_value,
            significance: Significance::from_p_value(p_value),
        }
    }
}

/// Two-sided p-value of `t` under Student-t with `df` degrees of freedom.
pub fn student_t_two_sided(t: f64, df: usize) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df.max(1) as f64).expect("valid t distribution");
    (2.0 * dist.cdf(-t.abs())).min(1.0)
}

pub fn t_statistics(fit: &RegressionFit) -> Vec<CoefficientTest> {
    fit.column_names()
        .iter()
        .enumerate()
        .map(|(j, name)| {
            CoefficientTest::new(
                name.clone(),
                fit.coefficients[j],
                fit.std_error(j),
                fit.df_resid,
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InformationCriteria {
    pub aic: f64,
    pub bic: f64,
}

pub fn information_criteria(fit: &RegressionFit) -> InformationCriteria {
    let k = fit.ncoef() as f64;
    let n = fit.nobs as f64;
    InformationCriteria {
        aic: -2.0 * fit.loglik + 2.0 * k,
        bic: -2.0 * fit.loglik + k * n.ln(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InformationCriterion {
    Aic,
    Bic,
}

impl InformationCriterion {
    pub fn evaluate(self, fit: &RegressionFit) -> f64 {
        let ic = information_criteria(fit);
        match self {
            InformationCriterion::Aic => ic.aic,
            InformationCriterion::Bic => ic.bic,
        }
    }
}

impl std::str::FromStr for InformationCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aic" => Ok(InformationCriterion::Aic),
            "bic" => Ok(InformationCriterion::Bic),
            _ => Err(Error::InvalidArgument(format!("unknown criterion `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaldTest {
    pub f_statistic: f64,
    pub df1: usize,
    pub df2: usize,
    pub p_value: f64,
}

/// F-test of the joint nullity of `restricted` columns, computed by refitting
/// without them.
pub fn wald_f_test(fit: &RegressionFit, restricted: &[&str]) -> Result<WaldTest> {
    if restricted.is_empty() {
        return Err(Error::InvalidArgument("empty restriction set".into()));
    }
    let mut uniq = restricted.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    let rss_restricted = match fit.design.without_columns(&uniq)? {
        Some(reduced) => ols_fit(&reduced, fit.response.as_slice())?.rss,
        None => fit.response.norm_squared(),
    };
    let df1 = uniq.len();
    let df2 = fit.df_resid;
    let f_statistic = ((rss_restricted - fit.rss) / df1 as f64) / (fit.rss / df2 as f64);
    let p_value = if f_statistic.is_finite() && f_statistic >= 0.0 {
        let dist = FisherSnedecor::new(df1 as f64, df2 as f64).expect("valid F distribution");
        dist.sf(f_statistic)
    } else {
        f64::NAN
    };
    Ok(WaldTest {
        f_statistic,
        df1,
        df2,
        p_value,
    })
}
