//! Single random-effects meta-analysis: Bayesian inference by deterministic
//! grid integration over τ, plus the DerSimonian–Laird and Paule–Mandel
//! estimators and the Normal, HKSJ and modified Knapp–Hartung intervals.

mod forest;
mod frequentist;
mod grid;

pub use forest::{forest_rows, forest_to_csv, ForestRow};
pub use frequentist::{
    ci_suite, dl_estimate, pm_estimate, tau_estimate_collection, DlEstimate, Interval,
    TauEstimates, TauMethod,
};
pub use grid::{
    bayes_ma, tau_marginal, MetaAnalysisResult, MuPosterior, TauPosterior, GRID_POINTS,
};

use std::collections::HashSet;

use serde::Serialize;

use crate::data::MetaAnalysis;
use crate::error::{Error, Result};

/// Estimates `y` and standard errors `sigma` of one meta-analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleMeta {
    y: Vec<f64>,
    sigma: Vec<f64>,
    labels: Vec<String>,
}

impl SingleMeta {
    pub fn new(y: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        let labels = (1..=y.len()).map(|i| format!("study {i}")).collect();
        Self::with_labels(y, sigma, labels)
    }

    pub fn with_labels(y: Vec<f64>, sigma: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if y.is_empty() {
            return Err(Error::Argument(
                "a meta-analysis needs at least one study".into(),
            ));
        }
        if y.len() != sigma.len() || y.len() != labels.len() {
            return Err(Error::Argument(format!(
                "estimates ({}), standard errors ({}) and labels ({}) differ in length",
                y.len(),
                sigma.len(),
                labels.len()
            )));
        }
        for (i, (&yi, &si)) in y.iter().zip(&sigma).enumerate() {
            if !yi.is_finite() {
                return Err(Error::Record {
                    row: i + 1,
                    message: format!("estimate must be finite, got {yi}"),
                });
            }
            if !(si.is_finite() && si > 0.0) {
                return Err(Error::Record {
                    row: i + 1,
                    message: format!("std_err must be positive and finite, got {si}"),
                });
            }
        }
        Ok(Self { y, sigma, labels })
    }

    pub fn from_analysis(a: &MetaAnalysis) -> Result<Self> {
        Self::with_labels(
            a.estimates(),
            a.std_errs(),
            a.studies.iter().map(|s| s.study_id.clone()).collect(),
        )
    }

    /// Parse CSV with columns `estimate,std_err` and optionally `study_id`
    /// and `analysis_id` (which, if present, must hold a single value).
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let find = |name: &str| headers.iter().position(|h| h == name);
        for h in headers.iter() {
            if !matches!(
                h,
                "analysis_id" | "study_id" | "estimate" | "std_err" | "seq"
            ) {
                return Err(Error::Format(format!("unknown column '{h}'")));
            }
        }
        let est =
            find("estimate").ok_or_else(|| Error::Format("missing column 'estimate'".into()))?;
        let se = find("std_err").ok_or_else(|| Error::Format("missing column 'std_err'".into()))?;
        let (sid, aid) = (find("study_id"), find("analysis_id"));
        let (mut y, mut sigma, mut labels) = (Vec::new(), Vec::new(), Vec::new());
        let mut analyses = HashSet::new();
        for (i, row) in reader.records().enumerate() {
            let row_no = i + 1;
            let row = row.map_err(|e| Error::Record {
                row: row_no,
                message: e.to_string(),
            })?;
            let number = |col: usize, name: &str| -> Result<f64> {
                let v = row.get(col).unwrap_or("");
                v.parse().map_err(|_| Error::Record {
                    row: row_no,
                    message: format!("{name} '{v}' is not a number"),
                })
            };
            y.push(number(est, "estimate")?);
            sigma.push(number(se, "std_err")?);
            labels.push(match sid {
                Some(c) => row.get(c).unwrap_or("").to_string(),
                None => format!("study {row_no}"),
            });
            if let Some(c) = aid {
                analyses.insert(row.get(c).unwrap_or("").to_string());
            }
        }
        if analyses.len() > 1 {
            return Err(Error::Format(format!(
                "expected a single analysis_id, found {}; use a collection command instead",
                analyses.len()
            )));
        }
        Self::with_labels(y, sigma, labels)
    }

    pub fn k(&self) -> usize {
        self.y.len()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Inverse-variance weighted mean and its variance for heterogeneity `tau`.
    pub fn weighted_mean(&self, tau: f64) -> (f64, f64) {
        let (mut sw, mut swy) = (0.0, 0.0);
        for (&y, &s) in self.y.iter().zip(&self.sigma) {
            let w = 1.0 / (s * s + tau * tau);
            sw += w;
            swy += w * y;
        }
        (swy / sw, 1.0 / sw)
    }

    /// Generalized Q statistic `Σ w_i (y_i − μ̂)²` at heterogeneity `tau`.
    pub fn q_statistic(&self, tau: f64) -> f64 {
        let (m, _) = self.weighted_mean(tau);
        self.y
            .iter()
            .zip(&self.sigma)
            .map(|(&y, &s)| (y - m).powi(2) / (s * s + tau * tau))
            .sum()
    }
}

/// Prior for the overall effect μ in a single meta-analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MuPrior {
    Flat,
    Normal { mean: f64, sd: f64 },
}
