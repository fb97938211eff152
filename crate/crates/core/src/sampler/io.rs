use std::collections::BTreeMap;

use serde::Serialize;

use super::diagnostics::diagnostics;
use super::summary::{summarize_samples, DrawSummary};
use super::{parse_indexed, ChainDraws, HetFamily, PosteriorSamples};
use crate::error::{Error, Result};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSummary {
    pub name: String,
    #[serde(flatten)]
    pub summary: DrawSummary,
    pub rhat: Option<f64>,
    pub ess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisSummary {
    pub id: String,
    pub mu: DrawSummary,
    pub tau: DrawSummary,
}

/// JSON summary of a run: monitored parameters with diagnostics, then
/// per-analysis effect and heterogeneity summaries when available.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplesSummary {
    pub schema_version: u32,
    pub family: Option<HetFamily>,
    pub n_analyses: usize,
    pub chains: usize,
    pub kept_per_chain: usize,
    pub parameters: Vec<ParamSummary>,
    pub analyses: Vec<AnalysisSummary>,
    pub warnings: Vec<String>,
}

impl PosteriorSamples {
    pub fn summary(&self) -> Result<SamplesSummary> {
        let diag = diagnostics(self);
        let parameters = diag
            .params
            .iter()
            .map(|d| {
                let draws = self.pooled(&d.name).expect("diagnosed parameters exist");
                Ok(ParamSummary {
                    name: d.name.clone(),
                    summary: summarize_samples(&draws)?,
                    rhat: d.rhat,
                    ess: d.ess,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let analyses = if self.has_effects() {
            self.analysis_ids
                .iter()
                .enumerate()
                .map(|(j, id)| {
                    let mu = self
                        .pooled(&format!("mu[{}]", j + 1))
                        .expect("effects present");
                    let tau = self
                        .pooled(&format!("tau[{}]", j + 1))
                        .expect("effects present");
                    Ok(AnalysisSummary {
                        id: id.clone(),
                        mu: summarize_samples(&mu)?,
                        tau: summarize_samples(&tau)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        Ok(SamplesSummary {
            schema_version: SCHEMA_VERSION,
            family: self.family,
            n_analyses: self.analysis_ids.len(),
            chains: self.n_chains(),
            kept_per_chain: self.n_kept(),
            parameters,
            analyses,
            warnings: diag.warnings,
        })
    }

    /// Long-format CSV `chain,iter,parameter,value` (both counters 1-based).
    /// Only the hyperparameters, `tau_pred` and `deviance` unless `all`.
    pub fn to_csv(&self, all: bool) -> String {
        let names = self.parameter_names(all);
        let mut out = String::from("chain,iter,parameter,value\n");
        for name in &names {
            for (c, draws) in self
                .chains_of(name)
                .expect("listed parameters exist")
                .iter()
                .enumerate()
            {
                for (t, v) in draws.iter().enumerate() {
                    out.push_str(&format!("{},{},{},{}\n", c + 1, t + 1, name, v));
                }
            }
        }
        out
    }

    /// Read the CSV written by [`PosteriorSamples::to_csv`]. Analysis ids
    /// are not stored in the file and come back as 1-based indices.
    pub fn from_csv(text: &str, family: Option<HetFamily>) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["chain", "iter", "parameter", "value"] {
            return Err(Error::Format(format!(
                "sample file header must be 'chain,iter,parameter,value', got '{}'",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut series: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
        let mut order: Vec<String> = Vec::new();
        for (i, row) in reader.records().enumerate() {
            let row_no = i + 1;
            let row = row.map_err(|e| Error::Record {
                row: row_no,
                message: e.to_string(),
            })?;
            let bad = |what: &str| Error::Record {
                row: row_no,
                message: format!("invalid {what} '{}'", row.get(0).unwrap_or("")),
            };
            let chain: usize = row[0].parse().map_err(|_| bad("chain"))?;
            let iter: usize = row[1].parse().map_err(|_| bad("iter"))?;
            let value: f64 = row[3].parse().map_err(|_| bad("value"))?;
            let name = row[2].to_string();
            if chain == 0 || iter == 0 {
                return Err(Error::Record {
                    row: row_no,
                    message: "chain and iter are 1-based".into(),
                });
            }
            let entry = series.entry(name.clone()).or_insert_with(|| {
                order.push(name.clone());
                Vec::new()
            });
            if entry.len() < chain {
                entry.resize(chain, Vec::new());
            }
            let draws = &mut entry[chain - 1];
            if draws.len() + 1 != iter {
                return Err(Error::Record {
                    row: row_no,
                    message: format!(
                        "{name} chain {chain}: expected iter {}, got {iter}",
                        draws.len() + 1
                    ),
                });
            }
            draws.push(value);
        }

        let lengths: Vec<(usize, usize)> = series
            .values()
            .map(|cs| (cs.len(), cs.first().map_or(0, Vec::len)))
            .collect();
        let (n_chains, n_kept) = *lengths
            .first()
            .ok_or_else(|| Error::Format("sample file is empty".into()))?;
        if series
            .values()
            .any(|cs| cs.len() != n_chains || cs.iter().any(|c| c.len() != n_kept))
        {
            return Err(Error::Format(
                "sample file is not rectangular across parameters and chains".into(),
            ));
        }

        let hyper_names: Vec<String> = match family {
            Some(f) => f.hyper_names().iter().map(|s| s.to_string()).collect(),
            None => order
                .iter()
                .filter(|n| {
                    !matches!(n.as_str(), "tau_pred" | "deviance") && parse_indexed(n).is_none()
                })
                .cloned()
                .collect(),
        };
        for name in hyper_names.iter().map(String::as_str).chain(["tau_pred"]) {
            if !series.contains_key(name) {
                return Err(Error::Format(format!(
                    "sample file has no draws for '{name}'"
                )));
            }
        }
        let n_effects = order
            .iter()
            .filter_map(|n| parse_indexed(n))
            .filter(|(k, _)| *k == "mu")
            .count();
        let take = |name: &str, c: usize| series.get(name).map(|cs| cs[c].clone());
        let chains = (0..n_chains)
            .map(|c| ChainDraws {
                hyper: hyper_names
                    .iter()
                    .map(|h| take(h, c).expect("checked above"))
                    .collect(),
                mu: (1..=n_effects)
                    .filter_map(|j| take(&format!("mu[{j}]"), c))
                    .collect(),
                tau: (1..=n_effects)
                    .filter_map(|j| take(&format!("tau[{j}]"), c))
                    .collect(),
                tau_pred: take("tau_pred", c).expect("checked above"),
                deviance: take("deviance", c).unwrap_or_default(),
            })
            .collect();
        Ok(PosteriorSamples {
            family,
            hyper_names,
            analysis_ids: (1..=n_effects).map(|j| j.to_string()).collect(),
            chains,
        })
    }
}
