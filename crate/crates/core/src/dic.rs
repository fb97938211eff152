//! Deviance, the deviance information criterion, and DIC-ranked comparison
//! of heterogeneity families on one collection.

use rayon::prelude::*;
use serde::Serialize;

use crate::data::MetaAnalysisCollection;
use crate::error::{Error, Result};
use crate::sampler::{
    analysis_log_lik, run_hierarchical, summarize_samples, HetFamily, McmcConfig, ModelTemplate,
    PosteriorSamples,
};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DicResult {
    pub family: String,
    pub dic: f64,
    pub p_d: f64,
    pub mean_deviance: f64,
    pub plug_in_deviance: f64,
}

/// `−2 Σ_j Σ_i log N(y_ij; μ_j, σ_ij² + τ_j²)`.
pub fn deviance(c: &MetaAnalysisCollection, mu: &[f64], tau: &[f64]) -> Result<f64> {
    if mu.len() != c.len() || tau.len() != c.len() {
        return Err(Error::Argument(format!(
            "need one mu and one tau per analysis ({}), got {} and {}",
            c.len(),
            mu.len(),
            tau.len()
        )));
    }
    if let Some(t) = tau.iter().find(|t| !(**t >= 0.0)) {
        return Err(Error::Argument(format!(
            "tau must be non-negative, got {t}"
        )));
    }
    let ll: f64 = c
        .analyses()
        .iter()
        .zip(mu.iter().zip(tau))
        .map(|(a, (&m, &t))| {
            let vars: Vec<f64> = a.std_errs().iter().map(|s| s * s).collect();
            analysis_log_lik(&a.estimates(), &vars, m, t)
        })
        .sum();
    Ok(-2.0 * ll)
}

/// DIC with the plug-in deviance at the posterior means of every `μ_j` and `τ_j`.
pub fn compute_dic(s: &PosteriorSamples, c: &MetaAnalysisCollection) -> Result<DicResult> {
    let devs: Vec<f64> = s
        .chains
        .iter()
        .flat_map(|ch| ch.deviance.iter().copied())
        .collect();
    if devs.is_empty()
        || s.chains
            .iter()
            .any(|ch| ch.deviance.len() != ch.tau_pred.len())
    {
        return Err(Error::Format(
            "samples carry no complete deviance trace".into(),
        ));
    }
    let (mu, tau) = s
        .effect_means()
        .ok_or_else(|| Error::Format("samples carry no per-analysis mu/tau draws".into()))?;
    let mean_deviance = devs.iter().sum::<f64>() / devs.len() as f64;
    let plug_in_deviance = deviance(c, &mu, &tau)?;
    let p_d = mean_deviance - plug_in_deviance;
    Ok(DicResult {
        family: s
            .family
            .map_or_else(|| "fixed".to_string(), |f| f.name().to_string()),
        dic: mean_deviance + p_d,
        p_d,
        mean_deviance,
        plug_in_deviance,
    })
}

/// Predictive `τ*` summary. Mean and sd are `None` where the family has no
/// finite moments (half-Cauchy).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictiveSummary {
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub median: f64,
    pub q95: f64,
    pub q99: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub family: HetFamily,
    pub dic: Option<DicResult>,
    pub predictive: Option<PredictiveSummary>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub schema_version: u32,
    /// Sorted by DIC (lowest first); failed families last.
    pub rows: Vec<ComparisonRow>,
}

fn compare_one(
    c: &MetaAnalysisCollection,
    family: HetFamily,
    template: &ModelTemplate,
    cfg: &McmcConfig,
) -> Result<(DicResult, PredictiveSummary)> {
    let s = run_hierarchical(c, &template.build(family)?, cfg)?;
    let dic = compute_dic(&s, c)?;
    let sum = summarize_samples(&s.tau_pred())?;
    let moments = family != HetFamily::HalfCauchy;
    Ok((
        dic,
        PredictiveSummary {
            mean: moments.then_some(sum.mean),
            sd: moments.then_some(sum.sd),
            median: sum.median,
            q95: sum.q95,
            q99: sum.q99,
        },
    ))
}

/// Fit every family with the same configuration (and seed) and rank by DIC.
/// A family that fails is reported in its row without aborting the others.
pub fn compare_models(
    c: &MetaAnalysisCollection,
    families: &[HetFamily],
    template: &ModelTemplate,
    cfg: &McmcConfig,
) -> Result<Comparison> {
    if families.len() < 2 {
        return Err(Error::Argument(format!(
            "comparison needs at least 2 families, got {}",
            families.len()
        )));
    }
    for (i, f) in families.iter().enumerate() {
        if families[..i].contains(f) {
            return Err(Error::Argument(format!("family {f} listed twice")));
        }
    }
    let mut rows: Vec<ComparisonRow> = families
        .par_iter()
        .map(|&family| match compare_one(c, family, template, cfg) {
            Ok((dic, pred)) => ComparisonRow {
                family,
                dic: Some(dic),
                predictive: Some(pred),
                error: None,
            },
            Err(e) => ComparisonRow {
                family,
                dic: None,
                predictive: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    rows.sort_by(|a, b| match (&a.dic, &b.dic) {
        (Some(x), Some(y)) => x.dic.total_cmp(&y.dic),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    Ok(Comparison {
        schema_version: SCHEMA_VERSION,
        rows,
    })
}

impl Comparison {
    /// Aligned text table: model, DIC, then predictive mean, sd and quantiles.
    pub fn to_table(&self) -> String {
        let cell = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| format!("{x:.2}"));
        let mut out = format!(
            "{:<12} {:>9} {:>7} {:>7} {:>7} {:>7} {:>7}\n",
            "model", "DIC", "mean", "sd", "50%", "95%", "99%"
        );
        for r in &self.rows {
            match (&r.dic, &r.predictive) {
                (Some(d), Some(p)) => out.push_str(&format!(
                    "{:<12} {:>9.1} {:>7} {:>7} {:>7.2} {:>7.2} {:>7.2}\n",
                    r.family.name(),
                    d.dic,
                    cell(p.mean),
                    cell(p.sd),
                    p.median,
                    p.q95,
                    p.q99
                )),
                _ => out.push_str(&format!(
                    "{:<12} failed: {}\n",
                    r.family.name(),
                    r.error.as_deref().unwrap_or("unknown error")
                )),
            }
        }
        out
    }
}
