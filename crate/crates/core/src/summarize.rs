//! Condense posterior output into a single communicable heterogeneity
//! prior: a point estimate plugged into the conditional family, an
//! analytic match of the predictive scale mixture, or a direct fit
//! (maximum likelihood or moments) to the predictive draws `τ*`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::dist::{
    exp_mixture_lomax, half_t_moment_fit, scale_mixture_half_t, DistributionSpec, NU_MAX,
};
use crate::error::{Error, Result};
use crate::optim::nelder_mead;
use crate::sampler::{quantile_type7, summarize_samples, HetFamily, PosteriorSamples};
use crate::SCHEMA_VERSION;

/// Significant digits kept in published priors.
pub const DEFAULT_DIGITS: u32 = 2;
/// Minimum number of draws for a maximum-likelihood fit.
pub const MIN_ML_DRAWS: usize = 1000;
const ML_BUDGET: usize = 10_000;
const ML_MAX_SHAPE: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Mean,
    Median,
    Q95,
}

impl FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mean" => Ok(Statistic::Mean),
            "median" => Ok(Statistic::Median),
            "q95" => Ok(Statistic::Q95),
            other => Err(Error::Argument(format!(
                "unknown statistic '{other}' (expected mean, median or q95)"
            ))),
        }
    }
}

/// How a [`PriorSpec`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TransferMethod {
    /// `P(θ̂)`; the upper-quantile variant is flagged conservative.
    PointEstimate {
        statistic: Statistic,
        conservative: bool,
    },
    MixtureMatch,
    DirectFitMl {
        log_likelihood: f64,
        evaluations: usize,
    },
    DirectFitMoments,
}

impl TransferMethod {
    /// Short tag used in table labels.
    pub fn tag(&self) -> &'static str {
        match self {
            TransferMethod::PointEstimate {
                statistic: Statistic::Mean,
                ..
            } => "point, mean",
            TransferMethod::PointEstimate {
                statistic: Statistic::Median,
                ..
            } => "point, median",
            TransferMethod::PointEstimate {
                statistic: Statistic::Q95,
                ..
            } => "point, q95, conservative",
            TransferMethod::MixtureMatch => "mixture",
            TransferMethod::DirectFitMl { .. } => "ML",
            TransferMethod::DirectFitMoments => "moments",
        }
    }
}

/// A heterogeneity prior with its provenance. `distribution` keeps full
/// precision; `rounded` is the published form.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorSpec {
    pub distribution: DistributionSpec,
    pub rounded: DistributionSpec,
    pub method: TransferMethod,
    pub source: String,
    pub digits: u32,
}

impl PriorSpec {
    pub fn new(distribution: DistributionSpec, method: TransferMethod) -> Result<Self> {
        let rounded = round_spec(&distribution, DEFAULT_DIGITS)?;
        Ok(Self {
            distribution,
            rounded,
            method,
            source: String::from("samples"),
            digits: DEFAULT_DIGITS,
        })
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn with_digits(mut self, digits: u32) -> Result<Self> {
        self.rounded = round_spec(&self.distribution, digits)?;
        self.digits = digits;
        Ok(self)
    }
}

impl fmt::Display for PriorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rounded)
    }
}

impl Serialize for PriorSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            family: &'a str,
            params: Vec<f64>,
            rounded: String,
            digits: u32,
            method: &'a TransferMethod,
            source: &'a str,
        }
        Repr {
            family: self.distribution.family_name(),
            params: self.distribution.params(),
            rounded: self.rounded.to_string(),
            digits: self.digits,
            method: &self.method,
            source: &self.source,
        }
        .serialize(s)
    }
}

/// Round to `digits` significant digits.
pub fn round_sig(x: f64, digits: u32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let shift = digits as i32 - 1 - magnitude;
    if shift >= 0 {
        let f = 10f64.powi(shift);
        (x * f).round() / f
    } else {
        let f = 10f64.powi(-shift);
        (x / f).round() * f
    }
}

fn round_spec(d: &DistributionSpec, digits: u32) -> Result<DistributionSpec> {
    if digits == 0 {
        return Err(Error::Argument(
            "rounding needs at least one significant digit".into(),
        ));
    }
    let params: Vec<f64> = d.params().iter().map(|&p| round_sig(p, digits)).collect();
    DistributionSpec::from_parts(d.family_name(), &params)
}

fn mean_sd(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = if x.len() > 1 {
        x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (m, v.sqrt())
}

fn family_of(s: &PosteriorSamples) -> Result<HetFamily> {
    s.family.ok_or_else(|| {
        Error::Argument("samples come from a fixed heterogeneity prior; no hyperparameters".into())
    })
}

fn hyper(s: &PosteriorSamples, name: &str) -> Result<Vec<f64>> {
    let d = s
        .pooled(name)
        .ok_or_else(|| Error::Argument(format!("samples have no '{name}' draws")))?;
    if d.is_empty() {
        return Err(Error::Argument(format!("samples have no '{name}' draws")));
    }
    Ok(d)
}

/// `P(θ̂)` with each hyperparameter replaced by the chosen posterior statistic.
pub fn point_estimate_prior(s: &PosteriorSamples, statistic: Statistic) -> Result<PriorSpec> {
    let family = family_of(s)?;
    let theta = family
        .hyper_names()
        .iter()
        .map(|name| {
            let mut d = hyper(s, name)?;
            Ok(match statistic {
                Statistic::Mean => mean_sd(&d).0,
                Statistic::Median | Statistic::Q95 => {
                    d.sort_by(f64::total_cmp);
                    quantile_type7(
                        &d,
                        if statistic == Statistic::Median {
                            0.5
                        } else {
                            0.95
                        },
                    )
                }
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    PriorSpec::new(
        family.conditional(&theta)?,
        TransferMethod::PointEstimate {
            statistic,
            conservative: statistic == Statistic::Q95,
        },
    )
}

/// Analytic approximation of the predictive scale mixture: half-normal
/// becomes half-t, exponential becomes Lomax, log-normal stays log-normal
/// with its shape inflated by the spread of the sampled log-scale.
pub fn mixture_match_prior(s: &PosteriorSamples) -> Result<PriorSpec> {
    let family = family_of(s)?;
    let dist = match family {
        HetFamily::HalfNormal => {
            let (m, sd) = mean_sd(&hyper(s, "scale")?);
            scale_mixture_half_t(m, sd)?
        }
        HetFamily::Exponential => {
            let (m, sd) = mean_sd(&hyper(s, "scale")?);
            exp_mixture_lomax(m, sd)?
        }
        HetFamily::LogNormal => {
            let logs: Vec<f64> = hyper(s, "scale")?.iter().map(|t| t.ln()).collect();
            let shapes = hyper(s, "shape")?;
            let (loc, sd_log) = mean_sd(&logs);
            let mean_sq = shapes.iter().map(|v| v * v).sum::<f64>() / shapes.len() as f64;
            DistributionSpec::log_normal(loc, (mean_sq + sd_log * sd_log).sqrt())?
        }
        HetFamily::HalfCauchy => {
            return Err(Error::Unsupported(
                "no analytic mixture match for the half-Cauchy family".into(),
            ))
        }
    };
    PriorSpec::new(dist, TransferMethod::MixtureMatch)
}

/// Families available for direct fits to predictive draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(into = "String")]
pub enum FitFamily {
    HalfNormal,
    HalfStudentT,
    Exponential,
    HalfCauchy,
    LogNormal,
    Lomax,
}

impl FitFamily {
    pub const ALL: [FitFamily; 6] = [
        FitFamily::HalfNormal,
        FitFamily::HalfStudentT,
        FitFamily::Exponential,
        FitFamily::HalfCauchy,
        FitFamily::LogNormal,
        FitFamily::Lomax,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FitFamily::HalfNormal => "half-normal",
            FitFamily::HalfStudentT => "half-t",
            FitFamily::Exponential => "exp",
            FitFamily::HalfCauchy => "half-cauchy",
            FitFamily::LogNormal => "log-normal",
            FitFamily::Lomax => "lomax",
        }
    }
}

impl From<FitFamily> for String {
    fn from(f: FitFamily) -> String {
        f.name().into()
    }
}

impl fmt::Display for FitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FitFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "half-normal" | "halfnormal" => Ok(FitFamily::HalfNormal),
            "half-t" | "half-student-t" | "halft" => Ok(FitFamily::HalfStudentT),
            "exp" | "exponential" => Ok(FitFamily::Exponential),
            "half-cauchy" | "halfcauchy" => Ok(FitFamily::HalfCauchy),
            "log-normal" | "lognormal" => Ok(FitFamily::LogNormal),
            "lomax" => Ok(FitFamily::Lomax),
            other => Err(Error::Argument(format!("unknown fit family '{other}'"))),
        }
    }
}

fn check_draws(draws: &[f64], min: usize) -> Result<()> {
    if draws.len() < min {
        return Err(Error::Argument(format!(
            "need at least {min} draws, got {}",
            draws.len()
        )));
    }
    if let Some(bad) = draws.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::Argument(format!(
            "draws must be finite and non-negative, found {bad}"
        )));
    }
    Ok(())
}

fn build(family: FitFamily, p: &[f64]) -> Result<DistributionSpec> {
    match family {
        FitFamily::HalfNormal => DistributionSpec::half_normal(p[0]),
        FitFamily::HalfStudentT => DistributionSpec::half_student_t(p[0], p[1]),
        FitFamily::Exponential => DistributionSpec::exponential(p[0]),
        FitFamily::HalfCauchy => DistributionSpec::half_cauchy(p[0]),
        FitFamily::LogNormal => DistributionSpec::log_normal(p[0], p[1]),
        FitFamily::Lomax => DistributionSpec::lomax(p[0], p[1]),
    }
}

/// Maximum-likelihood fit to the predictive draws. Half-normal, exponential
/// and log-normal have closed-form estimators; the half-t, half-Cauchy and
/// Lomax are fitted by Nelder–Mead on the log-parameters, started at the
/// moment estimate (when it exists) and restarted once from the optimum.
pub fn fit_predictive_ml(draws: &[f64], family: FitFamily) -> Result<PriorSpec> {
    check_draws(draws, MIN_ML_DRAWS)?;
    let n = draws.len() as f64;
    let (dist, evaluations) = match family {
        FitFamily::HalfNormal => (
            DistributionSpec::half_normal((draws.iter().map(|x| x * x).sum::<f64>() / n).sqrt())?,
            0,
        ),
        FitFamily::Exponential => (
            DistributionSpec::exponential(draws.iter().sum::<f64>() / n)?,
            0,
        ),
        FitFamily::LogNormal => {
            if draws.contains(&0.0) {
                return Err(Error::Domain(
                    "log-normal fit needs strictly positive draws".into(),
                ));
            }
            let logs: Vec<f64> = draws.iter().map(|x| x.ln()).collect();
            let m = logs.iter().sum::<f64>() / n;
            let sd = (logs.iter().map(|l| (l - m).powi(2)).sum::<f64>() / n).sqrt();
            (DistributionSpec::log_normal(m, sd)?, 0)
        }
        FitFamily::HalfStudentT | FitFamily::HalfCauchy | FitFamily::Lomax => {
            numeric_ml(draws, family)?
        }
    };
    let ll = dist.log_likelihood(draws);
    PriorSpec::new(
        dist,
        TransferMethod::DirectFitMl {
            log_likelihood: ll,
            evaluations,
        },
    )
}

fn numeric_ml(draws: &[f64], family: FitFamily) -> Result<(DistributionSpec, usize)> {
    let m = mean_sd(draws).0;
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = quantile_type7(&sorted, 0.5);
    let start: Vec<f64> = match family {
        FitFamily::HalfStudentT => match fit_predictive_moments(draws, family) {
            Ok(p) => p.distribution.params(),
            Err(_) => vec![30.0, m / (2.0 / std::f64::consts::PI).sqrt()],
        },
        FitFamily::Lomax => match fit_predictive_moments(draws, family) {
            Ok(p) => p.distribution.params(),
            Err(_) => vec![10.0, 9.0 * m],
        },
        _ => vec![median.max(1e-12)],
    };
    let neg_ll = |logp: &[f64]| -> f64 {
        let p: Vec<f64> = logp.iter().map(|l| l.exp()).collect();
        if family != FitFamily::HalfCauchy && p[0] > ML_MAX_SHAPE {
            return f64::INFINITY;
        }
        match build(family, &p) {
            Ok(d) => -d.log_likelihood(draws) / draws.len() as f64,
            Err(_) => f64::INFINITY,
        }
    };
    let x0: Vec<f64> = start.iter().map(|p| p.ln()).collect();
    let first = nelder_mead(neg_ll, &x0, 0.2, 1e-12, 1e-9, ML_BUDGET)?;
    let second = nelder_mead(neg_ll, &first.x, 0.05, 1e-12, 1e-9, ML_BUDGET)?;
    let best = if second.value <= first.value {
        &second
    } else {
        &first
    };
    let params: Vec<f64> = best.x.iter().map(|l| l.exp()).collect();
    Ok((
        build(family, &params)?,
        first.evaluations + second.evaluations,
    ))
}

/// Moment fit to the predictive draws (sample mean and sd).
pub fn fit_predictive_moments(draws: &[f64], family: FitFamily) -> Result<PriorSpec> {
    check_draws(draws, 2)?;
    let (m, sd) = mean_sd(draws);
    if !(m > 0.0) {
        return Err(Error::Domain(
            "moment fit needs a positive sample mean".into(),
        ));
    }
    let cv = sd / m;
    let dist = match family {
        FitFamily::HalfNormal => {
            DistributionSpec::half_normal(m / (2.0 / std::f64::consts::PI).sqrt())?
        }
        FitFamily::Exponential => DistributionSpec::exponential(m)?,
        FitFamily::HalfStudentT => half_t_moment_fit(m, sd)?,
        FitFamily::LogNormal => {
            let s2 = (cv * cv).ln_1p();
            DistributionSpec::log_normal(m.ln() - 0.5 * s2, s2.sqrt())?
        }
        FitFamily::Lomax => {
            if cv <= 1.0 {
                return Err(Error::Infeasible(format!(
                    "sample cv {cv:.4} ≤ 1: a Lomax needs cv > 1; use an exponential"
                )));
            }
            let alpha = (2.0 * cv * cv / (cv * cv - 1.0)).min(NU_MAX);
            DistributionSpec::lomax(alpha, m * (alpha - 1.0))?
        }
        FitFamily::HalfCauchy => {
            return Err(Error::Domain(
                "the half-Cauchy has no finite moments to match".into(),
            ))
        }
    };
    PriorSpec::new(dist, TransferMethod::DirectFitMoments)
}

/// One row of an approximation table. Undefined moments are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub label: String,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub median: f64,
    pub q95: f64,
    pub q99: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproximationTable {
    pub schema_version: u32,
    pub rows: Vec<TableRow>,
}

/// Analytic summary of a distribution, straight from its moments and quantiles.
pub fn analytic_row(label: impl Into<String>, d: &DistributionSpec) -> Result<TableRow> {
    Ok(TableRow {
        label: label.into(),
        mean: d.mean(),
        sd: d.sd(),
        median: d.median(),
        q95: d.quantile(0.95)?,
        q99: d.quantile(0.99)?,
    })
}

/// Empirical summary of the draws (when at least two are given) followed
/// by each prior's published (rounded) distribution, labelled with its method.
pub fn approximation_table(specs: &[PriorSpec], draws: &[f64]) -> Result<ApproximationTable> {
    if specs.is_empty() {
        return Err(Error::Argument(
            "approximation table needs at least one prior".into(),
        ));
    }
    let mut rows = Vec::new();
    if draws.len() >= 2 {
        let s = summarize_samples(draws)?;
        rows.push(TableRow {
            label: "MCMC".into(),
            mean: Some(s.mean),
            sd: Some(s.sd),
            median: s.median,
            q95: s.q95,
            q99: s.q99,
        });
    }
    for p in specs {
        rows.push(analytic_row(
            format!("{} [{}]", p.rounded, p.method.tag()),
            &p.rounded,
        )?);
    }
    Ok(ApproximationTable {
        schema_version: SCHEMA_VERSION,
        rows,
    })
}

impl ApproximationTable {
    pub fn to_table(&self) -> String {
        let cell = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| format!("{x:.2}"));
        let width = self
            .rows
            .iter()
            .map(|r| r.label.len())
            .max()
            .unwrap_or(0)
            .max(12);
        let mut out = format!(
            "{:<width$} {:>7} {:>7} {:>7} {:>7} {:>7}\n",
            "distribution", "mean", "sd", "50%", "95%", "99%"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<width$} {:>7} {:>7} {:>7.2} {:>7.2} {:>7.2}\n",
                r.label,
                cell(r.mean),
                cell(r.sd),
                r.median,
                r.q95,
                r.q99
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests;
