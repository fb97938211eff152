use serde::Serialize;

use super::SingleMeta;
use crate::data::MetaAnalysisCollection;
use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::optim::find_root;
use crate::special::std_normal_quantile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DlEstimate {
    pub tau: f64,
    pub q: f64,
}

/// A labeled interval for the overall effect.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval {
    pub label: String,
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn need_two(sm: &SingleMeta, what: &str) -> Result<()> {
    if sm.k() < 2 {
        return Err(Error::Argument(format!(
            "{what} is undefined for fewer than 2 studies (k = {})",
            sm.k()
        )));
    }
    Ok(())
}

/// DerSimonian–Laird moment estimator, truncated at zero.
pub fn dl_estimate(sm: &SingleMeta) -> Result<DlEstimate> {
    need_two(sm, "the DerSimonian-Laird estimator")?;
    let q = sm.q_statistic(0.0);
    let (s1, s2) = sm.sigma().iter().fold((0.0, 0.0), |(a, b), s| {
        let w = s.powi(-2);
        (a + w, b + w * w)
    });
    let k = sm.k() as f64;
    let tau2 = ((q - (k - 1.0)) / (s1 - s2 / s1)).max(0.0);
    Ok(DlEstimate {
        tau: tau2.sqrt(),
        q,
    })
}

/// Paule–Mandel estimator: the τ at which the generalized Q equals `k − 1`.
pub fn pm_estimate(sm: &SingleMeta) -> Result<f64> {
    need_two(sm, "the Paule-Mandel estimator")?;
    let target = sm.k() as f64 - 1.0;
    let f = |t: f64| sm.q_statistic(t) - target;
    if f(0.0) <= 0.0 {
        return Ok(0.0);
    }
    let max_sigma = sm.sigma().iter().cloned().fold(0.0, f64::max);
    let cap = 1e3 * max_sigma;
    let mut hi = max_sigma;
    while f(hi) > 0.0 {
        if hi >= cap {
            return Err(Error::Numerical {
                op: "pm_estimate",
                context: format!("no sign change up to tau = {cap}"),
            });
        }
        hi = (2.0 * hi).min(cap);
    }
    find_root(f, 0.0, hi, 1e-10)
}

/// Student-t quantile `t_{df; p}` for `p > 0.5`.
fn t_quantile(df: f64, p: f64) -> Result<f64> {
    DistributionSpec::half_student_t(df, 1.0)?.quantile(2.0 * p - 1.0)
}

/// Normal, HKSJ and modified Knapp–Hartung 95% intervals at heterogeneity `tau`.
pub fn ci_suite(sm: &SingleMeta, tau: f64) -> Result<Vec<Interval>> {
    need_two(sm, "the confidence interval suite")?;
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::Argument(format!(
            "tau must be non-negative, got {tau}"
        )));
    }
    let (m, v) = sm.weighted_mean(tau);
    let k = sm.k() as f64;
    let q = sm.q_statistic(tau) / (k - 1.0);
    let z = std_normal_quantile(0.975);
    let t = t_quantile(k - 1.0, 0.975)?;
    let make = |label: &str, half: f64| Interval {
        label: label.into(),
        estimate: m,
        lo: m - half,
        hi: m + half,
    };
    Ok(vec![
        make("Normal", z * v.sqrt()),
        make("HKSJ", t * (q * v).sqrt()),
        make("mKH", t * (q.max(1.0) * v).sqrt()),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TauMethod {
    DL,
    PM,
}

impl std::str::FromStr for TauMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dl" => Ok(TauMethod::DL),
            "pm" => Ok(TauMethod::PM),
            other => Err(Error::Argument(format!(
                "unknown estimator '{other}' (expected dl or pm)"
            ))),
        }
    }
}

/// Per-analysis heterogeneity point estimates across a collection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauEstimates {
    pub method: TauMethod,
    pub estimates: Vec<(String, f64)>,
    pub skipped: Vec<String>,
    pub warnings: Vec<String>,
    /// `None` when no analysis had two or more studies.
    pub fraction_zero: Option<f64>,
    pub mean: Option<f64>,
    pub median: Option<f64>,
}

pub fn tau_estimate_collection(
    c: &MetaAnalysisCollection,
    method: TauMethod,
) -> Result<TauEstimates> {
    let mut estimates = Vec::new();
    let mut skipped = Vec::new();
    for a in c.analyses() {
        if a.k() < 2 {
            skipped.push(a.id.clone());
            continue;
        }
        let sm = SingleMeta::from_analysis(a)?;
        let tau = match method {
            TauMethod::DL => dl_estimate(&sm)?.tau,
            TauMethod::PM => pm_estimate(&sm)?,
        };
        estimates.push((a.id.clone(), tau));
    }
    let warnings = skipped
        .iter()
        .map(|id| format!("analysis '{id}' has a single study and was skipped"))
        .collect();
    let mut values: Vec<f64> = estimates.iter().map(|e| e.1).collect();
    let n = values.len() as f64;
    let (fraction_zero, mean, median) = if values.is_empty() {
        (None, None, None)
    } else {
        values.sort_by(f64::total_cmp);
        let mid = values.len() / 2;
        let median = if values.len() % 2 == 1 {
            values[mid]
        } else {
            0.5 * (values[mid - 1] + values[mid])
        };
        let zero = values.iter().filter(|&&t| t == 0.0).count() as f64 / n;
        (
            Some(zero),
            Some(values.iter().sum::<f64>() / n),
            Some(median),
        )
    };
    Ok(TauEstimates {
        method,
        estimates,
        skipped,
        warnings,
        fraction_zero,
        mean,
        median,
    })
}
