use serde::Serialize;

use super::PosteriorSamples;
use crate::error::{Error, Result};

pub const RHAT_WARN: f64 = 1.01;
pub const ESS_WARN: f64 = 400.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamDiagnostic {
    pub name: String,
    /// `None` when fewer than two chains are available.
    pub rhat: Option<f64>,
    pub ess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub params: Vec<ParamDiagnostic>,
    pub warnings: Vec<String>,
}

impl Diagnostics {
    pub fn get(&self, name: &str) -> Option<&ParamDiagnostic> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn max_rhat(&self) -> Option<f64> {
        self.params.iter().filter_map(|p| p.rhat).reduce(f64::max)
    }
}

fn split(chains: &[&[f64]]) -> Vec<Vec<f64>> {
    chains
        .iter()
        .flat_map(|c| {
            let half = c.len() / 2;
            [c[..half].to_vec(), c[c.len() - half..].to_vec()]
        })
        .collect()
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn var(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64
}

/// Within-chain variance `W` and the pooled estimate `var⁺`.
fn variances(chains: &[Vec<f64>]) -> (f64, f64) {
    let n = chains[0].len() as f64;
    let w = chains.iter().map(|c| var(c)).sum::<f64>() / chains.len() as f64;
    let means: Vec<f64> = chains.iter().map(|c| mean(c)).collect();
    let b_over_n = if chains.len() > 1 { var(&means) } else { 0.0 };
    (w, (n - 1.0) / n * w + b_over_n)
}

/// Split-R̂: each chain is halved, then `sqrt(var⁺ / W)` over the halves.
/// `None` for fewer than two chains, fewer than four draws per chain or
/// constant draws.
pub fn split_rhat(chains: &[&[f64]]) -> Option<f64> {
    if chains.len() < 2 || chains.iter().any(|c| c.len() < 4) {
        return None;
    }
    let halves = split(chains);
    let (w, var_plus) = variances(&halves);
    if w == 0.0 {
        return if var_plus == 0.0 {
            None
        } else {
            Some(f64::INFINITY)
        };
    }
    Some((var_plus / w).sqrt())
}

/// Effective sample size from the multi-chain autocorrelation estimate
/// with Geyer's initial monotone sequence, on split chains.
pub fn ess(chains: &[&[f64]]) -> f64 {
    if chains.is_empty() || chains.iter().any(|c| c.len() < 4) {
        return f64::NAN;
    }
    let halves = split(chains);
    let m = halves.len();
    let n = halves[0].len();
    let total = (m * n) as f64;
    let (w, var_plus) = variances(&halves);
    if w == 0.0 {
        return total;
    }
    let centred: Vec<Vec<f64>> = halves
        .iter()
        .map(|c| {
            let mu = mean(c);
            c.iter().map(|v| v - mu).collect()
        })
        .collect();
    // biased autocovariance of every chain at lag t, averaged over chains
    let acov = |t: usize| -> f64 {
        centred
            .iter()
            .map(|c| {
                c[..n - t]
                    .iter()
                    .zip(&c[t..])
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    / n as f64
            })
            .sum::<f64>()
            / m as f64
    };
    let w_biased = w * (n - 1) as f64 / n as f64;
    let rho = |t: usize| 1.0 - (w_biased - acov(t)) / var_plus;

    let mut sum = 0.0;
    let mut prev_pair = f64::INFINITY;
    let mut t = 0;
    while t + 1 < n {
        let pair = if t == 0 {
            1.0 + rho(1)
        } else {
            rho(t) + rho(t + 1)
        };
        if pair < 0.0 {
            break;
        }
        let pair = pair.min(prev_pair);
        sum += pair;
        prev_pair = pair;
        t += 2;
    }
    let tau = (-1.0 + 2.0 * sum).max(1.0 / total.log10());
    total / tau
}

/// Diagnostics for the hyperparameters and the predictive draw.
pub fn diagnostics(s: &PosteriorSamples) -> Diagnostics {
    let mut names = s.hyper_names.clone();
    names.push("tau_pred".into());
    diagnostics_for(s, &names).expect("monitored parameters are always present")
}

/// Diagnostics for the named parameters (e.g. `scale`, `mu[3]`, `tau[3]`).
pub fn diagnostics_for(s: &PosteriorSamples, names: &[String]) -> Result<Diagnostics> {
    let mut params = Vec::new();
    let mut warnings = Vec::new();
    for name in names {
        let chains = s
            .chains_of(name)
            .ok_or_else(|| Error::Argument(format!("no draws for parameter '{name}'")))?;
        let d = ParamDiagnostic {
            name: name.clone(),
            rhat: split_rhat(&chains),
            ess: ess(&chains),
        };
        match d.rhat {
            Some(r) if r > RHAT_WARN => {
                warnings.push(format!("{name}: split R-hat {r:.3} exceeds {RHAT_WARN}"))
            }
            None => warnings.push(format!("{name}: R-hat undefined (needs at least 2 chains)")),
            _ => {}
        }
        if d.ess < ESS_WARN {
            warnings.push(format!(
                "{name}: effective sample size {:.0} below {ESS_WARN}",
                d.ess
            ));
        }
        params.push(d);
    }
    Ok(Diagnostics { params, warnings })
}
