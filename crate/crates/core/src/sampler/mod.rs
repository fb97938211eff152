//! Gibbs sampler for the extended normal-normal hierarchical model.
//!
//! Each analysis `j` has an effect `μ_j` and heterogeneity `τ_j`; estimates
//! satisfy `y_ij ~ N(μ_j, σ_ij² + τ_j²)`, effects have a wide normal prior
//! and the `τ_j` share a heterogeneity distribution `P(θ)` whose
//! hyperparameters `θ` carry their own priors. Every sweep updates each
//! `μ_j` from its conjugate normal conditional, each `τ_j` and each
//! hyperparameter by univariate slice sampling, and finally draws a
//! predictive `τ* ~ P(θ)`.

mod diagnostics;
mod io;
mod slice;
mod summary;

pub use diagnostics::{
    diagnostics, diagnostics_for, ess, split_rhat, Diagnostics, ParamDiagnostic, ESS_WARN,
    RHAT_WARN,
};
pub use io::{AnalysisSummary, ParamSummary, SamplesSummary};
pub use summary::{quantile_type7, summarize_samples, DrawSummary};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::MetaAnalysisCollection;
use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::metaanalysis::{dl_estimate, SingleMeta};
use crate::special::LN_SQRT_2PI;
use slice::{slice_sample, width_for};

/// Parametric family of the heterogeneity distribution `P(θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum HetFamily {
    HalfNormal,
    Exponential,
    HalfCauchy,
    /// Parametrized by its median (scale) and log-scale sd (shape).
    LogNormal,
}

impl HetFamily {
    pub const ALL: [HetFamily; 4] = [
        HetFamily::HalfNormal,
        HetFamily::Exponential,
        HetFamily::LogNormal,
        HetFamily::HalfCauchy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HetFamily::HalfNormal => "half-normal",
            HetFamily::Exponential => "exp",
            HetFamily::HalfCauchy => "half-cauchy",
            HetFamily::LogNormal => "log-normal",
        }
    }

    pub fn hyper_names(self) -> &'static [&'static str] {
        match self {
            HetFamily::LogNormal => &["scale", "shape"],
            _ => &["scale"],
        }
    }

    /// `Uniform(0, b)` on the scale and, for the log-normal, `Uniform(0, b_shape)` on the shape.
    pub fn default_hyperpriors(self, b: f64, b_shape: f64) -> Result<Vec<DistributionSpec>> {
        let mut v = vec![DistributionSpec::uniform(0.0, b)?];
        if self == HetFamily::LogNormal {
            v.push(DistributionSpec::uniform(0.0, b_shape)?);
        }
        Ok(v)
    }

    /// `P(θ)` for hyperparameters `theta` (checked).
    pub fn conditional(self, theta: &[f64]) -> Result<DistributionSpec> {
        match self {
            HetFamily::HalfNormal => DistributionSpec::half_normal(theta[0]),
            HetFamily::Exponential => DistributionSpec::exponential(theta[0]),
            HetFamily::HalfCauchy => DistributionSpec::half_cauchy(theta[0]),
            HetFamily::LogNormal => DistributionSpec::log_normal(theta[0].ln(), theta[1]),
        }
    }

    /// `log p(τ | θ)`, `-inf` outside the parameter space.
    fn log_density(self, theta: &[f64], tau: f64) -> f64 {
        if theta.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return f64::NEG_INFINITY;
        }
        let d = match self {
            HetFamily::HalfNormal => DistributionSpec::HalfNormal { scale: theta[0] },
            HetFamily::Exponential => DistributionSpec::Exponential { scale: theta[0] },
            HetFamily::HalfCauchy => DistributionSpec::HalfCauchy { scale: theta[0] },
            HetFamily::LogNormal => DistributionSpec::LogNormal {
                mu: theta[0].ln(),
                sigma: theta[1],
            },
        };
        d.log_density(tau)
    }
}

impl fmt::Display for HetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HetFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "half-normal" | "halfnormal" | "hn" => Ok(HetFamily::HalfNormal),
            "exp" | "exponential" => Ok(HetFamily::Exponential),
            "half-cauchy" | "halfcauchy" | "hc" => Ok(HetFamily::HalfCauchy),
            "log-normal" | "lognormal" | "ln" => Ok(HetFamily::LogNormal),
            other => Err(Error::Argument(format!(
                "unknown heterogeneity family '{other}' (expected half-normal, exp, half-cauchy or log-normal)"
            ))),
        }
    }
}

impl From<HetFamily> for String {
    fn from(f: HetFamily) -> String {
        f.name().to_string()
    }
}

impl TryFrom<String> for HetFamily {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// How the `τ_j` are modelled.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Heterogeneity {
    /// `τ_j ~ P(θ)` with one hyperprior per entry of `family.hyper_names()`.
    Family {
        family: HetFamily,
        hyperpriors: Vec<DistributionSpec>,
    },
    /// `τ_j ~` a fully specified distribution (no hyperparameters).
    Fixed(DistributionSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSpec {
    pub heterogeneity: Heterogeneity,
    pub mu_prior_mean: f64,
    pub mu_prior_sd: f64,
}

pub const DEFAULT_SCALE_BOUND: f64 = 10.0;
pub const DEFAULT_SHAPE_BOUND: f64 = 5.0;

impl ModelSpec {
    /// Default hyperpriors (`b = 10`, shape bound 5) and `μ_j ~ N(0, 100²)`.
    pub fn new(family: HetFamily) -> Self {
        Self::with_bounds(family, DEFAULT_SCALE_BOUND, DEFAULT_SHAPE_BOUND)
            .expect("default bounds are valid")
    }

    pub fn with_bounds(family: HetFamily, b: f64, b_shape: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite() && b_shape > 0.0 && b_shape.is_finite()) {
            return Err(Error::Config(format!(
                "hyperprior bounds must be positive, got b = {b}, b_shape = {b_shape}"
            )));
        }
        let hyperpriors = family.default_hyperpriors(b, b_shape)?;
        Ok(Self {
            heterogeneity: Heterogeneity::Family {
                family,
                hyperpriors,
            },
            mu_prior_mean: 0.0,
            mu_prior_sd: 100.0,
        })
    }

    pub fn fixed(prior: DistributionSpec) -> Self {
        Self {
            heterogeneity: Heterogeneity::Fixed(prior),
            mu_prior_mean: 0.0,
            mu_prior_sd: 100.0,
        }
    }

    pub fn family(&self) -> Option<HetFamily> {
        match self.heterogeneity {
            Heterogeneity::Family { family, .. } => Some(family),
            Heterogeneity::Fixed(_) => None,
        }
    }

    pub fn hyper_names(&self) -> Vec<String> {
        self.family().map_or_else(Vec::new, |f| {
            f.hyper_names().iter().map(|s| s.to_string()).collect()
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu_prior_sd > 0.0
            && self.mu_prior_sd.is_finite()
            && self.mu_prior_mean.is_finite())
        {
            return Err(Error::Config(format!(
                "effect prior N({}, {}²) is invalid",
                self.mu_prior_mean, self.mu_prior_sd
            )));
        }
        match &self.heterogeneity {
            Heterogeneity::Family {
                family,
                hyperpriors,
            } => {
                if hyperpriors.len() != family.hyper_names().len() {
                    return Err(Error::Config(format!(
                        "{family} needs {} hyperpriors, got {}",
                        family.hyper_names().len(),
                        hyperpriors.len()
                    )));
                }
                for (name, h) in family.hyper_names().iter().zip(hyperpriors) {
                    if h.support().0 < 0.0 {
                        return Err(Error::Config(format!(
                            "hyperprior {h} for {name} extends below 0"
                        )));
                    }
                }
            }
            Heterogeneity::Fixed(d) => {
                if d.support().0 < 0.0 {
                    return Err(Error::Config(format!(
                        "heterogeneity prior {d} extends below 0"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Family-independent model settings, used to build one [`ModelSpec`] per
/// family when comparing families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelTemplate {
    pub scale_bound: f64,
    pub shape_bound: f64,
    pub mu_prior_mean: f64,
    pub mu_prior_sd: f64,
}

impl Default for ModelTemplate {
    fn default() -> Self {
        Self {
            scale_bound: DEFAULT_SCALE_BOUND,
            shape_bound: DEFAULT_SHAPE_BOUND,
            mu_prior_mean: 0.0,
            mu_prior_sd: 100.0,
        }
    }
}

impl ModelTemplate {
    pub fn build(&self, family: HetFamily) -> Result<ModelSpec> {
        let m = ModelSpec {
            mu_prior_mean: self.mu_prior_mean,
            mu_prior_sd: self.mu_prior_sd,
            ..ModelSpec::with_bounds(family, self.scale_bound, self.shape_bound)?
        };
        m.validate()?;
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McmcConfig {
    pub chains: usize,
    pub burn_in: usize,
    /// Kept draws per chain (after thinning).
    pub kept: usize,
    pub thin: usize,
    pub seed: u64,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            chains: 4,
            burn_in: 5000,
            kept: 20000,
            thin: 1,
            seed: 1,
        }
    }
}

impl McmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.chains == 0 || self.burn_in == 0 || self.kept == 0 || self.thin == 0 {
            return Err(Error::Config(format!(
                "all MCMC counts must be at least 1: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Draws of one chain, stored parameter-major.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChainDraws {
    /// `hyper[h][t]`
    pub hyper: Vec<Vec<f64>>,
    /// `mu[j][t]`; empty when loaded from a monitored-only sample file.
    pub mu: Vec<Vec<f64>>,
    pub tau: Vec<Vec<f64>>,
    pub tau_pred: Vec<f64>,
    pub deviance: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSamples {
    /// `None` for a fixed heterogeneity prior.
    pub family: Option<HetFamily>,
    pub hyper_names: Vec<String>,
    pub analysis_ids: Vec<String>,
    pub chains: Vec<ChainDraws>,
}

impl PosteriorSamples {
    pub fn n_chains(&self) -> usize {
        self.chains.len()
    }

    pub fn n_kept(&self) -> usize {
        self.chains.first().map_or(0, |c| c.tau_pred.len())
    }

    pub fn has_effects(&self) -> bool {
        self.chains.iter().all(|c| {
            c.mu.len() == self.analysis_ids.len() && c.tau.len() == self.analysis_ids.len()
        }) && !self.analysis_ids.is_empty()
    }

    /// Hyperparameters, `tau_pred` and `deviance`, then with `all` every
    /// `mu[j]` and `tau[j]` (1-based, in collection order).
    pub fn parameter_names(&self, all: bool) -> Vec<String> {
        let mut names = self.hyper_names.clone();
        names.push("tau_pred".into());
        names.push("deviance".into());
        if all && self.has_effects() {
            let n = self.analysis_ids.len();
            names.extend((1..=n).map(|j| format!("mu[{j}]")));
            names.extend((1..=n).map(|j| format!("tau[{j}]")));
        }
        names
    }

    /// Per-chain draws of a named parameter.
    pub fn chains_of<'a>(&'a self, name: &str) -> Option<Vec<&'a [f64]>> {
        let hyper = self.hyper_names.iter().position(|n| n == name);
        let indexed = parse_indexed(name);
        let pick = |c: &'a ChainDraws| -> Option<&'a [f64]> {
            if let Some(h) = hyper {
                return c.hyper.get(h).map(Vec::as_slice);
            }
            match name {
                "tau_pred" => return Some(&c.tau_pred),
                "deviance" => return Some(&c.deviance),
                _ => {}
            }
            let (kind, idx) = indexed?;
            let series = if kind == "mu" { &c.mu } else { &c.tau };
            series.get(idx.checked_sub(1)?).map(Vec::as_slice)
        };
        self.chains.iter().map(pick).collect()
    }

    /// All chains of a named parameter, concatenated.
    pub fn pooled(&self, name: &str) -> Option<Vec<f64>> {
        self.chains_of(name).map(|cs| cs.concat())
    }

    pub fn tau_pred(&self) -> Vec<f64> {
        self.chains
            .iter()
            .flat_map(|c| c.tau_pred.iter().copied())
            .collect()
    }

    /// Posterior means of every `μ_j` and `τ_j`.
    pub fn effect_means(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if !self.has_effects() {
            return None;
        }
        let n = self.analysis_ids.len();
        let total = (self.n_chains() * self.n_kept()) as f64;
        let mean = |get: &dyn Fn(&ChainDraws) -> &Vec<Vec<f64>>, j: usize| {
            self.chains
                .iter()
                .map(|c| get(c)[j].iter().sum::<f64>())
                .sum::<f64>()
                / total
        };
        Some((
            (0..n).map(|j| mean(&|c| &c.mu, j)).collect(),
            (0..n).map(|j| mean(&|c| &c.tau, j)).collect(),
        ))
    }
}

fn parse_indexed(name: &str) -> Option<(&str, usize)> {
    let (kind, rest) = name.split_once('[')?;
    if kind != "mu" && kind != "tau" {
        return None;
    }
    Some((kind, rest.strip_suffix(']')?.parse().ok()?))
}

/// `Σ_i log N(y_i; μ, σ_i² + τ²)` for one analysis (`vars` holds `σ_i²`).
pub fn analysis_log_lik(ys: &[f64], vars: &[f64], mu: f64, tau: f64) -> f64 {
    let t2 = tau * tau;
    ys.iter()
        .zip(vars)
        .map(|(&y, &v)| {
            let s2 = v + t2;
            -LN_SQRT_2PI - 0.5 * s2.ln() - 0.5 * (y - mu).powi(2) / s2
        })
        .sum()
}

struct Data {
    ys: Vec<Vec<f64>>,
    vars: Vec<Vec<f64>>,
}

struct State {
    mu: Vec<f64>,
    tau: Vec<f64>,
    theta: Vec<f64>,
}

/// Slice bracket widths. While adapting, each update uses `|x| + 0.1` and
/// accumulates `|x|`; [`Widths::freeze`] then fixes every width at the
/// accumulated average `+ 0.1`, so kept draws come from a fixed-width
/// (hence exactly invariant) slice sampler.
struct Widths {
    tau: Vec<f64>,
    theta: Vec<f64>,
    sum_tau: Vec<f64>,
    sum_theta: Vec<f64>,
    count: usize,
    adapting: bool,
}

impl Widths {
    fn new(n: usize, h: usize) -> Self {
        Self {
            tau: vec![0.0; n],
            theta: vec![0.0; h],
            sum_tau: vec![0.0; n],
            sum_theta: vec![0.0; h],
            count: 0,
            adapting: true,
        }
    }

    fn record(&mut self, s: &State) {
        for (acc, x) in self.sum_tau.iter_mut().zip(&s.tau) {
            *acc += x.abs();
        }
        for (acc, x) in self.sum_theta.iter_mut().zip(&s.theta) {
            *acc += x.abs();
        }
        self.count += 1;
    }

    fn freeze(&mut self, s: &State) {
        if self.count == 0 {
            self.record(s);
        }
        let n = self.count as f64;
        self.tau = self.sum_tau.iter().map(|a| width_for(a / n)).collect();
        self.theta = self.sum_theta.iter().map(|a| width_for(a / n)).collect();
        self.adapting = false;
    }
}

struct Model<'a> {
    spec: &'a ModelSpec,
    data: &'a Data,
}

impl Model<'_> {
    fn log_tau_prior(&self, theta: &[f64], tau: f64) -> f64 {
        match &self.spec.heterogeneity {
            Heterogeneity::Family { family, .. } => family.log_density(theta, tau),
            Heterogeneity::Fixed(d) => d.log_density(tau),
        }
    }

    fn predictive(&self, theta: &[f64]) -> DistributionSpec {
        match &self.spec.heterogeneity {
            Heterogeneity::Family { family, .. } => family
                .conditional(theta)
                .expect("hyperparameters stay inside their positive support"),
            Heterogeneity::Fixed(d) => *d,
        }
    }

    fn log_posterior(&self, s: &State) -> f64 {
        let (m, sd) = (self.spec.mu_prior_mean, self.spec.mu_prior_sd);
        let mut lp = 0.0;
        for j in 0..s.mu.len() {
            lp += analysis_log_lik(&self.data.ys[j], &self.data.vars[j], s.mu[j], s.tau[j]);
            lp += self.log_tau_prior(&s.theta, s.tau[j]);
            lp -= 0.5 * ((s.mu[j] - m) / sd).powi(2);
        }
        if let Heterogeneity::Family { hyperpriors, .. } = &self.spec.heterogeneity {
            lp += hyperpriors
                .iter()
                .zip(&s.theta)
                .map(|(h, &t)| h.log_density(t))
                .sum::<f64>();
        }
        lp
    }

    fn initial_state(&self, c: &MetaAnalysisCollection) -> Result<State> {
        let theta: Vec<f64> = match &self.spec.heterogeneity {
            Heterogeneity::Family { hyperpriors, .. } => {
                hyperpriors.iter().map(|h| h.median()).collect()
            }
            Heterogeneity::Fixed(_) => Vec::new(),
        };
        let mut mu = Vec::with_capacity(c.len());
        let mut tau = Vec::with_capacity(c.len());
        for a in c.analyses() {
            let sm = SingleMeta::from_analysis(a)?;
            mu.push(sm.weighted_mean(0.0).0);
            let dl = if a.k() >= 2 {
                dl_estimate(&sm)?.tau
            } else {
                0.0
            };
            let mut t = dl.max(0.01);
            if let Heterogeneity::Fixed(d) = &self.spec.heterogeneity {
                if !d.log_density(t).is_finite() {
                    t = d.median();
                }
            }
            tau.push(t);
        }
        let state = State { mu, tau, theta };
        let lp = self.log_posterior(&state);
        if !lp.is_finite() {
            return Err(Error::Initialization(format!(
                "log-posterior at the initial state is {lp}"
            )));
        }
        Ok(state)
    }

    fn sweep<R: Rng>(&self, s: &mut State, widths: &Widths, rng: &mut R) -> Result<()> {
        let prec_p = self.spec.mu_prior_sd.powi(-2);
        let mean_p = self.spec.mu_prior_mean;
        for j in 0..s.mu.len() {
            let (ys, vars) = (&self.data.ys[j], &self.data.vars[j]);

            let t2 = s.tau[j] * s.tau[j];
            let (mut prec, mut wsum) = (prec_p, prec_p * mean_p);
            for (&y, &v) in ys.iter().zip(vars) {
                let w = 1.0 / (v + t2);
                prec += w;
                wsum += w * y;
            }
            let z: f64 = rng.sample(StandardNormal);
            s.mu[j] = wsum / prec + z / prec.sqrt();

            let mu = s.mu[j];
            let theta = &s.theta;
            let logf = |t: f64| analysis_log_lik(ys, vars, mu, t) + self.log_tau_prior(theta, t);
            let current = logf(s.tau[j]);
            let w = if widths.adapting {
                width_for(s.tau[j])
            } else {
                widths.tau[j]
            };
            s.tau[j] = slice_sample(rng, s.tau[j], current, logf, 0.0, f64::INFINITY, w)?;
        }

        if let Heterogeneity::Family {
            family,
            hyperpriors,
        } = &self.spec.heterogeneity
        {
            for h in 0..s.theta.len() {
                let (lo, hi) = hyperpriors[h].support();
                let mut theta = s.theta.clone();
                let tau = &s.tau;
                let mut logf = |x: f64| {
                    theta[h] = x;
                    let prior = hyperpriors[h].log_density(x);
                    if !prior.is_finite() {
                        return f64::NEG_INFINITY;
                    }
                    prior
                        + tau
                            .iter()
                            .map(|&t| family.log_density(&theta, t))
                            .sum::<f64>()
                };
                let current = logf(s.theta[h]);
                let w = if widths.adapting {
                    width_for(s.theta[h])
                } else {
                    widths.theta[h]
                };
                s.theta[h] = slice_sample(rng, s.theta[h], current, &mut logf, lo, hi, w)?;
            }
        }
        Ok(())
    }

    fn deviance(&self, s: &State) -> f64 {
        -2.0 * (0..s.mu.len())
            .map(|j| analysis_log_lik(&self.data.ys[j], &self.data.vars[j], s.mu[j], s.tau[j]))
            .sum::<f64>()
    }

    fn run_chain(&self, init: &State, cfg: &McmcConfig, chain: usize) -> Result<ChainDraws> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(chain as u64);
        let mut s = State {
            mu: init.mu.clone(),
            tau: init.tau.clone(),
            theta: init.theta.clone(),
        };
        let n = s.mu.len();
        let mut out = ChainDraws {
            hyper: vec![Vec::with_capacity(cfg.kept); s.theta.len()],
            mu: vec![Vec::with_capacity(cfg.kept); n],
            tau: vec![Vec::with_capacity(cfg.kept); n],
            tau_pred: Vec::with_capacity(cfg.kept),
            deviance: Vec::with_capacity(cfg.kept),
        };
        let mut widths = Widths::new(n, s.theta.len());
        let total = cfg.burn_in + cfg.kept * cfg.thin;
        for it in 0..total {
            if it == cfg.burn_in {
                widths.freeze(&s);
            }
            self.sweep(&mut s, &widths, &mut rng)?;
            if widths.adapting && 2 * it >= cfg.burn_in {
                widths.record(&s);
            }
            let pred = self.predictive(&s.theta).draw(&mut rng);
            if it >= cfg.burn_in && (it - cfg.burn_in).is_multiple_of(cfg.thin) {
                for (h, &t) in s.theta.iter().enumerate() {
                    out.hyper[h].push(t);
                }
                for j in 0..n {
                    out.mu[j].push(s.mu[j]);
                    out.tau[j].push(s.tau[j]);
                }
                out.tau_pred.push(pred);
                out.deviance.push(self.deviance(&s));
            }
        }
        Ok(out)
    }
}

/// Run `cfg.chains` independent chains (in parallel) on the collection.
///
/// Chain `c` uses a ChaCha8 generator seeded with `cfg.seed` on stream `c`,
/// so results are bit-identical for identical inputs regardless of thread
/// scheduling or of how many other chains run.
pub fn run_hierarchical(
    c: &MetaAnalysisCollection,
    m: &ModelSpec,
    cfg: &McmcConfig,
) -> Result<PosteriorSamples> {
    m.validate()?;
    cfg.validate()?;
    if c.is_empty() {
        return Err(Error::Argument("the collection holds no analyses".into()));
    }
    let data = Data {
        ys: c.analyses().iter().map(|a| a.estimates()).collect(),
        vars: c
            .analyses()
            .iter()
            .map(|a| a.std_errs().iter().map(|s| s * s).collect())
            .collect(),
    };
    let model = Model {
        spec: m,
        data: &data,
    };
    let init = model.initial_state(c)?;
    let chains = (0..cfg.chains)
        .into_par_iter()
        .map(|chain| model.run_chain(&init, cfg, chain))
        .collect::<Result<Vec<_>>>()?;
    Ok(PosteriorSamples {
        family: m.family(),
        hyper_names: m.hyper_names(),
        analysis_ids: c.analyses().iter().map(|a| a.id.clone()).collect(),
        chains,
    })
}

#[cfg(test)]
mod tests;
