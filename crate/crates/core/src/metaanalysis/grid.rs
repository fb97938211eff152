use serde::Serialize;

use super::frequentist::{ci_suite, dl_estimate, pm_estimate, Interval};
use super::{MuPrior, SingleMeta};
use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::optim::find_root;
use crate::special::{std_normal_cdf, LN_SQRT_2PI};

/// Points in the square-root-spaced part of the τ grid.
pub const GRID_POINTS: usize = 2000;
const TAIL_MASS: f64 = 1e-6;
const TAIL_RATIO: f64 = 1.02;
const MAX_EXTENSION: f64 = 1e6;
const MU_CORE_POINTS: usize = 1601;
const MU_TAIL_POINTS: usize = 200;

/// Marginal posterior of τ on a grid, normalized by the trapezoid rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauPosterior {
    pub mean: f64,
    pub median: f64,
    pub lo: f64,
    pub hi: f64,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub prior_density: Vec<f64>,
    #[serde(skip)]
    cdf: Vec<f64>,
}

impl TauPosterior {
    /// Quantile from the piecewise-linear density (exact within each panel).
    pub fn quantile(&self, p: f64) -> f64 {
        // the trapezoid total differs from 1 by the quadrature error
        let p = p * self.cdf[self.cdf.len() - 1];
        let i = self
            .cdf
            .partition_point(|&c| c < p)
            .clamp(1, self.grid.len() - 1)
            - 1;
        let (t0, t1) = (self.grid[i], self.grid[i + 1]);
        let (d0, d1) = (self.density[i], self.density[i + 1]);
        let r = p - self.cdf[i];
        let h = t1 - t0;
        let slope = (d1 - d0) / h;
        let x = if slope.abs() * h < 1e-12 * d0.max(1e-300) {
            r / d0
        } else {
            // d0·x + slope·x²/2 = r
            let disc = (d0 * d0 + 2.0 * slope * r).max(0.0);
            2.0 * r / (d0 + disc.sqrt())
        };
        (t0 + x.clamp(0.0, h)).max(0.0)
    }

    /// Trapezoid weights times normalized density: the mass attributed to
    /// each grid point.
    fn point_masses(&self) -> Vec<f64> {
        let n = self.grid.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 {
                    self.grid[i] - self.grid[i - 1]
                } else {
                    0.0
                };
                let right = if i + 1 < n {
                    self.grid[i + 1] - self.grid[i]
                } else {
                    0.0
                };
                0.5 * (left + right) * self.density[i]
            })
            .collect()
    }
}

/// Marginal posterior of μ: a mixture over the τ grid of conditional normals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuPosterior {
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
    pub lo: f64,
    pub hi: f64,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaAnalysisResult {
    pub k: usize,
    pub prior: DistributionSpec,
    pub mu_prior: MuPrior,
    pub mu: MuPosterior,
    pub tau: TauPosterior,
    pub comparators: Vec<Interval>,
}

/// The data plus, for a Normal μ-prior, a pseudo-study whose variance does
/// not grow with τ.
struct Likelihood<'a> {
    sm: &'a SingleMeta,
    pseudo: Option<(f64, f64)>,
}

impl Likelihood<'_> {
    fn new(sm: &SingleMeta, mu_prior: MuPrior) -> Result<Likelihood<'_>> {
        let pseudo = match mu_prior {
            MuPrior::Flat => None,
            MuPrior::Normal { mean, sd } => {
                if !(mean.is_finite() && sd.is_finite() && sd > 0.0) {
                    return Err(Error::Argument(format!(
                        "invalid Normal mu prior ({mean}, {sd})"
                    )));
                }
                Some((mean, 1.0 / (sd * sd)))
            }
        };
        Ok(Likelihood { sm, pseudo })
    }

    /// Conditional posterior mean and variance of μ given τ.
    fn conditional(&self, tau: f64) -> (f64, f64) {
        let (mut sw, mut swy) = self.pseudo.map_or((0.0, 0.0), |(m, w)| (w, w * m));
        for (&y, &s) in self.sm.y().iter().zip(self.sm.sigma()) {
            let w = 1.0 / (s * s + tau * tau);
            sw += w;
            swy += w * y;
        }
        (swy / sw, 1.0 / sw)
    }

    /// log L(τ) = ½ Σ ln w_i − ½ ln Σ w_i − Q(τ)/2, up to a constant.
    fn log(&self, tau: f64) -> f64 {
        let (m, v) = self.conditional(tau);
        let mut acc = 0.5 * v.ln();
        if let Some((pm, w)) = self.pseudo {
            acc -= 0.5 * w * (pm - m).powi(2);
        }
        for (&y, &s) in self.sm.y().iter().zip(self.sm.sigma()) {
            let var = s * s + tau * tau;
            acc -= 0.5 * (var.ln() + (y - m).powi(2) / var);
        }
        acc
    }
}

fn trapezoid(x: &[f64], f: &[f64]) -> f64 {
    x.windows(2)
        .zip(f.windows(2))
        .map(|(x, f)| 0.5 * (x[1] - x[0]) * (f[0] + f[1]))
        .sum()
}

/// Composite Simpson rule on an arbitrary increasing grid: a quadratic
/// through each consecutive pair of panels; a trailing odd panel uses the
/// quadratic through the last three points.
fn simpson(x: &[f64], f: &[f64]) -> f64 {
    let n = x.len();
    if n < 3 {
        return trapezoid(x, f);
    }
    let pair = |i: usize| {
        let (h0, h1) = (x[i + 1] - x[i], x[i + 2] - x[i + 1]);
        (h0 + h1) / 6.0
            * ((2.0 - h1 / h0) * f[i]
                + (h0 + h1).powi(2) / (h0 * h1) * f[i + 1]
                + (2.0 - h0 / h1) * f[i + 2])
    };
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 < n {
        total += pair(i);
        i += 2;
    }
    if i + 1 < n {
        let (h0, h1) = (x[n - 2] - x[n - 3], x[n - 1] - x[n - 2]);
        total += h1 / 6.0
            * (-(h1 * h1) / (h0 * (h0 + h1)) * f[n - 3]
                + (3.0 + h1 / h0) * f[n - 2]
                + (3.0 * h0 + 2.0 * h1) / (h0 + h1) * f[n - 1]);
    }
    total
}

fn check_prior(prior: &DistributionSpec) -> Result<()> {
    let (lo, _) = prior.support();
    if lo < 0.0 {
        return Err(Error::Argument(format!(
            "heterogeneity prior {prior} must live on [0, inf)"
        )));
    }
    Ok(())
}

/// Posterior density of τ on an adaptive grid: square-root spacing from 0
/// to the prior's 0.9999 quantile, extended geometrically until the
/// neglected tail mass is below 1e-6.
pub fn tau_marginal(
    sm: &SingleMeta,
    prior: &DistributionSpec,
    mu_prior: MuPrior,
) -> Result<TauPosterior> {
    check_prior(prior)?;
    let lik = Likelihood::new(sm, mu_prior)?;
    let upper = prior.quantile(0.9999)?;
    if !(upper.is_finite() && upper > 0.0) {
        return Err(Error::Grid(format!(
            "prior {prior} has no finite positive 0.9999 quantile"
        )));
    }
    let n = GRID_POINTS;
    let mut grid: Vec<f64> = (0..n)
        .map(|i| upper * (i as f64 / (n - 1) as f64).powi(2))
        .collect();
    let mut log_lik: Vec<f64> = grid.iter().map(|&t| lik.log(t)).collect();
    let log_prior = |t: f64| prior.log_density(t);

    loop {
        let lp: Vec<f64> = grid
            .iter()
            .zip(&log_lik)
            .map(|(&t, &l)| log_prior(t) + l)
            .collect();
        let peak = lp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() {
            return Err(Error::Grid(format!(
                "posterior vanishes on the grid for prior {prior}"
            )));
        }
        let unnorm: Vec<f64> = lp.iter().map(|&v| (v - peak).exp()).collect();
        let z = simpson(&grid, &unnorm);
        let last = *grid.last().expect("non-empty grid");
        let tail = (1.0 - prior.cdf(last)) * (log_lik[log_lik.len() - 1] - peak).exp() / z;
        if tail < TAIL_MASS {
            return Ok(finish(grid, unnorm, z, prior));
        }
        if last > MAX_EXTENSION * upper {
            return Err(Error::Grid(format!(
                "tail mass {tail:.3e} beyond tau = {last:.3e} for prior {prior}; likelihood does not decay"
            )));
        }
        let mut t = last;
        while t < 2.0 * last {
            t *= TAIL_RATIO;
            grid.push(t);
            log_lik.push(lik.log(t));
        }
    }
}

fn finish(grid: Vec<f64>, unnorm: Vec<f64>, z: f64, prior: &DistributionSpec) -> TauPosterior {
    let density: Vec<f64> = unnorm.iter().map(|u| u / z).collect();
    let mut cdf = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    cdf.push(0.0);
    for i in 1..grid.len() {
        acc += 0.5 * (grid[i] - grid[i - 1]) * (density[i] + density[i - 1]);
        cdf.push(acc);
    }
    let mean = simpson(
        &grid,
        &grid
            .iter()
            .zip(&density)
            .map(|(t, d)| t * d)
            .collect::<Vec<_>>(),
    );
    let prior_density = grid.iter().map(|&t| prior.density(t)).collect();
    let mut post = TauPosterior {
        mean,
        median: 0.0,
        lo: 0.0,
        hi: 0.0,
        grid,
        density,
        prior_density,
        cdf,
    };
    post.median = post.quantile(0.5);
    post.lo = post.quantile(0.025);
    post.hi = post.quantile(0.975);
    post
}

struct Mixture {
    weights: Vec<f64>,
    means: Vec<f64>,
    sds: Vec<f64>,
}

impl Mixture {
    fn cdf(&self, x: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.means)
            .zip(&self.sds)
            .map(|((w, m), s)| w * std_normal_cdf((x - m) / s))
            .sum()
    }

    fn density(&self, x: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.means)
            .zip(&self.sds)
            .map(|((w, m), s)| w * (-0.5 * ((x - m) / s).powi(2) - LN_SQRT_2PI).exp() / s)
            .sum()
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        let lo = self
            .means
            .iter()
            .zip(&self.sds)
            .map(|(m, s)| m - 40.0 * s)
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .means
            .iter()
            .zip(&self.sds)
            .map(|(m, s)| m + 40.0 * s)
            .fold(f64::NEG_INFINITY, f64::max);
        find_root(|x| self.cdf(x) - p, lo, hi, 1e-12 * (hi - lo).max(1.0))
    }
}

/// Plotting grid for the μ density: uniform over the central 1 − 2e-5 of
/// the mass, then geometrically widening steps out to the 1e-9 quantiles.
fn mu_grid(mix: &Mixture) -> Result<Vec<f64>> {
    let (a, c) = (mix.quantile(1e-9)?, mix.quantile(1e-5)?);
    let (d, b) = (mix.quantile(1.0 - 1e-5)?, mix.quantile(1.0 - 1e-9)?);
    let h = (d - c) / (MU_CORE_POINTS - 1) as f64;
    let tail_steps = |span: f64| -> Result<Vec<f64>> {
        let n = MU_TAIL_POINTS as i32;
        if span <= n as f64 * h {
            return Ok((1..=n).map(|j| span * j as f64 / n as f64).collect());
        }
        // first step h, ratio g, n steps covering `span`
        let g = find_root(
            |g: f64| h * (g.powi(n) - 1.0) / (g - 1.0) - span,
            1.0 + 1e-12,
            2.0,
            1e-14,
        )?;
        Ok((1..=n).map(|j| h * (g.powi(j) - 1.0) / (g - 1.0)).collect())
    };
    let left = tail_steps(c - a)?;
    let right = tail_steps(b - d)?;
    let mut grid: Vec<f64> = left.iter().rev().map(|o| c - o).collect();
    grid.extend((0..MU_CORE_POINTS).map(|i| c + h * i as f64));
    grid.extend(right.iter().map(|o| d + o));
    Ok(grid)
}

/// Bayesian random-effects meta-analysis with heterogeneity prior `prior`,
/// plus DL- and PM-based frequentist intervals when `k ≥ 2`.
pub fn bayes_ma(
    sm: &SingleMeta,
    prior: &DistributionSpec,
    mu_prior: MuPrior,
) -> Result<MetaAnalysisResult> {
    let tau = tau_marginal(sm, prior, mu_prior)?;
    let lik = Likelihood::new(sm, mu_prior)?;
    let masses = tau.point_masses();
    let total: f64 = masses.iter().sum();
    let mut mix = Mixture {
        weights: Vec::new(),
        means: Vec::new(),
        sds: Vec::new(),
    };
    for (&t, &w) in tau.grid.iter().zip(&masses) {
        if w > 1e-16 * total {
            let (m, v) = lik.conditional(t);
            mix.weights.push(w / total);
            mix.means.push(m);
            mix.sds.push(v.sqrt());
        }
    }
    let mean: f64 = mix.weights.iter().zip(&mix.means).map(|(w, m)| w * m).sum();
    let second: f64 = mix
        .weights
        .iter()
        .zip(&mix.means)
        .zip(&mix.sds)
        .map(|((w, m), s)| w * (s * s + m * m))
        .sum();
    let sd = (second - mean * mean).max(0.0).sqrt();
    let median = mix.quantile(0.5)?;
    let lo = mix.quantile(0.025)?;
    let hi = mix.quantile(0.975)?;

    let grid = mu_grid(&mix)?;
    let density = grid.iter().map(|&x| mix.density(x)).collect();
    let mu = MuPosterior {
        mean,
        sd,
        median,
        lo,
        hi,
        grid,
        density,
    };

    let mut comparators = Vec::new();
    if sm.k() >= 2 {
        let dl = dl_estimate(sm)?.tau;
        let pm = pm_estimate(sm)?;
        for (name, t) in [("DL", dl), ("PM", pm)] {
            for mut iv in ci_suite(sm, t)? {
                iv.label = format!("{} ({name})", iv.label);
                comparators.push(iv);
            }
        }
    }
    Ok(MetaAnalysisResult {
        k: sm.k(),
        prior: *prior,
        mu_prior,
        mu,
        tau,
        comparators,
    })
}

#[cfg(test)]
mod quadrature_tests {
    use super::simpson;

    #[test]
    fn simpson_exact_for_quadratics_on_irregular_grids() {
        let f = |x: f64| 3.0 * x * x - 2.0 * x + 0.5;
        let exact = |a: f64, b: f64| (b.powi(3) - a.powi(3)) - (b * b - a * a) + 0.5 * (b - a);
        for n in [3, 4, 7, 10] {
            let x: Vec<f64> = (0..n).map(|i| (i as f64).powf(1.7) * 0.3).collect();
            let y: Vec<f64> = x.iter().map(|&v| f(v)).collect();
            let got = simpson(&x, &y);
            let want = exact(x[0], x[n - 1]);
            assert!(
                (got - want).abs() < 1e-10 * want.abs(),
                "n = {n}: {got} vs {want}"
            );
        }
    }
}
