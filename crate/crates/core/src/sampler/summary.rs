use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean, sd and the quantiles reported for posterior draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrawSummary {
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
    pub q95: f64,
    pub q99: f64,
}

/// Type-7 (linear interpolation) quantile of ascending `sorted`.
pub fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize_samples(draws: &[f64]) -> Result<DrawSummary> {
    if draws.len() < 2 {
        return Err(Error::Argument(format!(
            "need at least 2 draws to summarize, got {}",
            draws.len()
        )));
    }
    if let Some(bad) = draws.iter().find(|x| !x.is_finite()) {
        return Err(Error::Argument(format!("non-finite draw {bad}")));
    }
    let n = draws.len() as f64;
    // shifted sums: exact for constant input
    let k = draws[0];
    let (s1, s2) = draws.iter().fold((0.0, 0.0), |(a, b), &x| {
        (a + (x - k), b + (x - k) * (x - k))
    });
    let mean = k + s1 / n;
    let sd = ((s2 - s1 * s1 / n).max(0.0) / (n - 1.0)).sqrt();
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(DrawSummary {
        mean,
        sd,
        median: quantile_type7(&sorted, 0.5),
        q95: quantile_type7(&sorted, 0.95),
        q99: quantile_type7(&sorted, 0.99),
    })
}
