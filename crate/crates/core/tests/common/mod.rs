#![allow(dead_code)]

use hetprior::data::{MetaAnalysisCollection, StudyRecord};
use hetprior::DistributionSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Collection with one analysis per entry of `taus`, `k` studies each, all
/// standard errors equal to `se`. Analyses are listed oldest first.
pub fn with_taus(taus: &[f64], k: usize, se: f64, seed: u64) -> MetaAnalysisCollection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for (j, &tau) in taus.iter().enumerate() {
        let mu = Normal::new(0.0, 0.5).unwrap().sample(&mut rng);
        for i in 0..k {
            let y = Normal::new(mu, (se * se + tau * tau).sqrt())
                .unwrap()
                .sample(&mut rng);
            records.push(StudyRecord {
                analysis_id: format!("a{j:02}"),
                study_id: format!("s{i}"),
                estimate: y,
                std_err: se,
                seq: (j * k + i) as i64,
            });
        }
    }
    MetaAnalysisCollection::from_records(records).unwrap()
}

/// `n` analyses whose heterogeneities are drawn from `het`.
pub fn synthetic(
    n: usize,
    k: usize,
    se: f64,
    het: &DistributionSpec,
    seed: u64,
) -> MetaAnalysisCollection {
    let taus = het.sample(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed), n);
    with_taus(&taus, k, se, seed)
}

/// Single meta-analysis with `k` studies, standard errors spread over
/// `[0.1, 0.6]`, effects around `mu` with heterogeneity `tau`.
pub fn single(k: usize, mu: f64, tau: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma: Vec<f64> = (0..k)
        .map(|i| 0.1 + 0.5 * i as f64 / (k.max(2) - 1) as f64)
        .collect();
    let y = sigma
        .iter()
        .map(|s| {
            Normal::new(mu, (s * s + tau * tau).sqrt())
                .unwrap()
                .sample(&mut rng)
        })
        .collect();
    (y, sigma)
}
