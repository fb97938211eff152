//! Fit the hierarchical model to a collection of meta-analyses and inspect
//! the predictive heterogeneity distribution and convergence diagnostics.
//!
//! cargo run --release --example hierarchical_fit [collection.csv]

use hetprior::data::{MetaAnalysisCollection, StudyRecord};
use hetprior::sampler::{diagnostics, run_hierarchical, HetFamily, McmcConfig, ModelSpec};
use hetprior::DistributionSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// 40 analyses of 2 to 8 studies, heterogeneity drawn from half-normal(0.2).
fn simulated() -> MetaAnalysisCollection {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let het = DistributionSpec::half_normal(0.2).unwrap();
    let mut records = Vec::new();
    for j in 0..40 {
        let tau = het.draw(&mut rng);
        let mu = Normal::new(0.0, 0.4).unwrap().sample(&mut rng);
        for i in 0..2 + j % 7 {
            let se = 0.1 + 0.05 * (i % 5) as f64;
            let y = Normal::new(mu, (se * se + tau * tau).sqrt())
                .unwrap()
                .sample(&mut rng);
            records.push(StudyRecord {
                analysis_id: format!("ma{j}"),
                study_id: format!("s{i}"),
                estimate: y,
                std_err: se,
                seq: j as i64,
            });
        }
    }
    MetaAnalysisCollection::from_records(records).unwrap()
}

fn main() -> hetprior::Result<()> {
    let c = match std::env::args().nth(1) {
        Some(path) => MetaAnalysisCollection::from_path(path)?,
        None => simulated(),
    };
    println!("{} analyses, {} studies", c.len(), c.n_studies());

    let cfg = McmcConfig {
        chains: 4,
        burn_in: 2000,
        kept: 5000,
        thin: 1,
        seed: 42,
    };
    let s = run_hierarchical(&c, &ModelSpec::new(HetFamily::HalfNormal), &cfg)?;
    let summary = s.summary()?;
    for p in &summary.parameters {
        println!(
            "{:<9} mean {:.3}  sd {:.3}  median {:.3}  95% {:.3}  99% {:.3}",
            p.name, p.summary.mean, p.summary.sd, p.summary.median, p.summary.q95, p.summary.q99
        );
    }
    let d = diagnostics(&s);
    println!("max split R-hat {:.4}", d.max_rhat().unwrap_or(f64::NAN));
    for w in d.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
