//! Random-effects meta-analysis of two studies under several heterogeneity
//! priors, by deterministic integration over tau.
//!
//! cargo run --example bayesian_meta_analysis

use hetprior::metaanalysis::{bayes_ma, forest_rows, forest_to_csv, MuPrior, SingleMeta};
use hetprior::DistributionSpec;

fn main() -> hetprior::Result<()> {
    let sm = SingleMeta::with_labels(
        vec![-0.62, -0.18],
        vec![0.38, 0.27],
        vec!["Trial A".into(), "Trial B".into()],
    )?;
    println!(
        "{:<22} {:>8} {:>18} {:>8} {:>18}",
        "prior", "mu", "95% CrI", "tau", "95% CrI"
    );
    for text in [
        "half-normal(0.5)",
        "half-t(8.2,0.20)",
        "half-normal(0.22)",
        "lomax(9.9,1.5)",
        "half-cauchy(0.10)",
    ] {
        let prior: DistributionSpec = text.parse()?;
        let r = bayes_ma(&sm, &prior, MuPrior::Flat)?;
        println!(
            "{:<22} {:>8.3} [{:>7.3}, {:>7.3}] {:>8.3} [{:>7.3}, {:>7.3}]",
            text, r.mu.median, r.mu.lo, r.mu.hi, r.tau.median, r.tau.lo, r.tau.hi
        );
    }

    let r = bayes_ma(&sm, &"half-t(8.2,0.20)".parse()?, MuPrior::Flat)?;
    println!("\nforest data:\n{}", forest_to_csv(&forest_rows(&sm, &r)));
    Ok(())
}
