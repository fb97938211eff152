//! Heterogeneity distributions: text form, moments, quantiles and draws.
//!
//! cargo run --example distributions

use hetprior::DistributionSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hetprior::Result<()> {
    let priors = [
        "half-normal(0.22)",
        "half-t(8.2,0.20)",
        "lomax(9.9,1.5)",
        "log-normal(-2.6,1.7)",
        "half-cauchy(0.10)",
        "exp(0.2)",
    ];
    println!(
        "{:<22} {:>7} {:>7} {:>7} {:>7} {:>7}",
        "distribution", "mean", "sd", "50%", "95%", "99%"
    );
    for text in priors {
        let d: DistributionSpec = text.parse()?;
        let cell = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| format!("{x:.2}"));
        println!(
            "{:<22} {:>7} {:>7} {:>7.2} {:>7.2} {:>7.2}",
            d.to_string(),
            cell(d.mean()),
            cell(d.sd()),
            d.median(),
            d.quantile(0.95)?,
            d.quantile(0.99)?
        );
    }

    let d = DistributionSpec::half_student_t(8.2, 0.2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let draws = d.sample(&mut rng, 100_000);
    let below = draws.iter().filter(|&&x| x <= 0.46).count() as f64 / draws.len() as f64;
    println!(
        "\nP(tau <= 0.46) under {d}: exact {:.4}, simulated {below:.4}",
        d.cdf(0.46)
    );
    Ok(())
}
