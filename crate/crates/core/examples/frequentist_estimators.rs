//! DerSimonian-Laird and Paule-Mandel heterogeneity estimates with Normal,
//! Hartung-Knapp and modified Hartung-Knapp intervals.
//!
//! cargo run --example frequentist_estimators

use hetprior::metaanalysis::{ci_suite, dl_estimate, pm_estimate, SingleMeta};

fn main() -> hetprior::Result<()> {
    let data = [
        ("two discordant studies", vec![0.0, 2.0], vec![1.0, 1.0]),
        ("two concordant studies", vec![0.3, 0.35], vec![0.2, 0.25]),
        (
            "five studies",
            vec![0.1, 0.4, -0.2, 0.6, 0.25],
            vec![0.2, 0.3, 0.25, 0.4, 0.15],
        ),
    ];
    for (name, y, sigma) in data {
        let sm = SingleMeta::new(y, sigma)?;
        let dl = dl_estimate(&sm)?;
        let pm = pm_estimate(&sm)?;
        println!(
            "{name}: Q = {:.3}, DL tau = {:.3}, PM tau = {:.3}",
            dl.q, dl.tau, pm
        );
        for ci in ci_suite(&sm, dl.tau)? {
            println!(
                "  {:<7} {:>7.3} [{:>8.3}, {:>8.3}]",
                ci.label, ci.estimate, ci.lo, ci.hi
            );
        }
    }
    Ok(())
}
