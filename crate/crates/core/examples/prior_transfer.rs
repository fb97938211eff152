//! Turn predictive draws into a communicable prior: point estimates, the
//! analytic mixture match and direct fits, side by side.
//!
//! cargo run --release --example prior_transfer

use hetprior::data::{MetaAnalysisCollection, StudyRecord};
use hetprior::sampler::{run_hierarchical, HetFamily, McmcConfig, ModelSpec};
use hetprior::summarize::{
    approximation_table, fit_predictive_ml, fit_predictive_moments, mixture_match_prior,
    point_estimate_prior, FitFamily, Statistic,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> hetprior::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut records = Vec::new();
    for j in 0..25 {
        let z: f64 = Normal::new(0.0, 1.0).unwrap().sample(&mut rng);
        let tau = 0.25 * z.abs();
        for i in 0..8 {
            let y = Normal::new(0.1, (0.04 + tau * tau).sqrt())
                .unwrap()
                .sample(&mut rng);
            records.push(StudyRecord {
                analysis_id: format!("ma{j}"),
                study_id: format!("s{i}"),
                estimate: y,
                std_err: 0.2,
                seq: j,
            });
        }
    }
    let c = MetaAnalysisCollection::from_records(records)?;
    let cfg = McmcConfig {
        chains: 4,
        burn_in: 2000,
        kept: 5000,
        thin: 1,
        seed: 3,
    };
    let s = run_hierarchical(&c, &ModelSpec::new(HetFamily::HalfNormal), &cfg)?;
    let draws = s.tau_pred();

    let priors = vec![
        point_estimate_prior(&s, Statistic::Mean)?,
        point_estimate_prior(&s, Statistic::Q95)?,
        mixture_match_prior(&s)?,
        fit_predictive_ml(&draws, FitFamily::HalfStudentT)?,
        fit_predictive_ml(&draws, FitFamily::Lomax)?,
        fit_predictive_moments(&draws, FitFamily::LogNormal)?,
    ];
    print!("{}", approximation_table(&priors, &draws)?.to_table());
    println!(
        "\nJSON for the mixture match:\n{}",
        serde_json::to_string_pretty(&priors[2]).unwrap()
    );
    Ok(())
}
