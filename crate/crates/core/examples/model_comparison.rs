//! Compare heterogeneity families by DIC on the same collection.
//!
//! cargo run --release --example model_comparison

use hetprior::data::{MetaAnalysisCollection, StudyRecord};
use hetprior::dic::compare_models;
use hetprior::sampler::{HetFamily, McmcConfig, ModelTemplate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};

fn main() -> hetprior::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut records = Vec::new();
    for j in 0..30 {
        let tau: f64 = Exp::new(1.0 / 0.15).unwrap().sample(&mut rng);
        let mu = Normal::new(0.0, 0.3).unwrap().sample(&mut rng);
        for i in 0..6 {
            let se = 0.15;
            let y = Normal::new(mu, (se * se + tau * tau).sqrt())
                .unwrap()
                .sample(&mut rng);
            records.push(StudyRecord {
                analysis_id: format!("ma{j}"),
                study_id: format!("s{i}"),
                estimate: y,
                std_err: se,
                seq: j,
            });
        }
    }
    let c = MetaAnalysisCollection::from_records(records)?;
    let cfg = McmcConfig {
        chains: 2,
        burn_in: 2000,
        kept: 5000,
        thin: 1,
        seed: 1,
    };
    let cmp = compare_models(&c, &HetFamily::ALL, &ModelTemplate::default(), &cfg)?;
    print!("{}", cmp.to_table());
    Ok(())
}
