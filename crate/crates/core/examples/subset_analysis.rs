//! How the predictive heterogeneity distribution widens when only the most
//! recent analyses of a collection are used.
//!
//! cargo run --release --example subset_analysis

use hetprior::data::{subset_recent, MetaAnalysisCollection, StudyRecord};
use hetprior::sampler::{run_hierarchical, summarize_samples, HetFamily, McmcConfig, ModelSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> hetprior::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut records = Vec::new();
    for j in 0..40 {
        let z: f64 = Normal::new(0.0, 1.0).unwrap().sample(&mut rng);
        let tau = 0.2 * z.abs();
        for i in 0..4 {
            let y = Normal::new(0.0, (0.04 + tau * tau).sqrt())
                .unwrap()
                .sample(&mut rng);
            // `seq` orders the analyses in time
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
        seed: 9,
    };
    println!("{:>9} {:>7} {:>7} {:>7}", "analyses", "mean", "95%", "99%");
    for n in [40, 20, 10, 5] {
        let sub = subset_recent(&c, n)?;
        let s = run_hierarchical(&sub, &ModelSpec::new(HetFamily::HalfNormal), &cfg)?;
        let t = summarize_samples(&s.tau_pred())?;
        println!("{n:>9} {:>7.3} {:>7.3} {:>7.3}", t.mean, t.q95, t.q99);
    }
    Ok(())
}
