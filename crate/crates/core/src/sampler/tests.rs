use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::*;
use crate::data::{MetaAnalysisCollection, StudyRecord};

fn small_cfg(seed: u64) -> McmcConfig {
    McmcConfig {
        chains: 2,
        burn_in: 200,
        kept: 500,
        thin: 1,
        seed,
    }
}

/// `n` analyses of `k` studies with true heterogeneities drawn from `het`.
pub(crate) fn synthetic(
    n: usize,
    k: usize,
    se: f64,
    het: DistributionSpec,
    seed: u64,
) -> MetaAnalysisCollection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for j in 0..n {
        let tau = het.draw(&mut rng);
        let mu = Normal::new(0.0, 0.5).unwrap().sample(&mut rng);
        for i in 0..k {
            let y = Normal::new(mu, (se * se + tau * tau).sqrt())
                .unwrap()
                .sample(&mut rng);
            records.push(StudyRecord {
                analysis_id: format!("a{j}"),
                study_id: format!("s{i}"),
                estimate: y,
                std_err: se,
                seq: (j * k + i) as i64,
            });
        }
    }
    MetaAnalysisCollection::from_records(records).unwrap()
}

fn corpus() -> MetaAnalysisCollection {
    synthetic(8, 3, 0.2, DistributionSpec::half_normal(0.3).unwrap(), 9)
}

#[test]
fn family_names_round_trip() {
    for f in HetFamily::ALL {
        assert_eq!(f.name().parse::<HetFamily>().unwrap(), f);
        assert_eq!(f.conditional(&[0.3, 1.0]).unwrap().family_name(), f.name());
    }
    assert!("gamma".parse::<HetFamily>().is_err());
}

#[test]
fn deterministic_given_seed() {
    let c = corpus();
    let m = ModelSpec::new(HetFamily::HalfNormal);
    let a = run_hierarchical(&c, &m, &small_cfg(5)).unwrap();
    let b = run_hierarchical(&c, &m, &small_cfg(5)).unwrap();
    assert_eq!(a, b);
    let other = run_hierarchical(&c, &m, &small_cfg(6)).unwrap();
    assert_ne!(a.chains[0].tau_pred, other.chains[0].tau_pred);
}

#[test]
fn chain_streams_independent_of_chain_count() {
    let c = corpus();
    let m = ModelSpec::new(HetFamily::Exponential);
    let two = run_hierarchical(&c, &m, &small_cfg(5)).unwrap();
    let three = run_hierarchical(
        &c,
        &m,
        &McmcConfig {
            chains: 3,
            ..small_cfg(5)
        },
    )
    .unwrap();
    assert_eq!(two.chains[..], three.chains[..2]);
}

#[test]
fn draws_stay_in_support() {
    let c = corpus();
    for f in HetFamily::ALL {
        let s = run_hierarchical(&c, &ModelSpec::new(f), &small_cfg(1)).unwrap();
        for ch in &s.chains {
            assert!(ch.tau.iter().flatten().all(|&t| t >= 0.0));
            assert!(ch.tau_pred.iter().all(|&t| t >= 0.0));
            assert!(ch.hyper[0].iter().all(|&t| t > 0.0 && t <= 10.0));
            if f == HetFamily::LogNormal {
                assert!(ch.hyper[1].iter().all(|&t| t > 0.0 && t <= 5.0));
            }
            assert_eq!(ch.deviance.len(), 500);
        }
    }
}

#[test]
fn invalid_configuration() {
    let c = corpus();
    let m = ModelSpec::new(HetFamily::HalfNormal);
    let err = run_hierarchical(
        &c,
        &m,
        &McmcConfig {
            chains: 0,
            ..small_cfg(1)
        },
    )
    .unwrap_err();
    assert!(matches!(err, Error::Config(_)));
    let bad = ModelSpec {
        heterogeneity: Heterogeneity::Family {
            family: HetFamily::HalfNormal,
            hyperpriors: vec![DistributionSpec::normal(0.0, 1.0).unwrap()],
        },
        ..m.clone()
    };
    assert!(matches!(
        run_hierarchical(&c, &bad, &small_cfg(1)),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        ModelSpec::with_bounds(HetFamily::HalfNormal, 0.0, 5.0),
        Err(Error::Config(_))
    ));
    let sd = ModelSpec {
        mu_prior_sd: 0.0,
        ..m
    };
    assert!(matches!(
        run_hierarchical(&c, &sd, &small_cfg(1)),
        Err(Error::Config(_))
    ));
}

#[test]
fn non_finite_initial_posterior() {
    let c = MetaAnalysisCollection::from_records(vec![StudyRecord {
        analysis_id: "a".into(),
        study_id: "1".into(),
        estimate: 1e200,
        std_err: 1.0,
        seq: 1,
    }])
    .unwrap();
    let err =
        run_hierarchical(&c, &ModelSpec::new(HetFamily::HalfNormal), &small_cfg(1)).unwrap_err();
    assert!(matches!(err, Error::Initialization(_)), "{err}");
}

#[test]
fn zero_observed_heterogeneity() {
    let mut records = Vec::new();
    for j in 0..10 {
        for i in 0..4 {
            records.push(StudyRecord {
                analysis_id: format!("a{j}"),
                study_id: format!("s{i}"),
                estimate: 0.1 * j as f64,
                std_err: 1e-3,
                seq: 0,
            });
        }
    }
    let c = MetaAnalysisCollection::from_records(records).unwrap();
    let cfg = McmcConfig {
        chains: 2,
        burn_in: 1000,
        kept: 4000,
        thin: 1,
        seed: 2,
    };
    let s = run_hierarchical(&c, &ModelSpec::new(HetFamily::HalfNormal), &cfg).unwrap();
    let q95 = summarize_samples(&s.pooled("scale").unwrap()).unwrap().q95;
    assert!(q95 < 0.05, "q95 {q95}");
}

#[test]
fn exact_conditional_for_mu() {
    let c = MetaAnalysisCollection::from_records(
        [(0.2, 0.3), (0.5, 0.2), (-0.1, 0.4)]
            .iter()
            .enumerate()
            .map(|(i, &(y, s))| StudyRecord {
                analysis_id: "a".into(),
                study_id: i.to_string(),
                estimate: y,
                std_err: s,
                seq: i as i64,
            })
            .collect(),
    )
    .unwrap();
    let tau: f64 = 0.3;
    let m = ModelSpec::fixed(DistributionSpec::log_normal(tau.ln(), 1e-6).unwrap());
    let cfg = McmcConfig {
        chains: 2,
        burn_in: 100,
        kept: 20_000,
        thin: 1,
        seed: 4,
    };
    let s = run_hierarchical(&c, &m, &cfg).unwrap();
    let draws = s.pooled("mu[1]").unwrap();
    let sum = summarize_samples(&draws).unwrap();

    let (mut prec, mut wy) = (1e-4, 0.0);
    for (y, se) in [(0.2, 0.3), (0.5, 0.2), (-0.1, 0.4)] {
        let w = 1.0 / (se * se + tau * tau);
        prec += w;
        wy += w * y;
    }
    let (mean, sd) = (wy / prec, prec.powf(-0.5));
    let n = draws.len() as f64;
    assert!(
        (sum.mean - mean).abs() < 3.0 * sd / n.sqrt(),
        "{} vs {mean}",
        sum.mean
    );
    // se of the sample sd ≈ sd / sqrt(2n)
    assert!(
        (sum.sd - sd).abs() < 3.0 * sd / (2.0 * n).sqrt(),
        "{} vs {sd}",
        sum.sd
    );
}

#[test]
fn csv_round_trip() {
    let c = corpus();
    let s = run_hierarchical(
        &c,
        &ModelSpec::new(HetFamily::LogNormal),
        &McmcConfig {
            kept: 50,
            ..small_cfg(3)
        },
    )
    .unwrap();
    let back = PosteriorSamples::from_csv(&s.to_csv(true), Some(HetFamily::LogNormal)).unwrap();
    assert_eq!(back.chains, s.chains);
    let monitored =
        PosteriorSamples::from_csv(&s.to_csv(false), Some(HetFamily::LogNormal)).unwrap();
    assert!(!monitored.has_effects());
    assert_eq!(monitored.tau_pred(), s.tau_pred());
    assert_eq!(monitored.pooled("shape"), s.pooled("shape"));
    assert!(
        PosteriorSamples::from_csv("chain,iter,parameter,value\n1,2,scale,0.1\n", None).is_err()
    );
    assert!(PosteriorSamples::from_csv("a,b\n", None).is_err());
}

#[test]
fn summary_contents() {
    let c = corpus();
    let s = run_hierarchical(&c, &ModelSpec::new(HetFamily::HalfNormal), &small_cfg(3)).unwrap();
    let sum = s.summary().unwrap();
    assert_eq!(sum.schema_version, crate::SCHEMA_VERSION);
    let names: Vec<_> = sum.parameters.iter().map(|p| p.name.as_str()).collect();
    assert_eq!(names, ["scale", "tau_pred"]);
    assert_eq!(sum.analyses.len(), 8);
    let json = serde_json::to_value(&sum).unwrap();
    assert_eq!(json["family"], "half-normal");
    assert!(json["parameters"][0]["q95"].is_number());
}

#[test]
fn effect_means_match_pooled() {
    let c = corpus();
    let s = run_hierarchical(&c, &ModelSpec::new(HetFamily::HalfNormal), &small_cfg(3)).unwrap();
    let (mu, tau) = s.effect_means().unwrap();
    let d = s.pooled("tau[2]").unwrap();
    assert!((tau[1] - d.iter().sum::<f64>() / d.len() as f64).abs() < 1e-12);
    assert_eq!(mu.len(), 8);
}
