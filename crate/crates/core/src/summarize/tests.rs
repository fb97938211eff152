use approx::assert_abs_diff_eq;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::*;
use crate::sampler::ChainDraws;

fn draws_of(d: &DistributionSpec, n: usize, seed: u64) -> Vec<f64> {
    d.sample(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

/// Normal draws rescaled to exactly the requested sample mean and sd.
fn exact_moments(mean: f64, sd: f64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let z: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let (m, s) = mean_sd(&z);
    z.iter().map(|v| mean + sd * (v - m) / s).collect()
}

fn posterior(family: HetFamily, hyper: Vec<Vec<f64>>) -> PosteriorSamples {
    let n = hyper[0].len();
    PosteriorSamples {
        family: Some(family),
        hyper_names: family.hyper_names().iter().map(|s| s.to_string()).collect(),
        analysis_ids: Vec::new(),
        chains: vec![ChainDraws {
            hyper,
            tau_pred: vec![0.1; n],
            deviance: vec![0.0; n],
            ..Default::default()
        }],
    }
}

/// Non-negative two-point sample with exactly the requested mean and sd.
fn two_point(mean: f64, sd: f64, n: usize) -> Vec<f64> {
    let r = (mean / sd).powi(2);
    let n1 = ((0.5 * r / (1.0 + r)) * n as f64).floor().max(1.0) as usize;
    let w = n1 as f64 / n as f64;
    let gap = sd * ((n as f64 - 1.0) / n as f64).sqrt() / (w * (1.0 - w)).sqrt();
    let a = mean - w * gap;
    assert!(a >= 0.0);
    let mut x = vec![a; n - n1];
    x.extend(std::iter::repeat_n(a + gap, n1));
    x
}

#[test]
fn significant_digit_rounding() {
    for (x, r) in [
        (0.2204, 0.22),
        (8.16, 8.2),
        (0.19895, 0.2),
        (-2.63, -2.6),
        (1234.0, 1200.0),
        (0.0743, 0.074),
        (0.0, 0.0),
    ] {
        assert_eq!(round_sig(x, 2), r, "{x}");
    }
    assert_eq!(round_sig(13.583, 3), 13.6);
}

#[test]
fn prior_spec_json() {
    let p = PriorSpec::new(
        DistributionSpec::half_student_t(8.128, 0.19895).unwrap(),
        TransferMethod::MixtureMatch,
    )
    .unwrap()
    .with_source("run-1");
    let v = serde_json::to_value(&p).unwrap();
    assert_eq!(v["family"], "half-t");
    assert_eq!(v["rounded"], "half-t(8.1,0.2)");
    assert_eq!(v["params"][0], 8.128);
    assert_eq!(v["method"]["type"], "mixture_match");
    assert_eq!(v["source"], "run-1");
    assert_eq!(p.to_string(), "half-t(8.1,0.2)");
}

#[test]
fn constant_draws_give_conditional_family() {
    let s = posterior(HetFamily::HalfNormal, vec![vec![0.3; 50]]);
    for stat in [Statistic::Mean, Statistic::Median, Statistic::Q95] {
        let p = point_estimate_prior(&s, stat).unwrap();
        assert_abs_diff_eq!(p.distribution.params()[0], 0.3, epsilon = 1e-15);
        assert_eq!(p.distribution.family_name(), "half-normal");
    }
    let p = mixture_match_prior(&s).unwrap();
    assert_eq!(p.distribution.params()[0], NU_MAX);
    assert_abs_diff_eq!(
        p.distribution.quantile(0.95).unwrap(),
        DistributionSpec::half_normal(0.3)
            .unwrap()
            .quantile(0.95)
            .unwrap(),
        epsilon = 1e-4
    );
}

#[test]
fn point_estimate_statistics() {
    let d = exact_moments(0.22, 0.064, 20_000);
    let s = posterior(HetFamily::HalfNormal, vec![d.clone()]);
    let mean = point_estimate_prior(&s, Statistic::Mean).unwrap();
    assert_eq!(mean.rounded.to_string(), "half-normal(0.22)");
    let q95 = point_estimate_prior(&s, Statistic::Q95).unwrap();
    assert_eq!(
        q95.method,
        TransferMethod::PointEstimate {
            statistic: Statistic::Q95,
            conservative: true
        }
    );
    let mut sorted = d;
    sorted.sort_by(f64::total_cmp);
    assert_eq!(q95.distribution.params()[0], quantile_type7(&sorted, 0.95));
    // the upper-quantile prior is stochastically larger
    for i in 1..200 {
        let t = i as f64 * 0.01;
        assert!(q95.distribution.cdf(t) <= mean.distribution.cdf(t));
    }
}

#[test]
fn half_normal_mixture_match() {
    let s = posterior(
        HetFamily::HalfNormal,
        vec![exact_moments(0.22, 0.064, 10_000)],
    );
    let p = mixture_match_prior(&s).unwrap();
    let v = p.distribution.params();
    assert!((v[0] - 8.2).abs() <= 0.2, "nu {}", v[0]);
    assert!((v[1] - 0.20).abs() <= 0.01, "scale {}", v[1]);
    assert_eq!(p.method, TransferMethod::MixtureMatch);
}

#[test]
fn exponential_mixture_match() {
    let s = posterior(
        HetFamily::Exponential,
        vec![exact_moments(0.15, 0.05, 10_000)],
    );
    let p = mixture_match_prior(&s).unwrap();
    let want = exp_mixture_lomax(0.15, 0.05).unwrap();
    for (a, b) in p.distribution.params().iter().zip(want.params()) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-9);
    }
}

#[test]
fn log_normal_mixture_inflates_shape() {
    let theta: Vec<f64> = exact_moments(-2.5, 0.3, 5000)
        .iter()
        .map(|l| l.exp())
        .collect();
    let shape = exact_moments(1.5, 0.2, 5000);
    let s = posterior(HetFamily::LogNormal, vec![theta, shape.clone()]);
    let p = mixture_match_prior(&s).unwrap();
    let v = p.distribution.params();
    assert_abs_diff_eq!(v[0], -2.5, epsilon = 1e-12);
    let mean_sq = shape.iter().map(|x| x * x).sum::<f64>() / shape.len() as f64;
    assert_abs_diff_eq!(v[1], (mean_sq + 0.09).sqrt(), epsilon = 1e-12);
}

#[test]
fn half_cauchy_has_no_mixture_match() {
    let s = posterior(HetFamily::HalfCauchy, vec![vec![0.1, 0.2]]);
    assert!(matches!(
        mixture_match_prior(&s),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn fixed_prior_samples_rejected() {
    let mut s = posterior(HetFamily::HalfNormal, vec![vec![0.1, 0.2]]);
    s.family = None;
    assert!(point_estimate_prior(&s, Statistic::Mean).is_err());
}

#[test]
fn ml_self_fits() {
    let x = draws_of(&DistributionSpec::half_normal(0.3).unwrap(), 100_000, 1);
    let p = fit_predictive_ml(&x, FitFamily::HalfNormal).unwrap();
    assert_abs_diff_eq!(p.distribution.params()[0], 0.3, epsilon = 0.01);

    // tolerances are about 2.5 asymptotic standard errors at n = 1e5
    let cases = [
        (
            DistributionSpec::half_student_t(8.2, 0.2).unwrap(),
            [0.8, 0.005],
        ),
        (DistributionSpec::lomax(9.9, 1.5).unwrap(), [1.0, 0.15]),
        (
            DistributionSpec::log_normal(-2.6, 1.7).unwrap(),
            [0.015, 0.01],
        ),
        (DistributionSpec::exponential(0.2).unwrap(), [0.002, 0.0]),
        (DistributionSpec::half_cauchy(0.1).unwrap(), [0.002, 0.0]),
    ];
    for (d, tol) in cases {
        let x = draws_of(&d, 100_000, 2);
        let fam: FitFamily = d.family_name().parse().unwrap();
        let fit = fit_predictive_ml(&x, fam).unwrap();
        for (i, (a, b)) in fit.distribution.params().iter().zip(d.params()).enumerate() {
            assert!((a - b).abs() <= tol[i], "{d}: fitted {}", fit.distribution);
        }
        let q = |d: &DistributionSpec| d.quantile(0.95).unwrap();
        assert!(
            (q(&fit.distribution) / q(&d) - 1.0).abs() < 0.02,
            "{d}: q95 {}",
            q(&fit.distribution)
        );
    }
}

#[test]
fn ml_beats_moment_fit() {
    let x = draws_of(
        &DistributionSpec::half_student_t(8.2, 0.2).unwrap(),
        20_000,
        3,
    );
    for fam in [
        FitFamily::HalfNormal,
        FitFamily::HalfStudentT,
        FitFamily::Exponential,
        FitFamily::LogNormal,
        FitFamily::Lomax,
    ] {
        let ml = fit_predictive_ml(&x, fam).unwrap();
        let TransferMethod::DirectFitMl { log_likelihood, .. } = ml.method else {
            panic!()
        };
        if let Ok(mo) = fit_predictive_moments(&x, fam) {
            assert!(
                log_likelihood >= mo.distribution.log_likelihood(&x) - 1e-6,
                "{fam}"
            );
        }
    }
}

#[test]
fn ml_needs_enough_draws() {
    assert!(matches!(
        fit_predictive_ml(&[0.1; 999], FitFamily::HalfNormal),
        Err(Error::Argument(_))
    ));
    assert!(matches!(
        fit_predictive_ml(&[-0.1; 1000], FitFamily::HalfNormal),
        Err(Error::Argument(_))
    ));
}

#[test]
fn moment_fits() {
    let p = fit_predictive_moments(&two_point(0.1755, 0.05, 1000), FitFamily::HalfNormal).unwrap();
    assert_abs_diff_eq!(p.distribution.params()[0], 0.22, epsilon = 0.001);
    let err =
        fit_predictive_moments(&two_point(1.0, 0.7, 1000), FitFamily::HalfStudentT).unwrap_err();
    assert!(matches!(err, Error::Infeasible(_)));
    assert!(err.to_string().contains("half-normal"));
    assert!(fit_predictive_moments(&[0.1, 0.2], FitFamily::HalfCauchy).is_err());
    assert!(matches!(
        fit_predictive_moments(&two_point(1.0, 0.9, 1000), FitFamily::Lomax),
        Err(Error::Infeasible(_))
    ));

    let lomax = DistributionSpec::lomax(9.9, 1.5).unwrap();
    let (m, sd) = (lomax.mean().unwrap(), lomax.sd().unwrap());
    let p = fit_predictive_moments(&two_point(m, sd, 1000), FitFamily::Lomax).unwrap();
    assert_abs_diff_eq!(p.distribution.params()[0], 9.9, epsilon = 1e-9);
    assert_abs_diff_eq!(p.distribution.params()[1], 1.5, epsilon = 1e-9);

    let ht = DistributionSpec::half_student_t(8.2, 0.2).unwrap();
    let p = fit_predictive_moments(
        &two_point(ht.mean().unwrap(), ht.sd().unwrap(), 1000),
        FitFamily::HalfStudentT,
    )
    .unwrap();
    assert_eq!(p.rounded.to_string(), "half-t(8.2,0.2)");

    let ln = DistributionSpec::log_normal(-2.6, 1.7).unwrap();
    let p = fit_predictive_moments(
        &two_point(ln.mean().unwrap(), ln.sd().unwrap(), 1000),
        FitFamily::LogNormal,
    )
    .unwrap();
    assert_abs_diff_eq!(p.distribution.params()[1], 1.7, epsilon = 1e-9);
}

#[test]
fn approximation_table_rows() {
    let specs: Vec<PriorSpec> = ["half-normal(0.22)", "half-t(8.2,0.20)", "half-cauchy(0.10)"]
        .iter()
        .map(|t| PriorSpec::new(t.parse().unwrap(), TransferMethod::DirectFitMoments).unwrap())
        .collect();
    let t = approximation_table(&specs, &[]).unwrap();
    assert_eq!(t.rows.len(), 3);
    let hn = &t.rows[0];
    let d: DistributionSpec = "half-normal(0.22)".parse().unwrap();
    assert_eq!((hn.mean, hn.sd, hn.median), (d.mean(), d.sd(), d.median()));
    let cells = |r: &TableRow| {
        [r.mean.unwrap(), r.sd.unwrap(), r.median, r.q95, r.q99].map(|v| format!("{v:.2}"))
    };
    assert_eq!(cells(&t.rows[0]), ["0.18", "0.13", "0.15", "0.43", "0.57"]);
    assert_eq!(cells(&t.rows[1]), ["0.18", "0.15", "0.14", "0.46", "0.67"]);
    assert_eq!((t.rows[2].mean, t.rows[2].sd), (None, None));
    assert!(t.to_table().lines().nth(3).unwrap().contains("NA"));

    let with_draws = approximation_table(&specs, &draws_of(&d, 1000, 1)).unwrap();
    assert_eq!(with_draws.rows[0].label, "MCMC");
    assert_eq!(with_draws.rows.len(), 4);
    assert!(approximation_table(&[], &[0.1, 0.2]).is_err());
}
