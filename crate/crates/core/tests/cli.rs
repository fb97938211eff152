mod common;

use std::fs;
use std::path::Path;

use hetprior::cli::{run, EXIT_INPUT, EXIT_NUMERICAL};
use hetprior::DistributionSpec;

fn hetprior(args: &[&str]) -> i32 {
    run(std::iter::once("hetprior").chain(args.iter().copied()))
}

fn write_corpus(dir: &Path) -> String {
    let c = common::synthetic(12, 5, 0.2, &DistributionSpec::half_normal(0.3).unwrap(), 4);
    let path = dir.join("corpus.csv");
    fs::write(&path, c.to_csv()).unwrap();
    path.display().to_string()
}

fn json(path: impl AsRef<Path>) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const QUICK: [&str; 6] = ["--chains", "2", "--iters", "1500", "--burnin", "500"];

#[test]
fn fit_then_approx_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path());
    let fit = dir.path().join("fit");
    let code = hetprior(
        &[
            &[
                "fit",
                &corpus,
                "--seed",
                "3",
                "--svg",
                "--out",
                fit.to_str().unwrap(),
            ][..],
            &QUICK,
        ]
        .concat(),
    );
    assert_eq!(code, 0);
    for f in [
        "summary.json",
        "samples.csv",
        "dic.json",
        "manifest.json",
        "scale.svg",
        "tau_pred.svg",
    ] {
        assert!(fit.join(f).is_file(), "{f}");
    }
    let summary = json(fit.join("summary.json"));
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["family"], "half-normal");
    let manifest = json(fit.join("manifest.json"));
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    let ap = dir.path().join("approx");
    let samples = fit.join("samples.csv");
    assert_eq!(
        hetprior(&[
            "approx",
            samples.to_str().unwrap(),
            "--out",
            ap.to_str().unwrap()
        ]),
        0
    );
    let priors = json(ap.join("priors.json"));
    let list = priors["priors"].as_array().unwrap();
    let mixture = list
        .iter()
        .find(|p| p["method"]["type"] == "mixture_match")
        .unwrap();
    assert_eq!(mixture["family"], "half-t");
    // the summary.json next to the samples was used and hashed
    assert_eq!(
        json(ap.join("manifest.json"))["inputs"]
            .as_array()
            .unwrap()
            .len(),
        2
    );

    let single = dir.path().join("two.csv");
    fs::write(
        &single,
        "study_id,estimate,std_err\nfirst,-0.5,0.3\nsecond,0.2,0.25\n",
    )
    .unwrap();
    let an = dir.path().join("analyze");
    let prior = mixture["rounded"].as_str().unwrap();
    let code = hetprior(&[
        "analyze",
        single.to_str().unwrap(),
        "--prior",
        prior,
        "--svg",
        "--out",
        an.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let forest = fs::read_to_string(an.join("forest.csv")).unwrap();
    let kinds: Vec<&str> = forest
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(
        kinds[..5],
        ["study", "study", "prior", "posterior", "posterior"]
    );
    assert_eq!(kinds.iter().filter(|k| **k == "frequentist").count(), 6);
    assert!(fs::read_to_string(an.join("density.csv"))
        .unwrap()
        .starts_with("tau,prior,posterior\n"));
    assert!(an.join("forest.svg").is_file() && an.join("density.svg").is_file());
}

#[test]
fn identical_manifests_give_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path());
    let out = dir.path().join("out");
    let mut first = Vec::new();
    for round in 0..2 {
        let code = hetprior(
            &[
                &[
                    "fit",
                    &corpus,
                    "--seed",
                    "8",
                    "--out",
                    out.to_str().unwrap(),
                ][..],
                &QUICK,
            ]
            .concat(),
        );
        assert_eq!(code, 0);
        let files: Vec<Vec<u8>> = ["summary.json", "samples.csv", "dic.json", "manifest.json"]
            .iter()
            .map(|f| fs::read(out.join(f)).unwrap())
            .collect();
        if round == 0 {
            first = files;
        } else {
            assert_eq!(first, files);
        }
    }
}

#[test]
fn compare_and_tau_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path());
    let out = dir.path().join("cmp");
    let code = hetprior(
        &[
            &[
                "compare",
                &corpus,
                "--families",
                "half-normal,exp",
                "--seed",
                "2",
                "--out",
                out.to_str().unwrap(),
            ][..],
            &QUICK,
        ]
        .concat(),
    );
    assert_eq!(code, 0);
    let dic = json(out.join("dic.json"));
    assert_eq!(dic["rows"].as_array().unwrap().len(), 2);

    let te = dir.path().join("te");
    assert_eq!(
        hetprior(&[
            "tau-estimates",
            &corpus,
            "--method",
            "pm",
            "--out",
            te.to_str().unwrap()
        ]),
        0
    );
    let est = json(te.join("tau_estimates.json"));
    assert_eq!(est["method"], "PM");
    assert_eq!(est["estimates"].as_array().unwrap().len(), 12);
}

#[test]
fn subset_recent_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path());
    let out = dir.path().join("v");
    assert_eq!(
        hetprior(&[
            "validate",
            &corpus,
            "--subset-recent",
            "5",
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    assert_eq!(json(out.join("validation.json"))["n_analyses"], 5);
    assert_eq!(
        json(out.join("manifest.json"))["config"]["subset_recent"],
        5
    );
    assert_eq!(
        hetprior(&[
            "validate",
            &corpus,
            "--subset-recent",
            "13",
            "--out",
            out.to_str().unwrap()
        ]),
        EXIT_INPUT
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = out.to_str().unwrap();
    assert_eq!(
        hetprior(&["validate", "/nonexistent/file.csv", "--out", o]),
        EXIT_INPUT
    );
    assert_eq!(hetprior(&["fit", "x.csv", "--bogus-flag"]), EXIT_INPUT);

    let bad = dir.path().join("bad.csv");
    fs::write(
        &bad,
        "analysis_id,study_id,estimate,std_err\na,1,0.1,0.2\na,2,zero,0.2\n",
    )
    .unwrap();
    assert_eq!(
        hetprior(&["validate", bad.to_str().unwrap(), "--out", o]),
        EXIT_INPUT
    );
    assert_eq!(
        hetprior(&[
            "analyze",
            bad.to_str().unwrap(),
            "--prior",
            "half-normal(-1)",
            "--out",
            o
        ]),
        EXIT_INPUT
    );

    // an approximation run in which every fit is infeasible is a numerical failure
    let corpus = write_corpus(dir.path());
    let fit = dir.path().join("fit");
    assert_eq!(
        hetprior(
            &[
                &[
                    "fit",
                    &corpus,
                    "--seed",
                    "1",
                    "--out",
                    fit.to_str().unwrap()
                ][..],
                &QUICK
            ]
            .concat()
        ),
        0
    );
    let samples = fit.join("samples.csv");
    let code = hetprior(&[
        "approx",
        samples.to_str().unwrap(),
        "--methods",
        "moments",
        "--fit-families",
        "half-cauchy",
        "--out",
        o,
    ]);
    assert_eq!(code, EXIT_NUMERICAL);
}

#[test]
fn mu_prior_text() {
    use hetprior::cli::parse_mu_prior;
    use hetprior::metaanalysis::MuPrior;
    assert_eq!(parse_mu_prior("flat").unwrap(), MuPrior::Flat);
    assert_eq!(
        parse_mu_prior("normal(0, 2.5)").unwrap(),
        MuPrior::Normal { mean: 0.0, sd: 2.5 }
    );
    assert!(parse_mu_prior("normal(0,-1)").is_err());
    assert!(parse_mu_prior("cauchy(0,1)").is_err());
}
