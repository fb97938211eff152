//! Command-line front end. Every subcommand writes its outputs plus a
//! `manifest.json` into `--out`, prints a text view (or the JSON with
//! `--json`) and maps library errors onto exit codes 2 (input) and 3
//! (numerical).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::data::{subset_recent, validate_collection, MetaAnalysisCollection};
use crate::dic::{compare_models, compute_dic};
use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::metaanalysis::{
    bayes_ma, forest_rows, forest_to_csv, tau_estimate_collection, MuPrior, SingleMeta, TauMethod,
};
use crate::sampler::{
    run_hierarchical, HetFamily, McmcConfig, ModelSpec, ModelTemplate, PosteriorSamples,
};
use crate::summarize::{
    approximation_table, fit_predictive_ml, fit_predictive_moments, mixture_match_prior,
    point_estimate_prior, ApproximationTable, FitFamily, PriorSpec, Statistic, DEFAULT_DIGITS,
};
use crate::svg::{forest_plot, histogram, line_plot, Series};
use crate::SCHEMA_VERSION;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hetprior",
    version,
    about = "Empirical heterogeneity priors for random-effects meta-analysis"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Keep only the N most recent analyses of the input collection.
    #[arg(long, global = true, value_name = "N")]
    pub subset_recent: Option<usize>,
    /// Master seed; generated and printed when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 4)]
    pub chains: usize,
    /// Kept iterations per chain.
    #[arg(long, global = true, default_value_t = 20000)]
    pub iters: usize,
    #[arg(long, global = true, default_value_t = 5000)]
    pub burnin: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub thin: usize,
    /// Print JSON instead of the text table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    pub svg: bool,
    #[arg(
        long,
        global = true,
        default_value = "hetprior-out",
        value_name = "DIR"
    )]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a collection file and report analysis sizes.
    Validate { input: PathBuf },
    /// Fit the hierarchical model to a collection.
    Fit(FitArgs),
    /// Fit several families and rank them by DIC.
    Compare(CompareArgs),
    /// Condense predictive draws into parametric priors.
    Approx(ApproxArgs),
    /// Bayesian meta-analysis of one data set with a given heterogeneity prior.
    Analyze(AnalyzeArgs),
    /// Per-analysis DL or PM heterogeneity estimates.
    TauEstimates {
        input: PathBuf,
        #[arg(long, default_value = "dl")]
        method: TauMethod,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    /// Upper bound of the uniform hyperprior on the scale.
    #[arg(long, default_value_t = 10.0)]
    pub scale_bound: f64,
    /// Upper bound of the uniform hyperprior on the log-normal shape.
    #[arg(long, default_value_t = 5.0)]
    pub shape_bound: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu_prior_mean: f64,
    #[arg(long, default_value_t = 100.0)]
    pub mu_prior_sd: f64,
}

impl ModelArgs {
    fn template(&self) -> ModelTemplate {
        ModelTemplate {
            scale_bound: self.scale_bound,
            shape_bound: self.shape_bound,
            mu_prior_mean: self.mu_prior_mean,
            mu_prior_sd: self.mu_prior_sd,
        }
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    pub input: PathBuf,
    #[arg(long, default_value = "half-normal", conflicts_with = "prior")]
    pub family: HetFamily,
    /// Fixed heterogeneity prior instead of a family with hyperpriors.
    #[arg(long)]
    pub prior: Option<DistributionSpec>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Write every μ_j and τ_j trace to samples.csv.
    #[arg(long)]
    pub all_params: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub input: PathBuf,
    #[arg(long, value_delimiter = ',', default_values = ["half-normal", "exp", "log-normal", "half-cauchy"])]
    pub families: Vec<HetFamily>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    /// samples.csv written by `fit`.
    pub samples: PathBuf,
    /// Family the samples came from; read from summary.json next to the
    /// samples when omitted.
    #[arg(long)]
    pub family: Option<HetFamily>,
    /// Any of point, mixture, ml, moments.
    #[arg(long, value_delimiter = ',', default_values = ["point", "mixture", "ml"])]
    pub methods: Vec<String>,
    /// Families for the ml and moments methods.
    #[arg(long, value_delimiter = ',', default_values = ["half-normal", "half-t", "exp", "lomax", "log-normal", "half-cauchy"])]
    pub fit_families: Vec<FitFamily>,
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    pub digits: u32,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// CSV with estimate and std_err columns (study_id optional).
    pub input: PathBuf,
    /// Heterogeneity prior in text form, e.g. "half-t(8.2,0.20)".
    #[arg(long)]
    pub prior: DistributionSpec,
    /// `flat` or `normal(mean,sd)`.
    #[arg(long, default_value = "flat", value_parser = parse_mu_prior)]
    pub mu_prior: MuPrior,
}

pub fn parse_mu_prior(s: &str) -> Result<MuPrior> {
    let t = s.trim().to_ascii_lowercase();
    if t == "flat" {
        return Ok(MuPrior::Flat);
    }
    let bad = || {
        Error::Argument(format!(
            "mu prior must be 'flat' or 'normal(mean,sd)', got '{s}'"
        ))
    };
    let inner = t
        .strip_prefix("normal(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let parts: Vec<f64> = inner
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    match parts[..] {
        [mean, sd] if mean.is_finite() && sd.is_finite() && sd > 0.0 => {
            Ok(MuPrior::Normal { mean, sd })
        }
        _ => Err(bad()),
    }
}

/// Reproduction record written next to every output set.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub subcommand: String,
    pub inputs: Vec<InputFile>,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

/// What a command produced: files for `--out` and the stdout views.
struct Report {
    files: Vec<(String, Vec<u8>)>,
    text: String,
    json: String,
}

impl Report {
    fn new(text: String, json: String) -> Self {
        Self {
            files: Vec::new(),
            text,
            json,
        }
    }

    fn file(&mut self, name: &str, contents: impl Into<Vec<u8>>) {
        self.files.push((name.to_string(), contents.into()));
    }
}

struct Context {
    global: GlobalArgs,
    inputs: Vec<InputFile>,
    seed: Option<u64>,
}

impl Context {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).map_err(|e| io_context(e, path))?;
        let digest = Sha256::digest(&bytes);
        self.inputs.push(InputFile {
            path: path.display().to_string(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        });
        String::from_utf8(bytes)
            .map_err(|_| Error::Format(format!("{} is not UTF-8 text", path.display())))
    }

    fn collection(&mut self, path: &Path) -> Result<MetaAnalysisCollection> {
        let text = self.read(path)?;
        let c = crate::data::parse_collection(&text)?;
        match self.global.subset_recent {
            Some(n) => subset_recent(&c, n),
            None => Ok(c),
        }
    }

    fn mcmc(&mut self) -> Result<McmcConfig> {
        let seed = match self.global.seed {
            Some(s) => s,
            None => {
                let s = rand::random::<u64>();
                eprintln!("seed: {s}");
                s
            }
        };
        self.seed = Some(seed);
        let cfg = McmcConfig {
            chains: self.global.chains,
            burn_in: self.global.burnin,
            kept: self.global.iters,
            thin: self.global.thin,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn io_context(e: std::io::Error, path: &Path) -> Error {
    Error::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_INPUT
            }
        }
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    let mut ctx = Context {
        global: cli.global,
        inputs: Vec::new(),
        seed: None,
    };
    let (name, config, report) = match &cli.command {
        Command::Validate { input } => (
            "validate",
            serde_json::json!({}),
            cmd_validate(&mut ctx, input)?,
        ),
        Command::Fit(a) => (
            "fit",
            serde_json::json!({ "all_params": a.all_params }),
            cmd_fit(&mut ctx, a)?,
        ),
        Command::Compare(a) => ("compare", serde_json::json!({}), cmd_compare(&mut ctx, a)?),
        Command::Approx(a) => ("approx", serde_json::json!({}), cmd_approx(&mut ctx, a)?),
        Command::Analyze(a) => ("analyze", serde_json::json!({}), cmd_analyze(&mut ctx, a)?),
        Command::TauEstimates { input, method } => (
            "tau-estimates",
            serde_json::json!({ "method": method }),
            cmd_tau_estimates(&mut ctx, input, *method)?,
        ),
    };
    let config = merge(config, command_config(&cli.command, &ctx.global));
    let out = &ctx.global.out;
    fs::create_dir_all(out).map_err(|e| io_context(e, out))?;
    let mut outputs = Vec::new();
    for (file, contents) in &report.files {
        let path = out.join(file);
        fs::write(&path, contents).map_err(|e| io_context(e, &path))?;
        outputs.push(file.clone());
    }
    outputs.push("manifest.json".into());
    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        subcommand: name.into(),
        inputs: ctx.inputs,
        seed: ctx.seed,
        config,
        outputs,
    };
    let path = out.join("manifest.json");
    fs::write(&path, to_json(&manifest)?).map_err(|e| io_context(e, &path))?;
    print!(
        "{}",
        if ctx.global.json {
            &report.json
        } else {
            &report.text
        }
    );
    Ok(())
}

fn merge(mut a: serde_json::Value, b: serde_json::Value) -> serde_json::Value {
    if let (Some(a), serde_json::Value::Object(b)) = (a.as_object_mut(), b) {
        a.extend(b);
    }
    a
}

/// Everything that influences the outputs, for the manifest. The output
/// directory and the display flag are left out.
fn command_config(cmd: &Command, g: &GlobalArgs) -> serde_json::Value {
    let mut v = serde_json::json!({ "subset_recent": g.subset_recent, "svg": g.svg });
    let mcmc = serde_json::json!({ "chains": g.chains, "kept": g.iters, "burn_in": g.burnin, "thin": g.thin });
    let extra = match cmd {
        Command::Validate { .. } | Command::TauEstimates { .. } => serde_json::json!({}),
        Command::Fit(a) => serde_json::json!({
            "mcmc": mcmc,
            "family": a.prior.is_none().then(|| a.family.name()),
            "prior": a.prior.as_ref().map(|p| p.to_string()),
            "model": a.model,
        }),
        Command::Compare(a) => serde_json::json!({
            "mcmc": mcmc,
            "families": a.families.iter().map(|f| f.name()).collect::<Vec<_>>(),
            "model": a.model,
        }),
        Command::Approx(a) => serde_json::json!({
            "family": a.family.map(|f| f.name()),
            "methods": a.methods,
            "fit_families": a.fit_families.iter().map(|f| f.name()).collect::<Vec<_>>(),
            "digits": a.digits,
        }),
        Command::Analyze(a) => {
            serde_json::json!({ "prior": a.prior.to_string(), "mu_prior": a.mu_prior })
        }
    };
    v = merge(v, extra);
    v
}

fn cmd_validate(ctx: &mut Context, input: &Path) -> Result<Report> {
    let c = ctx.collection(input)?;
    let r = validate_collection(&c);
    let mut text = format!("{} analyses, {} studies\n", r.n_analyses, r.n_studies);
    let mut sizes = c.sizes();
    sizes.sort_unstable();
    if let (Some(min), Some(max)) = (sizes.first(), sizes.last()) {
        text.push_str(&format!(
            "studies per analysis: min {min}, median {}, max {max}\n",
            sizes[sizes.len() / 2]
        ));
    }
    for w in &r.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        schema_version: u32,
        #[serde(flatten)]
        report: &'a crate::data::ValidationReport,
    }
    let json = to_json(&Doc {
        schema_version: SCHEMA_VERSION,
        report: &r,
    })?;
    let mut rep = Report::new(text, json.clone());
    rep.file("validation.json", json);
    Ok(rep)
}

fn cmd_fit(ctx: &mut Context, a: &FitArgs) -> Result<Report> {
    let c = ctx.collection(&a.input)?;
    let model = match &a.prior {
        Some(p) => {
            let m = ModelSpec {
                mu_prior_mean: a.model.mu_prior_mean,
                mu_prior_sd: a.model.mu_prior_sd,
                ..ModelSpec::fixed(*p)
            };
            m.validate()?;
            m
        }
        None => a.model.template().build(a.family)?,
    };
    let cfg = ctx.mcmc()?;
    let s = run_hierarchical(&c, &model, &cfg)?;
    let summary = s.summary()?;
    let dic = compute_dic(&s, &c)?;

    let mut text = format!(
        "{} analyses, {} chains x {} draws\n{:<10} {:>8} {:>8} {:>8} {:>8} {:>8} {:>7} {:>8}\n",
        c.len(),
        summary.chains,
        summary.kept_per_chain,
        "parameter",
        "mean",
        "sd",
        "50%",
        "95%",
        "99%",
        "R-hat",
        "ESS"
    );
    for p in &summary.parameters {
        let rhat = p
            .rhat
            .map_or_else(|| "NA".to_string(), |r| format!("{r:.3}"));
        text.push_str(&format!(
            "{:<10} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>7} {:>8.0}\n",
            p.name,
            p.summary.mean,
            p.summary.sd,
            p.summary.median,
            p.summary.q95,
            p.summary.q99,
            rhat,
            p.ess
        ));
    }
    text.push_str(&format!("DIC {:.2} (pD {:.2})\n", dic.dic, dic.p_d));
    for w in &summary.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }

    let json = to_json(&summary)?;
    let mut rep = Report::new(text, json.clone());
    rep.file("summary.json", json);
    rep.file("samples.csv", s.to_csv(a.all_params));
    #[derive(Serialize)]
    struct Doc<'a> {
        schema_version: u32,
        #[serde(flatten)]
        dic: &'a crate::dic::DicResult,
    }
    rep.file(
        "dic.json",
        to_json(&Doc {
            schema_version: SCHEMA_VERSION,
            dic: &dic,
        })?,
    );
    if ctx.global.svg {
        for name in s.hyper_names.iter().map(String::as_str).chain(["tau_pred"]) {
            let draws = s.pooled(name).expect("monitored parameter");
            let overlay = if name == "tau_pred" {
                mixture_match_prior(&s)
                    .ok()
                    .map(|p| density_series(&p.rounded.to_string(), &p.distribution, upper(&draws)))
            } else {
                None
            };
            let svg = histogram(
                &format!("posterior of {name}"),
                name,
                &draws,
                60,
                upper(&draws),
                overlay.as_slice(),
            );
            rep.file(&format!("{name}.svg"), svg);
        }
    }
    Ok(rep)
}

/// Upper plotting limit: the 99.5% sample quantile.
fn upper(draws: &[f64]) -> f64 {
    let mut d: Vec<f64> = draws.iter().copied().filter(|v| v.is_finite()).collect();
    d.sort_by(f64::total_cmp);
    if d.is_empty() {
        return 1.0;
    }
    crate::sampler::quantile_type7(&d, 0.995)
}

fn density_series(label: &str, d: &DistributionSpec, x_max: f64) -> Series {
    let n = 200;
    Series::new(
        label,
        (0..=n)
            .map(|i| {
                let x = x_max * i as f64 / n as f64;
                (x, d.density(x))
            })
            .collect(),
    )
}

fn cmd_compare(ctx: &mut Context, a: &CompareArgs) -> Result<Report> {
    let c = ctx.collection(&a.input)?;
    let cfg = ctx.mcmc()?;
    let cmp = compare_models(&c, &a.families, &a.model.template(), &cfg)?;
    let json = to_json(&cmp)?;
    let mut rep = Report::new(cmp.to_table(), json.clone());
    rep.file("dic.json", json);
    Ok(rep)
}

#[derive(Debug, Serialize)]
struct PriorsDoc {
    schema_version: u32,
    family: Option<HetFamily>,
    priors: Vec<PriorSpec>,
    table: ApproximationTable,
    warnings: Vec<String>,
}

fn family_from_summary(ctx: &mut Context, samples: &Path) -> Result<HetFamily> {
    let path = samples
        .parent()
        .unwrap_or(Path::new("."))
        .join("summary.json");
    if !path.is_file() {
        return Err(Error::Argument(format!(
            "no --family given and {} does not exist",
            path.display()
        )));
    }
    let text = ctx.read(&path)?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    match v.get("family").and_then(|f| f.as_str()) {
        Some(f) => f.parse(),
        None => Err(Error::Argument(format!(
            "{} records no family (fixed-prior run); pass --family",
            path.display()
        ))),
    }
}

fn cmd_approx(ctx: &mut Context, a: &ApproxArgs) -> Result<Report> {
    let family = match a.family {
        Some(f) => f,
        None => family_from_summary(ctx, &a.samples)?,
    };
    let text = ctx.read(&a.samples)?;
    let s = PosteriorSamples::from_csv(&text, Some(family))?;
    let draws = s.tau_pred();
    let source = a.samples.display().to_string();

    let mut priors = Vec::new();
    let mut warnings = Vec::new();
    let mut keep = |label: &str, r: Result<PriorSpec>| match r.and_then(|p| p.with_digits(a.digits))
    {
        Ok(p) => priors.push(p.with_source(source.clone())),
        Err(e) => warnings.push(format!("{label}: {e}")),
    };
    for m in &a.methods {
        match m.as_str() {
            "point" => {
                for stat in [Statistic::Mean, Statistic::Median, Statistic::Q95] {
                    keep(&format!("point {stat:?}"), point_estimate_prior(&s, stat));
                }
            }
            "mixture" => keep("mixture", mixture_match_prior(&s)),
            "ml" => {
                for &f in &a.fit_families {
                    keep(&format!("ml {}", f.name()), fit_predictive_ml(&draws, f));
                }
            }
            "moments" => {
                for &f in &a.fit_families {
                    keep(
                        &format!("moments {}", f.name()),
                        fit_predictive_moments(&draws, f),
                    );
                }
            }
            other => {
                return Err(Error::Argument(format!(
                    "unknown method '{other}' (expected point, mixture, ml or moments)"
                )))
            }
        }
    }
    if priors.is_empty() {
        return Err(Error::Fit(format!(
            "no prior could be derived: {}",
            warnings.join("; ")
        )));
    }
    let table = approximation_table(&priors, &draws)?;
    let mut text = table.to_table();
    for w in &warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    let doc = PriorsDoc {
        schema_version: SCHEMA_VERSION,
        family: Some(family),
        priors,
        table,
        warnings,
    };
    let json = to_json(&doc)?;
    let mut rep = Report::new(text, json.clone());
    rep.file("priors.json", json);
    if ctx.global.svg {
        let x_max = upper(&draws);
        let overlays: Vec<Series> = doc
            .priors
            .iter()
            .map(|p| density_series(&p.rounded.to_string(), &p.rounded, x_max))
            .collect();
        rep.file(
            "approximations.svg",
            histogram(
                "predictive heterogeneity",
                "tau",
                &draws,
                80,
                x_max,
                &overlays,
            ),
        );
    }
    Ok(rep)
}

fn cmd_analyze(ctx: &mut Context, a: &AnalyzeArgs) -> Result<Report> {
    let text = ctx.read(&a.input)?;
    let sm = SingleMeta::parse_csv(&text)?;
    let r = bayes_ma(&sm, &a.prior, a.mu_prior)?;
    let rows = forest_rows(&sm, &r);

    let mut text = format!(
        "{:<28} {:>9} {:>9} {:>9} {:>9}\n",
        "", "estimate", "lo", "hi", "width"
    );
    for row in &rows {
        text.push_str(&format!(
            "{:<28} {:>9.3} {:>9.3} {:>9.3} {:>9.3}\n",
            row.label,
            row.estimate,
            row.lo,
            row.hi,
            row.hi - row.lo
        ));
    }
    let mut density = String::from("tau,prior,posterior\n");
    for ((t, p), d) in r
        .tau
        .grid
        .iter()
        .zip(&r.tau.prior_density)
        .zip(&r.tau.density)
    {
        density.push_str(&format!("{t},{p},{d}\n"));
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        schema_version: u32,
        #[serde(flatten)]
        result: &'a crate::metaanalysis::MetaAnalysisResult,
    }
    let json = to_json(&Doc {
        schema_version: SCHEMA_VERSION,
        result: &r,
    })?;
    let mut rep = Report::new(text, json.clone());
    rep.file("analysis.json", json);
    rep.file("forest.csv", forest_to_csv(&rows));
    rep.file("density.csv", density);
    if ctx.global.svg {
        rep.file("forest.svg", forest_plot("forest plot", "effect", &rows));
        let x_max = r
            .tau
            .quantile(0.999)
            .max(a.prior.quantile(0.99).unwrap_or(0.0));
        let pts = |ys: &[f64]| {
            r.tau
                .grid
                .iter()
                .copied()
                .zip(ys.iter().copied())
                .collect::<Vec<_>>()
        };
        let series = [
            Series::new("prior", pts(&r.tau.prior_density)),
            Series::new("posterior", pts(&r.tau.density)),
        ];
        rep.file(
            "density.svg",
            line_plot("heterogeneity", "tau", &series, 0.0, x_max),
        );
    }
    Ok(rep)
}

fn cmd_tau_estimates(ctx: &mut Context, input: &Path, method: TauMethod) -> Result<Report> {
    let c = ctx.collection(input)?;
    let est = tau_estimate_collection(&c, method)?;
    let cell = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| format!("{x:.3}"));
    let mut text = format!("{:<20} {:>8}\n", "analysis", "tau");
    for (id, t) in &est.estimates {
        text.push_str(&format!("{id:<20} {t:>8.3}\n"));
    }
    text.push_str(&format!(
        "mean {}, median {}, fraction zero {}\n",
        cell(est.mean),
        cell(est.median),
        cell(est.fraction_zero)
    ));
    for w in &est.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        schema_version: u32,
        #[serde(flatten)]
        estimates: &'a crate::metaanalysis::TauEstimates,
    }
    let json = to_json(&Doc {
        schema_version: SCHEMA_VERSION,
        estimates: &est,
    })?;
    let mut rep = Report::new(text, json.clone());
    rep.file("tau_estimates.json", json);
    if ctx.global.svg {
        let values: Vec<f64> = est.estimates.iter().map(|e| e.1).collect();
        let x_max = values.iter().copied().fold(0.0, f64::max).max(1e-3) * 1.05;
        rep.file(
            "tau_estimates.svg",
            histogram("heterogeneity estimates", "tau", &values, 30, x_max, &[]),
        );
    }
    Ok(rep)
}
