//! Command-line front end for the `zonal` library: identity verification,
//! ratio-convergence tables and raw evaluations.

pub mod config;
pub mod eval;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use zonal::charpoly_mc::{ratio_convergence_experiment, verify_identity, DualityReport, IdentityId, McBudget, RatioTable};
use zonal::ensembles::SeedPath;
use zonal::special_functions::AsymptoticIdentity;
use zonal::ZonalError;

use config::{parse_complex_list, parse_partition, parse_usize_list, ExperimentConfig, Format, RatioConfig, VerifyConfig};
use output::{emit, Envelope};

/// Environment variable supplying the master seed when neither a flag nor a
/// config file sets one.
pub const SEED_ENV: &str = "ZONAL_SEED";
pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Lib(#[from] ZonalError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
            CliError::Lib(e) => match e {
                ZonalError::Budget(_) => 3,
                ZonalError::DegeneracyViolation { .. } | ZonalError::NonFiniteLogDensity => 1,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "zonal", version, about = "Jack polynomial dualities for random matrix characteristic polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify one identity by exact evaluation and Monte Carlo.
    Verify(VerifyArgs),
    /// Tabulate finite-N ratios against their large-N limits.
    Ratio(RatioArgs),
    /// Evaluate a special function: EN, jack, hypergeom, selberg, pochhammer.
    Eval(eval::EvalArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Identity label, e.g. A.3a, 7.U1, SM2.
    #[arg(long)]
    pub identity: Option<String>,
    #[arg(long = "N", visible_alias = "Nvars")]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long = "K")]
    pub big_k: Option<usize>,
    /// Semicolon-separated `re,im` pairs.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Comma-separated parts.
    #[arg(long)]
    pub kappa: Option<String>,
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub ensemble: Option<String>,
    #[arg(long)]
    pub samples: Option<u64>,
    /// Master seed; defaults to $ZONAL_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub stream: Option<u64>,
    #[arg(long)]
    pub proposal_scale: Option<f64>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long)]
    pub thinning: Option<usize>,
    #[arg(long)]
    pub chains: Option<usize>,
    #[arg(long)]
    pub batch_count: Option<usize>,
    #[command(flatten)]
    pub io: IoArgs,
    /// Also write the full JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    /// One of K1, K2, K1x, K2x, GE1.
    #[arg(long)]
    pub identity: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Semicolon-separated points; only |z| is used.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Largest N of the default doubling schedule.
    #[arg(long = "Nmax")]
    pub n_max: Option<usize>,
    /// Explicit N schedule, e.g. "10;20;50".
    #[arg(long = "N")]
    pub n_schedule: Option<String>,
    #[arg(long = "K")]
    pub big_k: Option<usize>,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// TOML experiment config; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<String>,
    /// Emit the full JSON report instead of CSV.
    #[arg(long)]
    pub json: bool,
    /// Print the effective config as TOML and exit.
    #[arg(long)]
    pub dump_config: bool,
}

impl IoArgs {
    fn load(&self) -> Result<Option<ExperimentConfig>, CliError> {
        let Some(path) = &self.config else { return Ok(None) };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        ExperimentConfig::from_toml(&text).map(Some)
    }

    fn apply(&self, output: &mut Option<String>, format: &mut Format) {
        if self.out.is_some() {
            output.clone_from(&self.out);
        }
        if self.json {
            *format = Format::Json;
        }
    }
}

fn env_seed() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("{SEED_ENV}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn set_opt<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

pub fn verify_config(args: &VerifyArgs) -> Result<VerifyConfig, CliError> {
    let mut cfg = match args.io.load()? {
        Some(ExperimentConfig::Verify(v)) => v,
        Some(_) => return Err(CliError::Config("config file is not a verify config".into())),
        None => VerifyConfig {
            identity: String::new(),
            samples: DEFAULT_SAMPLES,
            seed: env_seed()?.unwrap_or(0),
            stream: 0,
            params: Default::default(),
            mcmc: Default::default(),
            output: None,
            format: Format::Csv,
        },
    };
    set(&mut cfg.identity, args.identity.clone());
    if cfg.identity.is_empty() {
        return Err(CliError::Config("--identity is required".into()));
    }
    cfg.identity.parse::<IdentityId>().map_err(|e| CliError::Config(e.to_string()))?;
    set(&mut cfg.samples, args.samples);
    set(&mut cfg.seed, args.seed);
    set(&mut cfg.stream, args.stream);
    let p = &mut cfg.params;
    set(&mut p.n, args.n);
    set(&mut p.k, args.k);
    set_opt(&mut p.big_k, args.big_k);
    if let Some(z) = &args.z {
        p.z = parse_complex_list(z)?;
    }
    if let Some(w) = &args.w {
        p.w = parse_complex_list(w)?;
    }
    set_opt(&mut p.alpha, args.alpha);
    set_opt(&mut p.beta, args.beta);
    set_opt(&mut p.a, args.a);
    set_opt(&mut p.kappa, args.kappa.as_deref().map(parse_partition).transpose()?);
    set_opt(&mut p.mu, args.mu.as_deref().map(parse_partition).transpose()?);
    set_opt(&mut p.p, args.p);
    set_opt(&mut p.trials, args.trials);
    if let Some(e) = &args.ensemble {
        p.ensemble = Some(e.parse().map_err(|e: ZonalError| CliError::Config(e.to_string()))?);
    }
    let m = &mut cfg.mcmc;
    set(&mut m.proposal_scale, args.proposal_scale);
    set(&mut m.burn_in, args.burn_in);
    set(&mut m.thinning, args.thinning);
    set(&mut m.chains, args.chains);
    set(&mut m.batch_count, args.batch_count);
    args.io.apply(&mut cfg.output, &mut cfg.format);
    Ok(cfg)
}

/// Doubling schedule from 5 up to `n_max`, always ending at `n_max`.
pub fn doubling_schedule(n_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = 5;
    while n < n_max {
        out.push(n);
        n *= 2;
    }
    out.push(n_max.max(1));
    out
}

pub fn ratio_config(args: &RatioArgs) -> Result<RatioConfig, CliError> {
    let loaded = match args.io.load()? {
        Some(ExperimentConfig::Ratio(r)) => Some(r),
        Some(_) => return Err(CliError::Config("config file is not a ratio config".into())),
        None => None,
    };
    let identity = match (&args.identity, &loaded) {
        (Some(s), _) => s.parse::<AsymptoticIdentity>().map_err(|e| CliError::Config(e.to_string()))?,
        (None, Some(r)) => r.identity,
        (None, None) => return Err(CliError::Config("--identity is required".into())),
    };
    let spherical = matches!(identity, AsymptoticIdentity::K1x | AsymptoticIdentity::K2x);
    let mut cfg = loaded.unwrap_or_else(|| RatioConfig {
        identity,
        k: 1,
        abs_z: if spherical { (1..=9).map(|i| i as f64 / 10.0).collect() } else { vec![0.0, 0.5] },
        n_schedule: doubling_schedule(if spherical { 800 } else { 50 }),
        big_k: None,
        output: None,
        format: Format::Csv,
    });
    cfg.identity = identity;
    set(&mut cfg.k, args.k);
    if let Some(z) = &args.z {
        cfg.abs_z = parse_complex_list(z)?.iter().map(|z| z.norm()).collect();
    }
    if let Some(n) = args.n_max {
        cfg.n_schedule = doubling_schedule(n);
    }
    if let Some(s) = &args.n_schedule {
        cfg.n_schedule = parse_usize_list(s)?;
    }
    set_opt(&mut cfg.big_k, args.big_k);
    if cfg.abs_z.is_empty() || cfg.n_schedule.is_empty() {
        return Err(CliError::Config("empty |z| grid or N schedule".into()));
    }
    if cfg.n_schedule.contains(&0) {
        return Err(CliError::Config("N must be positive".into()));
    }
    if !spherical {
        if let Some(&bad) = cfg.abs_z.iter().find(|&&r| r >= 1.0) {
            return Err(CliError::Config(format!("|z| = {bad} must be < 1 for {identity}")));
        }
    }
    args.io.apply(&mut cfg.output, &mut cfg.format);
    Ok(cfg)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn verify_csv(env: &Envelope<DualityReport>) -> String {
    let r = env.report;
    let p = &r.params;
    let worst = r
        .z_scores
        .iter()
        .max_by(|a, b| (a.value / a.threshold).total_cmp(&(b.value / b.threshold)));
    let max_residual = r.residuals.iter().map(|x| x.value).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    let est = |e: &Option<zonal::charpoly_mc::MCEstimate>| match e {
        Some(e) => format!("{},{},{},{}", e.mean.re, e.mean.im, e.std_error, e.n_samples),
        None => ",,,".into(),
    };
    let mut s = env.csv_preamble();
    s.push_str(
        "identity,N,k,K,scaling,exact_re,exact_im,lhs_re,lhs_im,lhs_se,lhs_n,rhs_re,rhs_im,rhs_se,rhs_n,worst_z,worst_z_threshold,max_residual,verdict\n",
    );
    s.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}\n",
        r.identity_id.label(),
        p.n,
        p.k,
        opt(p.big_k),
        r.scaling,
        r.exact_value.map(|c| format!("{},{}", c.re, c.im)).unwrap_or_else(|| ",".into()),
        est(&r.lhs_mc),
        est(&r.rhs_mc),
        opt(worst.map(|z| z.value)),
        opt(worst.map(|z| z.threshold)),
        opt(max_residual),
        if r.passed() { "pass" } else { "fail" },
    ));
    s
}

pub fn ratio_csv(env: &Envelope<RatioTable>) -> String {
    let mut s = env.csv_preamble();
    s.push_str(
        "N,abs_z,finite_N_ratio,prediction,rel_err,n_power,compensated_ratio,compensated_prediction,compensated_rel_err\n",
    );
    for r in &env.report.rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.abs_z,
            r.ratio,
            r.prediction,
            r.rel_err,
            opt(r.n_power),
            opt(r.compensated_ratio),
            opt(r.compensated_prediction),
            opt(r.compensated_rel_err)
        ));
    }
    for f in &env.report.fits {
        s.push_str(&format!(
            "# fit N={} exponent={} target_exponent={} constant={} max_log_residual={}\n",
            f.n, f.exponent, f.target_exponent, f.constant, f.max_log_residual
        ));
    }
    s
}

fn run_verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let cfg = verify_config(args)?;
    let wrapped = ExperimentConfig::Verify(cfg.clone());
    if args.io.dump_config {
        print!("{}", wrapped.to_toml());
        return Ok(0);
    }
    let id: IdentityId = cfg.identity.parse()?;
    let mut budget = McBudget::new(cfg.samples, SeedPath::new(cfg.seed, cfg.stream));
    budget.mcmc = cfg.mcmc;
    let report = verify_identity(id, &cfg.params, &budget)?;
    let env = Envelope::new(&wrapped, &report);
    if let Some(path) = &args.report {
        output::write_atomic(path, &env.to_json())?;
    }
    let text = match cfg.format {
        Format::Csv => verify_csv(&env),
        Format::Json => env.to_json(),
    };
    emit(cfg.output.as_deref(), &text)?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn run_ratio(args: &RatioArgs) -> Result<i32, CliError> {
    let cfg = ratio_config(args)?;
    let wrapped = ExperimentConfig::Ratio(cfg.clone());
    if args.io.dump_config {
        print!("{}", wrapped.to_toml());
        return Ok(0);
    }
    let table = ratio_convergence_experiment(cfg.identity, cfg.k, &cfg.abs_z, &cfg.n_schedule, cfg.big_k)?;
    let env = Envelope::new(&wrapped, &table);
    let text = match cfg.format {
        Format::Csv => ratio_csv(&env),
        Format::Json => env.to_json(),
    };
    emit(cfg.output.as_deref(), &text)?;
    Ok(0)
}

/// Runs one parsed command line; returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Ratio(a) => run_ratio(a),
        Command::Eval(a) => eval::run(a),
    }
}
