//! `predict`, `estimate` and `verify` commands.
//!
//! Exit codes: 0 success, 1 a verification suite failed, 2 bad configuration,
//! 3 unsupported configuration, 4 runtime failure (sampler runaway, I/O).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::asymptotics::{predict_regular, predict_spectral, AsymptoticPrediction};
use crate::config::{OutputFormat, RunConfig, Settings, SEED_ENV};
use crate::error::Error;
use crate::estimators::{estimate_interval, estimate_spectral_disk, McConfig, Quantity};
use crate::heat::{Domain, DEFAULT_DISK_STEPS};
use crate::sampler::TimeChangeSpec;
use crate::suites::{self, ratio, SuiteOptions};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_SUITE_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_RUNTIME: i32 = 4;

pub const CSV_HEADER: &str = "t,quantity,value,stderr,rate_value,ratio,n_paths,seed";

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Unsupported(_) => EXIT_UNSUPPORTED,
            Error::Runaway { .. } | Error::LadderTooDeep(_) => EXIT_RUNTIME,
            Error::Domain(_) | Error::Parse(_) | Error::LadderTooShort { .. } | Error::Hypothesis(_) => EXIT_CONFIG,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "subheat", version, about = "Heat contents of time-changed Brownian motion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Small-time rate and constant for the configured clock and domain.
    Predict(Flags),
    /// Monte Carlo heat contents along a time ladder.
    Estimate(Flags),
    /// Run verification suites and report pass/fail as JSON.
    Verify(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// `stable:b`, `tempered:b,theta` or `mixed:b*w+b...`
    #[arg(long)]
    exponent: Option<String>,
    /// `interval:a,b` or `disk:R`
    #[arg(long)]
    domain: Option<String>,
    /// `sub` or `inv`
    #[arg(long = "time-change")]
    time_change: Option<String>,
    #[arg(long)]
    t: Option<String>,
    /// Comma-separated, strictly decreasing
    #[arg(long = "t-ladder")]
    t_ladder: Option<String>,
    #[arg(long)]
    paths: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// 0 uses every core
    #[arg(long)]
    workers: Option<String>,
    /// `csv` or `json`
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suite name, alias or `all`; comma-separated for several
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    quick: bool,
    /// key = value file using the long flag names as keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a suite tolerance, e.g. `inverse=0.03`
    #[arg(long = "tolerance", value_name = "SUITE=TOL")]
    tolerance: Vec<String>,
}

impl Flags {
    fn settings(&self) -> Result<Settings, Error> {
        let mut s = Settings::default();
        let pairs = [
            ("exponent", &self.exponent),
            ("domain", &self.domain),
            ("time-change", &self.time_change),
            ("t", &self.t),
            ("t-ladder", &self.t_ladder),
            ("paths", &self.paths),
            ("seed", &self.seed),
            ("workers", &self.workers),
            ("format", &self.format),
            ("suite", &self.suite),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                s.set(k, v.clone())?;
            }
        }
        if let Some(out) = &self.out {
            s.set("out", out.to_string_lossy())?;
        }
        if self.quick {
            s.set("quick", "true")?;
        }
        for t in &self.tolerance {
            let (k, v) = t.split_once('=').ok_or_else(|| Error::Parse(format!("--tolerance expects SUITE=TOL, got '{t}'")))?;
            s.set(&format!("tolerance.{}", k.trim()), v.trim())?;
        }
        Ok(s)
    }

    fn resolve(&self, env_seed: Option<&str>) -> Result<RunConfig, Error> {
        let base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.display())))?;
                Settings::parse_file(&text)?
            }
            None => Settings::default(),
        };
        base.overlay(&self.settings()?).resolve(env_seed)
    }
}

/// Result of one invocation: exit code and captured streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failed(code: i32, msg: impl Into<String>) -> Self {
        Self { code, stdout: String::new(), stderr: msg.into() }
    }
}

/// Runs the command line `args` (program name first). `env_seed` stands in
/// for `SUBHEAT_SEED`.
pub fn run<I, T>(args: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let text = e.render().to_string();
            return if code == EXIT_PASS {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome::failed(code, text)
            };
        }
    };
    let (flags, cmd): (&Flags, fn(&RunConfig) -> Result<(String, i32), Error>) = match &cli.command {
        Command::Predict(f) => (f, cmd_predict),
        Command::Estimate(f) => (f, cmd_estimate),
        Command::Verify(f) => (f, cmd_verify),
    };
    let cfg = match flags.resolve(env_seed) {
        Ok(c) => c,
        Err(e) => return Outcome::failed(e.exit_code(), format!("error: {e}\n")),
    };
    match cmd(&cfg) {
        Ok((text, code)) => match &cfg.out {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                Err(e) => Outcome::failed(EXIT_RUNTIME, format!("error: cannot write {}: {e}\n", path.display())),
            },
            None => Outcome { code, stdout: text, stderr: String::new() },
        },
        Err(e) => Outcome::failed(e.exit_code(), format!("error: {e}\n")),
    }
}

/// Entry point for the binary: reads the process arguments and environment,
/// prints, and returns the exit code.
pub fn main_with_env() -> i32 {
    let env_seed = std::env::var(SEED_ENV).ok();
    let out = run(std::env::args_os(), env_seed.as_deref());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn predictions(cfg: &RunConfig) -> Result<Vec<(Quantity, AsymptoticPrediction)>, Error> {
    let exp = cfg.exponent()?;
    Ok(vec![
        (Quantity::Spectral, predict_spectral(exp, &cfg.domain, cfg.kind)?),
        (Quantity::Regular, predict_regular(exp, &cfg.domain, cfg.kind)?),
    ])
}

/// Rows `(theorem_tag, quantity, rate, constant)`.
pub fn cmd_predict(cfg: &RunConfig) -> Result<(String, i32), Error> {
    let preds = predictions(cfg)?;
    let text = match cfg.format {
        OutputFormat::Csv => {
            let mut s = String::from("theorem_tag,quantity,rate,constant\n");
            for (q, p) in &preds {
                let _ = writeln!(s, "{},{},{},{}", p.theorem_tag, q.name(), p.rate.name(), num(p.constant));
            }
            s
        }
        OutputFormat::Json => {
            let rows: Vec<_> = preds
                .iter()
                .map(|(q, p)| json!({"theorem_tag": p.theorem_tag, "quantity": q.name(), "rate": p.rate.name(), "constant": p.constant}))
                .collect();
            serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
        }
    };
    Ok((text, EXIT_PASS))
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateRow {
    pub t: f64,
    pub quantity: &'static str,
    pub value: f64,
    pub stderr: f64,
    pub rate_value: f64,
    pub ratio: f64,
    pub n_paths: u64,
    pub seed: u64,
}

fn estimate_rows(cfg: &RunConfig) -> Result<Vec<EstimateRow>, Error> {
    let exp = cfg.exponent()?;
    let spec = TimeChangeSpec::new(exp.clone(), cfg.kind);
    let mc = McConfig::new(cfg.n_paths, cfg.seed).with_workers(cfg.workers);
    let quantities: &[Quantity] = match cfg.domain {
        Domain::Interval { .. } => &[Quantity::Spectral, Quantity::Regular],
        Domain::Disk { .. } => &[Quantity::Spectral],
    };
    let mut rows = Vec::new();
    for &t in &cfg.t_ladder {
        for &q in quantities {
            let pred = match q {
                Quantity::Spectral => predict_spectral(exp, &cfg.domain, cfg.kind),
                Quantity::Regular => predict_regular(exp, &cfg.domain, cfg.kind),
            };
            let pred = match pred {
                Ok(p) => Some(p),
                Err(Error::Unsupported(_)) => None,
                Err(e) => return Err(e),
            };
            let est = match cfg.domain {
                Domain::Interval { .. } => estimate_interval(&spec, &cfg.domain, t, q, &mc)?,
                Domain::Disk { .. } => estimate_spectral_disk(&spec, &cfg.domain, t, DEFAULT_DISK_STEPS, &mc)?,
            };
            let (rate_value, r) = match &pred {
                Some(p) => (p.rate.eval(t), ratio(&est, q, &cfg.domain, p, t).0),
                None => (f64::NAN, f64::NAN),
            };
            rows.push(EstimateRow {
                t,
                quantity: q.name(),
                value: est.value,
                stderr: est.stderr,
                rate_value,
                ratio: r,
                n_paths: est.n_paths,
                seed: est.seed,
            });
        }
    }
    Ok(rows)
}

/// One row per ladder time and quantity with the columns of [`CSV_HEADER`].
/// `ratio` is `(|Ω| - value)/rate_value` for the spectral content and
/// `value/rate_value` for the regular one; both are `NaN` when no limit law
/// is available for the configuration.
pub fn cmd_estimate(cfg: &RunConfig) -> Result<(String, i32), Error> {
    let rows = estimate_rows(cfg)?;
    let text = match cfg.format {
        OutputFormat::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    num(r.t),
                    r.quantity,
                    num(r.value),
                    num(r.stderr),
                    num(r.rate_value),
                    num(r.ratio),
                    r.n_paths,
                    r.seed
                );
            }
            s
        }
        OutputFormat::Json => serde_json::to_string_pretty(&rows).expect("serializable") + "\n",
    };
    Ok((text, EXIT_PASS))
}

/// Runs the selected suites; exit 1 if any check fails.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(String, i32), Error> {
    let mut selected = Vec::new();
    for name in &cfg.suites {
        for s in suites::resolve(name)? {
            if !selected.iter().any(|x: &&suites::Suite| x.name == s.name) {
                selected.push(s);
            }
        }
    }
    let opts = SuiteOptions { seed: cfg.seed, workers: cfg.workers, quick: cfg.quick, tolerances: cfg.tolerances.clone() };
    let mut reports = Vec::new();
    for s in selected {
        reports.push(s.run(&opts)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    let doc = json!({ "pass": pass, "seed": cfg.seed, "quick": cfg.quick, "suites": reports });
    let code = if pass { EXIT_PASS } else { EXIT_SUITE_FAILED };
    Ok((serde_json::to_string_pretty(&doc).expect("serializable") + "\n", code))
}
