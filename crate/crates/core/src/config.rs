//! Run configuration shared by the command-line front end and config files.
//!
//! A config file is flat `key = value` lines with the long flag names as
//! keys; `#` starts a comment. Flags override the file, the file overrides
//! defaults, and `SUBHEAT_SEED` supplies the default seed.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::LaplaceExponent;
use crate::heat::Domain;
use crate::sampler::TimeChangeKind;

pub const SEED_ENV: &str = "SUBHEAT_SEED";
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_PATHS: u64 = 100_000;
pub const DEFAULT_LADDER: &str = "1e-2,1e-4,1e-6";

const KEYS: &[&str] =
    &["exponent", "domain", "time-change", "t", "t-ladder", "paths", "seed", "workers", "format", "out", "suite", "quick"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub exponent: Option<LaplaceExponent>,
    pub domain: Domain,
    pub kind: TimeChangeKind,
    pub t_ladder: Vec<f64>,
    pub n_paths: u64,
    pub seed: u64,
    pub workers: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub suites: Vec<String>,
    pub quick: bool,
    /// Per-suite tolerance overrides, keyed by suite name.
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn exponent(&self) -> Result<&LaplaceExponent> {
        self.exponent.as_ref().ok_or_else(|| Error::Parse("--exponent is required".into()))
    }
}

/// Unparsed settings from one source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        let known = KEYS.contains(&key) || key.strip_prefix("tolerance.").is_some_and(|s| !s.is_empty());
        if !known {
            return Err(Error::Parse(format!("unknown setting '{key}'")));
        }
        self.0.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let mut s = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", n + 1)))?;
            s.set(k.trim(), v.trim())?;
        }
        Ok(s)
    }

    /// `self` with every key present in `over` replaced.
    pub fn overlay(mut self, over: &Settings) -> Self {
        self.0.extend(over.0.iter().map(|(k, v)| (k.clone(), v.clone())));
        self
    }

    pub fn resolve(&self, env_seed: Option<&str>) -> Result<RunConfig> {
        let num = |key: &str, v: &str| -> Result<u64> {
            v.parse().map_err(|_| Error::Parse(format!("{key}: expected a nonnegative integer, got '{v}'")))
        };
        let exponent = self.get("exponent").map(str::parse).transpose()?;
        let domain = self.get("domain").unwrap_or("interval:0,1").parse()?;
        let kind = match self.get("time-change").unwrap_or("sub") {
            "sub" => TimeChangeKind::Subordinator,
            "inv" => TimeChangeKind::InverseSubordinator,
            other => return Err(Error::Parse(format!("time-change must be 'sub' or 'inv', got '{other}'"))),
        };
        let t_ladder = match (self.get("t"), self.get("t-ladder")) {
            (Some(_), Some(_)) => return Err(Error::Parse("give either --t or --t-ladder, not both".into())),
            (Some(t), None) => parse_ladder(t)?,
            (None, l) => parse_ladder(l.unwrap_or(DEFAULT_LADDER))?,
        };
        let seed = match (self.get("seed"), env_seed) {
            (Some(s), _) => num("seed", s)?,
            (None, Some(s)) => num(SEED_ENV, s)?,
            (None, None) => DEFAULT_SEED,
        };
        let n_paths = self.get("paths").map(|v| num("paths", v)).transpose()?.unwrap_or(DEFAULT_PATHS);
        if n_paths < 2 {
            return Err(Error::Parse("paths must be at least 2".into()));
        }
        let workers = self.get("workers").map(|v| num("workers", v)).transpose()?.unwrap_or(0) as usize;
        let format = match self.get("format").unwrap_or("csv") {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => return Err(Error::Parse(format!("format must be 'csv' or 'json', got '{other}'"))),
        };
        let quick = match self.get("quick").unwrap_or("false") {
            "true" | "1" | "yes" => true,
            "false" | "0" | "no" => false,
            other => return Err(Error::Parse(format!("quick: expected a boolean, got '{other}'"))),
        };
        let suites = self.get("suite").unwrap_or("all").split(',').map(|s| s.trim().to_string()).collect();
        let mut tolerances = BTreeMap::new();
        for (k, v) in &self.0 {
            if let Some(name) = k.strip_prefix("tolerance.") {
                let tol: f64 = v.parse().map_err(|_| Error::Parse(format!("{k}: expected a number, got '{v}'")))?;
                if !(tol > 0.0) {
                    return Err(Error::Parse(format!("{k} must be positive")));
                }
                tolerances.insert(name.to_string(), tol);
            }
        }
        Ok(RunConfig {
            exponent,
            domain,
            kind,
            t_ladder,
            n_paths,
            seed,
            workers,
            format,
            out: self.get("out").map(PathBuf::from),
            suites,
            quick,
            tolerances,
        })
    }
}

/// Comma-separated, positive, strictly decreasing times.
pub fn parse_ladder(text: &str) -> Result<Vec<f64>> {
    let ladder = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad time '{s}' in ladder"))))
        .collect::<Result<Vec<_>>>()?;
    if ladder.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::Parse("ladder times must be positive and finite".into()));
    }
    if ladder.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Parse("ladder must be strictly decreasing".into()));
    }
    Ok(ladder)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_flags_over_file_over_defaults() {
        let file = Settings::parse_file("# run\nexponent = stable:0.75\nseed=5\npaths = 1000 # small\n").unwrap();
        let mut flags = Settings::default();
        flags.set("seed", "9").unwrap();
        let cfg = file.overlay(&flags).resolve(Some("77")).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.n_paths, 1000);
        assert_eq!(cfg.workers, 0);
        assert_eq!(cfg.exponent, Some(LaplaceExponent::stable(0.75).unwrap()));
        assert_eq!(cfg.t_ladder, vec![1e-2, 1e-4, 1e-6]);
    }

    #[test]
    fn env_seed_is_only_a_default() {
        assert_eq!(Settings::default().resolve(Some("42")).unwrap().seed, 42);
        assert_eq!(Settings::default().resolve(None).unwrap().seed, DEFAULT_SEED);
        assert!(Settings::default().resolve(Some("x")).is_err());
    }

    #[test]
    fn ladder_rules() {
        assert_eq!(parse_ladder("1e-2, 1e-3").unwrap(), vec![1e-2, 1e-3]);
        assert!(parse_ladder("1e-3,1e-2").is_err());
        assert!(parse_ladder("1e-3,1e-3").is_err());
        assert!(parse_ladder("0").is_err());
        assert!(parse_ladder("a").is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Settings::parse_file("colour = red").is_err());
        assert!(Settings::parse_file("novalue").is_err());
        let mut s = Settings::default();
        s.set("t", "1e-3").unwrap();
        s.set("t-ladder", "1e-3,1e-4").unwrap();
        assert!(s.resolve(None).is_err());
        let s = Settings::parse_file("tolerance.inverse = 0.05\nformat = xml").unwrap();
        assert!(s.resolve(None).is_err());
        let s = Settings::parse_file("tolerance.inverse = 0.05\ntime-change = inv").unwrap();
        let cfg = s.resolve(None).unwrap();
        assert_eq!(cfg.tolerances["inverse"], 0.05);
        assert_eq!(cfg.kind, TimeChangeKind::InverseSubordinator);
    }
}
