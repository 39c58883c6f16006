//! Verification suites: each runs one convergence or identity protocol and
//! reports target, achieved value and tolerance per check.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::asymptotics::{expansion, predict_regular, predict_spectral, stable_moment, AsymptoticPrediction};
use crate::diagnostics::{check_inverse_moments, check_levy_convergence, check_small_ball, mc_stable_moment, TestFunction};
use crate::error::{Error, Result};
use crate::estimators::{estimate_interval, estimate_spectral_disk, Estimate, McConfig, Quantity};
use crate::exponent::LaplaceExponent;
use crate::heat::{exact_q_interval, mc_q_disk, mc_q_interval_walk, q_deficit_eigen, q_deficit_images, series_switch, Domain};
use crate::heat::{subordinate_q_deficit_interval, DEFAULT_DISK_STEPS};
use crate::sampler::{TimeChangeKind, TimeChangeSpec};
use crate::special::{gamma, FRAC_1_SQRT_PI};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub target: f64,
    pub achieved: f64,
    pub stderr: f64,
    /// Relative tolerance, or absolute where the label says so.
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub workers: usize,
    /// Tenfold fewer paths.
    pub quick: bool,
    pub tolerances: BTreeMap<String, f64>,
}

impl SuiteOptions {
    pub fn new(seed: u64) -> Self {
        Self { seed, workers: 0, quick: false, tolerances: BTreeMap::new() }
    }

    fn mc(&self, n: u64) -> McConfig {
        McConfig::new(if self.quick { (n / 10).max(1000) } else { n }, self.seed).with_workers(self.workers)
    }
}

type Runner = fn(&SuiteOptions, f64) -> Result<Vec<Check>>;

pub struct Suite {
    pub name: &'static str,
    /// Legacy labels accepted by `verify --suite`.
    pub aliases: &'static [&'static str],
    pub summary: &'static str,
    pub tolerance: f64,
    run: Runner,
}

pub const SUITES: &[Suite] = &[
    Suite { name: "high-index", aliases: &["thm-3.6"], summary: "β = 3/4 stable clock, t^{2/3} rate", tolerance: 0.03, run: high_index },
    Suite { name: "critical", aliases: &["prop-3.8"], summary: "β = 1/2 stable clock, t log(1/t) rate", tolerance: 0.10, run: critical },
    Suite { name: "critical-mixed", aliases: &["thm-3.10"], summary: "φ = s^{1/2} + s^{1/4}, t log(1/t) rate", tolerance: 0.10, run: critical_mixed },
    Suite { name: "low-index", aliases: &["thm-3.13"], summary: "β = 1/4 stable clock, linear rate", tolerance: 0.02, run: low_index },
    Suite { name: "inverse", aliases: &["thm-4.3"], summary: "inverse stable clocks, t^{β/2} rate", tolerance: 0.02, run: inverse },
    Suite { name: "universality", aliases: &[], summary: "inverse tempered clock, φ(1/t)^{-1/2} rate", tolerance: 0.05, run: universality },
    Suite { name: "expansion", aliases: &["thm-4.4"], summary: "expansion coefficient identity", tolerance: 1e-12, run: expansion_identity },
    Suite { name: "moments", aliases: &[], summary: "stable and inverse-stable moments", tolerance: 0.0, run: moments },
    Suite { name: "levy-convergence", aliases: &["prop-3.12"], summary: "E f(D_t)/t → ∫ f dν", tolerance: 0.02, run: levy_convergence },
    Suite { name: "small-ball", aliases: &[], summary: "small-ball exponent β/(1-β)", tolerance: 0.1, run: small_ball },
    Suite { name: "oracle", aliases: &[], summary: "Brownian heat-content oracles", tolerance: 0.005, run: oracle },
    Suite { name: "determinism", aliases: &[], summary: "estimate output independent of workers", tolerance: 0.0, run: determinism },
];

/// Suites selected by a name or alias; `all` selects every suite.
pub fn resolve(name: &str) -> Result<Vec<&'static Suite>> {
    if name == "all" {
        return Ok(SUITES.iter().collect());
    }
    SUITES
        .iter()
        .find(|s| s.name == name || s.aliases.contains(&name))
        .map(|s| vec![s])
        .ok_or_else(|| Error::Parse(format!("unknown suite '{name}'")))
}

impl Suite {
    pub fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport> {
        let start = std::time::Instant::now();
        let tol = opts.tolerances.get(self.name).copied().unwrap_or(self.tolerance);
        let checks = (self.run)(opts, tol)?;
        Ok(SuiteReport {
            suite: self.name.to_string(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            wall_time: start.elapsed().as_secs_f64(),
        })
    }
}

fn unit() -> Domain {
    Domain::interval(0.0, 1.0).expect("valid interval")
}

fn stable(beta: f64) -> LaplaceExponent {
    LaplaceExponent::stable(beta).expect("valid index")
}

/// `(|Ω| - Q̃(t))/R(t)` or `H(t)/R(t)` with its standard error.
pub fn ratio(est: &Estimate, quantity: Quantity, dom: &Domain, pred: &AsymptoticPrediction, t: f64) -> (f64, f64) {
    let r = pred.rate.eval(t);
    let v = match quantity {
        Quantity::Spectral => dom.volume() - est.value,
        Quantity::Regular => est.value,
    };
    (v / r, est.stderr / r)
}

fn ratio_check(label: String, achieved: (f64, f64), target: f64, tol: f64) -> Check {
    let (value, se) = achieved;
    let pass = (value - target).abs() <= (4.0 * se).max(tol * target.abs());
    Check { label, target, achieved: value, stderr: se, tolerance: tol, pass }
}

fn convergence_check(
    label: &str,
    spec: &TimeChangeSpec,
    quantity: Quantity,
    t: f64,
    cfg: &McConfig,
    tol: f64,
) -> Result<Check> {
    let dom = unit();
    let pred = match quantity {
        Quantity::Spectral => predict_spectral(&spec.exponent, &dom, spec.kind)?,
        Quantity::Regular => predict_regular(&spec.exponent, &dom, spec.kind)?,
    };
    let est = estimate_interval(spec, &dom, t, quantity, cfg)?;
    Ok(ratio_check(
        format!("{label} {} ratio at t={t:e}", quantity.name()),
        ratio(&est, quantity, &dom, &pred, t),
        pred.constant,
        tol,
    ))
}

fn high_index(opts: &SuiteOptions, tol: f64) -> Result<Vec<Check>> {
    let spec = TimeChangeSpec::subordinator(stable(0.75));
    let cfg = opts.mc(1_000_000);
    Ok(vec![
        convergence_check("stable:0.75", &spec, Quantity::Spectral, 1e-8, &cfg, tol)?,
        convergence_check("stable:0.75", &spec, Quantity::Regular, 1e-8, &cfg, tol)?,
    ])
}

// Ratios along the ladder must approach the constant monotonically (up to
// 2 stderr of slack per step) and the last one must be within tolerance.
fn log_rate_ladder(label: &str, exp: LaplaceExponent, opts: &SuiteOptions, tol: f64) -> Result<Vec<Check>> {
    let dom = unit();
    let spec = TimeChangeSpec::subordinator(exp);
    let pred = predict_spectral(&spec.exponent, &dom, spec.kind)?;
    let cfg = opts.mc(1_000_000);
    let mut ratios = Vec::new();
    for &t in &[1e-6, 1e-8, 1e-10] {
        let est = estimate_interval(&spec, &dom, t, Quantity::Spectral, &cfg)?;
        ratios.push((t, ratio(&est, Quantity::Spectral, &dom, &pred, t)));
    }
    let gaps: Vec<f64> = ratios.iter().map(|(_, (r, _))| (r - pred.constant).abs()).collect();
    let monotone = ratios.windows(2).zip(gaps.windows(2)).all(|(w, g)| g[1] <= g[0] + 2.0 * (w[0].1 .1 + w[1].1 .1));
    let mut checks: Vec<Check> = ratios
        .iter()
        .map(|(t, (r, se))| Check {
            label: format!("{label} spectral ratio at t={t:e}"),
            target: pred.constant,
            achieved: *r,
            stderr: *se,
            tolerance: tol,
            pass: true,
        })
        .collect();
    for (t, (r, se)) in &ratios {
        let exact = subordinate_q_deficit_interval(&spec.exponent, &dom, *t)? / pred.rate.eval(*t);
        checks.push(Check {
            label: format!("{label} Monte Carlo vs eigen-sum ratio at t={t:e}"),
            target: exact,
            achieved: *r,
            stderr: *se,
            tolerance: 0.0,
            pass: (r - exact).abs() <= 4.0 * se,
        });
    }
    let last = &mut checks[ratios.len() - 1];
    last.pass = (last.achieved - last.target).abs() <= tol * last.target;
    checks.push(Check {
        label: format!("{label} distance to constant shrinks along the ladder"),
        target: 0.0,
        achieved: *gaps.last().expect("ladder"),
        stderr: 0.0,
        tolerance: 0.0,
        pass: monotone,
    });
    Ok(checks)
}

fn critical(opts: &SuiteOptions, tol: f64) -> Result<Vec<Check>> {
    log_rate_ladder("stable:0.5", stable(0.5), opts, tol)
}

fn critical_mixed(opts: &SuiteOptions, tol: f64) -> Result<Vec<Check>> {
    log_rate_ladder("mixed:0.25+0.5", "mixed:0.25+0.5".parse()?, opts, tol)
}

fn low_index(opts: &SuiteOptions, tol: f64) -> Result<Vec<Check>> {
    let spec = TimeChangeSpec::subordinator(stable(0.25));
    Ok(vec![convergence_check("stable:0.25", &spec, Quantity::Spectral, 1e-6, &opts.mc(1_000_000), tol)?])
}

fn inverse(opts: &SuiteOptions, tol: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for beta in [0.25, 0.5, 0.75] {
        let spec = TimeChangeSpec::inverse(stable(beta));
        let cfg = opts.mc(1_000_000);
        let label = format!("inverse stable:{beta}");
        checks.push(convergence_check(&label, &spec, Quantity::Spectral, 1e-6, &cfg, tol)?);
        checks.push(convergence_check(&label, &spec, Quantity::Regular, 1e-6, &cfg, tol)?);
    }
    Ok(checks)
}

fn universality(opts: &SuiteOptions, tol: f64) -> Result<Vec<Check>> {
    let spec = TimeChangeSpec::inverse(LaplaceExponent::tempered(0.5, 1.0)?);
    Ok(vec![convergence_check("inverse tempered:0.5,1", &spec, Quantity::Spectral, 1e-5, &opts.mc(100_000), tol)?])
}

fn expansion_identity(_: &SuiteOptions, tol: f64) -> Result<Vec<Check>> {
    [0.25, 0.5, 0.75]
        .iter()
        .map(|&beta| {
            let c = expansion(beta, &[4.0 * FRAC_1_SQRT_PI])?[0].coefficient;
            let target = 2.0 / gamma(1.0 + beta / 2.0);
            Ok(Check {
                label: format!("first coefficient for β={beta} (absolute)"),
                target,
                achieved: c,
                stderr: 0.0,
                tolerance: tol,
                pass: (c - target).abs() <= tol,
            })
        })
        .collect()
}

fn sigma_check(label: String, est: &Estimate, target: f64) -> Check {
    Check {
        label,
        target,
        achieved: est.value,
        stderr: est.stderr,
        tolerance: 0.0,
        pass: (est.value - target).abs() <= 4.0 * est.stderr,
    }
}

fn moments(opts: &SuiteOptions, _: f64) -> Result<Vec<Check>> {
    let cfg = opts.mc(1_000_000);
    let mut checks = Vec::new();
    // orders with 2γ < β so that the sample variance is finite
    for (beta, g) in [(0.75, 0.25), (0.5, 0.2), (0.3, -0.5)] {
        let est = mc_stable_moment(beta, g, &cfg)?;
        checks.push(sigma_check(format!("E[S_1^{g}] for β={beta} (4 stderr)"), &est, stable_moment(beta, g)?));
    }
    for (beta, p) in [(0.5, 0.5), (0.25, 1.0), (0.75, 2.0)] {
        let spec = TimeChangeSpec::inverse(stable(beta));
        let report = check_inverse_moments(&spec, p, &[1e-2, 1e-4, 1e-6], &cfg)?;
        for point in &report.points {
            let est = Estimate { value: point.value, stderr: point.stderr, n_paths: cfg.n_paths, seed: cfg.seed, wall_time: 0.0 };
            checks.push(sigma_check(
                format!("E[E_t^{p}] φ(1/t)^{p} for β={beta} at t={:e} (4 stderr)", point.t),
                &est,
                report.target,
            ));
        }
    }
    Ok(checks)
}

fn levy_convergence(opts: &SuiteOptions, tol: f64) -> Result<Vec<Check>> {
    let report =
        check_levy_convergence(&stable(0.25), TestFunction::PowerExp { gamma: 0.5 }, &[1e-2, 1e-3, 1e-4], &opts.mc(1_000_000))?;
    let last = report.points.last().expect("ladder");
    Ok(vec![ratio_check(
        format!("E[f(D_t)]/t at t={:e}, f = min(x,1)^0.5 e^-x", last.t),
        (last.value, last.stderr),
        report.target,
        tol,
    )])
}

fn small_ball(opts: &SuiteOptions, tol: f64) -> Result<Vec<Check>> {
    let ladder = [1e-2, 10f64.powf(-2.5), 1e-3, 10f64.powf(-3.5), 1e-4];
    [0.25, 0.5]
        .iter()
        .map(|&beta| {
            let r = check_small_ball(&stable(beta), 1.0, &ladder, &opts.mc(100_000))?;
            Ok(Check {
                label: format!("small-ball slope for β={beta} (absolute)"),
                target: r.target,
                achieved: r.fitted,
                stderr: 0.0,
                tolerance: tol,
                pass: (r.fitted - r.target).abs() <= tol,
            })
        })
        .collect()
}

fn oracle(opts: &SuiteOptions, tol: f64) -> Result<Vec<Check>> {
    let mut jump: f64 = 0.0;
    for l in [0.5, 1.0, 2.0, 5.0] {
        let s = series_switch(l);
        jump = jump.max((q_deficit_eigen(l, s) - q_deficit_images(l, s)).abs());
    }
    let u = 1e-10;
    let lim = (1.0 - exact_q_interval(&unit(), u)?) / u.sqrt();
    let want = 4.0 * FRAC_1_SQRT_PI;
    let walk_u = 1e-3;
    let walk = mc_q_interval_walk(&unit(), walk_u, DEFAULT_DISK_STEPS, &opts.mc(200_000))?;
    let exact = exact_q_interval(&unit(), walk_u)?;
    let disk_u = 1e-4;
    let disk = mc_q_disk(&Domain::disk(1.0)?, disk_u, DEFAULT_DISK_STEPS, &opts.mc(100_000))?;
    let disk_ratio = (std::f64::consts::PI - disk.value) / disk_u.sqrt();
    let disk_target = 2.0 * 2.0 * std::f64::consts::PI * FRAC_1_SQRT_PI;
    Ok(vec![
        Check {
            label: "series switch continuity (absolute)".into(),
            target: 0.0,
            achieved: jump,
            stderr: 0.0,
            tolerance: 1e-12,
            pass: jump <= 1e-12,
        },
        Check {
            label: "(|Ω| - Q(u))/√u at u=1e-10".into(),
            target: want,
            achieved: lim,
            stderr: 0.0,
            tolerance: 1e-4,
            pass: ((lim - want) / want).abs() <= 1e-4,
        },
        Check {
            label: "bridge-corrected walk vs exact Q on (0,1) at u=1e-3".into(),
            target: exact,
            achieved: walk.value,
            stderr: walk.stderr,
            tolerance: tol,
            pass: ((walk.value - exact) / exact).abs() <= tol,
        },
        Check {
            label: "disk deficit (π - Q)/√u at u=1e-4, R=1 (3 stderr + 2%)".into(),
            target: disk_target,
            achieved: disk_ratio,
            stderr: disk.stderr / disk_u.sqrt(),
            tolerance: 0.02,
            pass: (disk_ratio - disk_target).abs() <= 3.0 * disk.stderr / disk_u.sqrt() + 0.02 * disk_target,
        },
    ])
}

fn determinism(opts: &SuiteOptions, _: f64) -> Result<Vec<Check>> {
    let seed = opts.seed.to_string();
    let run = |workers: usize| -> Result<String> {
        let workers = workers.to_string();
        let args = [
            "subheat", "estimate", "--exponent", "stable:0.75", "--t-ladder", "1e-4,1e-6", "--paths", "20000",
            "--seed", &seed, "--workers", &workers,
        ];
        let out = crate::cli::run(args, None);
        if out.code != 0 {
            return Err(Error::Unsupported(format!("estimate failed: {}", out.stderr)));
        }
        Ok(out.stdout)
    };
    let one = run(1)?;
    let mut checks = Vec::new();
    for workers in [2, 4] {
        let other = run(workers)?;
        checks.push(Check {
            label: format!("estimate CSV identical for 1 and {workers} workers"),
            target: 1.0,
            achieved: f64::from(u8::from(one == other)),
            stderr: 0.0,
            tolerance: 0.0,
            pass: one == other,
        });
    }
    Ok(checks)
}

/// Disk counterpart of the inverse suite: the constant scales with the
/// boundary length.
pub fn disk_inverse_ratio(beta: f64, t: f64, cfg: &McConfig) -> Result<(f64, f64, f64)> {
    let dom = Domain::disk(1.0)?;
    let spec = TimeChangeSpec::inverse(stable(beta));
    let pred = predict_spectral(&spec.exponent, &dom, TimeChangeKind::InverseSubordinator)?;
    let est = estimate_spectral_disk(&spec, &dom, t, DEFAULT_DISK_STEPS, cfg)?;
    let (r, se) = ratio(&est, Quantity::Spectral, &dom, &pred, t);
    Ok((r, se, pred.constant))
}
