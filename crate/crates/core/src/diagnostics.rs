//! Checks of auxiliary limit statements: Lévy-measure convergence, small-ball
//! decay, the heat-kernel bound and inverse-subordinator moments.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::asymptotics::{inverse_moment, stable_moment, ClockLaw, LadderPoint};
use crate::error::{domain, Error, Result};
use crate::estimators::{run_paths, run_paths_multi, Estimate, McConfig};
use crate::exponent::LaplaceExponent;
use crate::quadrature::{integrate, integrate_half_line};
use crate::sampler::{
    kanter_a, sample_inverse, sample_stable, sample_subordinator, sample_subordinator_weighted, sample_time_change,
    Sampling, TimeChangeSpec,
};
use crate::special::{gamma, upper_incomplete_gamma};
use crate::stats::ols;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub name: String,
    /// `(t, statistic, stderr)`; for the heat-kernel check the abscissa is `x`.
    pub points: Vec<LadderPoint>,
    /// Companion series on the same paths (truncated moments, the `t/2`
    /// kernel profile); empty when unused.
    pub secondary: Vec<LadderPoint>,
    /// Final statistic, regression slope or profile maximum.
    pub fitted: f64,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Test functions for the Lévy-measure limit, each vanishing fast enough at 0
/// for `∫ f dν` to exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TestFunction {
    /// `min(x, 1)^γ e^{-x}`.
    PowerExp { gamma: f64 },
    /// Smooth bump supported on `[lo, hi]`, peak value 1.
    Bump { lo: f64, hi: f64 },
    Zero,
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::PowerExp { gamma } => x.min(1.0).powf(gamma) * (-x).exp(),
            Self::Bump { lo, hi } => {
                if x <= lo || x >= hi {
                    return 0.0;
                }
                let s = (2.0 * x - lo - hi) / (hi - lo);
                (1.0 - 1.0 / (1.0 - s * s)).exp()
            }
            Self::Zero => 0.0,
        }
    }

    fn check(&self, exp: &LaplaceExponent) -> Result<()> {
        match *self {
            Self::PowerExp { gamma } if !(gamma > exp.leading_index()) => Err(Error::Hypothesis(format!(
                "f(x)/x^γ must stay bounded with γ > β = {}, got γ = {gamma}",
                exp.leading_index()
            ))),
            Self::Bump { lo, hi } if !(lo > 0.0 && hi > lo && hi.is_finite()) => {
                domain(format!("bump support must satisfy 0 < lo < hi < ∞, got [{lo}, {hi}]"))
            }
            _ => Ok(()),
        }
    }

    /// `∫_0^∞ f(x) ν(dx)` by quadrature.
    pub fn levy_integral(&self, exp: &LaplaceExponent) -> Result<f64> {
        self.check(exp)?;
        let g = |x: f64| self.eval(x) * exp.levy_density_raw(x);
        Ok(match *self {
            Self::PowerExp { gamma } => {
                let singular = (1.0 + exp.leading_index() - gamma).max(0.0);
                integrate_half_line(g, singular, exp.tail_index(), 1e-12).value
            }
            Self::Bump { lo, hi } => integrate(g, lo, hi, 1e-12, 0.0).value,
            Self::Zero => 0.0,
        })
    }
}

/// `∫ min(x,1)^γ e^{-x} ν(dx)` for the `β`-stable Lévy measure, integrated
/// term by term: `β/Γ(1-β) [γ(γ-β, 1) + Γ(-β, 1)]`.
pub fn stable_power_exp_integral(beta: f64, gamma_exp: f64) -> Result<f64> {
    if !(gamma_exp > beta) {
        return Err(Error::Hypothesis(format!("need γ > β, got γ = {gamma_exp}, β = {beta}")));
    }
    let a = gamma_exp - beta;
    let lower = gamma(a) - upper_incomplete_gamma(a, 1.0);
    Ok(beta / gamma(1.0 - beta) * (lower + upper_incomplete_gamma(-beta, 1.0)))
}

fn check_ladder(ladder: &[f64], needed: usize) -> Result<()> {
    if ladder.len() < needed {
        return Err(Error::LadderTooShort { needed, got: ladder.len() });
    }
    if ladder.iter().any(|t| !(*t > 0.0 && t.is_finite())) || ladder.windows(2).any(|w| !(w[1] < w[0])) {
        return domain("ladder must be positive and strictly decreasing");
    }
    Ok(())
}

fn within(value: f64, stderr: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= (4.0 * stderr).max(rel * target.abs())
}

/// `E[f(D_t)]/t → ∫ f dν` along a decreasing ladder. Passes when the last
/// point is within `max(4 stderr, 2%)` of the quadrature target.
pub fn check_levy_convergence(
    exp: &LaplaceExponent,
    f: TestFunction,
    ladder: &[f64],
    cfg: &McConfig,
) -> Result<LadderReport> {
    check_ladder(ladder, 1)?;
    let target = f.levy_integral(exp)?;
    let mut points = Vec::with_capacity(ladder.len());
    for &t in ladder {
        let (acc, _) = run_paths(cfg, |_, stream| {
            let d = sample_subordinator_weighted(exp, t, stream, cfg.sampling);
            Ok(if d.weight == 0.0 { 0.0 } else { d.weight * f.eval(d.value) / t })
        })?;
        points.push(LadderPoint { t, value: acc.mean(), stderr: acc.stderr() });
    }
    let last = *points.last().expect("nonempty ladder");
    Ok(LadderReport {
        name: "levy-convergence".into(),
        points,
        secondary: Vec::new(),
        fitted: last.value,
        target,
        tolerance: 0.02,
        pass: within(last.value, last.stderr, target, 0.02),
    })
}

// ln P(S_δ ≤ x) for a β-stable clock. Conditional on Kanter's angle U,
// S_δ ≤ x  ⇔  E ≥ A(U) y^{-a} with y = x δ^{-1/β}, a = β/(1-β), so
// P = E_U[exp(-A(U) y^{-a})]. The factor exp(-A(0) y^{-a}) is pulled out
// because A attains its minimum A(0) at U = 0.
fn stable_log_small_ball(beta: f64, delta: f64, x: f64, cfg: &McConfig) -> Result<(f64, f64)> {
    let a = beta / (1.0 - beta);
    let big_y = (x * delta.powf(-1.0 / beta)).powf(-a);
    let a0 = beta.powf(a) * (1.0 - beta);
    let (acc, _) = run_paths(cfg, |_, stream| {
        let u = PI * stream.uniform();
        Ok((-(kanter_a(beta, u) - a0).max(0.0) * big_y).exp())
    })?;
    if acc.mean() == 0.0 {
        return Err(Error::LadderTooDeep(x));
    }
    Ok((-a0 * big_y + acc.mean().ln(), acc.stderr() / acc.mean()))
}

fn counted_log_small_ball(exp: &LaplaceExponent, delta: f64, x: f64, cfg: &McConfig) -> Result<(f64, f64)> {
    let (acc, _) = run_paths(cfg, |_, stream| Ok(f64::from(u8::from(sample_subordinator(exp, delta, stream) <= x))))?;
    if acc.mean() == 0.0 {
        return Err(Error::LadderTooDeep(x));
    }
    Ok((acc.mean().ln(), acc.stderr() / acc.mean()))
}

/// Slope of `ln(-ln P(D_δ ≤ x))` against `ln(1/x)`, compared with
/// `β/(1-β)` for the leading index. Stable clocks use an exact conditional
/// estimator, which reaches any depth; other clocks count exceedances.
pub fn check_small_ball(exp: &LaplaceExponent, delta: f64, ladder: &[f64], cfg: &McConfig) -> Result<LadderReport> {
    check_ladder(ladder, 2)?;
    if !(delta > 0.0) {
        return domain(format!("small-ball horizon must be positive, got {delta}"));
    }
    let beta = exp.leading_index();
    let target = beta / (1.0 - beta);
    let mut points = Vec::with_capacity(ladder.len());
    for &x in ladder {
        let (lp, lp_err) = match exp {
            LaplaceExponent::Stable { beta } => stable_log_small_ball(*beta, delta, x, cfg)?,
            _ => counted_log_small_ball(exp, delta, x, cfg)?,
        };
        if !(lp < 0.0) {
            return domain(format!("P(D_δ ≤ {x}) is indistinguishable from 1; use smaller x"));
        }
        points.push(LadderPoint { t: x, value: (-lp).ln(), stderr: lp_err / -lp });
    }
    let xs: Vec<f64> = points.iter().map(|p| (1.0 / p.t).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.value).collect();
    let (slope, _) = ols(&xs, &ys);
    Ok(LadderReport {
        name: "small-ball".into(),
        points,
        secondary: Vec::new(),
        fitted: slope,
        target,
        tolerance: 0.1,
        pass: (slope - target).abs() <= 0.1,
    })
}

fn kernel_profile(exp: &LaplaceExponent, t: f64, edges: &[f64], cfg: &McConfig) -> Result<Vec<LadderPoint>> {
    let bins = edges.len() - 1;
    let (accs, _) = run_paths_multi(cfg, bins, |_, stream, out| {
        let d = sample_subordinator_weighted(exp, t, stream, cfg.sampling);
        let k = edges.partition_point(|e| *e <= d.value);
        if k >= 1 && k <= bins {
            out[k - 1] = d.weight;
        }
        Ok(())
    })?;
    Ok(accs
        .iter()
        .enumerate()
        .map(|(i, acc)| {
            let (lo, hi) = (edges[i], edges[i + 1]);
            let x = (lo * hi).sqrt();
            let bound = t / x * exp.phi_raw(1.0 / x);
            LadderPoint { t: x, value: acc.mean() / (hi - lo) / bound, stderr: acc.stderr() / (hi - lo) / bound }
        })
        .collect())
}

/// Histogram estimate of `p(t, x) / (t x^{-1} φ(1/x))` on the bins given by
/// `edges` (increasing), at `t` and at `t/2`. The bound's constant is not
/// specified, so the check is that the profile maximum is finite and agrees
/// between the two times within 20% (or 4 stderr).
pub fn check_heat_kernel_bound(exp: &LaplaceExponent, t: f64, edges: &[f64], cfg: &McConfig) -> Result<LadderReport> {
    if edges.len() < 2 || edges[0] <= 0.0 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("histogram edges must be positive and increasing, at least two");
    }
    if !(t > 0.0) {
        return domain(format!("t must be positive, got {t}"));
    }
    let points = kernel_profile(exp, t, edges, cfg)?;
    let half = kernel_profile(exp, 0.5 * t, edges, cfg)?;
    let peak = |p: &[LadderPoint]| {
        p.iter().fold(LadderPoint { t: 0.0, value: f64::NEG_INFINITY, stderr: 0.0 }, |m, q| {
            if q.value > m.value {
                *q
            } else {
                m
            }
        })
    };
    let (a, b) = (peak(&points), peak(&half));
    let tol = 0.2;
    let spread = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
    let pass = a.value.is_finite() && b.value.is_finite() && (a.value - b.value).abs() <= (tol * b.value).max(4.0 * spread);
    Ok(LadderReport {
        name: "heat-kernel-bound".into(),
        points,
        secondary: half,
        fitted: a.value,
        target: b.value,
        tolerance: tol,
        pass,
    })
}

/// `E[E_t^p] φ(1/t)^p` (points) and its `{E_t ≤ 1}` truncation (secondary)
/// against `Γ(p+1)/Γ(pβ+1)`. Passes when the last point is within
/// `max(4 stderr, 2%)` of the target and the truncated statistic agrees with
/// the untruncated one to the same tolerance.
pub fn check_inverse_moments(spec: &TimeChangeSpec, p: f64, ladder: &[f64], cfg: &McConfig) -> Result<LadderReport> {
    check_ladder(ladder, 1)?;
    let target = inverse_moment(spec.exponent.leading_index(), p)?;
    let (mut points, mut secondary) = (Vec::new(), Vec::new());
    for &t in ladder {
        let scale = spec.exponent.phi_raw(1.0 / t).powf(p);
        let (accs, _) = run_paths_multi(cfg, 2, |_, stream, out| {
            let e = sample_inverse(spec, t, stream)?;
            out[0] = e.powf(p) * scale;
            out[1] = if e <= 1.0 { out[0] } else { 0.0 };
            Ok(())
        })?;
        points.push(LadderPoint { t, value: accs[0].mean(), stderr: accs[0].stderr() });
        secondary.push(LadderPoint { t, value: accs[1].mean(), stderr: accs[1].stderr() });
    }
    let (last, trunc) = (*points.last().expect("nonempty"), *secondary.last().expect("nonempty"));
    let pass = within(last.value, last.stderr, target, 0.02) && within(trunc.value, trunc.stderr, last.value, 0.02);
    Ok(LadderReport { name: "inverse-moments".into(), points, secondary, fitted: last.value, target, tolerance: 0.02, pass })
}

/// Monte Carlo `E[(S_1^{(β)})^γ]`. Finite variance needs `2γ < β`.
pub fn mc_stable_moment(beta: f64, order: f64, cfg: &McConfig) -> Result<Estimate> {
    stable_moment(beta, order)?;
    let (acc, wall) = run_paths(cfg, |_, stream| Ok(sample_stable(beta, 1.0, stream).powf(order)))?;
    Ok(Estimate { value: acc.mean(), stderr: acc.stderr(), n_paths: acc.count(), seed: cfg.seed, wall_time: wall })
}

/// Monte Carlo `E[E_t^p]` for the exact inverse `β`-stable clock.
pub fn mc_inverse_moment(beta: f64, p: f64, t: f64, cfg: &McConfig) -> Result<Estimate> {
    inverse_moment(beta, p)?;
    let spec = TimeChangeSpec::inverse(LaplaceExponent::stable(beta)?);
    let (acc, wall) = run_paths(cfg, |_, stream| Ok(sample_inverse(&spec, t, stream)?.powf(p)))?;
    Ok(Estimate { value: acc.mean(), stderr: acc.stderr(), n_paths: acc.count(), seed: cfg.seed, wall_time: wall })
}

/// Monte Carlo `E[sup_{u ≤ T} W_u]` with `T` the clock at time 1. The
/// reflection principle gives `sup_{u≤T} W_u ≗ |W_T| = √(2T)|Z|`.
pub fn mc_running_max(law: ClockLaw, cfg: &McConfig) -> Result<Estimate> {
    let spec = match law {
        ClockLaw::Stable(b) => TimeChangeSpec::subordinator(LaplaceExponent::stable(b)?),
        ClockLaw::InverseStable(b) => TimeChangeSpec::inverse(LaplaceExponent::stable(b)?),
    };
    let (acc, wall) = run_paths(&cfg.with_sampling(Sampling::Natural), |_, stream| {
        let horizon = sample_time_change(&spec, 1.0, stream)?;
        Ok((2.0 * horizon).sqrt() * stream.normal().abs())
    })?;
    Ok(Estimate { value: acc.mean(), stderr: acc.stderr(), n_paths: acc.count(), seed: cfg.seed, wall_time: wall })
}
