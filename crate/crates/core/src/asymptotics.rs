//! Small-time limit constants, rate functions and ladder fitting.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::estimators::Quantity;
use crate::exponent::{LaplaceExponent, Regime};
use crate::heat::{h_exit_interval, q_deficit_interval, Domain};
use crate::quadrature::integrate_half_line;
use crate::sampler::TimeChangeKind;
use crate::special::{gamma, FRAC_1_SQRT_PI};

/// Rate function `R(t)` against which a heat-content deficit is normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RateFunction {
    /// `t^p`.
    Power(f64),
    /// `t ln(1/t)`.
    TLogInverse,
    /// `[φ^{-1}(1/t)]^{-1/2}`.
    PhiInverseSqrt(LaplaceExponent),
    /// `[φ(1/t)]^{-1/2}`.
    PhiSqrt(LaplaceExponent),
}

impl RateFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Power(p) => t.powf(*p),
            Self::TLogInverse => t * (1.0 / t).ln(),
            Self::PhiInverseSqrt(e) => e.phi_inverse(1.0 / t).map(|x| x.powf(-0.5)).unwrap_or(f64::NAN),
            Self::PhiSqrt(e) => e.phi_raw(1.0 / t).powf(-0.5),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Power(p) => format!("t^{p}"),
            Self::TLogInverse => "t*ln(1/t)".to_string(),
            Self::PhiInverseSqrt(_) => "phi_inv(1/t)^(-1/2)".to_string(),
            Self::PhiSqrt(_) => "phi(1/t)^(-1/2)".to_string(),
        }
    }
}

impl fmt::Display for RateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub rate: RateFunction,
    pub constant: f64,
    /// Which limit law produced the prediction, e.g. `subordinator/high-index`.
    pub theorem_tag: String,
}

fn check_index(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        domain(format!("index must lie in (0, 1), got {beta}"))
    }
}

/// `E[(S_1^{(β)})^γ] = Γ(1 - γ/β) / Γ(1 - γ)` for `γ < β`.
///
/// From `E[S^γ] = γ/Γ(1-γ) ∫_0^∞ (1 - e^{-s^β}) s^{-γ-1} ds` for `0 < γ < β`,
/// and the negative-order analogue.
pub fn stable_moment(beta: f64, order: f64) -> Result<f64> {
    check_index(beta)?;
    if !(order < beta) {
        return domain(format!("stable moment of order {order} is infinite for index {beta}"));
    }
    Ok(gamma(1.0 - order / beta) / gamma(1.0 - order))
}

/// `E[E_1^p] = Γ(p + 1) / Γ(pβ + 1)` for the inverse `β`-stable subordinator.
pub fn inverse_moment(beta: f64, p: f64) -> Result<f64> {
    check_index(beta)?;
    if !(p > 0.0) {
        return domain(format!("inverse moment needs p > 0, got {p}"));
    }
    Ok(gamma(p + 1.0) / gamma(p * beta + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ClockLaw {
    Stable(f64),
    InverseStable(f64),
}

/// `E[sup_{u ≤ T} W_u]` for a clock `T = S_1^{(β)}` or `T = E_1^{(β)}`, using
/// `E[sup_{u≤s} W_u] = 2√s/√π` under the `Δ` normalization.
pub fn running_max_constant(law: ClockLaw) -> Result<f64> {
    match law {
        ClockLaw::Stable(beta) => Ok(stable_moment(beta, 0.5)? * 2.0 * FRAC_1_SQRT_PI),
        ClockLaw::InverseStable(beta) => {
            check_index(beta)?;
            Ok(1.0 / gamma(beta / 2.0 + 1.0))
        }
    }
}

/// Normalizing constant of the rotationally symmetric `α`-stable jump kernel
/// `C |y|^{-d-α}` in dimension `d` (symbol `|ξ|^α`).
pub fn jump_kernel_constant(d: u32, alpha: f64) -> f64 {
    let d = d as f64;
    alpha * 2f64.powf(alpha - 1.0) * gamma((d + alpha) / 2.0) / (PI.powf(d / 2.0) * gamma(1.0 - alpha / 2.0))
}

/// Nonlocal perimeter of `(0, L)` for `W ∘ S^{(β)}`, `β < 1/2`. The process is
/// symmetric `2β`-stable, so the perimeter is
/// `C(1, 2β) L^{1-2β} / (β (1 - 2β))`.
pub fn stable_interval_perimeter(beta: f64, length: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 0.5) {
        return domain(format!("interval perimeter is finite only for index < 1/2, got {beta}"));
    }
    Ok(jump_kernel_constant(1, 2.0 * beta) * length.powf(1.0 - 2.0 * beta) / (beta * (1.0 - 2.0 * beta)))
}

/// `∫_0^∞ F(u) ν(u) du` with `F = |Ω| - Q^W(u)` (spectral) or
/// `F = H^W_{Ω,Ω^c}(u)` (regular, the nonlocal perimeter) on an interval.
pub fn low_index_constant(exp: &LaplaceExponent, length: f64, quantity: Quantity, rel_tol: f64) -> Result<f64> {
    let beta = exp.leading_index();
    if !(beta < 0.5) {
        return Err(Error::Unsupported(format!("the linear-rate constant diverges for index {beta} >= 1/2")));
    }
    let inner = |u: f64| match quantity {
        Quantity::Spectral => q_deficit_interval(length, u),
        Quantity::Regular => h_exit_interval(length, u),
    };
    // F(u) ~ c √u at 0 and → const at ∞
    let r = integrate_half_line(|u| inner(u) * exp.levy_density_raw(u), 0.5 + beta, exp.tail_index(), rel_tol);
    Ok(r.value)
}

fn stable_like(exp: &LaplaceExponent) -> bool {
    matches!(exp, LaplaceExponent::Stable { .. })
}

/// Weight of the `s^{1/2}` term when `φ = w s^{1/2} + (lower order)`.
fn critical_weight(exp: &LaplaceExponent) -> Result<f64> {
    match exp {
        LaplaceExponent::Stable { beta } if *beta == 0.5 => Ok(1.0),
        LaplaceExponent::MixedStable(c) => {
            let lead = c.last().expect("nonempty mixture");
            if lead.beta != 0.5 || c[..c.len() - 1].iter().any(|c| c.beta >= 0.5) {
                return Err(Error::Unsupported("critical regime needs s^{1/2} plus terms of index < 1/2".into()));
            }
            Ok(lead.weight)
        }
        _ => Err(Error::Unsupported(format!(
            "the t ln(1/t) law is established for s^(1/2) plus lower-index stable terms, not {exp}"
        ))),
    }
}

fn predict(exp: &LaplaceExponent, dom: &Domain, kind: TimeChangeKind, quantity: Quantity) -> Result<AsymptoticPrediction> {
    let beta = exp.leading_index();
    let surface = dom.surface();
    // regular constants are half the spectral ones except in the linear regime
    let half = match quantity {
        Quantity::Spectral => 1.0,
        Quantity::Regular => 0.5,
    };
    if kind == TimeChangeKind::InverseSubordinator {
        let rate = if stable_like(exp) { RateFunction::Power(beta / 2.0) } else { RateFunction::PhiSqrt(exp.clone()) };
        return Ok(AsymptoticPrediction {
            rate,
            constant: half * surface / gamma(beta / 2.0 + 1.0),
            theorem_tag: "inverse/all-index".into(),
        });
    }
    match exp.regime() {
        Regime::HighIndex => {
            let rate = if stable_like(exp) {
                RateFunction::Power(1.0 / (2.0 * beta))
            } else {
                RateFunction::PhiInverseSqrt(exp.clone())
            };
            Ok(AsymptoticPrediction {
                rate,
                constant: half * stable_moment(beta, 0.5)? * 2.0 * surface * FRAC_1_SQRT_PI,
                theorem_tag: "subordinator/high-index".into(),
            })
        }
        Regime::Critical => {
            let w = critical_weight(exp)?;
            Ok(AsymptoticPrediction {
                rate: RateFunction::TLogInverse,
                constant: half * w * 2.0 * surface / PI,
                theorem_tag: "subordinator/critical".into(),
            })
        }
        Regime::LowIndex => {
            if !exp.small_lambda_integrability() {
                return Err(Error::Unsupported("φ(λ)/λ is not integrable at 0".into()));
            }
            let length = dom
                .interval_length()
                .ok_or_else(|| Error::Unsupported("linear-rate constants are computed for intervals only".into()))?;
            Ok(AsymptoticPrediction {
                rate: RateFunction::Power(1.0),
                constant: low_index_constant(exp, length, quantity, 1e-11)?,
                theorem_tag: "subordinator/low-index".into(),
            })
        }
    }
}

/// Limit of `(|Ω| - Q̃(t)) / R(t)` as `t ↓ 0`.
pub fn predict_spectral(exp: &LaplaceExponent, dom: &Domain, kind: TimeChangeKind) -> Result<AsymptoticPrediction> {
    predict(exp, dom, kind, Quantity::Spectral)
}

/// Limit of `H_{Ω,Ω^c}(t) / R(t)` as `t ↓ 0`.
pub fn predict_regular(exp: &LaplaceExponent, dom: &Domain, kind: TimeChangeKind) -> Result<AsymptoticPrediction> {
    predict(exp, dom, kind, Quantity::Regular)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub coefficient: f64,
    /// Power of `t`.
    pub exponent: f64,
}

/// Maps a Brownian expansion `|Ω| - Q^W(t) ~ Σ c_n t^{n/2}` to the inverse
/// `β`-stable clock: `c_n Γ(1 + n/2) / Γ(1 + nβ/2) t^{nβ/2}`.
pub fn expansion(beta: f64, coefficients: &[f64]) -> Result<Vec<ExpansionTerm>> {
    check_index(beta)?;
    if coefficients.is_empty() {
        return domain("expansion needs at least one coefficient");
    }
    Ok(coefficients
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let n = (i + 1) as f64;
            ExpansionTerm {
                coefficient: c * gamma(1.0 + n / 2.0) / gamma(1.0 + n * beta / 2.0),
                exponent: beta * n / 2.0,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderPoint {
    pub t: f64,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    /// `(t, value / R(t), stderr / R(t))` per ladder point.
    pub ratios: Vec<(f64, f64, f64)>,
    /// Three-point extrapolation `r(t) = C + a t^p`, if the last three
    /// ratios are consistent with one.
    pub extrapolated: Option<f64>,
    pub correction_order: Option<f64>,
    pub target: f64,
    /// `|r_last - target| / target`.
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn solve_order(t: [f64; 3], r: [f64; 3]) -> Option<(f64, f64)> {
    let d1 = r[0] - r[1];
    let d2 = r[1] - r[2];
    if d1 == 0.0 || d2 == 0.0 || d1.signum() != d2.signum() {
        return None;
    }
    let want = d1 / d2;
    let g = |p: f64| (t[0].powf(p) - t[1].powf(p)) / (t[1].powf(p) - t[2].powf(p)) - want;
    let (mut lo, mut hi) = (1e-3, 8.0);
    if g(lo).signum() == g(hi).signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == g(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let a = d2 / (t[1].powf(p) - t[2].powf(p));
    Some((r[2] - a * t[2].powf(p), p))
}

/// Ratios of ladder values to `prediction.rate`, a three-point
/// extrapolation, and a pass flag: the final ratio must lie within
/// `max(tolerance, 4·stderr/target)` of the predicted constant.
///
/// For spectral contents `value` is the deficit `|Ω| - Q̃(t)`.
pub fn fit_rate(samples: &[LadderPoint], prediction: &AsymptoticPrediction, tolerance: f64) -> Result<FitReport> {
    if samples.len() < 3 {
        return Err(Error::LadderTooShort { needed: 3, got: samples.len() });
    }
    if samples.windows(2).any(|w| !(w[1].t < w[0].t)) || samples.iter().any(|s| !(s.t > 0.0)) {
        return domain("ladder times must be positive and strictly decreasing");
    }
    let ratios: Vec<(f64, f64, f64)> = samples
        .iter()
        .map(|s| {
            let r = prediction.rate.eval(s.t);
            (s.t, s.value / r, s.stderr / r)
        })
        .collect();
    let k = ratios.len();
    let last3 = &ratios[k - 3..];
    let fit = solve_order([last3[0].0, last3[1].0, last3[2].0], [last3[0].1, last3[1].1, last3[2].1]);
    let (final_ratio, final_err) = (ratios[k - 1].1, ratios[k - 1].2);
    let target = prediction.constant;
    let deviation = (final_ratio - target).abs() / target;
    let allowed = tolerance.max(4.0 * final_err / target);
    Ok(FitReport {
        ratios,
        extrapolated: fit.map(|f| f.0),
        correction_order: fit.map(|f| f.1),
        target,
        deviation,
        tolerance,
        pass: deviation <= allowed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    fn unit() -> Domain {
        Domain::interval(0.0, 1.0).unwrap()
    }

    #[test]
    fn stable_moment_values() {
        assert!(stable_moment(0.5, 0.5).is_err());
        assert_eq!(stable_moment(0.3, 0.0).unwrap(), 1.0);
        // Γ(1/3)/Γ(1/2)
        assert!((stable_moment(0.75, 0.5).unwrap() - 1.511_429_216_246_80).abs() < 1e-12);
    }

    #[test]
    fn stable_moment_matches_mellin_quadrature() {
        // E[S^γ] = γ/Γ(1-γ) ∫ (1 - e^{-s^β}) s^{-γ-1} ds, independent of the Γ-ratio route
        for &(beta, g) in &[(0.75, 0.5), (0.5, 0.25), (0.3, 0.1), (0.9, 0.6)] {
            let q = integrate_half_line(
                |s: f64| -(-s.powf(beta)).exp_m1() * s.powf(-g - 1.0),
                g + 1.0 - beta,
                g,
                1e-12,
            );
            let want = g / gamma(1.0 - g) * q.value;
            let got = stable_moment(beta, g).unwrap();
            assert!(((got - want) / want).abs() < 1e-8, "β={beta} γ={g}: {got} vs {want}");
        }
    }

    #[test]
    fn inverse_moment_values() {
        assert!((inverse_moment(0.5, 1.0).unwrap() - 1.128_379_167_095_512_6).abs() < 1e-14);
        assert!((inverse_moment(0.5, 0.5).unwrap() - 0.977_741_067_446_923_8).abs() < 1e-12);
        assert!((inverse_moment(0.5, 1e-12).unwrap() - 1.0).abs() < 1e-10);
        assert!(inverse_moment(0.5, -1.0).is_err());
    }

    #[test]
    fn running_max_values() {
        assert!((running_max_constant(ClockLaw::InverseStable(0.5)).unwrap() - 1.103_262_651_320_837).abs() < 1e-12);
        let s = running_max_constant(ClockLaw::Stable(0.75)).unwrap();
        assert!((s - 1.511_429_216_246_80 * 2.0 / PI.sqrt()).abs() < 1e-12);
        assert!(running_max_constant(ClockLaw::Stable(0.4)).is_err());
        assert!(running_max_constant(ClockLaw::InverseStable(1.0)).is_err());
    }

    #[test]
    fn spectral_predictions() {
        let p = predict_spectral(&"stable:0.75".parse().unwrap(), &unit(), TimeChangeKind::Subordinator).unwrap();
        assert_eq!(p.rate, RateFunction::Power(2.0 / 3.0));
        assert!((p.constant - 3.410_930_480_304_776).abs() < 1e-10, "{}", p.constant);

        let p = predict_spectral(&"stable:0.5".parse().unwrap(), &unit(), TimeChangeKind::Subordinator).unwrap();
        assert_eq!(p.rate, RateFunction::TLogInverse);
        assert!((p.constant - 4.0 / PI).abs() < 1e-15);

        let p = predict_spectral(&"stable:0.25".parse().unwrap(), &unit(), TimeChangeKind::Subordinator).unwrap();
        assert_eq!(p.rate, RateFunction::Power(1.0));
        assert!(p.constant > 0.0);

        let p = predict_spectral(&"stable:0.5".parse().unwrap(), &unit(), TimeChangeKind::InverseSubordinator).unwrap();
        assert!((p.constant - 2.0 / gamma(1.25)).abs() < 1e-14);

        let tempered = predict_spectral(&"tempered:0.5,1".parse().unwrap(), &unit(), TimeChangeKind::InverseSubordinator).unwrap();
        assert_eq!(tempered.constant, p.constant);
        assert!(matches!(tempered.rate, RateFunction::PhiSqrt(_)));
    }

    #[test]
    fn unsupported_configurations() {
        let sub = TimeChangeKind::Subordinator;
        assert!(matches!(
            predict_spectral(&"tempered:0.5,1".parse().unwrap(), &unit(), sub),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            predict_spectral(&"stable:0.25".parse().unwrap(), &Domain::disk(1.0).unwrap(), sub),
            Err(Error::Unsupported(_))
        ));
        let mixed = predict_spectral(&"mixed:0.25+0.5".parse().unwrap(), &unit(), sub).unwrap();
        assert!((mixed.constant - 4.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn low_index_constant_matches_direct_quadrature() {
        // independent route: plain adaptive quadrature on the raw integrand
        // after u = v^4 on (0,1) and u = 1/v^4 beyond
        let exp: LaplaceExponent = "stable:0.25".parse().unwrap();
        let f = |u: f64| q_deficit_interval(1.0, u) * exp.levy_density_raw(u);
        let head = integrate(|v| f(v.powi(4)) * 4.0 * v.powi(3), 0.0, 1.0, 1e-12, 0.0).value;
        let tail = integrate(|v| f(v.powi(-4)) * 4.0 * v.powi(-5), 0.0, 1.0, 1e-12, 0.0).value;
        let got = low_index_constant(&exp, 1.0, Quantity::Spectral, 1e-11).unwrap();
        assert!(((got - head - tail) / got).abs() < 1e-7, "{got} vs {}", head + tail);
    }

    #[test]
    fn low_index_constant_is_tolerance_stable() {
        for spec in ["stable:0.25", "stable:0.45", "tempered:0.3,2", "mixed:0.1+0.4"] {
            let exp: LaplaceExponent = spec.parse().unwrap();
            let a = low_index_constant(&exp, 1.0, Quantity::Spectral, 1e-9).unwrap();
            let b = low_index_constant(&exp, 1.0, Quantity::Spectral, 5e-10).unwrap();
            assert!(((a - b) / a).abs() < 1e-6, "{spec}: {a} vs {b}");
        }
    }

    #[test]
    fn perimeter_two_routes_agree() {
        for &(beta, l) in &[(0.25, 1.0), (0.1, 2.0), (0.4, 0.5)] {
            let exp = LaplaceExponent::stable(beta).unwrap();
            let quad = low_index_constant(&exp, l, Quantity::Regular, 1e-11).unwrap();
            let closed = stable_interval_perimeter(beta, l).unwrap();
            assert!(((quad - closed) / closed).abs() < 1e-8, "β={beta}: {quad} vs {closed}");
        }
        let p = predict_regular(&"stable:0.25".parse().unwrap(), &unit(), TimeChangeKind::Subordinator).unwrap();
        assert!((p.constant - 1.595_769_121_605_73).abs() < 1e-8);
    }

    #[test]
    fn regular_is_half_of_spectral() {
        let cases = [
            ("stable:0.75", TimeChangeKind::Subordinator),
            ("mixed:0.2+0.9*3", TimeChangeKind::Subordinator),
            ("stable:0.5", TimeChangeKind::Subordinator),
            ("mixed:0.3+0.5*2", TimeChangeKind::Subordinator),
            ("stable:0.3", TimeChangeKind::InverseSubordinator),
            ("tempered:0.8,2", TimeChangeKind::InverseSubordinator),
        ];
        for dom in [unit(), Domain::disk(1.5).unwrap()] {
            for (spec, kind) in cases {
                let exp: LaplaceExponent = spec.parse().unwrap();
                let s = predict_spectral(&exp, &dom, kind).unwrap();
                let r = predict_regular(&exp, &dom, kind).unwrap();
                assert_eq!(s.constant, 2.0 * r.constant, "{spec}");
                assert_eq!(s.rate, r.rate);
            }
        }
    }

    #[test]
    fn expansion_identity() {
        for &beta in &[0.1, 0.25, 0.5, 0.75, 0.99] {
            let terms = expansion(beta, &[4.0 / PI.sqrt()]).unwrap();
            let inv = predict_spectral(&LaplaceExponent::stable(beta).unwrap(), &unit(), TimeChangeKind::InverseSubordinator)
                .unwrap();
            assert!((terms[0].coefficient - inv.constant).abs() < 1e-12);
            assert_eq!(terms[0].exponent, beta / 2.0);
        }
        let t = expansion(0.5, &[0.0, 0.0]).unwrap();
        assert!(t.iter().all(|t| t.coefficient == 0.0));
        let near_one = expansion(1.0 - 1e-9, &[1.0, 2.0, 3.0]).unwrap();
        for (i, term) in near_one.iter().enumerate() {
            assert!((term.coefficient - (i + 1) as f64).abs() < 1e-7);
        }
        assert!(expansion(0.5, &[]).is_err());
    }

    #[test]
    fn rate_ordering_against_inverse_rate() {
        // R_β(t) / t^{β/2} decreases toward 0 as t ↓ 0
        for &beta in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let exp = LaplaceExponent::stable(beta).unwrap();
            let p = predict_spectral(&exp, &unit(), TimeChangeKind::Subordinator);
            let rate = match p {
                Ok(p) => p.rate,
                Err(_) => continue,
            };
            let mut last = f64::INFINITY;
            for k in 2..=40 {
                let t = 10f64.powf(-(k as f64) / 2.0);
                let q = rate.eval(t) / t.powf(beta / 2.0);
                assert!(q < last, "β={beta} t={t}");
                last = q;
            }
            assert!(last < 1e-2);
        }
    }

    fn synthetic(c: f64, rate: &RateFunction, correction: impl Fn(f64) -> f64, ts: &[f64]) -> Vec<LadderPoint> {
        ts.iter().map(|&t| LadderPoint { t, value: c * rate.eval(t) * correction(t), stderr: 0.0 }).collect()
    }

    #[test]
    fn fit_rate_cases() {
        let pred = AsymptoticPrediction { rate: RateFunction::Power(0.25), constant: 2.2, theorem_tag: "test".into() };
        let ts = [1e-2, 1e-3, 1e-4];
        let exact = fit_rate(&synthetic(2.2, &pred.rate, |_| 1.0, &ts), &pred, 0.01).unwrap();
        assert!(exact.deviation < 1e-14 && exact.pass);


        for ladder in [[1e-1, 1e-2, 1e-3], [1e-3, 1e-4, 1e-5], [1e-5, 1e-6, 1e-7]] {
            let r = fit_rate(&synthetic(2.2, &pred.rate, |t| 1.0 + t.sqrt(), &ladder), &pred, 0.01).unwrap();
            let err = (r.extrapolated.unwrap() - 2.2).abs();
            assert!(err < 1e-9);
            assert!((r.correction_order.unwrap() - 0.5).abs() < 1e-6);

        }

        let wrong = fit_rate(&synthetic(4.4, &pred.rate, |_| 1.0, &ts), &pred, 0.05).unwrap();
        assert!(!wrong.pass);
        assert!(matches!(fit_rate(&synthetic(2.2, &pred.rate, |_| 1.0, &ts[..2]), &pred, 0.1), Err(Error::LadderTooShort { .. })));
        assert!(fit_rate(&synthetic(2.2, &pred.rate, |_| 1.0, &[1e-4, 1e-3, 1e-2]), &pred, 0.1).is_err());
    }
}
