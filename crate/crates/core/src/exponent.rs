//! Laplace exponents of the subordinator catalog.
//!
//! Every exponent is a Bernstein function `φ(s) = ∫ (1 - e^{-su}) ν(u) du` with
//! no drift and no killing. The catalog is closed: stable, exponentially
//! tempered stable, and finite mixtures of stable exponents.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::special::{gamma, upper_incomplete_gamma};

/// One `w · s^β` term of a mixed stable exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableComponent {
    pub beta: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LaplaceExponent {
    Stable { beta: f64 },
    TemperedStable { beta: f64, theta: f64 },
    /// Components sorted by strictly increasing index.
    MixedStable(Vec<StableComponent>),
}

/// Small-time regime, determined by the leading index at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// Leading index in `(1/2, 1)`.
    HighIndex,
    /// Leading index exactly `1/2`.
    Critical,
    /// Leading index in `(0, 1/2)`.
    LowIndex,
}

fn check_index(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        domain(format!("stable index must lie in (0, 1), got {beta}"))
    }
}

/// `β / Γ(1 - β)`, the normalization of the stable Lévy density.
fn stable_density_constant(beta: f64) -> f64 {
    beta / gamma(1.0 - beta)
}

impl LaplaceExponent {
    pub fn stable(beta: f64) -> Result<Self> {
        check_index(beta)?;
        Ok(Self::Stable { beta })
    }

    pub fn tempered(beta: f64, theta: f64) -> Result<Self> {
        check_index(beta)?;
        if !(theta > 0.0 && theta.is_finite()) {
            return domain(format!("tempering rate must be positive, got {theta}"));
        }
        Ok(Self::TemperedStable { beta, theta })
    }

    /// Builds a mixed exponent; components are sorted by index and indices must
    /// be distinct.
    pub fn mixed(mut components: Vec<StableComponent>) -> Result<Self> {
        if components.is_empty() {
            return domain("mixed exponent needs at least one component");
        }
        for c in &components {
            check_index(c.beta)?;
            if !(c.weight > 0.0 && c.weight.is_finite()) {
                return domain(format!("mixture weight must be positive, got {}", c.weight));
            }
        }
        components.sort_by(|a, b| a.beta.total_cmp(&b.beta));
        if components.windows(2).any(|w| w[0].beta == w[1].beta) {
            return domain("mixture indices must be distinct");
        }
        Ok(Self::MixedStable(components))
    }

    /// Regular-variation index of `φ` at infinity.
    pub fn leading_index(&self) -> f64 {
        match self {
            Self::Stable { beta } | Self::TemperedStable { beta, .. } => *beta,
            Self::MixedStable(c) => c.last().map(|c| c.beta).unwrap_or(f64::NAN),
        }
    }

    /// Smallest index present; governs the heaviest Lévy tail.
    pub fn tail_index(&self) -> f64 {
        match self {
            Self::Stable { beta } | Self::TemperedStable { beta, .. } => *beta,
            Self::MixedStable(c) => c[0].beta,
        }
    }

    pub fn regime(&self) -> Regime {
        let beta = self.leading_index();
        if beta == 0.5 {
            Regime::Critical
        } else if beta > 0.5 {
            Regime::HighIndex
        } else {
            Regime::LowIndex
        }
    }

    pub fn phi(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return domain(format!("phi requires s > 0, got {s}"));
        }
        Ok(self.phi_raw(s))
    }

    pub(crate) fn phi_raw(&self, s: f64) -> f64 {
        match self {
            Self::Stable { beta } => s.powf(*beta),
            Self::TemperedStable { beta, theta } => {
                // θ^β ((1 + s/θ)^β - 1) without cancellation for small s
                theta.powf(*beta) * (beta * (s / theta).ln_1p()).exp_m1()
            }
            Self::MixedStable(c) => c.iter().map(|c| c.weight * s.powf(c.beta)).sum(),
        }
    }

    /// `φ'(s)`; for the tempered family `φ'(0+) = β θ^{β-1}` is finite.
    pub fn phi_derivative(&self, s: f64) -> f64 {
        match self {
            Self::Stable { beta } => beta * s.powf(beta - 1.0),
            Self::TemperedStable { beta, theta } => beta * (s + theta).powf(beta - 1.0),
            Self::MixedStable(c) => c
                .iter()
                .map(|c| c.weight * c.beta * s.powf(c.beta - 1.0))
                .sum(),
        }
    }

    /// Solves `φ(x) = y` to relative residual `1e-12`.
    pub fn phi_inverse(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return domain(format!("phi_inverse requires y > 0, got {y}"));
        }
        match self {
            Self::Stable { beta } => Ok(y.powf(1.0 / beta)),
            Self::TemperedStable { beta, theta } => {
                let scaled = y / theta.powf(*beta);
                Ok(theta * (scaled.ln_1p() / beta).exp_m1())
            }
            Self::MixedStable(_) => Ok(self.invert_monotone(y)),
        }
    }

    // Bracket by doubling, bisect to a 1% bracket, then Newton steps that are
    // rejected whenever they leave the bracket.
    fn invert_monotone(&self, y: f64) -> f64 {
        let (mut lo, mut hi) = (1.0_f64, 1.0_f64);
        while self.phi_raw(hi) < y {
            lo = hi;
            hi *= 2.0;
        }
        while self.phi_raw(lo) > y {
            hi = lo;
            lo *= 0.5;
        }
        while hi - lo > 1e-2 * lo {
            let mid = 0.5 * (lo + hi);
            if self.phi_raw(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..100 {
            let f = self.phi_raw(x) - y;
            if (f / y).abs() <= 1e-13 {
                break;
            }
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let step = x - f / self.phi_derivative(x);
            x = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        }
        x
    }

    pub fn levy_density(&self, u: f64) -> Result<f64> {
        if !(u > 0.0) {
            return domain(format!("levy_density requires u > 0, got {u}"));
        }
        Ok(self.levy_density_raw(u))
    }

    pub(crate) fn levy_density_raw(&self, u: f64) -> f64 {
        match self {
            Self::Stable { beta } => stable_density_constant(*beta) * u.powf(-1.0 - beta),
            Self::TemperedStable { beta, theta } => {
                stable_density_constant(*beta) * (-theta * u).exp() * u.powf(-1.0 - beta)
            }
            Self::MixedStable(c) => c
                .iter()
                .map(|c| c.weight * stable_density_constant(c.beta) * u.powf(-1.0 - c.beta))
                .sum(),
        }
    }

    /// `ν([δ, ∞))`.
    pub fn levy_tail(&self, delta: f64) -> Result<f64> {
        if !(delta > 0.0) {
            return domain(format!("levy_tail requires delta > 0, got {delta}"));
        }
        Ok(match self {
            Self::Stable { beta } => delta.powf(-beta) / gamma(1.0 - beta),
            Self::TemperedStable { beta, theta } => {
                if delta.is_infinite() {
                    return Ok(0.0);
                }
                stable_density_constant(*beta)
                    * theta.powf(*beta)
                    * upper_incomplete_gamma(-beta, theta * delta)
            }
            Self::MixedStable(c) => c
                .iter()
                .map(|c| c.weight * delta.powf(-c.beta) / gamma(1.0 - c.beta))
                .sum(),
        })
    }

    /// Whether `∫_0^ε φ(λ)/λ dλ < ∞`. Every catalog member behaves like a
    /// positive power at the origin, so this is always true.
    pub fn small_lambda_integrability(&self) -> bool {
        let power_at_zero = match self {
            Self::Stable { beta } => *beta,
            Self::TemperedStable { .. } => 1.0,
            Self::MixedStable(c) => c[0].beta,
        };
        power_at_zero > 0.0
    }

    /// The individual stable pieces `(β_i, w_i)`; tempered exponents report
    /// their untempered stable part.
    pub fn stable_parts(&self) -> Vec<StableComponent> {
        match self {
            Self::Stable { beta } | Self::TemperedStable { beta, .. } => {
                vec![StableComponent { beta: *beta, weight: 1.0 }]
            }
            Self::MixedStable(c) => c.clone(),
        }
    }
}

impl fmt::Display for LaplaceExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Stable { beta } => write!(f, "stable:{beta}"),
            Self::TemperedStable { beta, theta } => write!(f, "tempered:{beta},{theta}"),
            Self::MixedStable(c) => {
                write!(f, "mixed:")?;
                for (i, c) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{}*{}", c.beta, c.weight)?;
                }
                Ok(())
            }
        }
    }
}

fn parse_num(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("invalid {what} '{s}'")))
}

impl FromStr for LaplaceExponent {
    type Err = Error;

    /// Grammar: `stable:<beta>`, `tempered:<beta>,<theta>`,
    /// `mixed:<beta1>*<w1>+<beta2>*<w2>+...` (weights default to 1).
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("exponent spec '{s}' lacks ':'")))?;
        let built = match kind.trim() {
            "stable" => Self::stable(parse_num(body, "beta")?),
            "tempered" => {
                let (b, t) = body
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("tempered spec '{s}' needs <beta>,<theta>")))?;
                Self::tempered(parse_num(b, "beta")?, parse_num(t, "theta")?)
            }
            "mixed" => {
                let mut parts = Vec::new();
                for term in body.split('+') {
                    let (b, w) = match term.split_once('*') {
                        Some((b, w)) => (parse_num(b, "beta")?, parse_num(w, "weight")?),
                        None => (parse_num(term, "beta")?, 1.0),
                    };
                    parts.push(StableComponent { beta: b, weight: w });
                }
                Self::mixed(parts)
            }
            other => return Err(Error::Parse(format!("unknown exponent family '{other}'"))),
        };
        built.map_err(|e| match e {
            Error::Domain(m) => Error::Parse(m),
            e => e,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, integrate_half_line};
    use proptest::prelude::*;

    fn catalog() -> Vec<LaplaceExponent> {
        vec![
            LaplaceExponent::stable(0.3).unwrap(),
            LaplaceExponent::stable(0.75).unwrap(),
            LaplaceExponent::tempered(0.5, 1.0).unwrap(),
            LaplaceExponent::tempered(0.3, 2.0).unwrap(),
            "mixed:0.25+0.75".parse().unwrap(),
            "mixed:0.1*2+0.4*0.5".parse().unwrap(),
        ]
    }

    #[test]
    fn phi_examples() {
        let s = LaplaceExponent::stable(0.5).unwrap();
        assert!((s.phi(4.0).unwrap() - 2.0).abs() < 1e-15);
        let t = LaplaceExponent::tempered(0.5, 1.0).unwrap();
        assert!((t.phi(3.0).unwrap() - 1.0).abs() < 1e-15);
        let m: LaplaceExponent = "mixed:0.25*1+0.75*1".parse().unwrap();
        assert!((m.phi(16.0).unwrap() - 10.0).abs() < 1e-13);
        assert!(matches!(s.phi(0.0), Err(Error::Domain(_))));
        assert!(matches!(s.phi(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn phi_inverse_examples() {
        let s = LaplaceExponent::stable(0.5).unwrap();
        assert!((s.phi_inverse(2.0).unwrap() - 4.0).abs() < 1e-13);
        let t = LaplaceExponent::tempered(0.5, 1.0).unwrap();
        assert!((t.phi_inverse(1.0).unwrap() - 3.0).abs() < 1e-13);
        let m: LaplaceExponent = "mixed:0.25+0.75".parse().unwrap();
        assert!((m.phi_inverse(10.0).unwrap() - 16.0).abs() < 1e-11);
        assert!(s.phi_inverse(0.0).is_err());
    }

    #[test]
    fn levy_density_and_tail_examples() {
        let s = LaplaceExponent::stable(0.5).unwrap();
        // 0.5 / Γ(0.5)
        assert!((s.levy_density(1.0).unwrap() - 0.282_094_791_773_878_1).abs() < 1e-14);
        let t = LaplaceExponent::tempered(0.5, 1.0).unwrap();
        assert!((t.levy_density(1.0).unwrap() - 0.103_776_874_355_148_8).abs() < 1e-14);
        assert!((s.levy_tail(1.0).unwrap() - 0.564_189_583_547_756_3).abs() < 1e-14);
        assert!((s.levy_tail(0.25).unwrap() - 1.128_379_167_095_512_6).abs() < 1e-14);
        assert!(s.levy_tail(1e300).unwrap() < 1e-140);
        assert!(t.levy_tail(700.0).unwrap() < 1e-300);
        assert!(s.levy_density(0.0).is_err());
        assert!(s.levy_tail(-1.0).is_err());
        let mut last = f64::INFINITY;
        for k in 0..40 {
            let v = s.levy_density(2f64.powi(k)).unwrap();
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn regime_examples() {
        assert_eq!(LaplaceExponent::stable(0.75).unwrap().regime(), Regime::HighIndex);
        let m: LaplaceExponent = "mixed:0.2*1+0.5*1".parse().unwrap();
        assert_eq!(m.regime(), Regime::Critical);
        assert_eq!(LaplaceExponent::tempered(0.25, 1.0).unwrap().regime(), Regime::LowIndex);
        assert_eq!(LaplaceExponent::stable(0.5 + 1e-15).unwrap().regime(), Regime::HighIndex);
    }

    #[test]
    fn small_lambda_integrability_holds_for_catalog() {
        assert!(LaplaceExponent::stable(0.25).unwrap().small_lambda_integrability());
        assert!(LaplaceExponent::tempered(0.3, 2.0).unwrap().small_lambda_integrability());
        let m: LaplaceExponent = "mixed:0.1+0.4".parse().unwrap();
        assert!(m.small_lambda_integrability());
    }

    #[test]
    fn phi_is_increasing_and_midpoint_concave() {
        for e in catalog() {
            let grid: Vec<f64> = (-20..=20).map(|k| 2f64.powi(k)).collect();
            for w in grid.windows(2) {
                let (a, b) = (w[0], w[1]);
                let (fa, fb) = (e.phi_raw(a), e.phi_raw(b));
                assert!(fb > fa, "{e}: not increasing at {a}");
                assert!(e.phi_raw(0.5 * (a + b)) >= 0.5 * (fa + fb), "{e}: not concave at {a}");
            }
            assert!(e.phi_raw(1e-300) < 1e-20);
        }
    }

    #[test]
    fn phi_matches_levy_khintchine_quadrature() {
        for e in catalog() {
            for &s in &[0.1, 1.0, 7.0, 100.0] {
                let singular = e.leading_index(); // (1 - e^{-su}) ν ~ u^{-β}
                let q = integrate_half_line(
                    |u| -(-s * u).exp_m1() * e.levy_density_raw(u),
                    singular,
                    e.tail_index(),
                    1e-12,
                );
                let want = e.phi_raw(s);
                assert!(((q.value - want) / want).abs() < 1e-8, "{e} s={s}: {} vs {want}", q.value);
            }
        }
    }

    #[test]
    fn levy_tail_matches_density_quadrature() {
        for e in catalog() {
            for &delta in &[0.01, 0.5, 1.0, 3.0, 20.0] {
                // u = delta + v/(1-v)
                let q = integrate(
                    |v| {
                        let u = delta + v / (1.0 - v);
                        e.levy_density_raw(u) / ((1.0 - v) * (1.0 - v))
                    },
                    0.0,
                    1.0,
                    1e-13,
                    0.0,
                );
                // heavy power tails need the dedicated mapping
                let q2 = integrate(
                    |w| {
                        let b = e.tail_index();
                        let u = delta * w.powf(-1.0 / b);
                        e.levy_density_raw(u) * delta * w.powf(-1.0 / b - 1.0) / b
                    },
                    0.0,
                    1.0,
                    1e-13,
                    0.0,
                );
                let want = e.levy_tail(delta).unwrap();
                let got = if matches!(e, LaplaceExponent::TemperedStable { .. }) { q.value } else { q2.value };
                assert!(((got - want) / want).abs() < 1e-8, "{e} delta={delta}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn grammar_round_trips_and_rejects_garbage() {
        for e in catalog() {
            let back: LaplaceExponent = e.to_string().parse().unwrap();
            assert_eq!(back, e);
        }
        for bad in ["", "stable", "stable:1.5", "stable:x", "tempered:0.5", "tempered:0.5,-1", "mixed:", "mixed:0.3+0.3", "levy:0.5"] {
            assert!(matches!(bad.parse::<LaplaceExponent>(), Err(Error::Parse(_))), "{bad}");
        }
        let m: LaplaceExponent = "mixed:0.75*2+0.25".parse().unwrap();
        assert_eq!(m.stable_parts()[0].beta, 0.25);
        assert_eq!(m.stable_parts()[1].weight, 2.0);
    }

    proptest! {
        #[test]
        fn phi_inverse_round_trip(log_s in -13.8f64..13.8, which in 0usize..6) {
            let e = &catalog()[which];
            let s = log_s.exp();
            let back = e.phi_inverse(e.phi_raw(s)).unwrap();
            prop_assert!(((back - s) / s).abs() < 1e-10, "{} s={} back={}", e, s, back);
        }

        #[test]
        fn lower_component_never_changes_regime(lead in 0.05f64..0.95, low_frac in 0.01f64..0.99, w in 0.1f64..10.0) {
            let base = LaplaceExponent::stable(lead).unwrap();
            let mixed = LaplaceExponent::mixed(vec![
                StableComponent { beta: lead * low_frac, weight: w },
                StableComponent { beta: lead, weight: 1.0 },
            ]).unwrap();
            prop_assert_eq!(base.regime(), mixed.regime());
        }
    }
}
