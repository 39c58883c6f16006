//! Sampling of subordinator marginals `D_t` and inverse-subordinator
//! marginals `E_t = inf{u > 0 : D_u > t}`.
//!
//! Stable variates use Kanter's representation
//! `S_τ = τ^{1/β} (A(U)/E)^{(1-β)/β}` with `U ~ Unif(0, π)`, `E ~ Exp(1)`.
//! Tempered variates are stable variates thinned by `e^{-θx}`; mixed variates
//! are sums of independent stable variates run on clocks `w_i t`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exponent::LaplaceExponent;
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TimeChangeKind {
    Subordinator,
    InverseSubordinator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeChangeSpec {
    pub exponent: LaplaceExponent,
    pub kind: TimeChangeKind,
    /// Coarse step of the first-passage walk. `None` picks
    /// `1e-2 / φ(1/t)`, a hundredth of the natural scale of `E_t`.
    pub grid_step: Option<f64>,
    pub refine_bisections: u32,
}

pub const DEFAULT_REFINE_BISECTIONS: u32 = 20;
/// Conditional redraws tried per halving before refinement stops.
pub const REFINE_ATTEMPTS: u32 = 32;
const RUNAWAY_STEPS: u64 = 1_000_000_000;

impl TimeChangeSpec {
    pub fn new(exponent: LaplaceExponent, kind: TimeChangeKind) -> Self {
        Self { exponent, kind, grid_step: None, refine_bisections: DEFAULT_REFINE_BISECTIONS }
    }

    pub fn subordinator(exponent: LaplaceExponent) -> Self {
        Self::new(exponent, TimeChangeKind::Subordinator)
    }

    pub fn inverse(exponent: LaplaceExponent) -> Self {
        Self::new(exponent, TimeChangeKind::InverseSubordinator)
    }

    pub fn with_grid(mut self, grid_step: f64, refine_bisections: u32) -> Self {
        self.grid_step = Some(grid_step);
        self.refine_bisections = refine_bisections;
        self
    }

    fn step_for(&self, t: f64) -> Result<f64> {
        let h = match self.grid_step {
            Some(h) => h,
            None => 1e-2 / self.exponent.phi_raw(1.0 / t),
        };
        if !(h > 0.0 && h.is_finite()) {
            return domain(format!("grid_step must be positive, got {h}"));
        }
        Ok(h)
    }
}

/// Importance-sampling proposal for the Kanter pair `(U, E)`.
///
/// Each coordinate is drawn from a two-point mixture of its natural law and a
/// law that piles mass where `A(U)/E` is large: `π - U = π V^{u_power}` and
/// `E` log-uniform on `[floor, 1]`, with
/// `floor = floor_scale · τ^{1/(1-β)}`. Both likelihood ratios are bounded by
/// `1/(1 - mix)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBoost {
    pub mix: f64,
    pub u_power: f64,
    pub floor_scale: f64,
}

impl Default for TailBoost {
    fn default() -> Self {
        Self { mix: 0.5, u_power: 4.0, floor_scale: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum Sampling {
    #[default]
    Natural,
    Boosted(TailBoost),
}

/// A variate together with its likelihood ratio against the target law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedDraw {
    pub value: f64,
    pub weight: f64,
}

/// `ln A(u)` with `x = π - u` supplied separately so that `sin u` keeps full
/// relative precision as `u → π`.
#[inline]
fn kanter_ln_a(beta: f64, u: f64, x: f64) -> f64 {
    let lsb = (beta * u).sin().ln();
    (lsb - x.sin().ln()) / (1.0 - beta) + ((1.0 - beta) * u).sin().ln() - lsb
}

/// Kanter's `A(u)` for `u ∈ (0, π)`.
pub fn kanter_a(beta: f64, u: f64) -> f64 {
    kanter_ln_a(beta, u, PI - u).exp()
}

#[inline]
fn stable_from_logs(beta: f64, ln_tau: f64, ln_a: f64, ln_e: f64) -> f64 {
    (ln_tau / beta + (1.0 - beta) / beta * (ln_a - ln_e)).exp()
}

/// Exact draw of `S_t` for the `β`-stable subordinator, `E e^{-sS_t} = e^{-t s^β}`.
pub fn sample_stable(beta: f64, t: f64, stream: &mut RandomStream) -> f64 {
    let v = stream.uniform();
    let (u, x) = (PI * v, PI * (1.0 - v));
    let ln_e = stream.exponential().ln();
    stable_from_logs(beta, t.ln(), kanter_ln_a(beta, u, x), ln_e)
}

fn stable_weighted(beta: f64, t: f64, stream: &mut RandomStream, sampling: Sampling) -> WeightedDraw {
    let boost = match sampling {
        Sampling::Natural => {
            return WeightedDraw { value: sample_stable(beta, t, stream), weight: 1.0 };
        }
        Sampling::Boosted(b) => b,
    };
    let ln_tau = t.ln();
    let m = boost.u_power;
    let mix = boost.mix;

    let pick_u = stream.uniform() < mix;
    let v = stream.uniform();
    let frac = if pick_u { v.powf(m) } else { v };
    let x = PI * frac;
    let u = PI - x;
    let w_u = 1.0 / ((1.0 - mix) + mix / m * frac.powf(1.0 / m - 1.0));

    let ln_floor = (boost.floor_scale.ln() + ln_tau / (1.0 - beta)).clamp(-690.0, 1e-3f64.ln());
    let span = -ln_floor;
    let pick_e = stream.uniform() < mix;
    let e = if pick_e { (ln_floor * stream.uniform()).exp() } else { stream.exponential() };
    let natural = (-e).exp();
    let log_uniform = if e <= 1.0 && e >= ln_floor.exp() { 1.0 / (e * span) } else { 0.0 };
    let w_e = natural / ((1.0 - mix) * natural + mix * log_uniform);

    WeightedDraw {
        value: stable_from_logs(beta, ln_tau, kanter_ln_a(beta, u, x), e.ln()),
        weight: w_u * w_e,
    }
}

/// Exponentially tempered stable draw by rejection; clocks with
/// `t θ^β > 1` are split into `⌈t θ^β⌉` chunks so each chunk accepts with
/// probability at least `e^{-1}`.
pub fn sample_tempered(beta: f64, theta: f64, t: f64, stream: &mut RandomStream) -> f64 {
    let load = t * theta.powf(beta);
    let chunks = load.ceil().max(1.0) as u64;
    let tau = t / chunks as f64;
    let mut total = 0.0;
    for _ in 0..chunks {
        loop {
            let x = sample_stable(beta, tau, stream);
            if stream.uniform() < (-theta * x).exp() {
                total += x;
                break;
            }
        }
    }
    total
}

/// Sum of independent stable draws, component `i` on clock `w_i t`.
pub fn sample_mixed(components: &[crate::exponent::StableComponent], t: f64, stream: &mut RandomStream) -> f64 {
    components
        .iter()
        .map(|c| sample_stable(c.beta, c.weight * t, stream))
        .sum()
}

/// Draw of `D_t` from its exact law.
pub fn sample_subordinator(exponent: &LaplaceExponent, t: f64, stream: &mut RandomStream) -> f64 {
    match exponent {
        LaplaceExponent::Stable { beta } => sample_stable(*beta, t, stream),
        LaplaceExponent::TemperedStable { beta, theta } => sample_tempered(*beta, *theta, t, stream),
        LaplaceExponent::MixedStable(c) => sample_mixed(c, t, stream),
    }
}

/// Draw of `D_t` under `sampling`. With [`Sampling::Natural`] the weight is 1.
///
/// Tempered clocks with `t θ^β ≤ 1` are sampled as tilted stable draws with
/// weight `e^{tθ^β - θx}`, which lets the tail boost apply; heavier loads fall
/// back to exact rejection with unit weight.
pub fn sample_subordinator_weighted(
    exponent: &LaplaceExponent,
    t: f64,
    stream: &mut RandomStream,
    sampling: Sampling,
) -> WeightedDraw {
    match (exponent, sampling) {
        (_, Sampling::Natural) => WeightedDraw { value: sample_subordinator(exponent, t, stream), weight: 1.0 },
        (LaplaceExponent::Stable { beta }, s) => stable_weighted(*beta, t, stream, s),
        (LaplaceExponent::TemperedStable { beta, theta }, s) => {
            let load = t * theta.powf(*beta);
            if load > 1.0 {
                return WeightedDraw { value: sample_tempered(*beta, *theta, t, stream), weight: 1.0 };
            }
            let d = stable_weighted(*beta, t, stream, s);
            let tilt = if d.value.is_finite() { (load - theta * d.value).exp() } else { 0.0 };
            WeightedDraw { value: d.value, weight: d.weight * tilt }
        }
        (LaplaceExponent::MixedStable(c), s) => c.iter().fold(
            WeightedDraw { value: 0.0, weight: 1.0 },
            |acc, c| {
                let d = stable_weighted(c.beta, c.weight * t, stream, s);
                WeightedDraw { value: acc.value + d.value, weight: acc.weight * d.weight }
            },
        ),
    }
}

/// Draw of `E_t`. Exact for stable exponents via `E_t = (t/S_1)^β`; otherwise
/// a first-passage walk on the grid `grid_step` whose crossing step is
/// refined `refine_bisections` times, reporting the midpoint of the final cell.
///
/// The walk is exact at grid nodes, so the returned value is within half the
/// final cell width of the true passage time.
pub fn sample_inverse(spec: &TimeChangeSpec, t: f64, stream: &mut RandomStream) -> Result<f64> {
    if spec.kind != TimeChangeKind::InverseSubordinator {
        return domain("sample_inverse needs an inverse-subordinator time change");
    }
    if !(t > 0.0) {
        return domain(format!("sample_inverse requires t > 0, got {t}"));
    }
    if let LaplaceExponent::Stable { beta } = spec.exponent {
        let s1 = sample_stable(beta, 1.0, stream);
        return Ok((beta * (t.ln() - s1.ln())).exp());
    }
    first_passage(&spec.exponent, t, spec.step_for(t)?, spec.refine_bisections, stream)
}

fn first_passage(
    exponent: &LaplaceExponent,
    level: f64,
    step: f64,
    bisections: u32,
    stream: &mut RandomStream,
) -> Result<f64> {
    let mut clock = 0.0;
    let mut height = 0.0;
    let mut steps: u64 = 0;
    let tick = |steps: &mut u64| -> Result<()> {
        *steps += 1;
        if *steps > RUNAWAY_STEPS {
            Err(Error::Runaway { level, steps: *steps })
        } else {
            Ok(())
        }
    };
    loop {
        tick(&mut steps)?;
        let x = sample_subordinator(exponent, step, stream);
        if height + x <= level {
            height += x;
            clock += step;
            continue;
        }
        // Only the event {crossing in this cell} has been observed, so each
        // halving redraws the cell as two half-steps conditioned on it. The
        // acceptance rate is P(cell crosses), which collapses once a single
        // jump does the crossing; past REFINE_ATTEMPTS the current cell stands.
        let mut width = step;
        'refine: for _ in 0..bisections {
            let half = 0.5 * width;
            let gap = level - height;
            for _ in 0..REFINE_ATTEMPTS {
                tick(&mut steps)?;
                let x1 = sample_subordinator(exponent, half, stream);
                let x2 = sample_subordinator(exponent, half, stream);
                if x1 + x2 > gap {
                    if x1 <= gap {
                        height += x1;
                        clock += half;
                    }
                    width = half;
                    continue 'refine;
                }
            }
            break;
        }
        return Ok(clock + 0.5 * width);
    }
}

/// Draw of `D_t` or `E_t` according to `spec.kind`.
pub fn sample_time_change(spec: &TimeChangeSpec, t: f64, stream: &mut RandomStream) -> Result<f64> {
    match spec.kind {
        TimeChangeKind::Subordinator => Ok(sample_subordinator(&spec.exponent, t, stream)),
        TimeChangeKind::InverseSubordinator => sample_inverse(spec, t, stream),
    }
}
