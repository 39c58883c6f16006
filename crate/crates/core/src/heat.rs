//! Heat contents of Brownian motion with generator `Δ` (so `W_u` has
//! variance `2u` per coordinate), killed on leaving a domain.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::estimators::{run_paths, Estimate, McConfig};
use crate::exponent::LaplaceExponent;
use crate::quadrature::integrate;
use crate::rng::RandomStream;
use crate::special::{norm_sf, norm_stop_loss, FRAC_1_SQRT_2PI};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    Interval { a: f64, b: f64 },
    /// Disk of the given radius in the plane.
    Disk { radius: f64 },
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return domain(format!("interval needs finite a < b, got ({a}, {b})"));
        }
        Ok(Self::Interval { a, b })
    }

    pub fn disk(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return domain(format!("disk radius must be positive, got {radius}"));
        }
        Ok(Self::Disk { radius })
    }

    /// `|Ω|`.
    pub fn volume(&self) -> f64 {
        match *self {
            Self::Interval { a, b } => b - a,
            Self::Disk { radius } => PI * radius * radius,
        }
    }

    /// `|∂Ω|`: two endpoints, or the circumference.
    pub fn surface(&self) -> f64 {
        match *self {
            Self::Interval { .. } => 2.0,
            Self::Disk { radius } => 2.0 * PI * radius,
        }
    }

    pub fn interval_length(&self) -> Option<f64> {
        match *self {
            Self::Interval { a, b } => Some(b - a),
            Self::Disk { .. } => None,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Interval { a, b } => write!(f, "interval:{a},{b}"),
            Self::Disk { radius } => write!(f, "disk:{radius}"),
        }
    }
}

impl FromStr for Domain {
    type Err = Error;

    /// Grammar: `interval:<a>,<b>` or `disk:<R>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid domain spec '{s}'"));
        let (kind, body) = s.trim().split_once(':').ok_or_else(bad)?;
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
        let built = match kind.trim() {
            "interval" => {
                let (a, b) = body.split_once(',').ok_or_else(bad)?;
                Self::interval(num(a)?, num(b)?)
            }
            "disk" => Self::disk(num(body)?),
            _ => return Err(bad()),
        };
        built.map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Below `u = L²/10` the image series is used, above it the eigenseries.
pub fn series_switch(length: f64) -> f64 {
    0.1 * length * length
}

/// `|Ω| - Q(u)` on an interval of length `L` from the Dirichlet eigenseries
/// `Q(u) = Σ_{k odd} 8L/(k²π²) e^{-(kπ/L)² u}`.
pub fn q_deficit_eigen(length: f64, u: f64) -> f64 {
    let mut q = 0.0;
    let mut k = 1.0;
    loop {
        let rate = (k * PI / length).powi(2);
        let term = 8.0 * length / (k * k * PI * PI) * (-rate * u).exp();
        q += term;
        if term < 1e-17 * length {
            break;
        }
        k += 2.0;
    }
    length - q
}

// σ E[(Z - mL/σ)_+]: the Gaussian stop-loss at distance m·L.
fn stop_loss(length: f64, sigma: f64, m: f64) -> f64 {
    sigma * norm_stop_loss(m * length / sigma)
}

/// `|Ω| - Q(u)` from the method of images. With `A(c) = ∫∫_{Ω²} g(y - x + c)`
/// one has `Q = Σ_{k∈ℤ} (-1)^k A(kL)`, and every `A(kL)` reduces to Gaussian
/// stop-loss terms at nonpositive arguments, so no large terms cancel.
pub fn q_deficit_images(length: f64, u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let sigma = (2.0 * u).sqrt();
    let k0 = sigma * FRAC_1_SQRT_2PI;
    let mut deficit = 2.0 * k0 - 2.0 * stop_loss(length, sigma, 1.0);
    let mut sign = 1.0;
    for j in 1..200 {
        let j = j as f64;
        let prev = if j == 1.0 { k0 } else { stop_loss(length, sigma, j - 1.0) };
        let a_j = prev - 2.0 * stop_loss(length, sigma, j) + stop_loss(length, sigma, j + 1.0);
        deficit += 2.0 * sign * a_j;
        sign = -sign;
        if a_j.abs() < 1e-18 * deficit.abs() {
            break;
        }
    }
    deficit
}

/// `|Ω| - Q^W_Ω(u)` for an interval of the given length; `u = ∞` gives `L`.
pub fn q_deficit_interval(length: f64, u: f64) -> f64 {
    if u.is_infinite() {
        return length;
    }
    if u >= series_switch(length) {
        q_deficit_eigen(length, u)
    } else {
        q_deficit_images(length, u)
    }
}

/// `H^W_{Ω,Ω^c}(u) = ∫_Ω P_x(W_u ∉ Ω) dx` on an interval:
/// `2σφ(0) - 2σ E[(Z - L/σ)_+]` with `σ = √(2u)`, evaluated as
/// `2σ(φ(0) - φ(r)) + 2L P(Z > r)`, `r = L/σ`, which stays accurate as `u → ∞`.
pub fn h_exit_interval(length: f64, u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    if u.is_infinite() {
        return length;
    }
    let sigma = (2.0 * u).sqrt();
    let r = length / sigma;
    -2.0 * sigma * FRAC_1_SQRT_2PI * (-0.5 * r * r).exp_m1() + 2.0 * length * norm_sf(r)
}

fn interval_length(dom: &Domain) -> Result<f64> {
    dom.interval_length()
        .ok_or_else(|| Error::Unsupported("exact oracles exist only for intervals".into()))
}

/// Spectral heat content `Q^W_Ω(u)` of an interval.
pub fn exact_q_interval(dom: &Domain, u: f64) -> Result<f64> {
    let l = interval_length(dom)?;
    if !(u >= 0.0) {
        return domain(format!("heat content needs u >= 0, got {u}"));
    }
    Ok(l - q_deficit_interval(l, u))
}

/// Regular exit content `H^W_{Ω,Ω^c}(u)` of an interval.
pub fn exact_h_interval(dom: &Domain, u: f64) -> Result<f64> {
    let l = interval_length(dom)?;
    if !(u >= 0.0) {
        return domain(format!("heat content needs u >= 0, got {u}"));
    }
    Ok(h_exit_interval(l, u))
}

/// Spectral heat content of an interval under a subordinate clock,
/// `E[Q^W_Ω(S_t)] = Σ_{k odd} 8L/(k²π²) exp(-t φ((kπ/L)²))`, returned as
/// the deficit `L - E[Q^W_Ω(S_t)]` so that small values keep full precision.
///
/// The first `EIGEN_TERMS` odd modes are summed directly and the rest by
/// Euler-Maclaurin.
pub fn subordinate_q_deficit_interval(exp: &LaplaceExponent, dom: &Domain, t: f64) -> Result<f64> {
    let l = interval_length(dom)?;
    if !(t >= 0.0 && t.is_finite()) {
        return domain(format!("time must be finite and >= 0, got {t}"));
    }
    let c = 8.0 * l / (PI * PI);
    let g = |k: f64| -> f64 {
        let lam = (k * PI / l).powi(2);
        let phi = exp.phi(lam).unwrap_or(f64::INFINITY);
        -c / (k * k) * (-t * phi).exp_m1()
    };
    let mut head = 0.0;
    // small terms first
    for j in (0..EIGEN_TERMS).rev() {
        head += g((2 * j + 1) as f64);
    }
    let a = (2 * EIGEN_TERMS + 1) as f64;
    if t == 0.0 {
        return Ok(0.0);
    }
    let integral = integrate(|v: f64| if v == 0.0 { c / a } else { g(a / v) * a / (v * v) }, 0.0, 1.0, 1e-12, 0.0);
    let dg = (g(a + 1.0) - g(a - 1.0)) / 2.0;
    Ok(head + 0.5 * integral.value + 0.5 * g(a) - dg / 6.0)
}

pub const EIGEN_TERMS: u32 = 20_000;

/// Probability that a Brownian bridge of duration `h` (variance `2h`)
/// between points at distances `d1, d2 > 0` from a flat boundary touches it.
#[inline]
pub fn bridge_kill_probability(d1: f64, d2: f64, h: f64) -> f64 {
    (-d1 * d2 / h).exp()
}

pub const DEFAULT_DISK_STEPS: u32 = 64;

// Paths starting farther than this many standard deviations from the
// boundary survive with probability 1 - O(1e-20).
const LAYER_SIGMAS: f64 = 10.0;

/// Survival weight of one Euler walk with bridge correction, started at
/// distance `r0` from the centre of the disk.
fn disk_walk_survival(radius: f64, r0: f64, angle: f64, u: f64, steps: u32, stream: &mut RandomStream) -> f64 {
    let h = u / steps as f64;
    let scale = (2.0 * h).sqrt();
    let (mut x, mut y) = (r0 * angle.cos(), r0 * angle.sin());
    let mut dist = radius - r0;
    let mut survive = 1.0;
    for _ in 0..steps {
        x += scale * stream.normal();
        y += scale * stream.normal();
        let next = radius - (x * x + y * y).sqrt();
        if next <= 0.0 {
            return 0.0;
        }
        survive *= 1.0 - bridge_kill_probability(dist, next, h);
        dist = next;
    }
    survive
}

/// Deficit `|Ω| - Q(u)` contribution of path `index` out of `n` for the disk:
/// start points are stratified by area over the boundary layer.
pub(crate) fn disk_deficit_sample(radius: f64, u: f64, steps: u32, index: u64, n: u64, stream: &mut RandomStream) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let width = (LAYER_SIGMAS * (2.0 * u).sqrt()).min(radius);
    let inner = radius - width;
    let layer_area = PI * (radius * radius - inner * inner);
    let frac = (index as f64 + stream.uniform()) / n as f64;
    let r0 = (radius * radius - (radius * radius - inner * inner) * frac).sqrt();
    let angle = 2.0 * PI * stream.uniform();
    layer_area * (1.0 - disk_walk_survival(radius, r0, angle, u, steps, stream))
}

/// Monte Carlo `Q^W_Ω(u)` on a disk by bridge-corrected Euler walks with
/// `steps` steps of size `u/steps`.
pub fn mc_q_disk(dom: &Domain, u: f64, steps: u32, cfg: &McConfig) -> Result<Estimate> {
    let radius = match *dom {
        Domain::Disk { radius } => radius,
        _ => return Err(Error::Unsupported("mc_q_disk needs a disk".into())),
    };
    if !(u > 0.0) {
        return domain(format!("mc_q_disk requires u > 0, got {u}"));
    }
    if cfg.n_paths == 0 || steps == 0 {
        return domain("mc_q_disk needs n_paths > 0 and steps > 0");
    }
    let n = cfg.n_paths;
    let (acc, wall) = run_paths(cfg, |i, stream| Ok(disk_deficit_sample(radius, u, steps, i, n, stream)))?;
    Ok(Estimate::complement(dom.volume(), &acc, cfg, wall))
}

/// Interval analogue of [`mc_q_disk`]: Euler walks killed at either end with
/// the same bridge correction. Used to validate the correction against the
/// exact oracle.
pub fn mc_q_interval_walk(dom: &Domain, u: f64, steps: u32, cfg: &McConfig) -> Result<Estimate> {
    let l = interval_length(dom)?;
    if !(u > 0.0) || cfg.n_paths == 0 || steps == 0 {
        return domain("mc_q_interval_walk needs u > 0, n_paths > 0, steps > 0");
    }
    let n = cfg.n_paths;
    let h = u / steps as f64;
    let scale = (2.0 * h).sqrt();
    let width = (LAYER_SIGMAS * (2.0 * u).sqrt()).min(0.5 * l);
    let (acc, wall) = run_paths(cfg, |i, stream| {
        // stratified over the two boundary layers [0, w] and [L - w, L]
        let frac = (i as f64 + stream.uniform()) / n as f64;
        let pos = 2.0 * width * frac;
        let mut x = if pos < width { pos } else { l - (2.0 * width - pos) };
        let mut survive = 1.0;
        for _ in 0..steps {
            let next = x + scale * stream.normal();
            if next <= 0.0 || next >= l {
                survive = 0.0;
                break;
            }
            survive *= (1.0 - bridge_kill_probability(x, next, h))
                * (1.0 - bridge_kill_probability(l - x, l - next, h));
            x = next;
        }
        Ok(2.0 * width * (1.0 - survive))
    })?;
    Ok(Estimate::complement(l, &acc, cfg, wall))
}
