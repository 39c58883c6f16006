//! Special functions not covered by `statrs`.

pub use libm::{erf, erfc};
pub use statrs::function::gamma::{gamma, ln_gamma};

pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
pub const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Standard normal density.
#[inline]
pub fn norm_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal upper tail `P(Z > x)`.
#[inline]
pub fn norm_sf(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// `E[(Z - r)_+]` for a standard normal `Z`, i.e. `pdf(r) - r * sf(r)`.
///
/// For large `r` the direct form cancels; the continued fraction for the
/// Mills ratio is used there instead.
pub fn norm_stop_loss(r: f64) -> f64 {
    if r < 4.0 {
        return norm_pdf(r) - r * norm_sf(r);
    }
    if r > 40.0 {
        return 0.0;
    }
    // pdf(r) - r sf(r) = pdf(r) (1 - r m(r)) with Mills ratio m = 1/(r + q),
    // q = 1/(r + 2/(r + 3/(r + ...))), so 1 - r m = q m without cancellation.
    let mut tail = 0.0;
    for k in (2..=48).rev() {
        tail = k as f64 / (r + tail);
    }
    let q = 1.0 / (r + tail);
    let m = 1.0 / (r + q);
    norm_pdf(r) * q * m
}

/// Upper incomplete gamma `Γ(a, x) = ∫_x^∞ s^{a-1} e^{-s} ds` for any real `a`
/// and `x > 0`.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> f64 {
    assert!(x > 0.0, "upper_incomplete_gamma requires x > 0");
    if x >= 1.0 + a.abs().max(1.0) {
        return upper_gamma_cf(a, x);
    }
    if a > 0.0 {
        return gamma(a) * statrs::function::gamma::gamma_ur(a, x);
    }
    // Γ(a, x) = (Γ(a+1, x) - x^a e^{-x}) / a, recursing upward to a > 0.
    let next = upper_incomplete_gamma(a + 1.0, x);
    (next - x.powf(a) * (-x).exp()) / a
}

// Modified Lentz evaluation of the Legendre continued fraction.
fn upper_gamma_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (a * x.ln() - x).exp() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad_upper(a: f64, x: f64) -> f64 {
        // substitution s = x + v / (1 - v) over (0, 1), midpoint rule
        let n = 400_000;
        let mut acc = 0.0;
        for i in 0..n {
            let v = (i as f64 + 0.5) / n as f64;
            let s = x + v / (1.0 - v);
            let jac = 1.0 / ((1.0 - v) * (1.0 - v));
            acc += s.powf(a - 1.0) * (-s).exp() * jac;
        }
        acc / n as f64
    }

    #[test]
    fn incomplete_gamma_matches_brute_force() {
        for &(a, x) in &[(-0.5, 0.3), (-0.25, 2.0), (-0.75, 7.5), (0.5, 0.2), (-0.9, 40.0)] {
            let got = upper_incomplete_gamma(a, x);
            let want = quad_upper(a, x);
            assert!(((got - want) / want).abs() < 1e-6, "a={a} x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn incomplete_gamma_positive_a_is_gamma_at_zero_limit() {
        let got = upper_incomplete_gamma(0.5, 1e-14);
        assert!((got - gamma(0.5)).abs() < 1e-6);
    }

    #[test]
    fn stop_loss_branches_agree() {
        for &r in &[3.9, 4.0, 4.1, 6.0] {
            let direct = norm_pdf(r) - r * norm_sf(r);
            let cf = norm_stop_loss(r);
            assert!(((direct - cf) / cf).abs() < 1e-7, "r={r}: {direct} vs {cf}");
        }
        assert!((norm_stop_loss(0.0) - FRAC_1_SQRT_2PI).abs() < 1e-16);
    }
}
