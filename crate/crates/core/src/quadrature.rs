//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        resk += WGK[j] * pair;
        if j % 2 == 1 {
            resg += WG[j / 2] * pair;
        }
    }
    (resk * half, ((resk - resg) * half).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrate `f` over `[a, b]` until the error estimate drops below
/// `max(abs_tol, rel_tol * |value|)` or 4000 subdivisions are used.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> QuadResult {
    let (value, error) = kronrod(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut intervals = 1;
    while total_err > abs_tol.max(rel_tol * total.abs()) && intervals < 4000 {
        let worst = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (lv, le) = kronrod(&f, worst.a, mid);
        let (rv, re) = kronrod(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Segment { a: mid, b: worst.b, value: rv, error: re });
        intervals += 1;
    }
    // re-sum to shed accumulated rounding from the running updates
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    QuadResult { value, error, intervals }
}

/// `∫_0^∞ f(u) du` for an integrand with an integrable singularity
/// `f(u) ~ u^{-singular}` at 0 (`singular < 1`) and a tail no heavier than
/// `u^{-1-tail_index}` (`tail_index > 0`).
///
/// Splits at `u = 1`; the head is mapped by `u = w^m` with `m = 1/(1 - singular)`
/// which flattens the envelope, the tail by `u = v^{-1/tail_index}`.
pub fn integrate_half_line<F: Fn(f64) -> f64>(
    f: F,
    singular: f64,
    tail_index: f64,
    rel_tol: f64,
) -> QuadResult {
    assert!(singular < 1.0 && tail_index > 0.0);
    let m = 1.0 / (1.0 - singular.max(0.0));
    let head = integrate(
        |w: f64| {
            let u = w.powf(m);
            if u == 0.0 {
                return 0.0;
            }
            f(u) * m * w.powf(m - 1.0)
        },
        0.0,
        1.0,
        rel_tol,
        0.0,
    );
    let inv = 1.0 / tail_index;
    let tail = integrate(
        |v: f64| {
            let u = v.powf(-inv);
            if !u.is_finite() {
                return 0.0;
            }
            f(u) * inv * v.powf(-inv - 1.0)
        },
        0.0,
        1.0,
        rel_tol,
        0.0,
    );
    QuadResult {
        value: head.value + tail.value,
        error: head.error + tail.error,
        intervals: head.intervals + tail.intervals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-14, 0.0);
        assert!((r.value - 8.0).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{-1/2} = 2
        let r = integrate(|x| x.powf(-0.5), 0.0, 1.0, 1e-10, 0.0);
        assert!((r.value - 2.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn half_line_gamma_integral() {
        // ∫_0^∞ u^{-0.7} e^{-u} du = Γ(0.3)
        let r = integrate_half_line(|u| u.powf(-0.7) * (-u).exp(), 0.7, 1.0, 1e-12);
        let want = crate::special::gamma(0.3);
        assert!(((r.value - want) / want).abs() < 1e-10, "{} vs {want}", r.value);
    }

    #[test]
    fn half_line_power_tail() {
        // ∫_0^∞ min(u,1) u^{-1.25} ... = ∫_0^1 u^{-0.25} + ∫_1^∞ u^{-1.25} = 4/3 + 4
        let r = integrate_half_line(|u| u.min(1.0) * u.powf(-1.25), 0.25, 0.25, 1e-12);
        assert!((r.value - (4.0 / 3.0 + 4.0)).abs() < 1e-9, "{}", r.value);
    }
}
