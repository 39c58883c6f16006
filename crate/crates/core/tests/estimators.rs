use subheat::estimators::{estimate_interval, naive_spectral_subordinate, McConfig, Quantity};
use subheat::heat::{subordinate_q_deficit_interval, Domain};
use subheat::sampler::{sample_subordinator, Sampling, TimeChangeSpec};
use subheat::suites::disk_inverse_ratio;
use subheat::{LaplaceExponent, RandomStream};

fn unit() -> Domain {
    Domain::interval(0.0, 1.0).unwrap()
}

fn within(label: &str, got: f64, se: f64, want: f64, sigmas: f64) {
    assert!((got - want).abs() <= sigmas * se, "{label}: got {got} ± {se}, want {want}");
}

#[test]
fn interval_estimates_match_eigen_sum() {
    let exps: Vec<LaplaceExponent> = vec![
        LaplaceExponent::stable(0.75).unwrap(),
        LaplaceExponent::stable(0.25).unwrap(),
        LaplaceExponent::tempered(0.5, 2.0).unwrap(),
        "mixed:0.3+0.8*0.5".parse().unwrap(),
    ];
    for exp in &exps {
        for t in [1e-1, 1e-4] {
            let exact = 1.0 - subordinate_q_deficit_interval(exp, &unit(), t).unwrap();
            for sampling in [Sampling::Natural, McConfig::new(2, 1).sampling] {
                let cfg = McConfig::new(40_000, 11).with_sampling(sampling);
                let spec = TimeChangeSpec::subordinator(exp.clone());
                let est = estimate_interval(&spec, &unit(), t, Quantity::Spectral, &cfg).unwrap();
                within(&format!("{exp} t={t} {sampling:?}"), est.value, est.stderr, exact, 4.5);
            }
        }
    }
}

#[test]
fn naive_walk_agrees_with_eigen_sum() {
    let exp = LaplaceExponent::stable(0.75).unwrap();
    let t = 0.05;
    let exact = 1.0 - subordinate_q_deficit_interval(&exp, &unit(), t).unwrap();
    let est = naive_spectral_subordinate(&exp, &unit(), t, 64, &McConfig::new(40_000, 2)).unwrap();
    within("naive", est.value, est.stderr, exact, 4.5);
}

#[test]
fn longer_interval_scales_time() {
    // Q̃ on (0, L) at time t equals L times Q̃ on (0, 1) at time t L^{-2β} for a stable clock
    let exp = LaplaceExponent::stable(0.6).unwrap();
    let l: f64 = 3.0;
    let t = 1e-3;
    let big = subordinate_q_deficit_interval(&exp, &Domain::interval(0.0, l).unwrap(), t).unwrap();
    let small = subordinate_q_deficit_interval(&exp, &unit(), t * l.powf(-1.2)).unwrap();
    assert!((big - l * small).abs() < 1e-10 * big);
}

#[test]
fn jump_frequency_approaches_levy_tail() {
    // P(D_t ≥ δ) / t → Π(δ, ∞) as t → 0
    let exp = LaplaceExponent::tempered(0.5, 1.0).unwrap();
    let delta = 0.5;
    let t = 1e-4;
    let n = 400_000u64;
    let mut stream = RandomStream::new(5, 0);
    let hits = (0..n).filter(|_| sample_subordinator(&exp, t, &mut stream) >= delta).count() as f64;
    let p = hits / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    let tail = exp.levy_tail(delta).unwrap();
    within("levy tail", p / t, 1.0e-2 * tail + se / t, tail, 4.0);
}

#[test]
fn disk_inverse_half_at_small_time() {
    let (r, se, c) = disk_inverse_ratio(0.5, 1e-6, &McConfig::new(40_000, 3)).unwrap();
    assert!((r - c).abs() <= 0.05 * c + 3.0 * se, "{r} ± {se} vs {c}");
}
