use proptest::prelude::*;

use subheat::asymptotics::{expansion, fit_rate, predict_regular, predict_spectral, AsymptoticPrediction, LadderPoint, RateFunction};
use subheat::exponent::Regime;
use subheat::heat::{exact_h_interval, exact_q_interval, subordinate_q_deficit_interval, Domain};
use subheat::sampler::{sample_stable, sample_subordinator};
use subheat::special::gamma;
use subheat::{LaplaceExponent, RandomStream, TimeChangeKind};

fn exponent() -> impl Strategy<Value = LaplaceExponent> {
    prop_oneof![
        (0.05f64..0.95).prop_map(|b| LaplaceExponent::stable(b).unwrap()),
        (0.05f64..0.95, 0.1f64..10.0).prop_map(|(b, th)| LaplaceExponent::tempered(b, th).unwrap()),
        (0.05f64..0.45, 0.55f64..0.95, 0.1f64..3.0)
            .prop_map(|(b1, b2, w)| format!("mixed:{b1}*{w}+{b2}").parse().unwrap()),
    ]
}

proptest! {
    #[test]
    fn brownian_contents_are_ordered(l in 0.1f64..10.0, u1 in 1e-8f64..10.0, f in 1.0f64..100.0) {
        let dom = Domain::interval(0.0, l).unwrap();
        let (q1, q2) = (exact_q_interval(&dom, u1).unwrap(), exact_q_interval(&dom, u1 * f).unwrap());
        prop_assert!((0.0..=l).contains(&q1));
        prop_assert!(q2 <= q1 + 1e-12 * l);
        let h = exact_h_interval(&dom, u1).unwrap();
        // leaving at time u implies having hit the boundary before u
        prop_assert!(h >= 0.0 && h <= l - q1 + 1e-12 * l);
    }

    #[test]
    fn subordinate_oracle_is_monotone_and_bounded(exp in exponent(), t in 1e-9f64..1.0) {
        let dom = Domain::interval(0.0, 1.0).unwrap();
        let d1 = subordinate_q_deficit_interval(&exp, &dom, t).unwrap();
        let d2 = subordinate_q_deficit_interval(&exp, &dom, 2.0 * t).unwrap();
        prop_assert!(d1 > 0.0 && d1 <= d2 * (1.0 + 1e-12) && d2 <= 1.0);
    }

    #[test]
    fn expansion_terms(beta in 0.05f64..0.95, c in proptest::collection::vec(-5.0f64..5.0, 1..6)) {
        let terms = expansion(beta, &c).unwrap();
        for (i, (term, ci)) in terms.iter().zip(&c).enumerate() {
            let n = (i + 1) as f64;
            prop_assert!((term.exponent - n * beta / 2.0).abs() < 1e-15);
            let back = term.coefficient * gamma(1.0 + n * beta / 2.0) / gamma(1.0 + n / 2.0);
            prop_assert!((back - ci).abs() <= 1e-12 * ci.abs().max(1.0));
        }
    }

    #[test]
    fn spectral_constant_is_twice_regular(exp in exponent(), inverse in any::<bool>()) {
        let dom = Domain::interval(0.0, 1.0).unwrap();
        let kind = if inverse { TimeChangeKind::InverseSubordinator } else { TimeChangeKind::Subordinator };
        let (s, r) = match (predict_spectral(&exp, &dom, kind), predict_regular(&exp, &dom, kind)) {
            (Ok(s), Ok(r)) => (s, r),
            _ => return Ok(()),
        };
        prop_assert_eq!(&s.rate, &r.rate);
        if inverse || exp.regime() != Regime::LowIndex {
            prop_assert!((s.constant - 2.0 * r.constant).abs() <= 1e-12 * s.constant);
        }
    }

    #[test]
    fn fit_recovers_exact_power_corrections(c in 0.5f64..5.0, a in -3.0f64..3.0, p in 0.1f64..1.5) {
        prop_assume!(a.abs() > 1e-2);
        let pred = AsymptoticPrediction { rate: RateFunction::Power(0.5), constant: c, theorem_tag: "synthetic".into() };
        let ladder: Vec<LadderPoint> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&t| LadderPoint { t, value: (c + a * t.powf(p)) * t.sqrt(), stderr: 0.0 })
            .collect();
        let fit = fit_rate(&ladder, &pred, 0.01).unwrap();
        prop_assert!((fit.extrapolated.unwrap() - c).abs() < 1e-6 * c);
        prop_assert!((fit.correction_order.unwrap() - p).abs() < 1e-5);
    }

    #[test]
    fn stable_draws_scale_exactly(beta in 0.05f64..0.95, t in 1e-10f64..1e3, seed in any::<u64>()) {
        let x1 = sample_stable(beta, 1.0, &mut RandomStream::new(seed, 0));
        let xt = sample_stable(beta, t, &mut RandomStream::new(seed, 0));
        prop_assert!(x1 > 0.0 && xt.is_finite());
        prop_assert!((xt - t.powf(1.0 / beta) * x1).abs() <= 1e-11 * xt);
    }

    #[test]
    fn subordinator_draws_are_positive(exp in exponent(), t in 1e-8f64..10.0, seed in any::<u64>()) {
        let x = sample_subordinator(&exp, t, &mut RandomStream::new(seed, 1));
        prop_assert!(x > 0.0 && x.is_finite());
    }
}
