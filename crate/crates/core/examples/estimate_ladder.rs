//! Monte Carlo heat contents along a time ladder, and the fitted rate.
//!
//! `cargo run --release --example estimate_ladder -- [paths]`

use subheat::asymptotics::{fit_rate, predict_spectral, LadderPoint};
use subheat::estimators::{estimate_interval, McConfig, Quantity};
use subheat::heat::Domain;
use subheat::sampler::TimeChangeSpec;
use subheat::LaplaceExponent;

fn main() -> subheat::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100_000);
    let dom = Domain::interval(0.0, 1.0)?;
    let spec = TimeChangeSpec::subordinator(LaplaceExponent::stable(0.75)?);
    let pred = predict_spectral(&spec.exponent, &dom, spec.kind)?;
    let cfg = McConfig::new(n, 1);

    let mut ladder = Vec::new();
    for t in [1e-2, 1e-4, 1e-6, 1e-8] {
        let est = estimate_interval(&spec, &dom, t, Quantity::Spectral, &cfg)?;
        println!("t={t:e}  Q̃ = {:.12} ± {:.2e}  ({:.2}s)", est.value, est.stderr, est.wall_time);
        ladder.push(LadderPoint { t, value: 1.0 - est.value, stderr: est.stderr });
    }
    let fit = fit_rate(&ladder, &pred, 0.03)?;
    for (t, r, se) in &fit.ratios {
        println!("  ratio at {t:e}: {r:.5} ± {se:.5}");
    }
    println!(
        "target {:.5}, extrapolated {:?}, correction order {:?}, pass {}",
        fit.target, fit.extrapolated, fit.correction_order, fit.pass
    );
    Ok(())
}
