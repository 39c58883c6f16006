//! Sample-path diagnostics: Lévy measure limit, small-ball exponent,
//! heat-kernel profile and inverse-clock moments.

use subheat::diagnostics::{
    check_heat_kernel_bound, check_inverse_moments, check_levy_convergence, check_small_ball, LadderReport, TestFunction,
};
use subheat::estimators::McConfig;
use subheat::sampler::TimeChangeSpec;
use subheat::LaplaceExponent;

fn show(r: &LadderReport) {
    println!("{}: fitted {:.5}, target {:.5}, pass {}", r.name, r.fitted, r.target, r.pass);
    for p in &r.points {
        println!("    {:e}  {:.5} ± {:.5}", p.t, p.value, p.stderr);
    }
}

fn main() -> subheat::Result<()> {
    let cfg = McConfig::new(100_000, 1);
    let quarter = LaplaceExponent::stable(0.25)?;
    show(&check_levy_convergence(&quarter, TestFunction::PowerExp { gamma: 0.5 }, &[1e-2, 1e-3, 1e-4], &cfg)?);
    show(&check_small_ball(&LaplaceExponent::stable(0.5)?, 1.0, &[1e-2, 1e-3, 1e-4], &cfg)?);
    show(&check_heat_kernel_bound(&LaplaceExponent::tempered(0.5, 1.0)?, 1e-2, &[1e-3, 1e-2, 1e-1, 1.0], &cfg)?);
    show(&check_inverse_moments(&TimeChangeSpec::inverse(LaplaceExponent::stable(0.5)?), 1.0, &[1e-2, 1e-4], &cfg)?);
    Ok(())
}
