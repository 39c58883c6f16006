//! Spectral heat content of the unit disk under an inverse stable clock,
//! from bridge-corrected walks.

use subheat::estimators::McConfig;
use subheat::suites::disk_inverse_ratio;

fn main() -> subheat::Result<()> {
    let cfg = McConfig::new(40_000, 1);
    for beta in [0.5, 0.75] {
        for t in [1e-4, 1e-6] {
            let (r, se, c) = disk_inverse_ratio(beta, t, &cfg)?;
            println!("β={beta} t={t:e}: (π - Q̃)/t^(β/2) = {r:.4} ± {se:.4}, predicted {c:.4}");
        }
    }
    Ok(())
}
