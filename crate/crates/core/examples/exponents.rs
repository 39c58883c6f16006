//! Laplace exponents: evaluation, inversion, regime and Lévy tail.

use subheat::LaplaceExponent;

fn main() -> subheat::Result<()> {
    let exps: Vec<LaplaceExponent> = vec![
        LaplaceExponent::stable(0.75)?,
        LaplaceExponent::tempered(0.5, 1.0)?,
        "mixed:0.5+0.25".parse()?,
    ];
    for e in &exps {
        println!("{e}  regime {:?}, leading index {}", e.regime(), e.leading_index());
        for s in [1e-2, 1.0, 1e4] {
            let y = e.phi(s)?;
            println!("  phi({s:e}) = {y:.6e}   phi^-1 back = {:.6e}", e.phi_inverse(y)?);
        }
        println!("  Levy tail at 0.1: {:.6}", e.levy_tail(0.1)?);
    }
    Ok(())
}
