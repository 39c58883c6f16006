//! Exact Brownian heat contents on an interval, and the exact spectral
//! content under a subordinate clock from the eigenfunction expansion.

use subheat::heat::{exact_h_interval, exact_q_interval, subordinate_q_deficit_interval, Domain};
use subheat::LaplaceExponent;

fn main() -> subheat::Result<()> {
    let dom = Domain::interval(0.0, 1.0)?;
    println!("{:>8} {:>22} {:>22}", "u", "Q(u)", "H(u)");
    for u in [1e-8, 1e-4, 1e-2, 1.0] {
        println!("{u:>8e} {:>22.15e} {:>22.15e}", exact_q_interval(&dom, u)?, exact_h_interval(&dom, u)?);
    }

    let exp: LaplaceExponent = "mixed:0.5+0.25".parse()?;
    println!("\n{exp}: (|Ω| - Q̃(t)) / (t ln 1/t)");
    for t in [1e-4, 1e-6, 1e-8, 1e-10, 1e-12] {
        let d = subordinate_q_deficit_interval(&exp, &dom, t)?;
        println!("  t={t:e}  {:.6}", d / (t * (1.0 / t).ln()));
    }
    println!("  limit 4/π = {:.6}", 4.0 / std::f64::consts::PI);
    Ok(())
}
