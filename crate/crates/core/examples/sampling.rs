//! Exact subordinator draws and inverse-subordinator draws, checked against
//! their closed-form moments.

use subheat::asymptotics::{inverse_moment, stable_moment};
use subheat::sampler::{sample_inverse, sample_subordinator, TimeChangeSpec};
use subheat::{LaplaceExponent, RandomStream};

fn main() -> subheat::Result<()> {
    let n = 200_000;
    let beta = 0.75;
    let exp = LaplaceExponent::stable(beta)?;
    let mut stream = RandomStream::new(1, 0);

    let m: f64 = (0..n).map(|_| sample_subordinator(&exp, 1.0, &mut stream).powf(0.25)).sum::<f64>() / n as f64;
    println!("E[S_1^0.25]: sample {m:.5}, exact {:.5}", stable_moment(beta, 0.25)?);

    let spec = TimeChangeSpec::inverse(exp);
    let mut total = 0.0;
    for _ in 0..n {
        total += sample_inverse(&spec, 1.0, &mut stream)?;
    }
    println!("E[E_1]: sample {:.5}, exact {:.5}", total / n as f64, inverse_moment(beta, 1.0)?);
    Ok(())
}
