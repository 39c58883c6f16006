//! Leading-order small-time predictions for several clocks.

use subheat::asymptotics::{predict_regular, predict_spectral};
use subheat::heat::Domain;
use subheat::{LaplaceExponent, TimeChangeKind};

fn main() -> subheat::Result<()> {
    let dom = Domain::interval(0.0, 1.0)?;
    for spec in ["stable:0.75", "stable:0.5", "stable:0.25", "mixed:0.5+0.25", "tempered:0.3,1"] {
        let exp: LaplaceExponent = spec.parse()?;
        for kind in [TimeChangeKind::Subordinator, TimeChangeKind::InverseSubordinator] {
            match (predict_spectral(&exp, &dom, kind), predict_regular(&exp, &dom, kind)) {
                (Ok(s), Ok(r)) => println!(
                    "{spec:<16} {kind:?}: [{}] rate {}, spectral {:.6}, regular {:.6}",
                    s.theorem_tag, s.rate, s.constant, r.constant
                ),
                (Err(e), _) | (_, Err(e)) => println!("{spec:<16} {kind:?}: {e}"),
            }
        }
    }
    Ok(())
}
