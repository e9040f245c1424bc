//! Littlewood-Paley ratios `‖f‖ / ‖(Tf)'(1-|z|)‖` over random polynomials.

use bergzyg::harness::random_polynomial;
use bergzyg::operators::{OperatorContext, Symbol};
use bergzyg::scale::ScaleFunction;
use bergzyg::stats::Band;
use bergzyg::weights::RadialWeight;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn main() -> bergzyg::Result<()> {
    let mut rng = StdRng::seed_from_u64(7);
    for (alpha, beta) in [(0.0, 0.0), (1.0, 1.0), (2.0, -1.0)] {
        let w = RadialWeight::power(alpha)?;
        let psi = ScaleFunction::log_power(beta);
        let ctx = OperatorContext::new(w.clone(), w, psi.clone(), psi, 2.0, 2.0, Symbol::LogSym)?;
        let mut band: Option<Band> = None;
        for _ in 0..20 {
            let degree = rng.gen_range(1..=12);
            let f = random_polynomial(&mut rng, degree);
            let r = ctx.littlewood_paley_ratio(&f)?;
            band.get_or_insert(Band::point(r)).include(r);
        }
        let band = band.expect("20 samples");
        println!("alpha={alpha} beta={beta:>4}: ratios in {band}, spread {:.3}", band.spread());
    }
    Ok(())
}
