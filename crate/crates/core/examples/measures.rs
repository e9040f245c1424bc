//! Masses of mixed measures on Carleson squares and pseudohyperbolic discs.

use std::f64::consts::PI;

use bergzyg::geometry::Sector;
use bergzyg::measures::{AreaComponent, Atom, DiscMeasure};
use bergzyg::weights::RadialWeight;
use num_complex::Complex64;

fn main() -> bergzyg::Result<()> {
    // (1-|z|) dA on the right half-disc, plus a unit atom at 0.9.
    let area = AreaComponent {
        weight: RadialWeight::power(1.0)?,
        sector: Some(Sector::between(-0.5 * PI, 0.5 * PI)),
        factor: 1.0,
    };
    let atom = Atom { z: Complex64::new(0.9, 0.0), mass: 1.0 };
    let mu = DiscMeasure::new(vec![area], vec![atom])?;
    println!("total mass {:.6}, rotation invariant: {}", mu.total_mass(), mu.is_rotation_invariant());

    println!("{:>3} {:>8} {:>14} {:>14} {:>14}", "j", "theta", "mu(S(a))", "mu(disc)", "rotated S(a)");
    let quarter = mu.rotated(0.5 * PI);
    for j in [2, 4, 8, 16] {
        for theta in [0.0, 0.25 * PI, PI] {
            let a = Complex64::from_polar(1.0 - 0.5f64.powi(j), theta);
            println!(
                "{j:>3} {theta:>8.4} {:>14.6e} {:>14.6e} {:>14.6e}",
                mu.mass_on_square(a),
                mu.mass_on_disc(a, 0.5)?,
                quarter.mass_on_square(a * Complex64::from_polar(1.0, 0.5 * PI)),
            );
        }
    }
    Ok(())
}
