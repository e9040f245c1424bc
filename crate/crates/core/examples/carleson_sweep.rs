//! Boundary sweep of the Carleson characteristic for a sector measure.
//!
//! Writes the CSV to stdout and the verdicts to stderr:
//! `cargo run --example carleson_sweep > sweep.csv`.

use std::f64::consts::PI;

use bergzyg::carleson::CarlesonContext;
use bergzyg::geometry::Sector;
use bergzyg::measures::{AreaComponent, DiscMeasure};
use bergzyg::scale::ScaleFunction;
use bergzyg::sweep::SweepGrid;
use bergzyg::weights::RadialWeight;

fn main() -> bergzyg::Result<()> {
    let omega = RadialWeight::power(1.0)?;
    // ω dA restricted to a quarter of the disc, scaled by (1-|z|)^{1/2}.
    let mu = DiscMeasure::new(
        vec![AreaComponent {
            weight: RadialWeight::power(1.5)?,
            sector: Some(Sector::between(0.0, 0.5 * PI)),
            factor: 1.0,
        }],
        vec![],
    )?;
    let ctx = CarlesonContext::new(omega, ScaleFunction::one(), ScaleFunction::one(), mu, 2.0, 2.0)?;
    let report = ctx.sweep(&SweepGrid::new(12)?, false);
    report.write_csv(std::io::stdout().lock())?;

    eprintln!("bounded: {}  vanishing: {}", report.verdict_bounded, report.verdict_vanishing);
    eprintln!("sup {:.6}  boundary exponent {:.4}", report.global_sup_estimate, report.boundary_exponent);
    for (j, m) in &report.annulus_maxima {
        eprintln!("  j={j:>2} max rho {m:.6e}");
    }
    Ok(())
}
