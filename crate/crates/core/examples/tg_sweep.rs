//! Sweeps of the integration operator `T_g f(z) = ∫_0^z f g'` for several
//! symbols on the same space.

use bergzyg::operators::{OperatorContext, Symbol};
use bergzyg::scale::ScaleFunction;
use bergzyg::sweep::SweepGrid;
use bergzyg::weights::RadialWeight;
use num_complex::Complex64;

fn main() -> bergzyg::Result<()> {
    let omega = RadialWeight::power(1.0)?;
    let psi = ScaleFunction::log_power(1.0);
    let symbols = [
        Symbol::Polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)]),
        Symbol::LogSym,
        Symbol::Lacunary(10),
        Symbol::Cauchy,
    ];
    let grid = SweepGrid::new(10)?;
    for g in symbols {
        let name = g.name();
        let ctx = OperatorContext::new(omega.clone(), omega.clone(), psi.clone(), psi.clone(), 2.0, 2.0, g)?;
        let r = ctx.tg_sweep(&grid);
        println!(
            "{name:<22} bounded={:<12} vanishing={:<14} sup={:.4e} slope={:.3}",
            r.verdict_bounded.to_string(),
            r.verdict_vanishing.to_string(),
            r.global_sup_estimate,
            r.boundary_exponent,
        );
        for w in ctx.warnings() {
            println!("    {w}");
        }
    }
    Ok(())
}
