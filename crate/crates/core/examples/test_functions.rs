//! Norms of the kernel test functions `f_a`. The source norm stays of order
//! one while the target norm follows `ρ(a)`; their quotient `ρ/‖f_a‖^q`
//! staying bounded is what makes the test functions witness unboundedness.

use bergzyg::carleson::CarlesonContext;
use bergzyg::funcspace::AnalyticFunction;
use bergzyg::measures::DiscMeasure;
use bergzyg::scale::ScaleFunction;
use bergzyg::sweep::SweepGrid;
use bergzyg::weights::RadialWeight;
use num_complex::Complex64;

fn main() -> bergzyg::Result<()> {
    let omega = RadialWeight::power(1.0)?;
    let psi = ScaleFunction::log_power(1.0);
    let mu = DiscMeasure::weighted_area(&RadialWeight::power(2.0)?);
    let ctx = CarlesonContext::new(omega, psi.clone(), psi, mu, 1.0, 2.0)?;
    let gamma = ctx.embedding_gamma();
    println!("gamma = {gamma:.4} (lemma value {:.4})", ctx.gamma());

    println!("{:>3} {:>12} {:>14} {:>14} {:>12}", "j", "|f_a|^p", "|f_a|^q in mu", "rho", "rho/|f_a|^q");
    for j in (0..=12).step_by(2) {
        let a = SweepGrid::point(j, 1.0);
        let f = ctx.test_function(a, gamma)?;
        println!(
            "{j:>3} {:>12.6} {:>14.6e} {:>14.6e} {:>12.4}",
            ctx.source_norm_p(&f)?,
            ctx.target_norm_q(&f)?,
            ctx.characteristic(a)?,
            ctx.embedding_lower_ratio(a, gamma)?,
        );
    }

    let corpus = [
        AnalyticFunction::monomial(3),
        AnalyticFunction::kernel_power(Complex64::new(0.95, 0.0), 3.0, 1.0)?,
        AnalyticFunction::real_polynomial(&[1.0, 1.0, 1.0]),
    ];
    println!("embedding estimate over a small corpus: {:.6}", ctx.embedding_norm_estimate(&corpus)?);
    Ok(())
}
