//! Zygmund-type quasinorms `(∫ |f|^p Ψ(|f|) ω dA)^{1/p}` and their
//! quasi-triangle constants.

use bergzyg::funcspace::{integral_mean, quasi_triangle_check, quasinorm, AnalyticFunction};
use bergzyg::measures::DiscMeasure;
use bergzyg::scale::ScaleFunction;
use bergzyg::weights::RadialWeight;
use num_complex::Complex64;

fn main() -> bergzyg::Result<()> {
    let mu = DiscMeasure::weighted_area(&RadialWeight::power(1.0)?);
    let kernel = AnalyticFunction::kernel_power(Complex64::new(0.9, 0.0), 2.0, 1.0)?;
    let poly = AnalyticFunction::real_polynomial(&[1.0, -2.0, 0.0, 3.0]);

    for beta in [-1.0, 0.0, 1.0] {
        let psi = ScaleFunction::log_power(beta);
        for p in [1.0, 2.0] {
            println!(
                "{:<18} p={p}  |k|={:.6}  |poly|={:.6}  triangle ratio {:.4}",
                psi.name(),
                quasinorm(&kernel, &mu, &psi, p)?,
                quasinorm(&poly, &mu, &psi, p)?,
                quasi_triangle_check(&kernel, &poly, &mu, &psi, p)?,
            );
        }
    }

    println!("integral means M_2(r, k):");
    for r in [0.5, 0.9, 0.99] {
        println!("  r = {r}: {:.6}", integral_mean(&kernel, r, 2.0)?);
    }
    Ok(())
}
