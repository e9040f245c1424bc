//! Doubling-class diagnostics for a few radial weights.
//!
//! Power weights sit in both classes; `log(e/(1-r))^{-2}` has a tail that
//! shrinks too slowly for the reverse condition.

use bergzyg::weights::{check_d, log_inv_square_regularized, DoublingConfig, RadialWeight};

fn main() -> bergzyg::Result<()> {
    let cfg = DoublingConfig::default();
    let weights = [
        RadialWeight::power(0.0)?,
        RadialWeight::power(3.0)?,
        RadialWeight::power(-0.5)?,
        RadialWeight::log_inv_square(),
        log_inv_square_regularized(),
        RadialWeight::custom("exp(-1/(1-r))", |s| (-1.0 / (1.0 - s)).exp())?,
    ];
    println!("{:<28} {:>12} {:>10} {:>12} {:>10} {:>8}", "weight", "dhat", "C", "dcheck", "K", "beta");
    for w in &weights {
        let (hat, check) = check_d(w, &cfg)?;
        println!(
            "{:<28} {:>12} {:>10.4} {:>12} {:>10} {:>8.3}",
            w.name(),
            hat.verdict.to_string(),
            hat.constant_c,
            check.verdict.to_string(),
            check.constant_k.map_or("-".into(), |k| format!("{k}")),
            hat.exponent_beta,
        );
        for d in hat.diagnostics.iter().chain(&check.diagnostics) {
            println!("    {d}");
        }
    }
    Ok(())
}
