//! Class-L checks and log-power envelopes for scale functions. The spliced
//! tower oscillates between `log^4` and `log^-4` and is not essentially
//! monotone in either direction.

use bergzyg::scale::{check_class_l, growth_envelope, ScaleFunction, ScaleThresholds};

fn main() -> bergzyg::Result<()> {
    let th = ScaleThresholds::default();
    let scales = [
        ScaleFunction::one(),
        ScaleFunction::log_power(1.0),
        ScaleFunction::log_power(-2.0),
        ScaleFunction::exponential(),
        ScaleFunction::tower_splice(4.0, -4.0, 2.0, 3.0)?,
    ];
    for psi in &scales {
        println!("{}", psi.name());
        let l = match check_class_l(psi, &th) {
            Ok(l) => l,
            Err(e) => {
                println!("  rejected: {e}");
                continue;
            }
        };
        println!(
            "  square doubling: {} band {} (tower {})",
            l.square.verdict, l.square.band, l.square.tower_height
        );
        println!(
            "  monotone: {} constant {:.4} (up {:.4}, down {:.4})",
            l.monotone.direction, l.monotone.constant, l.monotone.c_up, l.monotone.c_down
        );
        match growth_envelope(psi) {
            Ok(e) => println!("  envelope: {:.4} log^{:.4} <= Psi <= {:.4} log^{:.4}", e.c1, e.c2, e.big_c1, e.big_c2),
            Err(e) => println!("  envelope: {e}"),
        }
    }
    Ok(())
}
