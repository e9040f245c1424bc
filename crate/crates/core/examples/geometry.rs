//! Carleson squares and pseudohyperbolic discs near the boundary.

use std::f64::consts::PI;

use bergzyg::geometry::{pseudo_disc, pseudo_distance, square_contains, square_sector};
use num_complex::Complex64;

fn main() {
    for j in [1, 4, 10, 30] {
        let a = Complex64::from_polar(1.0 - 0.5f64.powi(j), 0.75 * PI);
        let sector = square_sector(a).expect("a is not the origin");
        let d = pseudo_disc(a, 0.5);
        println!("|a| = 1 - 2^-{j}");
        println!("  S(a): arc of length {:.3e} starting at {:.6}", sector.len, sector.start);
        println!(
            "  disc(a, 1/2): centre |c| = {:.12}, radius {:.3e}",
            d.euclid_center.norm(),
            d.euclid_radius
        );
        // The disc sits inside a slightly larger square.
        let edge = d.euclid_center + Complex64::from_polar(0.99 * d.euclid_radius, a.arg());
        println!(
            "  edge point: rho = {:.4}, in S(a) = {}",
            pseudo_distance(a, edge),
            square_contains(a, edge)
        );
    }
}
