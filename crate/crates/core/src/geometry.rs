//! Carleson squares, pseudohyperbolic discs and angular sectors.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

/// Half-open angular window `[start, start + len)` with `0 < len <= 2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector {
    pub start: f64,
    pub len: f64,
}

impl Sector {
    pub fn new(start: f64, len: f64) -> Self {
        assert!(len > 0.0 && len <= TAU, "sector length must lie in (0, 2π]");
        Self { start, len }
    }

    pub fn full() -> Self {
        Self { start: -PI, len: TAU }
    }

    /// Sector from `theta1` to `theta2` counterclockwise.
    pub fn between(theta1: f64, theta2: f64) -> Self {
        let mut len = (theta2 - theta1).rem_euclid(TAU);
        if len == 0.0 {
            len = TAU;
        }
        Self { start: theta1, len }
    }

    pub fn is_full(&self) -> bool {
        self.len >= TAU
    }

    pub fn contains_angle(&self, theta: f64) -> bool {
        self.is_full() || (theta - self.start).rem_euclid(TAU) < self.len
    }

    /// Length of the intersection with another sector.
    pub fn overlap(&self, other: &Sector) -> f64 {
        if self.is_full() {
            return other.len;
        }
        if other.is_full() {
            return self.len;
        }
        // Place `other` at offset d inside [0, 2π) relative to `self`, and
        // account for the copy that wraps once more.
        let d = (other.start - self.start).rem_euclid(TAU);
        let seg = |lo: f64, hi: f64| (hi.min(self.len) - lo.max(0.0)).max(0.0);
        seg(d, d + other.len) + seg(d - TAU, d - TAU + other.len)
    }

    pub fn rotated(&self, phi: f64) -> Sector {
        Sector {
            start: self.start + phi,
            len: self.len,
        }
    }
}

/// Angular window of the Carleson square at `a`, or `None` for `S(0) = 𝔻`.
pub fn square_sector(a: Complex64) -> Option<Sector> {
    if a == Complex64::new(0.0, 0.0) {
        return None;
    }
    let width = 1.0 - a.norm();
    Some(Sector {
        start: a.arg() - 0.5 * width,
        len: width.min(TAU),
    })
}

/// Smallest angular distance between two arguments, in `[0, π]`.
pub fn angle_gap(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(TAU);
    d.min(TAU - d)
}

/// `z ∈ S(a)`: `|z| ≥ |a|` and `|arg a − arg z| < (1 − |a|)/2` modulo 2π.
pub fn square_contains(a: Complex64, z: Complex64) -> bool {
    if a == Complex64::new(0.0, 0.0) {
        return true;
    }
    let ra = a.norm();
    if z.norm() < ra {
        return false;
    }
    angle_gap(a.arg(), z.arg()) < 0.5 * (1.0 - ra)
}

/// The pseudohyperbolic disc `Δ(a, r)` together with its Euclidean form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoDisc {
    pub center: Complex64,
    pub radius: f64,
    pub euclid_center: Complex64,
    pub euclid_radius: f64,
}

impl PseudoDisc {
    pub fn contains(&self, z: Complex64) -> bool {
        pseudo_distance(self.center, z) < self.radius
    }

    pub fn contains_euclid(&self, z: Complex64) -> bool {
        (z - self.euclid_center).norm() < self.euclid_radius
    }
}

pub fn pseudo_disc(a: Complex64, r: f64) -> PseudoDisc {
    assert!(a.norm() < 1.0, "centre must lie in the open disc");
    assert!(r > 0.0 && r < 1.0, "pseudohyperbolic radius must lie in (0, 1)");
    let rho = a.norm();
    // Factored differences keep R accurate when |a| is close to 1.
    let den = (1.0 - r * rho) * (1.0 + r * rho);
    PseudoDisc {
        center: a,
        radius: r,
        euclid_center: a * ((1.0 - r) * (1.0 + r) / den),
        euclid_radius: (1.0 - rho) * (1.0 + rho) * r / den,
    }
}

/// `|(a − z)/(1 − ā z)|`.
pub fn pseudo_distance(a: Complex64, z: Complex64) -> f64 {
    let num = (a - z).norm();
    if num == 0.0 {
        return 0.0;
    }
    num / (Complex64::new(1.0, 0.0) - a.conj() * z).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_membership_examples() {
        assert!(square_contains(c(0.0, 0.0), c(0.0, 0.9)));
        assert!(square_contains(c(0.5, 0.0), c(0.75, 0.0)));
        assert!(!square_contains(c(0.5, 0.0), Complex64::from_polar(0.75, 0.3)));
    }

    #[test]
    fn square_wraps_across_negative_axis() {
        let a = Complex64::from_polar(0.9, PI - 0.01);
        let z = Complex64::from_polar(0.95, -PI + 0.01);
        assert!(square_contains(a, z));
    }

    #[test]
    fn pseudo_disc_examples() {
        let d = pseudo_disc(c(0.0, 0.0), 0.7);
        assert_eq!(d.euclid_center, c(0.0, 0.0));
        assert!((d.euclid_radius - 0.7).abs() < 1e-15);
        let d = pseudo_disc(c(0.5, 0.0), 0.5);
        assert!((d.euclid_center - c(0.4, 0.0)).norm() < 1e-15);
        assert!((d.euclid_radius - 0.4).abs() < 1e-15);
        let d = pseudo_disc(c(0.0, 0.5), 0.5);
        assert!((d.euclid_center - c(0.0, 0.4)).norm() < 1e-15);
    }

    #[test]
    fn pseudo_distance_examples() {
        assert_eq!(pseudo_distance(c(0.3, 0.2), c(0.3, 0.2)), 0.0);
        assert!((pseudo_distance(c(0.0, 0.0), c(0.3, 0.0)) - 0.3).abs() < 1e-15);
        assert!((pseudo_distance(c(0.5, 0.0), c(-0.5, 0.0)) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn sector_overlap_handles_wrap() {
        let s = Sector::new(3.0, 1.0);
        let t = Sector::new(-3.2, 0.5);
        // t covers [3.083, 3.583) modulo 2π.
        assert!((s.overlap(&t) - 0.5).abs() < 1e-12);
        assert!((Sector::full().overlap(&s) - 1.0).abs() < 1e-15);
    }

    fn in_disc() -> impl Strategy<Value = Complex64> {
        (0.0..0.999f64, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn distance_is_symmetric(a in in_disc(), z in in_disc()) {
            prop_assert!((pseudo_distance(a, z) - pseudo_distance(z, a)).abs() < 1e-12);
        }

        #[test]
        fn rotation_equivariance(a in in_disc(), z in in_disc(), phi in -PI..PI, r in 0.05..0.95f64) {
            let u = Complex64::from_polar(1.0, phi);
            prop_assert!((pseudo_distance(u * a, u * z) - pseudo_distance(a, z)).abs() < 1e-12);
            let d = pseudo_disc(a, r);
            let e = pseudo_disc(u * a, r);
            prop_assert!((e.euclid_center - u * d.euclid_center).norm() < 1e-12);
            prop_assert!((e.euclid_radius - d.euclid_radius).abs() < 1e-12);
        }

        #[test]
        fn euclid_disc_inside_unit_disc(a in in_disc(), r in 0.01..0.99f64) {
            let d = pseudo_disc(a, r);
            prop_assert!(d.euclid_center.norm() + d.euclid_radius < 1.0 + 1e-12);
        }

        #[test]
        fn pseudo_and_euclid_membership_agree(a in in_disc(), z in in_disc(), r in 0.01..0.99f64) {
            let d = pseudo_disc(a, r);
            let gap = (z - d.euclid_center).norm() - d.euclid_radius;
            prop_assume!(gap.abs() > 1e-12);
            prop_assert_eq!(d.contains(z), d.contains_euclid(z));
        }

        #[test]
        fn sector_overlap_is_symmetric(s0 in -7.0..7.0f64, l0 in 0.01..6.0f64, s1 in -7.0..7.0f64, l1 in 0.01..6.0f64) {
            let a = Sector::new(s0, l0);
            let b = Sector::new(s1, l1);
            prop_assert!((a.overlap(&b) - b.overlap(&a)).abs() < 1e-9);
            prop_assert!(a.overlap(&b) <= l0.min(l1) + 1e-12);
        }
    }
}
