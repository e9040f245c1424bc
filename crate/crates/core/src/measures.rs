//! Finite positive measures on the disc: radial area densities restricted
//! to sectors, plus atoms.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{angle_gap, pseudo_disc, square_contains, square_sector, Sector};
use crate::quadrature::{gauss_legendre, integrate_disc, DiscRule, Hints};
use crate::weights::RadialWeight;

/// `factor · W(|z|) · 1_sector(arg z) dA(z)`.
#[derive(Debug, Clone)]
pub struct AreaComponent {
    pub weight: RadialWeight,
    pub sector: Option<Sector>,
    pub factor: f64,
}

impl AreaComponent {
    pub fn radial(weight: RadialWeight) -> Self {
        Self {
            weight,
            sector: None,
            factor: 1.0,
        }
    }

    fn sector_len(&self) -> f64 {
        self.sector.map_or(TAU, |s| s.len)
    }

    fn total(&self) -> f64 {
        self.factor * self.sector_len() / PI * self.weight.moment_gap(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub z: Complex64,
    pub mass: f64,
}

#[derive(Debug, Clone)]
pub struct DiscMeasure {
    area: Vec<AreaComponent>,
    atoms: Vec<Atom>,
    total: f64,
}

impl DiscMeasure {
    pub fn new(area: Vec<AreaComponent>, atoms: Vec<Atom>) -> Result<Self> {
        for c in &area {
            if !(c.factor >= 0.0 && c.factor.is_finite()) {
                return Err(Error::Parameter(format!("area factor must be nonnegative, got {}", c.factor)));
            }
        }
        for a in &atoms {
            if !(a.z.norm() < 1.0) {
                return Err(Error::Parameter(format!("atom at {} lies outside the open disc", a.z)));
            }
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(Error::Parameter(format!("atom mass must be positive, got {}", a.mass)));
            }
        }
        let total = area.iter().map(AreaComponent::total).sum::<f64>() + atoms.iter().map(|a| a.mass).sum::<f64>();
        if !total.is_finite() {
            return Err(Error::DegenerateMeasure(format!("total mass {total}")));
        }
        Ok(Self { area, atoms, total })
    }

    /// `W dA` for a radial weight.
    pub fn weighted_area(w: &RadialWeight) -> Self {
        Self::new(vec![AreaComponent::radial(w.clone())], Vec::new()).expect("radial weight has finite mass")
    }

    pub fn atom(z: Complex64, mass: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![Atom { z, mass }])
    }

    pub fn area_components(&self) -> &[AreaComponent] {
        &self.area
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// True when the measure is invariant under all rotations.
    pub fn is_rotation_invariant(&self) -> bool {
        self.area.iter().all(|c| c.sector.is_none_or(|s| s.is_full()))
            && self.atoms.iter().all(|a| a.z == Complex64::new(0.0, 0.0))
    }

    /// `c μ`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let area = self
            .area
            .iter()
            .map(|a| AreaComponent {
                factor: a.factor * c,
                ..a.clone()
            })
            .collect();
        let atoms = self.atoms.iter().map(|a| Atom { z: a.z, mass: a.mass * c }).collect();
        Self::new(area, atoms)
    }

    /// Push-forward under `z ↦ e^{iφ} z`.
    pub fn rotated(&self, phi: f64) -> Self {
        let u = Complex64::from_polar(1.0, phi);
        Self {
            area: self
                .area
                .iter()
                .map(|a| AreaComponent {
                    sector: a.sector.map(|s| s.rotated(phi)),
                    ..a.clone()
                })
                .collect(),
            atoms: self.atoms.iter().map(|a| Atom { z: a.z * u, mass: a.mass }).collect(),
            total: self.total,
        }
    }

    /// `μ(S(a))`, exact for the area part.
    pub fn mass_on_square(&self, a: Complex64) -> f64 {
        assert!(a.norm() < 1.0, "square apex must lie in the open disc");
        let window = square_sector(a);
        let u = if window.is_some() { 1.0 - a.norm() } else { 1.0 };
        let mut m = 0.0;
        for c in &self.area {
            let arc = match (window, c.sector) {
                (None, None) => TAU,
                (None, Some(s)) | (Some(s), None) => s.len,
                (Some(w), Some(s)) => w.overlap(&s),
            };
            if arc > 0.0 {
                m += c.factor * arc / PI * c.weight.moment_gap(u);
            }
        }
        m + self.atoms.iter().filter(|at| square_contains(a, at.z)).map(|at| at.mass).sum::<f64>()
    }

    /// `μ(Δ(a, r))`.
    pub fn mass_on_disc(&self, a: Complex64, r: f64) -> Result<f64> {
        let d = pseudo_disc(a, r);
        let rho = a.norm();
        // 1 - |A| - R in factored form.
        let gap = (1.0 - rho) * (1.0 - r) / (1.0 + r * rho);
        let mut m = 0.0;
        for c in &self.area {
            m += c.factor * area_on_euclid_disc(&c.weight, c.sector, d.euclid_center, d.euclid_radius, gap);
        }
        if !m.is_finite() {
            return Err(Error::Quadrature {
                previous: f64::NAN,
                last: m,
                context: Some(format!("disc mass at a = {a}, r = {r}")),
            });
        }
        Ok(m + self.atoms.iter().filter(|at| d.contains(at.z)).map(|at| at.mass).sum::<f64>())
    }

    /// `∫ f dμ` with the area part on the dyadic disc rule.
    pub fn integrate<F>(&self, rule: &DiscRule, hints: &Hints, f: F) -> Result<f64>
    where
        F: Fn(Complex64, f64) -> f64,
    {
        let mut total = 0.0;
        for c in &self.area {
            if c.factor == 0.0 {
                continue;
            }
            let dens = |u: f64| c.weight.density_gap(u);
            total += c.factor * integrate_disc(rule, &dens, c.sector, hints, &f)?;
        }
        for at in &self.atoms {
            total += at.mass * f(at.z, 1.0 - at.z.norm());
        }
        Ok(total)
    }
}

/// `∫_{D(A,R)} W(|z|) 1_sector dA` by arc lengths on concentric circles.
/// `outer_gap` is `1 - |center| - radius`, supplied by the caller without
/// cancellation.
fn area_on_euclid_disc(w: &RadialWeight, sector: Option<Sector>, center: Complex64, radius: f64, outer_gap: f64) -> f64 {
    let c = center.norm();
    let theta0 = center.arg();
    let full = sector.map_or(TAU, |s| s.len);
    let mut total = 0.0;

    // Circles |z| = s < R - c lie entirely inside the disc.
    let inner = radius - c;
    if inner > 0.0 {
        total += full / PI * (w.moment_gap(1.0) - w.moment_gap(1.0 - inner));
    }

    let lo = (c - radius).abs();
    let hi = c + radius;
    if c == 0.0 || hi <= lo {
        return total;
    }
    // Midpoint and half-length of [|c-R|, c+R] without forming differences.
    let (m, h) = if c >= radius { (c, radius) } else { (radius, c) };
    let delta = outer_gap.max(1e-300);

    // sin²(φ/2) = (R - (s-c))(R + (s-c)) / (4sc), with both factors
    // written in τ so that neither cancels at the ends of the range.
    let half_width = |s: f64, tau: f64| {
        let (ch2, sh2) = ((0.5 * tau).cos().powi(2), (0.5 * tau).sin().powi(2));
        let (p, q) = if c >= radius {
            (2.0 * radius * ch2, 2.0 * radius * sh2)
        } else {
            (2.0 * c * ch2, 2.0 * radius - 2.0 * c * ch2)
        };
        2.0 * (p * q / (4.0 * s * c)).sqrt().min(1.0).asin()
    };
    let arc_measure = |s: f64, tau: f64| {
        let phi = half_width(s, tau);
        match sector {
            None => 2.0 * phi,
            Some(sec) => {
                if phi >= PI {
                    sec.len
                } else {
                    sec.overlap(&Sector {
                        start: theta0 - phi,
                        len: 2.0 * phi,
                    })
                }
            }
        }
    };

    // s = m - h cos τ, graded toward τ = π where the circles approach ∂𝔻.
    let scale = (delta / h).sqrt().min(1.0) * 0.5;
    let mut breaks = crate::quadrature::graded_toward_upper(0.0, PI, scale);
    if let Some(sec) = sector {
        for edge in [sec.start, sec.start + sec.len] {
            let d = angle_gap(edge, theta0);
            let disc = c * c * d.cos().powi(2) - c * c + radius * radius;
            if disc < 0.0 {
                continue;
            }
            for s in [c * d.cos() - disc.sqrt(), c * d.cos() + disc.sqrt()] {
                if s > lo && s < hi {
                    breaks.push(((m - s) / h).clamp(-1.0, 1.0).acos());
                }
            }
        }
        breaks.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
        breaks.dedup();
    }
    let gl = gauss_legendre(16);
    let arcs = crate::quadrature::integrate_breaks(&gl, &breaks, |tau| {
        let s = m - h * tau.cos();
        let u = delta + 2.0 * h * (0.5 * tau).cos().powi(2);
        if s <= 0.0 {
            return 0.0;
        }
        w.density_gap(u) * s * arc_measure(s, tau) * h * tau.sin()
    });
    total + arcs / PI
}
