//! Gauss–Legendre panels, graded meshes and the level-by-level disc rule.
//!
//! All radial work is done in the boundary gap `u = 1 - |z|`, so dyadic
//! panels `[2^{-k-1}, 2^{-k}]` stay representable far beyond the point where
//! `1 - 2^{-k}` rounds to one.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Sector;

/// Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let step = p / dp;
                x -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, w * half))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Shared rule with `n` nodes.
pub fn gauss_legendre(n: usize) -> Arc<GaussLegendre> {
    static RULES: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let rules = RULES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = rules.lock().expect("rule cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(GaussLegendre::new(n)))
        .clone()
}

/// Breakpoints on `[lo, hi]` refined geometrically toward `hi` until the
/// last panel is no wider than `scale`.
pub fn graded_toward_upper(lo: f64, hi: f64, scale: f64) -> Vec<f64> {
    let mut pts = vec![lo];
    let width = hi - lo;
    if width <= 0.0 {
        return vec![lo, hi];
    }
    let mut step = width;
    while step > scale.max(width * 1e-15) && pts.len() < 200 {
        step *= 0.5;
        pts.push(hi - step);
    }
    pts.push(hi);
    pts
}

/// Integrates over consecutive breakpoint panels with one rule per panel.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(gl: &GaussLegendre, breaks: &[f64], mut f: F) -> f64 {
    breaks
        .windows(2)
        .map(|w| gl.integrate(w[0], w[1], &mut f))
        .sum()
}

/// Where an integrand concentrates: kernel base points (a peak near
/// `arg b` of angular width `1 - |b| s` on the circle of radius `s`) and a
/// polynomial degree that sets the uniform angular resolution.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Hints {
    pub peaks: Vec<Complex64>,
    pub degree: usize,
}

impl Hints {
    pub fn polynomial(degree: usize) -> Self {
        Self {
            peaks: Vec::new(),
            degree,
        }
    }

    pub fn peak(base: Complex64) -> Self {
        Self {
            peaks: vec![base],
            degree: 0,
        }
    }

    pub fn merge(mut self, other: &Hints) -> Self {
        self.degree = self.degree.max(other.degree);
        for p in &other.peaks {
            if !self.peaks.contains(p) {
                self.peaks.push(*p);
            }
        }
        self
    }

    /// Dyadic level the radial sweep must reach before it may stop.
    pub fn required_depth(&self) -> u32 {
        self.peaks
            .iter()
            .map(|b| {
                let gap = (1.0 - b.norm()).max(1e-300);
                (-gap.log2()).ceil().max(0.0) as u32 + 4
            })
            .max()
            .unwrap_or(0)
    }
}

/// Angular breakpoints on the circle of radius `s` restricted to `window`.
pub fn angular_breaks(s: f64, window: Sector, hints: &Hints, min_panels: usize) -> Vec<f64> {
    let len = window.len;
    let uniform = min_panels.max(hints.degree.div_ceil(2));
    let n = ((uniform as f64) * len / TAU).ceil().max(1.0) as usize;
    let mut offs: Vec<f64> = (0..=n).map(|k| len * k as f64 / n as f64).collect();
    for b in &hints.peaks {
        let rho = b.norm() * s;
        let width = (1.0 - rho).max(1e-15);
        if width >= 0.5 {
            continue;
        }
        let d = (b.arg() - window.start).rem_euclid(TAU);
        let mut push = |x: f64| {
            let o = x.rem_euclid(TAU);
            if o > 0.0 && o < len {
                offs.push(o);
            }
        };
        push(d);
        let mut t = width;
        while t < PI {
            push(d + t);
            push(d - t);
            t *= 2.0;
        }
    }
    offs.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    offs.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * len);
    offs.into_iter().map(|o| window.start + o).collect()
}

/// Budget for [`integrate_disc`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscRule {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub min_depth: u32,
    pub max_depth: u32,
    pub rel_tol: f64,
    pub min_angular_panels: usize,
}

impl Default for DiscRule {
    fn default() -> Self {
        Self {
            radial_nodes: 16,
            angular_nodes: 16,
            min_depth: 14,
            max_depth: 900,
            rel_tol: 1e-11,
            min_angular_panels: 8,
        }
    }
}

impl DiscRule {
    /// Twice the nodes per panel and twice the uniform angular panels.
    pub fn doubled(&self) -> Self {
        Self {
            radial_nodes: self.radial_nodes * 2,
            angular_nodes: self.angular_nodes * 2,
            min_angular_panels: self.min_angular_panels * 2,
            ..*self
        }
    }
}

/// `∫ f(z) W(|z|) dA(z)` over `window` (the whole disc when `None`), with
/// `dA` normalized area and `density` the weight as a function of the gap
/// `1 - |z|`. The integrand receives `z` and the gap of `z`.
pub fn integrate_disc<F>(
    rule: &DiscRule,
    density: &dyn Fn(f64) -> f64,
    window: Option<Sector>,
    hints: &Hints,
    f: F,
) -> Result<f64>
where
    F: Fn(Complex64, f64) -> f64,
{
    let window = window.unwrap_or_else(Sector::full);
    let radial = gauss_legendre(rule.radial_nodes);
    let angular = gauss_legendre(rule.angular_nodes);
    let needed = rule.min_depth.max(hints.required_depth());

    let mut total = 0.0;
    let mut previous_total = 0.0;
    let mut quiet_levels = 0;
    for k in 0..=rule.max_depth {
        let (lo, hi) = if k == 0 {
            (0.5, 1.0)
        } else {
            (0.5f64.powi(k as i32 + 1), 0.5f64.powi(k as i32))
        };
        let mut level = 0.0;
        for (u, w) in radial.mapped(lo, hi) {
            let dens = density(u);
            if dens == 0.0 {
                continue;
            }
            let s = 1.0 - u;
            let breaks = angular_breaks(s, window, hints, rule.min_angular_panels);
            let ang = integrate_breaks(&angular, &breaks, |t| f(Complex64::from_polar(s, t), u));
            level += w * dens * s * ang / PI;
        }
        if !level.is_finite() {
            return Err(Error::Quadrature {
                previous: previous_total,
                last: level,
                context: Some(format!("non-finite contribution at dyadic level {k}")),
            });
        }
        previous_total = total;
        total += level;
        if level.abs() <= rule.rel_tol * total.abs() {
            quiet_levels += 1;
        } else {
            quiet_levels = 0;
        }
        if k + 1 >= needed && quiet_levels >= 2 {
            return Ok(total);
        }
    }
    Err(Error::Quadrature {
        previous: previous_total,
        last: total,
        context: None,
    })
}
