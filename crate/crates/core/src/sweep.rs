//! Dyadic sweep grids, three-valued boundary verdicts and CSV output.

use std::f64::consts::{LN_2, TAU};
use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::stats::ls_slope;

/// Default cap on angles per level.
pub const ANGULAR_CAP: usize = 4096;

/// First level used by the boundary-exponent fit.
pub const FIT_FROM_LEVEL: u32 = 8;

/// Relative drop a step needs to count as a decrease.
const DECREASE_TOL: f64 = 1e-6;

/// Exponent of `ρ` against the level index above which a steadily
/// increasing tail counts as unbounded growth.
const LOG_GROWTH_EXPONENT: f64 = 0.5;

pub const CSV_HEADER: &str = "j,radius,theta,rho_square,rho_disc,fa_norm_p,embed_lb_ratio";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundedness {
    Bounded,
    Unbounded,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vanishing {
    Vanishing,
    NotVanishing,
    Inconclusive,
}

impl fmt::Display for Boundedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundedness::Bounded => "bounded",
            Boundedness::Unbounded => "unbounded",
            Boundedness::Inconclusive => "inconclusive",
        })
    }
}

impl fmt::Display for Vanishing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Vanishing::Vanishing => "vanishing",
            Vanishing::NotVanishing => "not-vanishing",
            Vanishing::Inconclusive => "inconclusive",
        })
    }
}

/// Grid extent of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub max_level: u32,
    pub angular_cap: usize,
}

impl SweepGrid {
    pub fn new(max_level: u32) -> Result<Self> {
        Self::with_cap(max_level, ANGULAR_CAP)
    }

    pub fn with_cap(max_level: u32, angular_cap: usize) -> Result<Self> {
        if max_level < 8 {
            return Err(Error::Parameter(format!("sweep depth J must be at least 8, got {max_level}")));
        }
        if max_level > 52 {
            return Err(Error::Parameter(format!("sweep depth J = {max_level} exceeds double precision")));
        }
        if angular_cap == 0 {
            return Err(Error::Parameter("angular cap must be positive".into()));
        }
        Ok(Self { max_level, angular_cap })
    }

    pub fn radius(j: u32) -> f64 {
        1.0 - 0.5f64.powi(j as i32)
    }

    /// `min(2^j, cap)` angles starting at 0.
    pub fn angles(&self, j: u32) -> Vec<f64> {
        let n = if j >= 63 { self.angular_cap } else { (1usize << j).min(self.angular_cap) };
        (0..n).map(|k| TAU * k as f64 / n as f64).collect()
    }

    pub fn point(j: u32, theta: f64) -> Complex64 {
        Complex64::from_polar(Self::radius(j), theta)
    }

    pub fn len(&self) -> usize {
        (0..=self.max_level).map(|j| self.angles(j).len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Values recorded at one grid point; unevaluated columns hold NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepEntry {
    pub j: u32,
    pub radius: f64,
    pub theta: f64,
    pub rho_square: f64,
    pub rho_disc: f64,
    pub fa_norm_p: f64,
    pub embed_lb_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValues {
    pub rho_square: f64,
    pub rho_disc: f64,
    pub fa_norm_p: f64,
    pub embed_lb_ratio: f64,
}

impl PointValues {
    pub fn rho_only(rho: f64) -> Self {
        Self {
            rho_square: rho,
            rho_disc: f64::NAN,
            fa_norm_p: f64::NAN,
            embed_lb_ratio: f64::NAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
    /// `(j, max ρ_square over level j)`; levels whose points all failed are absent.
    pub annulus_maxima: Vec<(u32, f64)>,
    pub global_sup_estimate: f64,
    /// Slope of `ln max ρ` against `ln(1 - r_j)` over `j ≥ 8`.
    pub boundary_exponent: f64,
    pub verdict_bounded: Boundedness,
    pub verdict_vanishing: Vanishing,
    pub failures: usize,
    pub warnings: Vec<String>,
}

impl SweepReport {
    /// Assembles a report from entries sorted by `(j, θ)`.
    pub fn from_entries(entries: Vec<SweepEntry>, failures: usize, warnings: Vec<String>) -> Self {
        let mut annulus_maxima: Vec<(u32, f64)> = Vec::new();
        for e in &entries {
            if !e.rho_square.is_finite() {
                continue;
            }
            match annulus_maxima.last_mut() {
                Some((j, m)) if *j == e.j => *m = m.max(e.rho_square),
                _ => annulus_maxima.push((e.j, e.rho_square)),
            }
        }
        let maxima: Vec<f64> = annulus_maxima.iter().map(|&(_, m)| m).collect();
        let global_sup_estimate = maxima.iter().copied().fold(0.0, f64::max);
        let fit: Vec<(f64, f64)> = annulus_maxima
            .iter()
            .filter(|&&(j, m)| j >= FIT_FROM_LEVEL && m > 0.0)
            .map(|&(j, m)| (-(j as f64) * LN_2, m.ln()))
            .collect();
        let boundary_exponent = ls_slope(&fit).unwrap_or(f64::NAN);
        let levels: Vec<u32> = annulus_maxima.iter().map(|&(j, _)| j).collect();
        let (verdict_bounded, verdict_vanishing) = classify(&levels, &maxima, global_sup_estimate);
        Self {
            entries,
            annulus_maxima,
            global_sup_estimate,
            boundary_exponent,
            verdict_bounded,
            verdict_vanishing,
            failures,
            warnings,
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                e.j,
                fmt_num(e.radius),
                fmt_num(e.theta),
                fmt_num(e.rho_square),
                fmt_num(e.rho_disc),
                fmt_num(e.fa_norm_p),
                fmt_num(e.embed_lb_ratio)
            )?;
        }
        Ok(())
    }
}

fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.12e}")
    }
}

fn decreasing(m: &[f64]) -> bool {
    m.windows(2).all(|w| w[1] < w[0] * (1.0 - DECREASE_TOL))
}

fn non_increasing(m: &[f64]) -> bool {
    m.windows(2).all(|w| w[1] <= w[0] * (1.0 + DECREASE_TOL))
}

/// Verdicts from the last four annulus maxima.
///
/// Unbounded: every step grows, and either the growth over the window is
/// at least 2 or `ρ` grows at least like `j^{1/2}` (slowly divergent
/// logarithmic cases). Bounded: within a factor 2 of each other, or
/// non-increasing. Vanishing: strictly decreasing, or non-increasing down
/// to zero, with the last value below a tenth of the global sup.
pub fn classify(levels: &[u32], maxima: &[f64], sup: f64) -> (Boundedness, Vanishing) {
    if maxima.len() < 4 {
        return (Boundedness::Inconclusive, Vanishing::Inconclusive);
    }
    if sup == 0.0 {
        return (Boundedness::Bounded, Vanishing::Vanishing);
    }
    let n = maxima.len();
    let tail = &maxima[n - 4..];
    let lv = &levels[n - 4..];
    let increasing = tail.windows(2).all(|w| w[1] > w[0] * (1.0 + DECREASE_TOL));
    let ratio = tail[3] / tail[0];
    let log_growth = lv[0] > 0 && {
        let pts: Vec<(f64, f64)> = lv.iter().zip(tail).map(|(&j, &m)| ((j as f64).ln(), m.ln())).collect();
        ls_slope(&pts).is_some_and(|s| s >= LOG_GROWTH_EXPONENT)
    };
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().copied().fold(0.0, f64::max);
    let bounded = if increasing && (ratio >= 2.0 || log_growth) {
        Boundedness::Unbounded
    } else if hi <= 2.0 * lo || non_increasing(tail) {
        Boundedness::Bounded
    } else {
        Boundedness::Inconclusive
    };
    let vanishing = if (decreasing(tail) || (non_increasing(tail) && tail[3] == 0.0)) && tail[3] < 0.1 * sup {
        Vanishing::Vanishing
    } else if bounded == Boundedness::Unbounded || !non_increasing(tail) || tail[3] >= 0.5 * sup {
        Vanishing::NotVanishing
    } else {
        Vanishing::Inconclusive
    };
    (bounded, vanishing)
}

/// Evaluates `eval` on the grid in parallel and assembles the report.
/// With `radial` set, each level is evaluated once at `θ = 0` and copied
/// to the other angles.
pub fn run_sweep<F>(grid: &SweepGrid, radial: bool, eval: F) -> SweepReport
where
    F: Fn(u32, Complex64) -> Result<PointValues> + Sync,
{
    let points: Vec<(u32, f64)> = (0..=grid.max_level)
        .flat_map(|j| {
            let angles = if radial { vec![0.0] } else { grid.angles(j) };
            angles.into_iter().map(move |t| (j, t))
        })
        .collect();
    let values: Vec<Result<PointValues>> = points.par_iter().map(|&(j, t)| eval(j, SweepGrid::point(j, t))).collect();

    let mut entries = Vec::with_capacity(grid.len());
    let mut failures = 0;
    let mut warnings = Vec::new();
    for ((j, t), v) in points.into_iter().zip(values) {
        let v = match v {
            Ok(v) => v,
            Err(e) => {
                failures += 1;
                warnings.push(format!("j = {j}, theta = {t:.6}: {e}"));
                continue;
            }
        };
        let thetas = if radial { grid.angles(j) } else { vec![t] };
        for theta in thetas {
            entries.push(SweepEntry {
                j,
                radius: SweepGrid::radius(j),
                theta,
                rho_square: v.rho_square,
                rho_disc: v.rho_disc,
                fa_norm_p: v.fa_norm_p,
                embed_lb_ratio: v.embed_lb_ratio,
            });
        }
    }
    SweepReport::from_entries(entries, failures, warnings)
}
