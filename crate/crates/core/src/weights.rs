//! Radial weights, tail integrals and the doubling classes 𝒟̂, 𝒟̌, 𝒟.
//!
//! Densities are stored as functions of the boundary gap `u = 1 - s`. Tail
//! integrals `ŵ(1-u) = ∫_0^u ω` are summed over dyadic panels
//! `[2^{-k-1}, 2^{-k}]` from the boundary inward and cached per level.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, integrate_disc, DiscRule, Hints};
use crate::scale::ScaleFunction;
use crate::stats::{ls_slope, Band, Membership};

type GapFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Dyadic levels kept in the tail cache.
pub const CACHE_DEPTH: usize = 64;
const MAX_LEVELS: usize = 1000;
const PANEL_REL_TOL: f64 = 1e-13;

#[derive(Clone)]
enum Kind {
    Power { alpha: f64 },
    LogInvSquare,
    /// `ln u` ascending and `ln ω`.
    Tabulated { ln_u: Vec<f64>, ln_v: Vec<f64> },
    ProductWithScale { base: RadialWeight, psi: ScaleFunction },
    Shifted { base: RadialWeight, x: f64 },
    Custom { name: String, density: GapFn },
}

struct Inner {
    kind: Kind,
    /// `∫_0^{2^{-k}} ω(u) du`, `k = 0..=CACHE_DEPTH`; empty for closed forms.
    tail_levels: Vec<f64>,
    /// `∫_0^{2^{-k}} u ω(u) du`; empty for closed forms.
    m1_levels: Vec<f64>,
}

/// A radial weight `ω` on the disc.
#[derive(Clone)]
pub struct RadialWeight(Arc<Inner>);

impl fmt::Debug for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialWeight({})", self.name())
    }
}

impl RadialWeight {
    /// `(1 - s)^α`, `α > -1`.
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(Error::Integrability(format!("(1-s)^{alpha} is not integrable on [0,1)")));
        }
        Self::build(Kind::Power { alpha })
    }

    pub fn unit() -> Self {
        Self::power(0.0).expect("alpha = 0 is integrable")
    }

    /// `1 / ((1-s) log²(e/(1-s)))`, whose tail is `1/log(e/(1-r))`.
    pub fn log_inv_square() -> Self {
        Self::build(Kind::LogInvSquare).expect("closed-form moments")
    }

    /// Rows `(s, value)` with `s` strictly increasing in `[0, 1)` and
    /// positive values; `ln ω` is interpolated linearly in `ln(1-s)` and
    /// extended by the end slopes.
    pub fn tabulated(rows: &[(f64, f64)]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Parameter("weight table needs at least two rows".into()));
        }
        for (i, w) in rows.windows(2).enumerate() {
            if w[1].0 <= w[0].0 {
                return Err(Error::Parameter(format!("weight table row {}: s must increase strictly", i + 2)));
            }
        }
        let mut ln_u = Vec::with_capacity(rows.len());
        let mut ln_v = Vec::with_capacity(rows.len());
        for (i, &(s, v)) in rows.iter().enumerate().rev() {
            if !(0.0..1.0).contains(&s) {
                return Err(Error::Parameter(format!("weight table row {}: s = {s} outside [0, 1)", i + 1)));
            }
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!("weight table row {}: value must be positive", i + 1)));
            }
            ln_u.push((1.0 - s).ln());
            ln_v.push(v.ln());
        }
        Self::build(Kind::Tabulated { ln_u, ln_v })
    }

    pub fn from_table_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::tabulated(&crate::config::parse_two_columns(&text)?)
    }

    /// Density given as a function of the gap `u = 1 - s`.
    pub fn custom(name: impl Into<String>, density: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::build(Kind::Custom {
            name: name.into(),
            density: Arc::new(density),
        })
    }

    fn build(kind: Kind) -> Result<Self> {
        let mut inner = Inner {
            kind,
            tail_levels: Vec::new(),
            m1_levels: Vec::new(),
        };
        let closed_tail = matches!(inner.kind, Kind::Power { .. } | Kind::LogInvSquare);
        let closed_m1 = matches!(inner.kind, Kind::Power { .. });
        if !closed_m1 {
            let dens = |u: f64| density_of(&inner.kind, u);
            let (tails, m1s) = panel_series(1.0, CACHE_DEPTH, &dens, !closed_tail)?;
            if !closed_tail {
                if tails[0] <= 0.0 {
                    return Err(Error::StandingAssumption(0.0));
                }
                inner.tail_levels = tails;
            }
            inner.m1_levels = m1s;
        }
        Ok(RadialWeight(Arc::new(inner)))
    }

    pub fn name(&self) -> String {
        match &self.0.kind {
            Kind::Power { alpha } => format!("power alpha={alpha}"),
            Kind::LogInvSquare => "loginvsq".into(),
            Kind::Tabulated { ln_u, .. } => format!("table({} rows)", ln_u.len()),
            Kind::ProductWithScale { base, psi } => format!("{} * psi[{}]", base.name(), psi.name()),
            Kind::Shifted { base, x } => format!("{} shift={x}", base.name()),
            Kind::Custom { name, .. } => name.clone(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.0.kind {
            Kind::Power { .. } => "power",
            Kind::LogInvSquare => "log-inverse-square",
            Kind::Tabulated { .. } => "tabulated",
            Kind::ProductWithScale { .. } => "product-with-scale",
            Kind::Shifted { .. } => "shifted",
            Kind::Custom { .. } => "custom",
        }
    }

    pub fn power_exponent(&self) -> Option<f64> {
        match self.0.kind {
            Kind::Power { alpha } => Some(alpha),
            _ => None,
        }
    }

    /// `ω` at gap `u = 1 - s`.
    pub fn density_gap(&self, u: f64) -> f64 {
        density_of(&self.0.kind, u)
    }

    /// `ω(s)`.
    pub fn density(&self, s: f64) -> f64 {
        self.density_gap(1.0 - s)
    }

    /// `∫_0^u ω` in the gap variable, i.e. `ŵ(1 - u)`.
    pub fn tail_gap(&self, u: f64) -> f64 {
        let u = u.min(1.0);
        if u <= 0.0 {
            return 0.0;
        }
        match self.0.kind {
            Kind::Power { alpha } => u.powf(alpha + 1.0) / (alpha + 1.0),
            Kind::LogInvSquare => 1.0 / (1.0 - u.ln()),
            _ => self.cached(u, false),
        }
    }

    /// `ŵ(r) = ∫_r^1 ω(s) ds`.
    pub fn tail(&self, r: f64) -> f64 {
        assert!((0.0..1.0).contains(&r), "tail needs 0 <= r < 1, got {r}");
        self.tail_gap(1.0 - r)
    }

    /// `∫_0^u t ω(t) dt` in the gap variable.
    pub fn first_moment_gap(&self, u: f64) -> f64 {
        let u = u.min(1.0);
        if u <= 0.0 {
            return 0.0;
        }
        match self.0.kind {
            Kind::Power { alpha } => u.powf(alpha + 2.0) / (alpha + 2.0),
            _ => self.cached(u, true),
        }
    }

    /// `∫_{1-u}^1 ω(s) s ds`.
    pub fn moment_gap(&self, u: f64) -> f64 {
        (self.tail_gap(u) - self.first_moment_gap(u)).max(0.0)
    }

    fn cached(&self, u: f64, first_moment: bool) -> f64 {
        let levels = if first_moment { &self.0.m1_levels } else { &self.0.tail_levels };
        let k = (-u.log2()).floor().max(0.0) as usize;
        if k <= CACHE_DEPTH && u == 0.5f64.powi(k as i32) {
            return levels[k];
        }
        if k < CACHE_DEPTH {
            let lo = 0.5f64.powi(k as i32 + 1);
            let gl = gauss_legendre(16);
            let part = gl.integrate(lo, u, |t| {
                let d = self.density_gap(t);
                if first_moment {
                    d * t
                } else {
                    d
                }
            });
            return levels[k + 1] + part;
        }
        match panel_series(u, 0, &|t| self.density_gap(t), !first_moment) {
            Ok((tails, m1s)) => {
                if first_moment {
                    m1s[0]
                } else {
                    tails[0]
                }
            }
            Err(_) => f64::NAN,
        }
    }

    /// `ω(S(a)) = ((1-|a|)/π) ∫_{|a|}^1 ω(s) s ds`, with `ω(S(0)) = ω(𝔻)`.
    pub fn carleson_mass(&self, a: Complex64) -> f64 {
        assert!(a.norm() < 1.0, "Carleson square apex must lie in the open disc");
        if a == Complex64::new(0.0, 0.0) {
            return 2.0 * self.moment_gap(1.0);
        }
        let u = 1.0 - a.norm();
        u / PI * self.moment_gap(u)
    }

    /// `ω(𝔻)`.
    pub fn total_mass(&self) -> f64 {
        2.0 * self.moment_gap(1.0)
    }
}

fn density_of(kind: &Kind, u: f64) -> f64 {
    match kind {
        Kind::Power { alpha } => {
            if *alpha == 0.0 {
                1.0
            } else {
                u.powf(*alpha)
            }
        }
        Kind::LogInvSquare => {
            let l = 1.0 - u.ln();
            1.0 / (u * l * l)
        }
        Kind::Tabulated { ln_u, ln_v } => {
            let l = u.ln();
            let n = ln_u.len();
            let i = ln_u.partition_point(|&x| x <= l).clamp(1, n - 1) - 1;
            let t = (l - ln_u[i]) / (ln_u[i + 1] - ln_u[i]);
            (ln_v[i] + t * (ln_v[i + 1] - ln_v[i])).exp()
        }
        Kind::ProductWithScale { base, psi } => base.density_gap(u) * psi.eval_inv(u),
        Kind::Shifted { base, x } => base.density_gap(u) * u.powf(*x),
        Kind::Custom { density, .. } => density(u),
    }
}

/// Tail and first-moment integrals at the levels `top·2^{-k}`,
/// `k = 0..=keep`, summed over dyadic panels from the boundary inward.
fn panel_series(top: f64, keep: usize, dens: &dyn Fn(f64) -> f64, need_tail: bool) -> Result<(Vec<f64>, Vec<f64>)> {
    let gl = gauss_legendre(16);
    let mut panels = Vec::new();
    let mut m1_panels = Vec::new();
    let mut deep = 0.0;
    let mut remainder = (0.0, 0.0);
    for k in 0.. {
        let hi = top * 0.5f64.powi(k as i32);
        let lo = 0.5 * hi;
        let (mut p, mut q) = (0.0, 0.0);
        for (u, w) in gl.mapped(lo, hi) {
            let d = dens(u);
            if !(d >= 0.0 && d.is_finite()) {
                return Err(Error::Domain {
                    at: 1.0 - u,
                    message: format!("density value {d}"),
                });
            }
            p += w * d;
            q += w * d * u;
        }
        panels.push(p);
        m1_panels.push(q);
        let watched = if need_tail { p } else { q };
        if k >= keep {
            deep += watched;
            if watched == 0.0 || watched <= PANEL_REL_TOL * deep {
                break;
            }
            if k >= MAX_LEVELS || lo < 1e-300 {
                // Geometric extrapolation of the remaining panels.
                let rest = |cur: f64, prev: f64| {
                    let ratio = cur / prev;
                    (ratio, cur * ratio / (1.0 - ratio))
                };
                let (ratio, left) = if need_tail { rest(p, panels[k - 1]) } else { rest(q, m1_panels[k - 1]) };
                if !(ratio < 0.999) || left > 1e-6 * deep {
                    return Err(Error::Integrability(format!(
                        "panel integrals stop decaying near the boundary (ratio {ratio:.6} after {k} dyadic levels)"
                    )));
                }
                let (_, rp) = rest(p, panels[k - 1]);
                let (_, rq) = rest(q, m1_panels[k - 1]);
                remainder = (if need_tail { rp } else { 0.0 }, rq.max(0.0));
                break;
            }
        }
    }
    let mut tails = vec![0.0; keep + 1];
    let mut m1s = vec![0.0; keep + 1];
    let (mut acc, mut acc1) = remainder;
    for i in (0..panels.len()).rev() {
        acc += panels[i];
        acc1 += m1_panels[i];
        if i <= keep {
            tails[i] = acc;
            m1s[i] = acc1;
        }
    }
    Ok((tails, m1s))
}

/// Three-valued doubling-class verdict with the measured constants.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublingReport {
    pub class_name: &'static str,
    pub constant_c: f64,
    pub constant_k: Option<f64>,
    pub exponent_beta: f64,
    pub grid_max_ratio: f64,
    pub grid_min_ratio: f64,
    pub verdict: Membership,
    pub diagnostics: Vec<String>,
}

/// Thresholds for [`check_dhat`] and [`check_dcheck`].
#[derive(Debug, Clone, PartialEq)]
pub struct DoublingConfig {
    pub grid_depth: u32,
    pub margin: f64,
    pub k_candidates: Vec<f64>,
    pub stability: f64,
}

impl Default for DoublingConfig {
    fn default() -> Self {
        Self {
            grid_depth: 16,
            margin: 0.05,
            k_candidates: vec![2.0, 4.0, 8.0, 16.0],
            stability: 2.0,
        }
    }
}

fn gap(j: u32) -> f64 {
    0.5f64.powi(j as i32)
}

/// Slope of `ln ŵ(r_j)` against `ln(1 - r_j)` over the deeper half of the grid.
fn fit_beta(w: &RadialWeight, depth: u32) -> f64 {
    let pts: Vec<(f64, f64)> = (depth / 2..=depth)
        .filter_map(|j| {
            let t = w.tail_gap(gap(j));
            (t > 0.0 && t.is_finite()).then(|| (gap(j).ln(), t.ln()))
        })
        .collect();
    ls_slope(&pts).unwrap_or(f64::NAN)
}

/// `ŵ(r) ≤ C ŵ((1+r)/2)` on `r_j = 1 - 2^{-j}`.
pub fn check_dhat(w: &RadialWeight, cfg: &DoublingConfig) -> Result<DoublingReport> {
    let depth = cfg.grid_depth;
    if depth < 4 {
        return Err(Error::Parameter(format!("grid depth must be at least 4, got {depth}")));
    }
    let mut diagnostics = Vec::new();
    let mut ratios = Vec::new();
    let mut underflow = false;
    for j in 0..=depth + 1 {
        let (a, b) = (w.tail_gap(gap(j)), w.tail_gap(gap(j + 1)));
        if !(b > 0.0 && a.is_finite()) {
            diagnostics.push(format!("tail underflows at r = 1 - 2^-{}", j + 1));
            underflow = true;
            break;
        }
        ratios.push(a / b);
    }
    let base: Vec<f64> = ratios.iter().copied().take(depth as usize + 1).collect();
    let band = Band::from_values(base.iter().copied()).unwrap_or(Band::point(f64::NAN));
    let extended = Band::from_values(ratios.iter().copied()).unwrap_or(band);

    let n = ratios.len();
    let exploding = n >= 4 && (n - 3..n).all(|i| ratios[i] > 2.0 * ratios[i - 1]);
    let verdict = if exploding {
        diagnostics.push("last four ratios each more than double".into());
        Membership::NonMember
    } else if underflow {
        Membership::Inconclusive
    } else if extended.max <= cfg.stability * band.max {
        Membership::Member
    } else {
        diagnostics.push("ratio grows by more than the stability factor at the extra level".into());
        Membership::Inconclusive
    };
    Ok(DoublingReport {
        class_name: "Dhat",
        constant_c: band.max,
        constant_k: None,
        exponent_beta: fit_beta(w, depth),
        grid_max_ratio: band.max,
        grid_min_ratio: band.min,
        verdict,
        diagnostics,
    })
}

/// `ŵ(r) ≥ C ŵ(1 - (1-r)/K)` for some `K` in the candidate list. A
/// candidate counts when its minimal ratio clears `1 + margin` and the
/// excess over 1 at the deepest level keeps at least three quarters of its
/// mid-grid value, so that excesses drifting to zero are not accepted.
pub fn check_dcheck(w: &RadialWeight, cfg: &DoublingConfig) -> Result<DoublingReport> {
    let depth = cfg.grid_depth;
    if depth < 4 {
        return Err(Error::Parameter(format!("grid depth must be at least 4, got {depth}")));
    }
    if cfg.k_candidates.is_empty() || cfg.k_candidates.iter().any(|&k| !(k > 1.0)) {
        return Err(Error::Parameter("K candidates must be a nonempty list of reals > 1".into()));
    }
    let mut diagnostics = Vec::new();
    let mut best: Option<(f64, f64)> = None;
    let mut passed: Option<(f64, f64)> = None;
    let mut all_fail = true;
    let mut gmin = f64::INFINITY;
    let mut gmax = f64::NEG_INFINITY;
    for &k in &cfg.k_candidates {
        let ratios: Vec<f64> = (0..=depth)
            .map(|j| {
                let u = gap(j);
                w.tail_gap(u) / w.tail_gap(u / k)
            })
            .collect();
        if ratios.iter().any(|r| !r.is_finite()) {
            diagnostics.push(format!("K = {k}: tail underflow on the grid"));
            all_fail = false;
            continue;
        }
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        gmin = gmin.min(min);
        gmax = gmax.max(ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        let d_last = ratios[depth as usize] - 1.0;
        let d_mid = ratios[depth as usize / 2] - 1.0;
        let stable = d_last >= 0.75 * d_mid;
        if best.is_none_or(|(_, c)| min > c) {
            best = Some((k, min));
        }
        if min >= 1.0 + cfg.margin && stable {
            passed.get_or_insert((k, min));
        } else if d_last >= cfg.margin && !stable {
            diagnostics.push(format!("K = {k}: excess over 1 decays from {d_mid:.4} to {d_last:.4}"));
        } else if d_last >= cfg.margin {
            all_fail = false;
        }
    }
    let (verdict, (k, c)) = match (passed, best) {
        (Some(p), _) => (Membership::Member, p),
        (None, Some(b)) if all_fail => (Membership::NonMember, b),
        (None, Some(b)) => (Membership::Inconclusive, b),
        (None, None) => (Membership::Inconclusive, (f64::NAN, f64::NAN)),
    };
    Ok(DoublingReport {
        class_name: "Dcheck",
        constant_c: c,
        constant_k: Some(k),
        exponent_beta: fit_beta(w, depth),
        grid_max_ratio: gmax,
        grid_min_ratio: gmin,
        verdict,
        diagnostics,
    })
}

/// Both doubling checks; `Member` only when both are members.
pub fn check_d(w: &RadialWeight, cfg: &DoublingConfig) -> Result<(DoublingReport, DoublingReport)> {
    Ok((check_dhat(w, cfg)?, check_dcheck(w, cfg)?))
}

/// Band of `I(ζ)(1-|ζ|)^λ / ŵ(ζ)` with `I(ζ) = ∫ ω(z)/|1 - ζ̄z|^{λ+1} dA(z)`.
pub fn kernel_integral_check(w: &RadialWeight, lambda: f64, zetas: &[Complex64]) -> Result<Band> {
    if !(lambda >= 0.0) {
        return Err(Error::Parameter(format!("lambda must be nonnegative, got {lambda}")));
    }
    let rule = DiscRule::default();
    let mut band: Option<Band> = None;
    for &zeta in zetas {
        let i = kernel_integral(w, lambda, zeta, &rule)?;
        let r = zeta.norm();
        let v = i * (1.0 - r).powf(lambda) / w.tail(r);
        match band.as_mut() {
            Some(b) => b.include(v),
            None => band = Some(Band::point(v)),
        }
    }
    band.ok_or_else(|| Error::Parameter("empty ζ grid".into()))
}

pub(crate) fn kernel_integral(w: &RadialWeight, lambda: f64, zeta: Complex64, rule: &DiscRule) -> Result<f64> {
    let e = -(lambda + 1.0) / 2.0;
    let one = Complex64::new(1.0, 0.0);
    let dens = |u: f64| w.density_gap(u);
    integrate_disc(rule, &dens, None, &Hints::peak(zeta), |z, _| (one - zeta.conj() * z).norm_sqr().powf(e))
        .map_err(|err| err.with_context(format!("kernel integral at zeta = {zeta}")))
}

/// `W(z) = Ψ(1/(1-|z|)) ω(z)`.
pub fn zygmund_transform(w: &RadialWeight, psi: &ScaleFunction) -> Result<RadialWeight> {
    if psi.is_constant() && psi.factor() == 1.0 {
        return Ok(w.clone());
    }
    for k in 0..=CACHE_DEPTH {
        let u = gap(k as u32);
        let v = psi.eval_inv(u);
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain {
                at: 1.0 - u,
                message: format!("Ψ(1/(1-s)) = {v}"),
            });
        }
    }
    RadialWeight::build(Kind::ProductWithScale {
        base: w.clone(),
        psi: psi.clone(),
    })
}

/// Bands of `L(r)/R(r)` and `R(r) / (Ψ(1/(1-r)) ŵ(r))` where
/// `L(r) = ∫_r^1 Ψ(1/(1-s)) ŵ(s)/(1-s) ds` and `R(r) = ∫_r^1 Ψ(1/(1-s)) ω(s) ds`.
pub fn psi_tail_compare(w: &RadialWeight, psi: &ScaleFunction, radii: &[f64]) -> Result<(Band, Band)> {
    let big_w = zygmund_transform(w, psi)?;
    let (w2, p2) = (w.clone(), psi.clone());
    let left = RadialWeight::custom("psi-tail-left", move |u| p2.eval_inv(u) * w2.tail_gap(u) / u)?;
    let mut lr: Option<Band> = None;
    let mut rr: Option<Band> = None;
    for &r in radii {
        let u = 1.0 - r;
        let (l, rt) = (left.tail_gap(u), big_w.tail_gap(u));
        let a = l / rt;
        let b = rt / (psi.eval_inv(u) * w.tail_gap(u));
        for (band, v) in [(&mut lr, a), (&mut rr, b)] {
            match band.as_mut() {
                Some(x) => x.include(v),
                None => *band = Some(Band::point(v)),
            }
        }
    }
    match (lr, rr) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::Parameter("empty radius grid".into())),
    }
}

/// `ω_{[x]}(s) = ω(s)(1-s)^x`.
pub fn power_shift(w: &RadialWeight, x: f64) -> Result<RadialWeight> {
    if x == 0.0 {
        return Ok(w.clone());
    }
    match &w.0.kind {
        Kind::Power { alpha } => RadialWeight::power(alpha + x),
        Kind::Shifted { base, x: y } if x + y == 0.0 => Ok(base.clone()),
        Kind::Shifted { base, x: y } => RadialWeight::build(Kind::Shifted {
            base: base.clone(),
            x: x + y,
        }),
        _ => RadialWeight::build(Kind::Shifted { base: w.clone(), x }),
    }
}

/// `loginvsq` shifted by one power, `1/log²(e/(1-s))`; it lies in 𝒟.
pub fn log_inv_square_regularized() -> RadialWeight {
    power_shift(&RadialWeight::log_inv_square(), 1.0).expect("bounded density")
}
