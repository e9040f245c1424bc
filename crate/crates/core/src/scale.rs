//! Scale functions of class 𝓛 and their diagnostics.
//!
//! Every scale function is stored through its log-log form
//! `L ↦ ln Ψ(e^L)`, which keeps the dyadic-square tower `2^{2^k}` and its
//! squares inside floating-point range for any tower height used here.

use std::f64::consts::{E, LN_2};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::stats::{ls_slope, Band, Membership};

type LogLogFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Constant,
    LogPower(f64),
    /// `ln x` and `ln Ψ` on a strictly increasing grid.
    Tabulated { ln_x: Vec<f64>, ln_v: Vec<f64> },
    Custom { name: String, lnln: LogLogFn },
}

/// Monotonicity direction of a member of 𝓛.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
    Constant,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Increasing => "essentially-increasing",
            Direction::Decreasing => "essentially-decreasing",
            Direction::Constant => "constant",
        })
    }
}

/// A positive function on `[0, ∞)`, `factor · shape(x)`.
#[derive(Clone)]
pub struct ScaleFunction {
    factor: f64,
    shape: Shape,
}

impl fmt::Debug for ScaleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScaleFunction({})", self.name())
    }
}

/// `ln ln(e + e^L)`, accurate for large `L`.
pub(crate) fn ln_log_e_plus_exp(l: f64) -> f64 {
    let inner = if l > 1.0 {
        l + (1.0 - l).exp().ln_1p()
    } else {
        (E + l.exp()).ln()
    };
    inner.ln()
}

impl ScaleFunction {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Parameter(format!("constant scale function needs c > 0, got {c}")));
        }
        Ok(Self {
            factor: c,
            shape: Shape::Constant,
        })
    }

    pub fn one() -> Self {
        Self {
            factor: 1.0,
            shape: Shape::Constant,
        }
    }

    /// `(log(e + x))^β`.
    pub fn log_power(beta: f64) -> Self {
        if beta == 0.0 {
            return Self::one();
        }
        Self {
            factor: 1.0,
            shape: Shape::LogPower(beta),
        }
    }

    /// Log-log interpolation of `(x, Ψ(x))` pairs; constant beyond the ends.
    pub fn tabulated(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Parameter("scale table needs at least two rows".into()));
        }
        let mut ln_x = Vec::with_capacity(points.len());
        let mut ln_v = Vec::with_capacity(points.len());
        for (i, &(x, v)) in points.iter().enumerate() {
            if !(x > 0.0 && v > 0.0 && x.is_finite() && v.is_finite()) {
                return Err(Error::Parameter(format!("scale table row {}: need x > 0 and value > 0", i + 1)));
            }
            if let Some(&prev) = ln_x.last() {
                if x.ln() <= prev {
                    return Err(Error::Parameter(format!("scale table row {}: x must increase strictly", i + 1)));
                }
            }
            ln_x.push(x.ln());
            ln_v.push(v.ln());
        }
        Ok(Self {
            factor: 1.0,
            shape: Shape::Tabulated { ln_x, ln_v },
        })
    }

    pub fn from_table_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::tabulated(&crate::config::parse_two_columns(&text)?)
    }

    /// Arbitrary shape given as `L ↦ ln Ψ(e^L)`; `L = -∞` stands for `x = 0`.
    pub fn custom(name: impl Into<String>, lnln: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            factor: 1.0,
            shape: Shape::Custom {
                name: name.into(),
                lnln: Arc::new(lnln),
            },
        }
    }

    /// `e^x`, which violates the square-doubling condition.
    pub fn exponential() -> Self {
        Self::custom("exp", |l: f64| l.exp())
    }

    /// Increasing `f` on `[0, ∞) \ ⋃ (x_n, y_n)` and decreasing `g` on the
    /// intervals, with `x_{n+1} = x_n²` and `y_{n+1} = y_n²`. Both parts
    /// satisfy the square-doubling condition but the splice is not
    /// essentially monotone.
    pub fn tower_splice(f_beta: f64, g_beta: f64, x1: f64, y1: f64) -> Result<Self> {
        if !(x1 > 1.0 && y1 > x1 && x1 * x1 > y1) {
            return Err(Error::Parameter("splice needs x1^2 > y1 > x1 > 1".into()));
        }
        if !(f_beta > 0.0 && g_beta < 0.0) {
            return Err(Error::Parameter("splice needs an increasing f and a decreasing g".into()));
        }
        let (lx, ly) = (x1.ln(), y1.ln());
        let name = format!("splice(f=logpow {f_beta}, g=logpow {g_beta}, x1={x1}, y1={y1})");
        Ok(Self::custom(name, move |l: f64| {
            let inside = l > lx && {
                let m = (l / lx).log2().floor();
                let scale = m.exp2();
                l > scale * lx && l < scale * ly
            };
            let beta = if inside { g_beta } else { f_beta };
            beta * ln_log_e_plus_exp(l)
        }))
    }

    /// `λΨ`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Parameter(format!("scaling factor must be positive, got {lambda}")));
        }
        Ok(Self {
            factor: self.factor * lambda,
            shape: self.shape.clone(),
        })
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.shape, Shape::Constant)
    }

    pub fn log_power_exponent(&self) -> Option<f64> {
        match self.shape {
            Shape::Constant => Some(0.0),
            Shape::LogPower(b) => Some(b),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        let base = match &self.shape {
            Shape::Constant => return format!("const c={}", self.factor),
            Shape::LogPower(b) => format!("logpow beta={b}"),
            Shape::Tabulated { ln_x, .. } => format!("table({} rows)", ln_x.len()),
            Shape::Custom { name, .. } => name.clone(),
        };
        if self.factor == 1.0 {
            base
        } else {
            format!("{} * {base}", self.factor)
        }
    }

    /// `ln shape(e^L)`, the factor excluded.
    pub fn ln_shape_exp(&self, l: f64) -> f64 {
        match &self.shape {
            Shape::Constant => 0.0,
            Shape::LogPower(b) => b * ln_log_e_plus_exp(l),
            Shape::Tabulated { ln_x, ln_v } => {
                let n = ln_x.len();
                if l <= ln_x[0] {
                    return ln_v[0];
                }
                if l >= ln_x[n - 1] {
                    return ln_v[n - 1];
                }
                let i = ln_x.partition_point(|&x| x <= l) - 1;
                let t = (l - ln_x[i]) / (ln_x[i + 1] - ln_x[i]);
                ln_v[i] + t * (ln_v[i + 1] - ln_v[i])
            }
            Shape::Custom { lnln, .. } => lnln(l),
        }
    }

    /// `ln Ψ(e^L)`.
    pub fn ln_eval_exp(&self, l: f64) -> f64 {
        self.factor.ln() + self.ln_shape_exp(l)
    }

    /// `Ψ(e^L)`.
    pub fn eval_exp(&self, l: f64) -> f64 {
        self.ln_eval_exp(l).exp()
    }

    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        match self.shape {
            Shape::Constant => self.factor,
            Shape::LogPower(b) => self.factor * (E + x).ln().powf(b),
            _ => self.eval_exp(x.ln()),
        }
    }

    /// `Ψ(1/u)` for a boundary gap `u`, without forming `1/u`.
    pub fn eval_inv(&self, u: f64) -> f64 {
        self.eval_exp(-u.ln())
    }
}

/// Thresholds for the 𝓛 diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleThresholds {
    pub square_lo: f64,
    pub square_hi: f64,
    pub monotone: f64,
    pub stability: f64,
}

impl Default for ScaleThresholds {
    fn default() -> Self {
        Self {
            square_lo: 1e-6,
            square_hi: 1e6,
            monotone: 1e6,
            stability: 2.0,
        }
    }
}

/// Tower heights `k` of the points `2^{2^k}` in [`evaluation_grid`].
pub const TOWER_TOP: u32 = 8;
const LOG_GRID_POINTS: usize = 512;

/// The diagnostic grid in log coordinates `L = ln x`, ascending, with
/// `-∞` standing for `x = 0`.
pub fn evaluation_grid() -> Vec<f64> {
    let mut grid = vec![f64::NEG_INFINITY];
    let (lo, hi) = (1e-6f64.ln(), 1e12f64.ln());
    for i in 0..LOG_GRID_POINTS {
        grid.push(lo + (hi - lo) * i as f64 / (LOG_GRID_POINTS - 1) as f64);
    }
    for k in 0..=TOWER_TOP {
        grid.push(tower_log(k));
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("grid is not NaN"));
    grid.dedup();
    grid
}

/// `ln 2^{2^k}`.
pub fn tower_log(k: u32) -> f64 {
    (k as f64).exp2() * LN_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquareDoublingReport {
    pub band: Band,
    pub extended: Band,
    pub tower_height: u32,
    pub verdict: Membership,
    pub diagnostics: Vec<String>,
}

/// `Ψ(x)/Ψ(x²)` on the tower `x_k = 2^{2^k}`, `k ≤ tower_height`, and a fill
/// grid on `[0, 4]`; membership needs the band inside the thresholds and
/// stable within `stability` under one more tower level.
pub fn check_square_doubling(psi: &ScaleFunction, tower_height: u32, th: &ScaleThresholds) -> Result<SquareDoublingReport> {
    if tower_height < 8 {
        return Err(Error::Parameter(format!("tower height must be at least 8, got {tower_height}")));
    }
    let mut diagnostics = Vec::new();
    let ratio = |l: f64| (psi.ln_shape_exp(l) - psi.ln_shape_exp(2.0 * l)).exp();

    let mut band = Band::point(1.0);
    // fill on [0, 4]: x = 0 gives ratio 1, then a log grid from 1e-6 to 4.
    let (lo, hi) = (1e-6f64.ln(), 4f64.ln());
    for i in 0..=64 {
        band.include(ratio(lo + (hi - lo) * i as f64 / 64.0));
    }
    let mut top = 0;
    let mut extended = band;
    for k in 0..=tower_height + 1 {
        let l = tower_log(k);
        let r = ratio(l);
        if !(2.0 * l).is_finite() || r.is_nan() {
            diagnostics.push(format!("tower truncated at level {k}: x^2 leaves the floating-point range"));
            break;
        }
        if k <= tower_height {
            band.include(r);
            top = k;
        }
        extended.include(r);
    }
    let inside = band.within(th.square_lo, th.square_hi);
    let stable = extended.max <= th.stability * band.max && band.min <= th.stability * extended.min;
    let verdict = if !inside {
        diagnostics.push(format!("ratio band {band} leaves [{:e}, {:e}]", th.square_lo, th.square_hi));
        Membership::NonMember
    } else if stable {
        Membership::Member
    } else {
        diagnostics.push(format!("band moves by more than factor {} at the extra level", th.stability));
        Membership::Inconclusive
    };
    Ok(SquareDoublingReport {
        band,
        extended,
        tower_height: top,
        verdict,
        diagnostics,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneReport {
    pub direction: Direction,
    /// The constant witnessing `direction`.
    pub constant: f64,
    /// `max_{x ≤ y} Ψ(x)/Ψ(y)`.
    pub c_up: f64,
    /// `max_{x ≤ y} Ψ(y)/Ψ(x)`.
    pub c_down: f64,
}

/// `(max_{x≤y} v(x) − v(y), max_{x≤y} v(y) − v(x))` for an ordered sequence
/// of log-values.
fn log_pair_constants(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let mut run_max = f64::NEG_INFINITY;
    let mut run_min = f64::INFINITY;
    let (mut up, mut down) = (0.0f64, 0.0f64);
    for v in values {
        run_max = run_max.max(v);
        run_min = run_min.min(v);
        up = up.max(run_max - v);
        down = down.max(v - run_min);
    }
    (up, down)
}

/// Essential monotonicity on [`evaluation_grid`]. When both constants stay
/// under the threshold the direction with the smaller constant is reported,
/// and `Constant` only when both are 1 up to rounding.
pub fn check_essential_monotone(psi: &ScaleFunction, th: &ScaleThresholds) -> Result<MonotoneReport> {
    let (up, down) = log_pair_constants(evaluation_grid().into_iter().map(|l| psi.ln_shape_exp(l)));
    let (c_up, c_down) = (up.exp(), down.exp());
    let tol = 1e-12;
    let report = |direction, constant| MonotoneReport {
        direction,
        constant,
        c_up,
        c_down,
    };
    match (c_up <= th.monotone, c_down <= th.monotone) {
        (false, false) => Err(Error::NotInClassL { c_up, c_down }),
        _ if c_up <= 1.0 + tol && c_down <= 1.0 + tol => Ok(report(Direction::Constant, 1.0)),
        (true, true) if c_up <= c_down => Ok(report(Direction::Increasing, c_up)),
        (true, true) => Ok(report(Direction::Decreasing, c_down)),
        (true, false) => Ok(report(Direction::Increasing, c_up)),
        (false, true) => Ok(report(Direction::Decreasing, c_down)),
    }
}

/// Both 𝓛 checks together.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassLReport {
    pub square: SquareDoublingReport,
    pub monotone: MonotoneReport,
}

pub fn check_class_l(psi: &ScaleFunction, th: &ScaleThresholds) -> Result<ClassLReport> {
    let monotone = check_essential_monotone(psi, th)?;
    let square = check_square_doubling(psi, 10, th)?;
    Ok(ClassLReport { square, monotone })
}

/// `c₁ (log(e+x))^{c₂} ≤ Ψ(x) ≤ C₁ (log(e+x))^{C₂}` on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub c1: f64,
    pub c2: f64,
    pub big_c1: f64,
    pub big_c2: f64,
}

/// Tower levels used by the envelope regression.
pub const ENVELOPE_TOWER_TOP: u32 = 1000;

/// Exponents by least squares of `ln Ψ` against `ln ln(e+x)` over the
/// tower `2^{2^k}`, `k ≤ 1000`, prefactors from the extremes of
/// `Ψ / (log(e+x))^{slope}` over the evaluation grid.
pub fn growth_envelope(psi: &ScaleFunction) -> Result<Envelope> {
    let pts: Vec<(f64, f64)> = (0..=ENVELOPE_TOWER_TOP)
        .map(|k| {
            let l = tower_log(k);
            (ln_log_e_plus_exp(l), psi.ln_eval_exp(l))
        })
        .collect();
    let slope = ls_slope(&pts).ok_or_else(|| Error::Envelope("degenerate tower".into()))?;
    if !slope.is_finite() {
        return Err(Error::Envelope(format!("non-finite regression slope for {}", psi.name())));
    }
    let band = Band::from_values(
        evaluation_grid()
            .into_iter()
            .map(|l| (psi.ln_eval_exp(l) - slope * ln_log_e_plus_exp(l)).exp()),
    )
    .expect("grid is non-empty");
    if !(band.min > 0.0 && band.max.is_finite()) {
        return Err(Error::Envelope(format!("residual band {band} is not bounded away from 0 and ∞")));
    }
    Ok(Envelope {
        c1: band.min,
        c2: slope,
        big_c1: band.max,
        big_c2: slope,
    })
}

/// Constants witnessing that `x^p Ψ(x)` is essentially increasing on the
/// grid and that `(1-x)^β Ψ(1/(1-x))` is essentially decreasing on
/// `[0, 1)`.
pub fn theta_monotone_check(psi: &ScaleFunction, p: f64, beta: f64) -> Result<(f64, f64)> {
    if !(p > 0.0 && beta > 0.0) {
        return Err(Error::Parameter("theta check needs p > 0 and beta > 0".into()));
    }
    let grid = evaluation_grid();
    let (up, _) = log_pair_constants(grid.iter().skip(1).map(|&l| p * l + psi.ln_shape_exp(l)));
    // x = 1 - e^{-L} for L ≥ 0 runs over [0, 1) in increasing order.
    let radii = std::iter::once(0.0).chain(grid.iter().copied().filter(|&l| l > 0.0));
    let (_, down) = log_pair_constants(radii.map(|l| -beta * l + psi.ln_shape_exp(l)));
    Ok((up.exp(), down.exp()))
}

/// Neighbour, power and quotient bands of the ratio properties of 𝓛.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioBands {
    /// `Ψ(x)/Ψ(y)` for `x/y ∈ [1/2, 2]`.
    pub neighbor: Band,
    /// `Ψ(x)/Ψ(x^p)`.
    pub power: Band,
    /// `Ψ(x/Φ(x))/Ψ(x)`.
    pub quotient: Band,
}

pub fn ratio_properties_check(psi: &ScaleFunction, phi: &ScaleFunction, p: f64) -> Result<RatioBands> {
    if !(p > 0.0) {
        return Err(Error::Parameter(format!("p must be positive, got {p}")));
    }
    let grid = evaluation_grid();
    let finite: Vec<f64> = grid.iter().copied().filter(|l| l.is_finite()).collect();
    let v = |l: f64| psi.ln_shape_exp(l);

    let mut neighbor = Band::point(1.0);
    for (i, &l) in finite.iter().enumerate() {
        for d in [-LN_2, -0.5 * LN_2, 0.5 * LN_2, LN_2] {
            neighbor.include((v(l) - v(l + d)).exp());
        }
        for &m in &finite[i + 1..] {
            if m - l > LN_2 {
                break;
            }
            let r = (v(l) - v(m)).exp();
            neighbor.include(r);
            neighbor.include(1.0 / r);
        }
    }

    let mut power = Band::point(1.0);
    let mut quotient = Band::point(1.0);
    for &l in &finite {
        power.include((v(l) - v(p * l)).exp());
        let lq = l - phi.ln_eval_exp(l);
        if lq.is_nan() {
            return Err(Error::Domain {
                at: l.exp(),
                message: "x / Φ(x) is undefined".into(),
            });
        }
        quotient.include((v(lq) - v(l)).exp());
    }
    Ok(RatioBands {
        neighbor,
        power,
        quotient,
    })
}
