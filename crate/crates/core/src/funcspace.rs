//! Analytic functions on the disc, integral means and Zygmund quasinorms.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::DiscMeasure;
use crate::quadrature::{DiscRule, Hints};
use crate::scale::ScaleFunction;
use crate::weights::RadialWeight;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Evaluable analytic function on 𝔻.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticFunction {
    /// Coefficients `c_0, c_1, ...`.
    Polynomial(Vec<Complex64>),
    /// `factor · (1 - ā z)^{-exponent}` on the principal branch.
    KernelPower { base: Complex64, exponent: f64, factor: f64 },
    /// `Σ c_k f_k`.
    ScaledSum(Vec<(Complex64, AnalyticFunction)>),
}

impl AnalyticFunction {
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        AnalyticFunction::Polynomial(coeffs)
    }

    pub fn real_polynomial(coeffs: &[f64]) -> Self {
        AnalyticFunction::Polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        AnalyticFunction::Polynomial(vec![c])
    }

    pub fn zero() -> Self {
        AnalyticFunction::Polynomial(Vec::new())
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![ZERO; n + 1];
        c[n] = ONE;
        AnalyticFunction::Polynomial(c)
    }

    pub fn kernel_power(base: Complex64, exponent: f64, factor: f64) -> Result<Self> {
        if !(base.norm() < 1.0) {
            return Err(Error::Parameter(format!("kernel base {base} must lie in the open disc")));
        }
        if !(exponent > 0.0 && factor >= 0.0 && factor.is_finite()) {
            return Err(Error::Parameter("kernel power needs exponent > 0 and factor ≥ 0".into()));
        }
        Ok(AnalyticFunction::KernelPower { base, exponent, factor })
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        match self {
            AnalyticFunction::Polynomial(c) => c.iter().rev().fold(ZERO, |acc, &a| acc * z + a),
            AnalyticFunction::KernelPower { base, exponent, factor } => {
                if *factor == 0.0 {
                    return ZERO;
                }
                (ONE - base.conj() * z).ln().scale(-exponent).exp() * *factor
            }
            AnalyticFunction::ScaledSum(terms) => terms.iter().map(|(c, f)| c * f.evaluate(z)).sum(),
        }
    }

    /// `ln |f(z)|`, computed without forming `|f|` for kernel powers.
    pub fn ln_abs(&self, z: Complex64) -> f64 {
        match self {
            AnalyticFunction::KernelPower { base, exponent, factor } => {
                factor.ln() - exponent * (ONE - base.conj() * z).norm().ln()
            }
            _ => self.evaluate(z).norm().ln(),
        }
    }

    /// Where `|f|` concentrates, for the disc rule.
    pub fn hints(&self) -> Hints {
        match self {
            AnalyticFunction::Polynomial(c) => Hints::polynomial(c.len().saturating_sub(1)),
            AnalyticFunction::KernelPower { base, .. } => {
                if *base == ZERO {
                    Hints::default()
                } else {
                    Hints::peak(*base)
                }
            }
            AnalyticFunction::ScaledSum(terms) => terms.iter().fold(Hints::default(), |h, (_, f)| h.merge(&f.hints())),
        }
    }

    /// Polynomial degree, or `None` for infinite series.
    pub fn degree(&self) -> Option<usize> {
        match self {
            AnalyticFunction::Polynomial(c) => Some(c.len().saturating_sub(1)),
            AnalyticFunction::KernelPower { base, .. } => (*base == ZERO).then_some(0),
            AnalyticFunction::ScaledSum(terms) => terms.iter().try_fold(0, |d, (_, f)| f.degree().map(|e| d.max(e))),
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        match self {
            AnalyticFunction::Polynomial(c) => c.iter().all(|&x| x == ZERO),
            AnalyticFunction::KernelPower { factor, .. } => *factor == 0.0,
            AnalyticFunction::ScaledSum(_) => self.taylor(64).iter().all(|&x| x == ZERO),
        }
    }

    /// Taylor coefficients `0..=degree`.
    pub fn taylor(&self, degree: usize) -> Vec<Complex64> {
        match self {
            AnalyticFunction::Polynomial(c) => {
                let mut out = c.clone();
                out.resize(degree + 1, ZERO);
                out
            }
            AnalyticFunction::KernelPower { base, exponent, factor } => {
                let abar = base.conj();
                let mut out = Vec::with_capacity(degree + 1);
                let mut c = Complex64::new(*factor, 0.0);
                for n in 0..=degree {
                    out.push(c);
                    c = c * abar * ((exponent + n as f64) / (n as f64 + 1.0));
                }
                out
            }
            AnalyticFunction::ScaledSum(terms) => {
                let mut out = vec![ZERO; degree + 1];
                for (k, f) in terms {
                    for (o, c) in out.iter_mut().zip(f.taylor(degree)) {
                        *o += k * c;
                    }
                }
                out
            }
        }
    }

    /// Bound on `Σ_{n > degree} |c_n| radius^n`.
    pub fn taylor_tail_bound(&self, degree: usize, radius: f64) -> f64 {
        match self {
            AnalyticFunction::Polynomial(c) => c.iter().enumerate().skip(degree + 1).map(|(n, a)| a.norm() * radius.powi(n as i32)).sum(),
            AnalyticFunction::KernelPower { base, exponent, factor } => {
                let q = base.norm() * radius;
                if q >= 1.0 {
                    return f64::INFINITY;
                }
                // Terms c_n q^n with c_{n+1}/c_n = (γ+n)/(n+1) |a|.
                let mut term = *factor;
                for n in 0..=degree {
                    term *= q * (exponent + n as f64) / (n as f64 + 1.0);
                }
                let mut sum = 0.0;
                let mut n = degree + 1;
                loop {
                    sum += term;
                    let ratio = q * (exponent + n as f64) / (n as f64 + 1.0);
                    if ratio < 1.0 && term * ratio / (1.0 - ratio) <= 1e-3 * sum.max(f64::MIN_POSITIVE) {
                        // Remaining terms decrease at least geometrically.
                        return sum * (1.0 + 1e-3) + term * ratio / (1.0 - ratio);
                    }
                    if n > degree + 1_000_000 {
                        return f64::INFINITY;
                    }
                    term *= ratio;
                    n += 1;
                }
            }
            AnalyticFunction::ScaledSum(terms) => terms.iter().map(|(k, f)| k.norm() * f.taylor_tail_bound(degree, radius)).sum(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        match self {
            AnalyticFunction::Polynomial(p) => AnalyticFunction::Polynomial(p.iter().map(|x| x * c).collect()),
            other => AnalyticFunction::ScaledSum(vec![(c, other.clone())]),
        }
    }

    pub fn add(&self, other: &AnalyticFunction) -> Self {
        match (self, other) {
            (AnalyticFunction::Polynomial(a), AnalyticFunction::Polynomial(b)) => {
                let n = a.len().max(b.len());
                AnalyticFunction::Polynomial(
                    (0..n).map(|i| a.get(i).copied().unwrap_or(ZERO) + b.get(i).copied().unwrap_or(ZERO)).collect(),
                )
            }
            _ => AnalyticFunction::ScaledSum(vec![(ONE, self.clone()), (ONE, other.clone())]),
        }
    }
}

/// `M_p(r, f)`; `p = ∞` gives the maximum modulus on `|z| = r`.
pub fn integral_mean(f: &AnalyticFunction, r: f64, p: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Parameter(format!("radius must lie in (0, 1), got {r}")));
    }
    if !(p > 0.0) {
        return Err(Error::Parameter(format!("p must be positive, got {p}")));
    }
    let at = |t: f64| f.evaluate(Complex64::from_polar(r, t)).norm();
    if p.is_infinite() {
        let n = 4096usize;
        let (mut best_t, mut best) = (0.0, at(0.0));
        for k in 1..n {
            let t = TAU * k as f64 / n as f64;
            let v = at(t);
            if v > best {
                best = v;
                best_t = t;
            }
        }
        // Golden-section refinement on the bracketing cell pair.
        let (mut lo, mut hi) = (best_t - TAU / n as f64, best_t + TAU / n as f64);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let (x1, x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
            if at(x1) >= at(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        return Ok(best.max(at(0.5 * (lo + hi))));
    }
    let mean = |n: usize| (0..n).map(|k| at(TAU * k as f64 / n as f64).powf(p)).sum::<f64>() / n as f64;
    let mut n = 64;
    let mut prev = mean(n);
    while n < 1 << 22 {
        n *= 2;
        let cur = mean(n);
        if (cur - prev).abs() <= 1e-8 * cur.abs() {
            return Ok(cur.powf(1.0 / p));
        }
        prev = cur;
    }
    Err(Error::Quadrature {
        previous: prev,
        last: mean(n),
        context: Some(format!("integral mean at r = {r}")),
    })
}

/// `|f|^p Ψ(|f|)` from `ln |f|`.
pub(crate) fn zygmund_integrand(l: f64, p: f64, psi: &ScaleFunction) -> f64 {
    if l == f64::NEG_INFINITY {
        return 0.0;
    }
    (p * l + psi.ln_eval_exp(l)).exp()
}

/// `∫ |f|^p Ψ(|f|) dμ`.
pub fn quasinorm_pow(f: &AnalyticFunction, mu: &DiscMeasure, psi: &ScaleFunction, p: f64, rule: &DiscRule) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Parameter(format!("p must be positive, got {p}")));
    }
    if f.is_identically_zero() {
        return Ok(0.0);
    }
    mu.integrate(rule, &f.hints(), |z, _| zygmund_integrand(f.ln_abs(z), p, psi))
}

/// `‖f‖_{L^p_{μ,Ψ}} = (∫ |f|^p Ψ(|f|) dμ)^{1/p}`.
pub fn quasinorm(f: &AnalyticFunction, mu: &DiscMeasure, psi: &ScaleFunction, p: f64) -> Result<f64> {
    Ok(quasinorm_pow(f, mu, psi, p, &DiscRule::default())?.powf(1.0 / p))
}

/// `‖f + g‖ / (‖f‖ + ‖g‖)`.
pub fn quasi_triangle_check(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    mu: &DiscMeasure,
    psi: &ScaleFunction,
    p: f64,
) -> Result<f64> {
    let nf = quasinorm(f, mu, psi, p)?;
    let ng = quasinorm(g, mu, psi, p)?;
    if nf + ng == 0.0 {
        return Err(Error::DegenerateInput("both functions have zero quasinorm".into()));
    }
    Ok(quasinorm(&f.add(g), mu, psi, p)? / (nf + ng))
}

/// `max_z |f(z)|^p ω(S(z)) Ψ(1/ω(S(z)))` over the grid.
pub fn growth_check(f: &AnalyticFunction, w: &RadialWeight, psi: &ScaleFunction, p: f64, grid: &[Complex64]) -> f64 {
    grid.iter()
        .map(|&z| {
            let ws = w.carleson_mass(z);
            zygmund_integrand(f.ln_abs(z), p, &ScaleFunction::one()) * ws * psi.eval_exp(-ws.ln())
        })
        .fold(0.0, f64::max)
}
