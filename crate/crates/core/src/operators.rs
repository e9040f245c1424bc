//! The integration operator `T_g f = ∫_0^z f g'`, its symbol characteristic
//! and the Littlewood–Paley comparison.

use num_complex::Complex64;

use crate::carleson::{check_exponents, verify_scale, verify_weight};
use crate::error::{Error, Result};
use crate::funcspace::{quasinorm_pow, AnalyticFunction};
use crate::measures::DiscMeasure;
use crate::quadrature::{integrate_disc, DiscRule, Hints};
use crate::scale::ScaleFunction;
use crate::sweep::{run_sweep, PointValues, SweepGrid, SweepReport};
use crate::weights::RadialWeight;

/// Largest coefficient degree produced by [`apply_tg`].
pub const DEGREE_CAP: usize = 4096;

/// Cauchy products above this degree use compensated summation.
pub const COMPENSATED_ABOVE: usize = 512;

/// Truncation degree of named symbols in the Littlewood–Paley ratio.
pub const LP_TRUNCATION: usize = 64;

/// Tail tolerance for truncating named symbols.
pub const SYMBOL_TAIL_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Symbol `g` of `T_g`.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    /// Polynomial coefficients `g_0, g_1, ...`.
    Polynomial(Vec<Complex64>),
    /// `log(1/(1-z))`.
    LogSym,
    /// `1/(1-z)`.
    Cauchy,
    /// `Σ_{k ≤ K} z^{2^k}`.
    Lacunary(u32),
}

impl Symbol {
    pub fn lacunary(k: u32) -> Result<Self> {
        if (1usize << k.min(63)) > DEGREE_CAP || k >= 63 {
            return Err(Error::Parameter(format!("lacunary K = {k} exceeds the degree cap {DEGREE_CAP}")));
        }
        Ok(Symbol::Lacunary(k))
    }

    pub fn name(&self) -> String {
        match self {
            Symbol::Polynomial(c) => format!("poly(degree {})", c.len().saturating_sub(1)),
            Symbol::LogSym => "logsym".into(),
            Symbol::Cauchy => "cauchy".into(),
            Symbol::Lacunary(k) => format!("lacunary(K={k})"),
        }
    }

    /// `g'(z)`, in closed form for the named symbols.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match self {
            Symbol::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(ZERO, |acc, (n, &a)| acc * z + a * n as f64),
            Symbol::LogSym => (ONE - z).inv(),
            Symbol::Cauchy => (ONE - z).powi(-2),
            Symbol::Lacunary(k) => {
                // Σ 2^i z^{2^i - 1}; z^{2^i - 1} = z^{2^{i-1} - 1} · z^{2^{i-1}}.
                let (mut e, mut pw) = (ONE, z);
                let mut sum = ONE;
                for i in 1..=*k {
                    e *= pw;
                    pw = pw * pw;
                    sum += e * (1u64 << i) as f64;
                }
                sum
            }
        }
    }

    /// Taylor coefficients `0..=degree`.
    pub fn coefficients(&self, degree: usize) -> Vec<Complex64> {
        let mut out = vec![ZERO; degree + 1];
        match self {
            Symbol::Polynomial(c) => {
                for (o, &a) in out.iter_mut().zip(c) {
                    *o = a;
                }
            }
            Symbol::LogSym => {
                for (n, o) in out.iter_mut().enumerate().skip(1) {
                    *o = Complex64::new(1.0 / n as f64, 0.0);
                }
            }
            Symbol::Cauchy => out.fill(ONE),
            Symbol::Lacunary(k) => {
                for i in 0..=*k {
                    if let Some(o) = out.get_mut(1usize << i) {
                        *o = ONE;
                    }
                }
            }
        }
        out
    }

    /// Smallest degree whose tail is below `tol` on `|z| ≤ radius`, with the
    /// tail bound reached.
    pub fn truncation_degree(&self, radius: f64, tol: f64) -> (usize, f64) {
        match self {
            Symbol::Polynomial(c) => (c.len().saturating_sub(1), 0.0),
            Symbol::Lacunary(k) => (1usize << k, 0.0),
            Symbol::LogSym | Symbol::Cauchy => {
                // Σ_{n>N} r^n/n ≤ r^{N+1}/((N+1)(1-r)) and Σ_{n>N} r^n = r^{N+1}/(1-r).
                let log = matches!(self, Symbol::LogSym);
                let bound = |n: usize| {
                    let b = radius.powf(n as f64 + 1.0) / (1.0 - radius);
                    if log {
                        b / (n as f64 + 1.0)
                    } else {
                        b
                    }
                };
                let mut n = 1usize;
                while bound(n) >= tol && n < usize::MAX / 2 {
                    n *= 2;
                }
                let (mut lo, mut hi) = (n / 2, n);
                while hi - lo > 1 {
                    let mid = (lo + hi) / 2;
                    if bound(mid) < tol {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                (hi, bound(hi))
            }
        }
    }

    /// Truncation with tail below `tol` on `|z| ≤ radius`.
    pub fn to_polynomial(&self, radius: f64, tol: f64) -> Result<AnalyticFunction> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::Parameter(format!("truncation radius must lie in (0, 1), got {radius}")));
        }
        let (degree, tail) = self.truncation_degree(radius, tol);
        if degree > DEGREE_CAP {
            return Err(Error::DegreeOverflow {
                degree,
                cap: DEGREE_CAP,
                tail_bound: self.truncation_degree_tail(DEGREE_CAP, radius).max(tail),
            });
        }
        Ok(AnalyticFunction::Polynomial(self.coefficients(degree)))
    }

    fn truncation_degree_tail(&self, degree: usize, radius: f64) -> f64 {
        let b = radius.powf(degree as f64 + 1.0) / (1.0 - radius);
        match self {
            Symbol::LogSym => b / (degree as f64 + 1.0),
            Symbol::Cauchy => b,
            _ => 0.0,
        }
    }

    /// The first `degree + 1` coefficients as a polynomial.
    pub fn truncated(&self, degree: usize) -> AnalyticFunction {
        AnalyticFunction::Polynomial(self.coefficients(degree))
    }
}

/// Sum with Neumaier compensation.
fn neumaier<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

/// Cauchy product of coefficient lists.
pub fn cauchy_product(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    let compensated = n - 1 > COMPENSATED_ABOVE;
    (0..n)
        .map(|k| {
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            let terms = (lo..=hi).map(|i| a[i] * b[k - i]);
            if compensated {
                let v: Vec<Complex64> = terms.collect();
                Complex64::new(neumaier(v.iter().map(|z| z.re)), neumaier(v.iter().map(|z| z.im)))
            } else {
                terms.sum()
            }
        })
        .collect()
}

fn derivative_coeffs(c: &[Complex64]) -> Vec<Complex64> {
    c.iter().enumerate().skip(1).map(|(n, &a)| a * n as f64).collect()
}

fn polynomial_coeffs<'a>(f: &'a AnalyticFunction, what: &str) -> Result<&'a [Complex64]> {
    match f {
        AnalyticFunction::Polynomial(c) => Ok(c),
        _ => Err(Error::Parameter(format!("{what} must be a polynomial; truncate it with polynomial_approximation first"))),
    }
}

/// Taylor truncation of `f` whose tail is below `tol` on `|z| ≤ radius`.
pub fn polynomial_approximation(f: &AnalyticFunction, radius: f64, tol: f64) -> Result<AnalyticFunction> {
    if let AnalyticFunction::Polynomial(_) = f {
        return Ok(f.clone());
    }
    let mut degree = 16;
    loop {
        let tail = f.taylor_tail_bound(degree, radius);
        if tail < tol {
            return Ok(AnalyticFunction::Polynomial(f.taylor(degree)));
        }
        if degree >= DEGREE_CAP {
            return Err(Error::DegreeOverflow {
                degree: DEGREE_CAP,
                cap: DEGREE_CAP,
                tail_bound: tail,
            });
        }
        degree = (degree * 2).min(DEGREE_CAP);
    }
}

/// `T_g f` for polynomials `f` and `g`, exactly by coefficients.
pub fn apply_tg(g: &AnalyticFunction, f: &AnalyticFunction) -> Result<AnalyticFunction> {
    let gc = polynomial_coeffs(g, "g")?;
    let fc = polynomial_coeffs(f, "f")?;
    let prod = cauchy_product(fc, &derivative_coeffs(gc));
    let mut out = Vec::with_capacity(prod.len() + 1);
    out.push(ZERO);
    out.extend(prod.iter().enumerate().map(|(n, &c)| c / (n as f64 + 1.0)));
    if out.len() - 1 > DEGREE_CAP {
        let tail_bound = out[DEGREE_CAP + 1..].iter().map(|c| c.norm()).sum();
        return Err(Error::DegreeOverflow {
            degree: out.len() - 1,
            cap: DEGREE_CAP,
            tail_bound,
        });
    }
    Ok(AnalyticFunction::Polynomial(out))
}

/// `(ω, ν, Ψ, Φ, p, q, g)` with the class memberships checked.
#[derive(Debug, Clone)]
pub struct OperatorContext {
    omega: RadialWeight,
    nu: RadialWeight,
    psi: ScaleFunction,
    phi: ScaleFunction,
    p: f64,
    q: f64,
    g: Symbol,
    warnings: Vec<String>,
}

impl OperatorContext {
    pub fn new(omega: RadialWeight, nu: RadialWeight, psi: ScaleFunction, phi: ScaleFunction, p: f64, q: f64, g: Symbol) -> Result<Self> {
        check_exponents(p, q)?;
        let mut warnings = Vec::new();
        verify_weight(&omega, "omega", &mut warnings)?;
        verify_weight(&nu, "nu", &mut warnings)?;
        verify_scale(&psi, "Psi", &mut warnings)?;
        verify_scale(&phi, "Phi", &mut warnings)?;
        Ok(Self {
            omega,
            nu,
            psi,
            phi,
            p,
            q,
            g,
            warnings,
        })
    }

    pub fn symbol(&self) -> &Symbol {
        &self.g
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// `|g'(a)|(1-|a|) (Φ(1/ω(S(a))) ν(S(a)))^{1/q} / (Ψ(1/ω(S(a))) ω(S(a)))^{1/p}`.
    pub fn tg_characteristic(&self, a: Complex64) -> Result<f64> {
        if !(a.norm() < 1.0) {
            return Err(Error::Parameter(format!("point {a} is outside the open disc")));
        }
        let d = self.g.derivative(a).norm();
        if d == 0.0 {
            return Ok(0.0);
        }
        if !d.is_finite() {
            return Err(Error::Domain {
                at: a.norm(),
                message: format!("g'({a}) is not finite"),
            });
        }
        let ws = self.omega.carleson_mass(a);
        let vs = self.nu.carleson_mass(a);
        if !(ws > 0.0 && vs > 0.0) {
            return Err(Error::StandingAssumption(a.norm()));
        }
        let l = -ws.ln();
        let ln = d.ln() + (1.0 - a.norm()).ln() + (self.phi.ln_eval_exp(l) + vs.ln()) / self.q
            - (self.psi.ln_eval_exp(l) + ws.ln()) / self.p;
        Ok(ln.exp())
    }

    pub fn tg_sweep(&self, grid: &SweepGrid) -> SweepReport {
        run_sweep(grid, false, |_, a| self.tg_characteristic(a).map(PointValues::rho_only))
    }

    /// The symbol as a polynomial for [`apply_tg`]: named symbols are cut at
    /// [`LP_TRUNCATION`].
    pub fn symbol_polynomial(&self) -> AnalyticFunction {
        match &self.g {
            Symbol::Polynomial(c) => AnalyticFunction::Polynomial(c.clone()),
            Symbol::Lacunary(k) => self.g.truncated(1usize << k),
            other => other.truncated(LP_TRUNCATION),
        }
    }

    /// `‖T_g f‖^q_{A^q_{ν,Φ}} / ∫ |f g'|^q (1-|z|)^q Φ(1/(1-|z|)) ν̂(z)/(1-|z|) dA(z)`.
    pub fn littlewood_paley_ratio(&self, f: &AnalyticFunction) -> Result<f64> {
        let g = self.symbol_polynomial();
        let fc = polynomial_coeffs(f, "f")?;
        let fg = cauchy_product(fc, &derivative_coeffs(polynomial_coeffs(&g, "g")?));
        if fg.iter().all(|&c| c == ZERO) {
            return Err(Error::DegenerateInput("f·g' vanishes identically".into()));
        }
        let fg = AnalyticFunction::Polynomial(fg);
        let rule = DiscRule::default();
        let tgf = apply_tg(&g, f)?;
        let num = quasinorm_pow(&tgf, &DiscMeasure::weighted_area(&self.nu), &self.phi, self.q, &rule)?;
        let q = self.q;
        let dens = |u: f64| u.powf(q - 1.0) * self.phi.eval_inv(u) * self.nu.tail_gap(u);
        let hints = Hints::polynomial(fg.degree().unwrap_or(0));
        let den = integrate_disc(&rule, &dens, None, &hints, |z, _| (q * fg.ln_abs(z)).exp())?;
        if !(den > 0.0) {
            return Err(Error::DegenerateInput("denominator integral vanishes".into()));
        }
        Ok(num / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(v: &[f64]) -> AnalyticFunction {
        AnalyticFunction::real_polynomial(v)
    }

    fn coeffs(f: &AnalyticFunction) -> Vec<Complex64> {
        match f {
            AnalyticFunction::Polynomial(c) => c.clone(),
            _ => panic!("not a polynomial"),
        }
    }

    fn trivial(g: Symbol) -> OperatorContext {
        let w = RadialWeight::unit();
        OperatorContext::new(w.clone(), w, ScaleFunction::one(), ScaleFunction::one(), 2.0, 2.0, g).unwrap()
    }

    #[test]
    fn apply_tg_examples() {
        let t = apply_tg(&AnalyticFunction::monomial(1), &AnalyticFunction::monomial(3)).unwrap();
        assert_eq!(coeffs(&t), vec![ZERO, ZERO, ZERO, ZERO, c(0.25, 0.0)]);
        let t = apply_tg(&AnalyticFunction::monomial(2), &poly(&[1.0])).unwrap();
        assert_eq!(coeffs(&t), vec![ZERO, ZERO, c(1.0, 0.0)]);
        let t = apply_tg(&poly(&[0.0, 1.0, 1.0]), &poly(&[1.0, 1.0])).unwrap();
        let want = [0.0, 1.0, 1.5, 2.0 / 3.0];
        for (got, w) in coeffs(&t).iter().zip(want) {
            assert!((got - c(w, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_tg_rejects_kernels_and_overflow() {
        let k = AnalyticFunction::kernel_power(c(0.5, 0.0), 2.0, 1.0).unwrap();
        assert!(apply_tg(&AnalyticFunction::monomial(1), &k).is_err());
        let truncated = polynomial_approximation(&k, 0.9, 1e-9).unwrap();
        assert!(apply_tg(&AnalyticFunction::monomial(1), &truncated).is_ok());
        let big = AnalyticFunction::monomial(3000);
        assert!(matches!(apply_tg(&big, &big), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn compensated_product_matches_plain_on_integers() {
        let a: Vec<Complex64> = (0..700).map(|k| c((k % 7) as f64 - 3.0, (k % 3) as f64)).collect();
        let b: Vec<Complex64> = (0..300).map(|k| c((k % 5) as f64, -((k % 2) as f64))).collect();
        let fast = cauchy_product(&a[..200], &b[..200]);
        let slow = cauchy_product(&a, &b);
        // Integer coefficients are exact either way.
        for k in 0..100 {
            let direct: Complex64 = (0..=k).map(|i| a[i] * b[k - i]).sum();
            assert_eq!(slow[k], direct);
            assert_eq!(fast[k], direct);
        }
    }

    #[test]
    fn named_symbols() {
        let z = c(0.3, -0.4);
        let log = Symbol::LogSym.truncated(400);
        let d = derivative_coeffs(&coeffs(&log));
        let series: Complex64 = d.iter().rev().fold(ZERO, |acc, &a| acc * z + a);
        assert!((series - Symbol::LogSym.derivative(z)).norm() < 1e-12);
        let lac = Symbol::lacunary(5).unwrap();
        let p = Symbol::Polynomial(lac.coefficients(32));
        assert!((p.derivative(z) - lac.derivative(z)).norm() < 1e-12);
        assert!(Symbol::lacunary(13).is_err());
        let (n, tail) = Symbol::Cauchy.truncation_degree(0.99, 1e-9);
        assert!(tail < 1e-9 && 0.99f64.powf(n as f64) / 0.01 >= 1e-9);
        assert!(matches!(Symbol::Cauchy.to_polynomial(1.0 - 1e-4, 1e-9), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn bloch_reduction_examples() {
        let ctx = trivial(Symbol::Polynomial(vec![ZERO, ONE]));
        for a in [c(0.0, 0.0), c(0.5, 0.3), c(-0.9, 0.0)] {
            assert!((ctx.tg_characteristic(a).unwrap() - (1.0 - a.norm())).abs() < 1e-14);
        }
        let ctx = trivial(Symbol::LogSym);
        for r in [0.0, 0.5, 0.99] {
            assert!((ctx.tg_characteristic(c(r, 0.0)).unwrap() - 1.0).abs() < 1e-12);
        }
        let a = Complex64::from_polar(0.9, 1.0);
        assert!(ctx.tg_characteristic(a).unwrap() < 1.0);
    }

    #[test]
    fn tg_sweep_examples() {
        let grid = SweepGrid::with_cap(10, 256).unwrap();
        let r = trivial(Symbol::Polynomial(vec![c(3.0, 0.0)])).tg_sweep(&grid);
        assert!(r.entries.iter().all(|e| e.rho_square == 0.0));
        assert_eq!(r.verdict_bounded, crate::sweep::Boundedness::Bounded);
        assert_eq!(r.verdict_vanishing, crate::sweep::Vanishing::Vanishing);
        let r = trivial(Symbol::Polynomial(vec![ZERO, ONE])).tg_sweep(&grid);
        assert!((r.boundary_exponent - 1.0).abs() < 0.05);
        assert_eq!(r.verdict_vanishing, crate::sweep::Vanishing::Vanishing);
        let r = trivial(Symbol::Cauchy).tg_sweep(&grid);
        assert!((r.boundary_exponent + 1.0).abs() < 0.05);
        assert_eq!(r.verdict_bounded, crate::sweep::Boundedness::Unbounded);
    }

    #[test]
    fn littlewood_paley_spot_value() {
        let ctx = trivial(Symbol::Polynomial(vec![ZERO, ONE]));
        let r = ctx.littlewood_paley_ratio(&poly(&[1.0])).unwrap();
        assert!((r - 3.0).abs() < 1e-9, "{r}");
        let ctx = trivial(Symbol::Polynomial(vec![ONE]));
        assert!(matches!(ctx.littlewood_paley_ratio(&poly(&[1.0])), Err(Error::DegenerateInput(_))));
    }

    fn int_poly() -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-8i32..8, -8i32..8).prop_map(|(a, b)| c(a as f64, b as f64)), 1..12)
    }

    proptest! {
        #[test]
        fn tg_vanishes_at_zero(g in int_poly(), f in int_poly()) {
            let t = apply_tg(&AnalyticFunction::Polynomial(g), &AnalyticFunction::Polynomial(f)).unwrap();
            prop_assert_eq!(t.evaluate(ZERO), ZERO);
        }

        #[test]
        fn tg_is_linear(g in int_poly(), f1 in int_poly(), f2 in int_poly(), k in -4i32..4) {
            let g = AnalyticFunction::Polynomial(g);
            let (f1, f2) = (AnalyticFunction::Polynomial(f1), AnalyticFunction::Polynomial(f2));
            let k = c(k as f64, 0.0);
            let lhs = coeffs(&apply_tg(&g, &f1.scaled(k).add(&f2)).unwrap());
            let a = coeffs(&apply_tg(&g, &f1).unwrap());
            let b = coeffs(&apply_tg(&g, &f2).unwrap());
            for (i, l) in lhs.iter().enumerate() {
                let r = k * a.get(i).copied().unwrap_or(ZERO) + b.get(i).copied().unwrap_or(ZERO);
                // Dyadic divisors keep the comparison exact only up to rounding.
                prop_assert!((l - r).norm() <= 1e-12 * (1.0 + r.norm()));
            }
        }

        #[test]
        fn derivative_recovers_product(g in int_poly(), f in int_poly()) {
            let t = apply_tg(&AnalyticFunction::Polynomial(g.clone()), &AnalyticFunction::Polynomial(f.clone())).unwrap();
            let back = derivative_coeffs(&coeffs(&t));
            let prod = cauchy_product(&f, &derivative_coeffs(&g));
            for (x, y) in back.iter().zip(&prod) {
                prop_assert!((x - y).norm() <= 1e-12 * (1.0 + y.norm()));
            }
        }
    }
}
