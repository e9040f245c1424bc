//! Frozen values from independent high-precision oracles (hypergeometric
//! closed forms and adaptive 2-D quadrature at 30 digits).

use num_complex::Complex64;

use bergzyg::carleson::CarlesonContext;
use bergzyg::funcspace::{quasinorm_pow, AnalyticFunction};
use bergzyg::measures::DiscMeasure;
use bergzyg::operators::{OperatorContext, Symbol};
use bergzyg::quadrature::DiscRule;
use bergzyg::scale::ScaleFunction;
use bergzyg::sweep::SweepGrid;
use bergzyg::weights::RadialWeight;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `‖f_a‖²` for `ω ≡ 1`, `Ψ ≡ 1`, `p = 2`, `γ = 3`:
/// `(1-|a|)^3 / ω(S(a)) · ₂F₁(3/2, 3/2; 2; |a|²)`.
const FA_NORMS: [(u32, f64); 8] = [
    (0, 1.0),
    (1, 2.8892365259374951),
    (2, 2.2403266068465869),
    (4, 1.9889201971868281),
    (6, 1.9785614386833399),
    (8, 1.9895616065502746),
    (10, 1.9960678952100468),
    (12, 1.9986811465402756),
];

#[test]
fn test_function_norms_match_hypergeometric_closed_form() {
    let w = RadialWeight::unit();
    let ctx = CarlesonContext::new(w.clone(), ScaleFunction::one(), ScaleFunction::one(), DiscMeasure::weighted_area(&w), 2.0, 2.0).unwrap();
    assert_eq!(ctx.gamma(), 3.0);
    for (j, want) in FA_NORMS {
        let f = ctx.test_function(SweepGrid::point(j, 0.0), 3.0).unwrap();
        let got = ctx.source_norm_p(&f).unwrap();
        assert!(rel(got, want) < 1e-7, "j = {j}: {got} vs {want}");
    }
}

#[test]
fn zygmund_quasinorms_match_two_dimensional_oracle() {
    let f = AnalyticFunction::kernel_power(Complex64::new(0.5, 0.0), 2.0, 1.0).unwrap();
    let mu = DiscMeasure::weighted_area(&RadialWeight::unit());
    let rule = DiscRule::default();
    // ∫ |f| log(e + |f|) dA
    let got = quasinorm_pow(&f, &mu, &ScaleFunction::log_power(1.0), 1.0, &rule).unwrap();
    assert!(rel(got, 1.6477267900144317) < 1e-9, "{got}");
    // ∫ |f|² / log(e + |f|) dA
    let got = quasinorm_pow(&f, &mu, &ScaleFunction::log_power(-1.0), 2.0, &rule).unwrap();
    assert!(rel(got, 1.1782112282927994) < 1e-9, "{got}");
}

/// `ρ(a)` for power weights and power measures from the closed-form masses
/// `(1-|a|)/π · ∫_{|a|}^1 (1-s)^x s ds`.
#[test]
fn power_characteristics_match_closed_form_masses() {
    let cases = [
        (2.0, 2.0, 0.0, 1.0, 5, 0.015542328042328042),
        (1.0, 2.0, 1.0, 0.0, 9, 864962137323.84627),
        (1.0, 2.0, -0.5, 2.0, 3, 0.032291890461048206),
        (2.0, 2.0, 1.0, -0.5, 12, 1048661.3472244832),
    ];
    for (p, q, alpha, t, j, want) in cases {
        let mu = DiscMeasure::weighted_area(&RadialWeight::power(t).unwrap());
        let ctx = CarlesonContext::new(RadialWeight::power(alpha).unwrap(), ScaleFunction::one(), ScaleFunction::one(), mu, p, q).unwrap();
        let got = ctx.characteristic(SweepGrid::point(j, 0.7)).unwrap();
        assert!(rel(got, want) < 1e-10, "alpha={alpha} t={t} j={j}: {got} vs {want}");
    }
}

/// With `f ≡ 1`, `g = zⁿ`, `ν ≡ 1`, `Φ ≡ 1`, `q = 2` the ratio is
/// `(1/(n+1)) / (n/((2n+1)(n+1))) = (2n+1)/n`.
#[test]
fn littlewood_paley_ratio_for_monomial_symbols() {
    let unit = RadialWeight::unit();
    for n in 1..=5usize {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        let ctx = OperatorContext::new(unit.clone(), unit.clone(), ScaleFunction::one(), ScaleFunction::one(), 2.0, 2.0, Symbol::Polynomial(coeffs))
            .unwrap();
        let got = ctx.littlewood_paley_ratio(&AnalyticFunction::constant(Complex64::new(1.0, 0.0))).unwrap();
        let want = (2 * n + 1) as f64 / n as f64;
        assert!(rel(got, want) < 1e-8, "n = {n}: {got}");
    }
}
