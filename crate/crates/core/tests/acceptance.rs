//! Acceptance criteria 1-11, one PASS/FAIL line each. Exits nonzero when
//! any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use bergzyg::carleson::CarlesonContext;
use bergzyg::funcspace::{quasi_triangle_check, quasinorm, AnalyticFunction};
use bergzyg::geometry::{pseudo_disc, pseudo_distance, Sector};
use bergzyg::harness::random_polynomial;
use bergzyg::measures::{AreaComponent, DiscMeasure};
use bergzyg::operators::{OperatorContext, Symbol};
use bergzyg::scale::{
    check_class_l, check_essential_monotone, check_square_doubling, growth_envelope, ratio_properties_check, ScaleFunction,
    ScaleThresholds,
};
use bergzyg::stats::{Band, Membership};
use bergzyg::sweep::{Boundedness, SweepGrid, SweepReport, Vanishing};
use bergzyg::weights::{check_d, log_inv_square_regularized, psi_tail_compare, zygmund_transform, DoublingConfig, RadialWeight};

type Outcome = Result<String, String>;

fn power(alpha: f64) -> RadialWeight {
    RadialWeight::power(alpha).expect("finite exponent")
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// One power-family case.
struct PowerCase {
    p: f64,
    q: f64,
    alpha: f64,
    t: f64,
}

impl PowerCase {
    fn all() -> Vec<PowerCase> {
        let mut v = Vec::new();
        for (p, q) in [(2.0, 2.0), (1.0, 2.0)] {
            for alpha in [-0.5, 0.0, 1.0] {
                for t in [-0.5, 0.0, 1.0, 2.0] {
                    v.push(PowerCase { p, q, alpha, t });
                }
            }
        }
        v
    }

    fn exponent(&self) -> f64 {
        self.t + 2.0 - self.q / self.p * (self.alpha + 2.0)
    }

    fn bounded(&self) -> bool {
        self.exponent() >= 0.0
    }

    fn context(&self) -> CarlesonContext {
        let mu = DiscMeasure::weighted_area(&power(self.t));
        CarlesonContext::new(power(self.alpha), ScaleFunction::one(), ScaleFunction::one(), mu, self.p, self.q).expect("valid power case")
    }

    fn label(&self) -> String {
        format!("(p,q)=({},{}) alpha={} t={}", self.p, self.q, self.alpha, self.t)
    }
}

fn power_family() -> Outcome {
    let start = Instant::now();
    let grid = SweepGrid::new(14).unwrap();
    let reports: Vec<(PowerCase, SweepReport)> = PowerCase::all()
        .into_iter()
        .map(|c| {
            let r = c.context().sweep(&grid, false);
            (c, r)
        })
        .collect();
    let elapsed = start.elapsed().as_secs_f64();
    let mut wrong = Vec::new();
    let mut worst: f64 = 0.0;
    for (c, r) in &reports {
        let want = if c.bounded() { Boundedness::Bounded } else { Boundedness::Unbounded };
        let err = (r.boundary_exponent - c.exponent()).abs();
        worst = worst.max(err);
        if r.verdict_bounded != want || !(err <= 0.05) {
            wrong.push(format!("{}: {} slope {:.4}", c.label(), r.verdict_bounded, r.boundary_exponent));
        }
    }
    check(
        wrong.is_empty() && elapsed < 60.0,
        format!("{}/24 correct, max slope error {worst:.4}, {elapsed:.1} s {}", 24 - wrong.len(), wrong.join("; ")),
    )
}

fn zygmund_boundary() -> Outcome {
    // Critical line t + 2 = (q/p)(alpha + 2) with p = 1, q = 2, alpha = 0, t = 2.
    let (p, q) = (1.0, 2.0);
    let grid = SweepGrid::new(14).unwrap();
    let mut wrong = Vec::new();
    let mut borderline = Vec::new();
    for beta in [0.0, 0.5, 1.0] {
        for gamma in [0.0, 1.0, 2.0] {
            let ctx = CarlesonContext::new(
                power(0.0),
                ScaleFunction::log_power(beta),
                ScaleFunction::log_power(gamma),
                DiscMeasure::weighted_area(&power(2.0)),
                p,
                q,
            )
            .unwrap();
            let r = ctx.sweep(&grid, false);
            let want = gamma <= q / p * beta;
            let got = r.verdict_bounded;
            if gamma == q / p * beta {
                let tail: Vec<f64> = r.annulus_maxima.iter().rev().take(4).map(|m| m.1).collect();
                let b = Band::from_values(tail).unwrap();
                borderline.push(b.spread());
                if b.spread() > 2.0 {
                    wrong.push(format!("beta={beta} gamma={gamma}: borderline spread {:.3}", b.spread()));
                }
            }
            if (got == Boundedness::Bounded) != want || got == Boundedness::Inconclusive {
                wrong.push(format!("beta={beta} gamma={gamma}: {got}"));
            }
        }
    }
    let worst = borderline.iter().copied().fold(1.0, f64::max);
    check(wrong.is_empty(), format!("9 cells, borderline tail spread <= {worst:.4} {}", wrong.join("; ")))
}

fn identity() -> Outcome {
    let grid = SweepGrid::new(12).unwrap();
    let cases = [
        (power(1.0), ScaleFunction::one(), 2.0),
        (power(0.0), ScaleFunction::log_power(1.0), 1.0),
        (log_inv_square_regularized(), ScaleFunction::log_power(-1.0), 2.0),
    ];
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for (w, psi, p) in cases {
        let ctx = CarlesonContext::new(w.clone(), psi.clone(), psi, DiscMeasure::weighted_area(&w), p, p).unwrap();
        let r = ctx.sweep(&grid, false);
        if r.failures > 0 {
            return Err(format!("{} failed points", r.failures));
        }
        for e in &r.entries {
            worst = worst.max((e.rho_square - 1.0).abs()).max((e.rho_disc - 1.0).abs());
        }
        points += r.entries.len();
    }
    // The same measure assembled from two half-disc sectors takes the
    // non-radial path through sector overlaps and disc quadrature.
    let w = power(1.0);
    let half = |a: f64, b: f64| AreaComponent {
        weight: w.clone(),
        sector: Some(Sector::between(a, b)),
        factor: 1.0,
    };
    let mu = DiscMeasure::new(vec![half(0.0, PI), half(PI, TAU)], vec![]).unwrap();
    let ctx = CarlesonContext::new(w, ScaleFunction::one(), ScaleFunction::one(), mu, 2.0, 2.0).unwrap();
    let r = ctx.sweep(&grid, false);
    if r.failures > 0 {
        return Err(format!("{} failed points in the split measure", r.failures));
    }
    for e in &r.entries {
        worst = worst.max((e.rho_square - 1.0).abs()).max((e.rho_disc - 1.0).abs());
    }
    points += r.entries.len();
    check(worst <= 1e-3, format!("{points} points, max |rho - 1| = {worst:.3e}"))
}

fn flatness_cases() -> Vec<(&'static str, RadialWeight, &'static str, ScaleFunction)> {
    let weights = [("power0", power(0.0)), ("power1", power(1.0)), ("loginvsq-reg", log_inv_square_regularized())];
    let scales = [
        ("const", ScaleFunction::one()),
        ("logpow+1", ScaleFunction::log_power(1.0)),
        ("logpow-1", ScaleFunction::log_power(-1.0)),
    ];
    let mut v = Vec::new();
    for (wn, w) in &weights {
        for (sn, s) in &scales {
            v.push((*wn, w.clone(), *sn, s.clone()));
        }
    }
    v
}

fn flatness() -> Outcome {
    let mut worst = (0.0, String::new());
    let mut bad = Vec::new();
    for (wn, w, sn, psi) in flatness_cases() {
        for p in [1.0, 2.0] {
            let ctx = CarlesonContext::new(w.clone(), psi.clone(), psi.clone(), DiscMeasure::weighted_area(&w), p, p).unwrap();
            let norms = (0..=16u32)
                .into_par_iter()
                .map(|j| ctx.source_norm_p(&ctx.test_function(SweepGrid::point(j, 0.0), ctx.gamma())?))
                .collect::<bergzyg::error::Result<Vec<f64>>>()
                .map_err(|e| format!("{wn}/{sn} p={p}: {e}"))?;
            let spread = Band::from_values(norms).unwrap().spread();
            let label = format!("{wn}/{sn} p={p} gamma={:.3}", ctx.gamma());
            if spread > worst.0 {
                worst = (spread, label.clone());
            }
            if !(spread <= 10.0) {
                bad.push(format!("{label}: {spread:.2}"));
            }
        }
    }
    check(bad.is_empty(), format!("18 cases, worst max/min {:.3} at {} {}", worst.0, worst.1, bad.join("; ")))
}

fn necessity() -> Outcome {
    let grid = SweepGrid::new(14).unwrap();
    let mut bad = Vec::new();
    let (mut worst_band, mut least_growth) = (1.0f64, f64::INFINITY);
    for c in PowerCase::all() {
        let ctx = c.context();
        if c.bounded() {
            let r = ctx.sweep(&grid, true);
            let values = r.entries.iter().filter(|e| e.theta == 0.0).map(|e| e.embed_lb_ratio);
            let band = Band::from_values(values).unwrap();
            let spread = band.spread();
            worst_band = worst_band.max(spread);
            if !(spread <= 20.0) {
                bad.push(format!("{}: lower-ratio spread {spread:.2}", c.label()));
            }
        } else {
            let gamma = ctx.embedding_gamma();
            let ratios = (11..=14u32)
                .into_par_iter()
                .map(|j| ctx.embedding_ratio(&ctx.test_function(SweepGrid::point(j, 0.0), gamma)?))
                .collect::<bergzyg::error::Result<Vec<f64>>>()
                .map_err(|e| format!("{}: {e}", c.label()))?;
            let growth = ratios[3] / ratios[0];
            least_growth = least_growth.min(growth);
            if !(growth >= 1.5) {
                bad.push(format!("{}: corpus growth {growth:.3}", c.label()));
            }
        }
    }
    check(
        bad.is_empty(),
        format!("bounded max/min <= {worst_band:.3}, unbounded growth >= {least_growth:.3} {}", bad.join("; ")),
    )
}

fn geometry() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let slack = 1e-12;
    let mut disagree = 0;
    let mut near_boundary = 0;
    let n = 10_000;
    for i in 0..n {
        let a = Complex64::from_polar(rng.gen::<f64>().sqrt() * 0.999, rng.gen_range(0.0..TAU));
        let r = rng.gen_range(0.01..0.99);
        let d = pseudo_disc(a, r);
        // Half uniform in the disc, half concentrated around the disc edge.
        let z = if i % 2 == 0 {
            Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
        } else {
            let rad = d.euclid_radius * rng.gen_range(0.9..1.1);
            d.euclid_center + Complex64::from_polar(rad, rng.gen_range(0.0..TAU))
        };
        if !(z.norm() < 1.0) {
            continue;
        }
        let hyper = pseudo_distance(a, z) < r;
        let euclid = d.contains_euclid(z);
        if hyper != euclid {
            let on_edge = (pseudo_distance(a, z) - r).abs() <= slack || ((z - d.euclid_center).norm() - d.euclid_radius).abs() <= slack;
            if on_edge {
                near_boundary += 1;
            } else {
                disagree += 1;
            }
        }
    }
    check(disagree == 0, format!("{n} samples, {disagree} disagreements, {near_boundary} within slack"))
}

fn quasinorms() -> Outcome {
    let mu = DiscMeasure::weighted_area(&RadialWeight::unit());
    let scales = [
        ("const", ScaleFunction::one()),
        ("logpow+1", ScaleFunction::log_power(1.0)),
        ("logpow-1", ScaleFunction::log_power(-1.0)),
    ];
    let mut lines = Vec::new();
    let mut bad = Vec::new();
    for p in [1.0, 2.0] {
        for (name, psi) in &scales {
            let c = ratio_properties_check(psi, psi, p).map_err(|e| e.to_string())?.neighbor.max;
            let limit = 4.0 * c.powf(1.0 / p);
            let results = (0..200u64)
                .into_par_iter()
                .map(|k| {
                    let mut rng = StdRng::seed_from_u64(7_000 + k);
                    let (df, dg) = (rng.gen_range(0..=8), rng.gen_range(0..=8));
                    let f = random_polynomial(&mut rng, df);
                    let g = random_polynomial(&mut rng, dg);
                    let lambda = Complex64::from_polar(rng.gen_range(0.1..10.0), rng.gen_range(0.0..TAU));
                    let ratio = quasi_triangle_check(&f, &g, &mu, psi, p)?;
                    let homogeneity = if psi.is_constant() {
                        let lhs = quasinorm(&f.scaled(lambda), &mu, psi, p)?;
                        let rhs = lambda.norm() * quasinorm(&f, &mu, psi, p)?;
                        (lhs - rhs).abs() / rhs
                    } else {
                        0.0
                    };
                    Ok((ratio, homogeneity))
                })
                .collect::<bergzyg::error::Result<Vec<(f64, f64)>>>()
                .map_err(|e| format!("p={p} {name}: {e}"))?;
            let ratio = results.iter().map(|r| r.0).fold(0.0, f64::max);
            let hom = results.iter().map(|r| r.1).fold(0.0, f64::max);
            lines.push(format!("p={p} {name}: {ratio:.3}/{limit:.3}"));
            if !(ratio <= limit) || !(hom <= 1e-6) {
                bad.push(format!("p={p} {name}: ratio {ratio:.4} limit {limit:.4} homogeneity {hom:.2e}"));
            }
        }
    }
    check(bad.is_empty(), format!("200 pairs x 6, max ratio/limit {} {}", lines.join(", "), bad.join("; ")))
}

fn bloch() -> Outcome {
    let tg = |g: Symbol, j: u32| {
        let w = power(1.0);
        let ctx = OperatorContext::new(w.clone(), w, ScaleFunction::one(), ScaleFunction::one(), 2.0, 2.0, g).unwrap();
        ctx.tg_sweep(&SweepGrid::new(j).unwrap())
    };
    let mut bad = Vec::new();
    let log = tg(Symbol::LogSym, 14);
    if !(log.verdict_bounded == Boundedness::Bounded
        && log.verdict_vanishing == Vanishing::NotVanishing
        && (0.9..=1.1).contains(&log.global_sup_estimate))
    {
        bad.push(format!("logsym: {} {} sup {:.4}", log.verdict_bounded, log.verdict_vanishing, log.global_sup_estimate));
    }
    let poly = tg(Symbol::Polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)]), 14);
    if !(poly.verdict_bounded == Boundedness::Bounded && poly.verdict_vanishing == Vanishing::Vanishing) {
        bad.push(format!("poly: {} {}", poly.verdict_bounded, poly.verdict_vanishing));
    }
    let cauchy = tg(Symbol::Cauchy, 14);
    if !(cauchy.verdict_bounded == Boundedness::Unbounded && (cauchy.boundary_exponent + 1.0).abs() <= 0.05) {
        bad.push(format!("cauchy: {} slope {:.4}", cauchy.verdict_bounded, cauchy.boundary_exponent));
    }
    let lac = tg(Symbol::lacunary(10).unwrap(), 10);
    if !(lac.verdict_bounded == Boundedness::Bounded && lac.verdict_vanishing == Vanishing::NotVanishing) {
        bad.push(format!("lacunary(10): {} {}", lac.verdict_bounded, lac.verdict_vanishing));
    }
    check(
        bad.is_empty(),
        format!(
            "logsym sup {:.4}, cauchy slope {:.4}, lacunary sup {:.4} {}",
            log.global_sup_estimate,
            cauchy.boundary_exponent,
            lac.global_sup_estimate,
            bad.join("; ")
        ),
    )
}

fn littlewood_paley() -> Outcome {
    let nu = power(1.0);
    let phi = ScaleFunction::log_power(1.0);
    let ctx = OperatorContext::new(nu.clone(), nu, phi.clone(), phi, 2.0, 2.0, Symbol::LogSym).unwrap();
    let ratios = (0..50u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = StdRng::seed_from_u64(9_000 + k);
            let degree = rng.gen_range(0..=16);
            ctx.littlewood_paley_ratio(&random_polynomial(&mut rng, degree))
        })
        .collect::<bergzyg::error::Result<Vec<f64>>>()
        .map_err(|e| e.to_string())?;
    let band = Band::from_values(ratios).unwrap();
    let unit = RadialWeight::unit();
    let spot_ctx = OperatorContext::new(
        unit.clone(),
        unit,
        ScaleFunction::one(),
        ScaleFunction::one(),
        2.0,
        2.0,
        Symbol::Polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]),
    )
    .unwrap();
    let spot = spot_ctx.littlewood_paley_ratio(&AnalyticFunction::constant(Complex64::new(1.0, 0.0))).map_err(|e| e.to_string())?;
    check(
        band.within(1.0 / 50.0, 50.0) && (spot - 3.0).abs() <= 1e-3,
        format!("corpus band {band}, spot value {spot:.6}"),
    )
}

fn transform() -> Outcome {
    let radii: Vec<f64> = (0..=16).map(SweepGrid::radius).collect();
    let mut bad = Vec::new();
    let mut worst: f64 = 1.0;
    for (wn, w, sn, psi) in flatness_cases() {
        let big_w = zygmund_transform(&w, &psi).map_err(|e| e.to_string())?;
        let (dhat, dcheck) = check_d(&big_w, &DoublingConfig::default()).map_err(|e| e.to_string())?;
        let (_, band) = psi_tail_compare(&w, &psi, &radii).map_err(|e| e.to_string())?;
        worst = worst.max(band.spread());
        if dhat.verdict != Membership::Member || dcheck.verdict != Membership::Member || !(band.spread() <= 10.0) {
            bad.push(format!("{wn}/{sn}: {} {} spread {:.3}", dhat.verdict, dcheck.verdict, band.spread()));
        }
    }
    check(bad.is_empty(), format!("9 combinations, worst band max/min {worst:.4} {}", bad.join("; ")))
}

fn class_l() -> Outcome {
    let th = ScaleThresholds::default();
    let mut bad = Vec::new();
    let mut worst_env: f64 = 0.0;
    for beta in [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0] {
        let psi = ScaleFunction::log_power(beta);
        // The band endpoint 2^{-β} is the exact limit at infinity; allow for
        // rounding in its evaluation.
        let lim = 2f64.powf(f64::abs(beta)) * (1.0 + 1e-12);
        match check_class_l(&psi, &th) {
            Ok(r) => {
                let ok = r.square.verdict == Membership::Member
                    && r.square.band.within(1.0 / lim, lim)
                    && r.monotone.constant <= lim;
                if !ok {
                    bad.push(format!("logpow {beta}: {} band {} monotone {:.4}", r.square.verdict, r.square.band, r.monotone.constant));
                }
            }
            Err(e) => bad.push(format!("logpow {beta}: {e}")),
        }
        match growth_envelope(&psi) {
            Ok(env) => {
                let err = (env.big_c2 - beta).abs().max((env.c2 - beta).abs());
                worst_env = worst_env.max(err);
                if !(err <= 1e-6) {
                    bad.push(format!("envelope {beta}: {}", env.big_c2));
                }
            }
            Err(e) => bad.push(format!("envelope {beta}: {e}")),
        }
    }
    match check_square_doubling(&ScaleFunction::exponential(), 10, &th) {
        Ok(r) if r.verdict == Membership::NonMember => {}
        Ok(r) => bad.push(format!("exp: square doubling {}", r.verdict)),
        Err(e) => bad.push(format!("exp: {e}")),
    }
    let splice = ScaleFunction::tower_splice(4.0, -4.0, 2.0, 3.0).map_err(|e| e.to_string())?;
    if check_essential_monotone(&splice, &th).is_ok() {
        bad.push("splice passed essential monotonicity".into());
    }
    check(bad.is_empty(), format!("log-powers in band, exp and splice rejected, envelope error {worst_env:.2e} {}", bad.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("power-family classification", power_family),
        ("zygmund boundary", zygmund_boundary),
        ("identity characteristic", identity),
        ("test-function flatness", flatness),
        ("necessity bound", necessity),
        ("geometry equivalence", geometry),
        ("quasinorm properties", quasinorms),
        ("T_g Bloch reduction", bloch),
        ("Littlewood-Paley band", littlewood_paley),
        ("weight transform", transform),
        ("class-L diagnostics", class_l),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {} [{secs:.1} s]", i + 1, detail.trim_end()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {} [{secs:.1} s]", i + 1, detail.trim_end());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
