//! Carleson characteristics, test functions and embedding checks.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funcspace::{quasinorm_pow, AnalyticFunction};
use crate::measures::DiscMeasure;
use crate::quadrature::DiscRule;
use crate::scale::{check_class_l, growth_envelope, ScaleFunction, ScaleThresholds};
use crate::stats::Membership;
use crate::sweep::{run_sweep, PointValues, SweepGrid, SweepReport};
use crate::weights::{check_d, DoublingConfig, RadialWeight};

/// Angles per level at which the embedding ratio is evaluated when the
/// measure is not rotation invariant.
pub const EMBED_ANGLES: usize = 8;

/// Rejects weights that fail either doubling check; inconclusive checks
/// are returned as warnings. Yields the fitted tail exponent.
pub(crate) fn verify_weight(w: &RadialWeight, what: &str, warnings: &mut Vec<String>) -> Result<f64> {
    let (dhat, dcheck) = check_d(w, &DoublingConfig::default())?;
    for r in [&dhat, &dcheck] {
        match r.verdict {
            Membership::Member => {}
            Membership::NonMember => {
                return Err(Error::ClassMembership {
                    what: format!("{what} = {}", w.name()),
                    detail: format!("{} fails: {}", r.class_name, r.diagnostics.join("; ")),
                })
            }
            Membership::Inconclusive => warnings.push(format!("{what}: {} check inconclusive", r.class_name)),
        }
    }
    Ok(dhat.exponent_beta)
}

/// Rejects scale functions outside 𝓛.
pub(crate) fn verify_scale(psi: &ScaleFunction, what: &str, warnings: &mut Vec<String>) -> Result<()> {
    let report = check_class_l(psi, &ScaleThresholds::default()).map_err(|e| Error::ClassMembership {
        what: format!("{what} = {}", psi.name()),
        detail: e.to_string(),
    })?;
    match report.square.verdict {
        Membership::Member => Ok(()),
        Membership::NonMember => Err(Error::ClassMembership {
            what: format!("{what} = {}", psi.name()),
            detail: format!("square doubling fails: {}", report.square.diagnostics.join("; ")),
        }),
        Membership::Inconclusive => {
            warnings.push(format!("{what}: square-doubling check inconclusive"));
            Ok(())
        }
    }
}

pub(crate) fn check_exponents(p: f64, q: f64) -> Result<()> {
    if !(p > 0.0 && q.is_finite() && p.is_finite()) {
        return Err(Error::Parameter(format!("exponents must be positive and finite, got p = {p}, q = {q}")));
    }
    if !(p <= q) {
        return Err(Error::Parameter(format!("need p ≤ q, got p = {p}, q = {q}")));
    }
    Ok(())
}

/// `(ω, Ψ, Φ, μ, p, q, r)` with the class memberships checked.
#[derive(Debug, Clone)]
pub struct CarlesonContext {
    omega: RadialWeight,
    omega_area: DiscMeasure,
    psi: ScaleFunction,
    phi: ScaleFunction,
    mu: DiscMeasure,
    p: f64,
    q: f64,
    disc_radius: f64,
    gamma: f64,
    gamma_override: bool,
    warnings: Vec<String>,
}

impl CarlesonContext {
    pub fn new(omega: RadialWeight, psi: ScaleFunction, phi: ScaleFunction, mu: DiscMeasure, p: f64, q: f64) -> Result<Self> {
        check_exponents(p, q)?;
        let mut warnings = Vec::new();
        let beta = verify_weight(&omega, "omega", &mut warnings)?;
        verify_scale(&psi, "Psi", &mut warnings)?;
        verify_scale(&phi, "Phi", &mut warnings)?;
        let gamma = lemma_gamma(beta, &psi)?;
        Ok(Self {
            omega_area: DiscMeasure::weighted_area(&omega),
            omega,
            psi,
            phi,
            mu,
            p,
            q,
            disc_radius: 0.5,
            gamma,
            gamma_override: false,
            warnings,
        })
    }

    pub fn with_disc_radius(mut self, r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Parameter(format!("disc radius must lie in (0, 1), got {r}")));
        }
        self.disc_radius = r;
        Ok(self)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Parameter(format!("gamma must be positive, got {gamma}")));
        }
        self.gamma = gamma;
        self.gamma_override = true;
        Ok(self)
    }

    /// Same weights and scales with another measure.
    pub fn with_measure(mut self, mu: DiscMeasure) -> Self {
        self.mu = mu;
        self
    }

    pub fn omega(&self) -> &RadialWeight {
        &self.omega
    }

    pub fn psi(&self) -> &ScaleFunction {
        &self.psi
    }

    pub fn phi(&self) -> &ScaleFunction {
        &self.phi
    }

    pub fn mu(&self) -> &DiscMeasure {
        &self.mu
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn disc_radius(&self) -> f64 {
        self.disc_radius
    }

    /// Test-function exponent `β + |C₂| + 2` unless overridden.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Exponent of the test functions in the embedding checks: the
    /// override if set, else `max(γ, (p/q)(m + 2))` with `m` the growth
    /// exponent of `μ(S(a))`, so that `|f_a|^q` decays faster than the
    /// square masses of μ grow.
    pub fn embedding_gamma(&self) -> f64 {
        if self.gamma_override {
            return self.gamma;
        }
        let m = measure_exponent(&self.mu);
        self.gamma.max(self.p / self.q * (m + 2.0))
    }

    /// Inconclusive class checks met at construction.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn omega_square(&self, a: Complex64) -> Result<f64> {
        let ws = self.omega.carleson_mass(a);
        if !(ws > 0.0) {
            return Err(Error::StandingAssumption(a.norm()));
        }
        Ok(ws)
    }

    /// `μ(S(a)) Φ(1/ω(S(a))) / (ω(S(a)) Ψ(1/ω(S(a))))^{q/p}`.
    pub fn characteristic(&self, a: Complex64) -> Result<f64> {
        check_point(a)?;
        let ws = self.omega_square(a)?;
        Ok(self.ratio(self.mu.mass_on_square(a), ws, ws))
    }

    /// As [`Self::characteristic`] with `μ(Δ(a,r))` and `ω(Δ(a,r))` in the
    /// masses; the scale arguments stay at `1/ω(S(a))`.
    pub fn characteristic_disc(&self, a: Complex64) -> Result<f64> {
        check_point(a)?;
        let ws = self.omega_square(a)?;
        let wd = self.omega_area.mass_on_disc(a, self.disc_radius)?;
        if !(wd > 0.0) {
            return Err(Error::StandingAssumption(a.norm()));
        }
        Ok(self.ratio(self.mu.mass_on_disc(a, self.disc_radius)?, wd, ws))
    }

    fn ratio(&self, mass: f64, omega_mass: f64, scale_mass: f64) -> f64 {
        if mass == 0.0 {
            return 0.0;
        }
        let l = -scale_mass.ln();
        let num = mass.ln() + self.phi.ln_eval_exp(l);
        let den = omega_mass.ln() + self.psi.ln_eval_exp(l);
        (num - self.q / self.p * den).exp()
    }

    /// `f_a` with `|f_a|^p = (1-|a|)^γ / |1 - āz|^γ / (ω(S(a)) Ψ(1/ω(S(a))))`.
    pub fn test_function(&self, a: Complex64, gamma: f64) -> Result<AnalyticFunction> {
        check_point(a)?;
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Parameter(format!("gamma must be positive, got {gamma}")));
        }
        let ws = self.omega_square(a)?;
        let ln_factor = (gamma * (1.0 - a.norm()).ln() - ws.ln() - self.psi.ln_eval_exp(-ws.ln())) / self.p;
        AnalyticFunction::kernel_power(a, gamma / self.p, ln_factor.exp())
    }

    /// `‖f‖^p` in `A^p_{ω,Ψ}`.
    pub fn source_norm_p(&self, f: &AnalyticFunction) -> Result<f64> {
        quasinorm_pow(f, &self.omega_area, &self.psi, self.p, &DiscRule::default())
    }

    /// `‖f‖^q` in `L^q_{μ,Φ}`.
    pub fn target_norm_q(&self, f: &AnalyticFunction) -> Result<f64> {
        quasinorm_pow(f, &self.mu, &self.phi, self.q, &DiscRule::default())
    }

    /// `ρ(a) / ‖f_a‖^q_{L^q_{μ,Φ}}`.
    pub fn embedding_lower_ratio(&self, a: Complex64, gamma: f64) -> Result<f64> {
        let fa = self.test_function(a, gamma)?;
        let den = self.target_norm_q(&fa)?;
        if den == 0.0 {
            return Err(Error::DegenerateMeasure("test function has zero target norm".into()));
        }
        Ok(self.characteristic(a)? / den)
    }

    /// `‖f‖_{L^q_{μ,Φ}} / ‖f‖_{A^p_{ω,Ψ}}`.
    pub fn embedding_ratio(&self, f: &AnalyticFunction) -> Result<f64> {
        let src = self.source_norm_p(f)?;
        if !(src.is_finite() && src > 0.0) {
            return Err(Error::DegenerateInput(format!("source quasinorm is {src}")));
        }
        Ok(self.target_norm_q(f)?.powf(1.0 / self.q) / src.powf(1.0 / self.p))
    }

    /// Largest embedding ratio over the corpus.
    pub fn embedding_norm_estimate(&self, corpus: &[AnalyticFunction]) -> Result<f64> {
        let mut best: f64 = 0.0;
        for (i, f) in corpus.iter().enumerate() {
            let r = self.embedding_ratio(f).map_err(|e| match e {
                Error::DegenerateInput(m) => Error::DegenerateInput(format!("corpus member {i}: {m}")),
                other => other.with_context(format!("corpus member {i}")),
            })?;
            best = best.max(r);
        }
        Ok(best)
    }

    /// Both characteristics over the dyadic grid; with `test_functions`
    /// set, also `‖f_a‖^p` and the embedding lower ratio.
    pub fn sweep(&self, grid: &SweepGrid, test_functions: bool) -> SweepReport {
        let radial = self.mu.is_rotation_invariant();
        let gamma = self.embedding_gamma();
        let fa_norms: Vec<Option<f64>> = if test_functions {
            use rayon::prelude::*;
            (0..=grid.max_level)
                .into_par_iter()
                .map(|j| {
                    self.test_function(SweepGrid::point(j, 0.0), gamma)
                        .and_then(|f| self.source_norm_p(&f))
                        .ok()
                })
                .collect()
        } else {
            vec![None; grid.max_level as usize + 1]
        };
        run_sweep(grid, radial, |j, a| {
            let rho_square = self.characteristic(a)?;
            let rho_disc = self.characteristic_disc(a)?;
            let fa_norm_p = fa_norms[j as usize].unwrap_or(f64::NAN);
            let embed = test_functions && (radial || embed_angle(grid, j, a));
            let embed_lb_ratio = if embed { self.embedding_lower_ratio(a, gamma)? } else { f64::NAN };
            Ok(PointValues {
                rho_square,
                rho_disc,
                fa_norm_p,
                embed_lb_ratio,
            })
        })
    }
}

/// Whether `a` is one of the [`EMBED_ANGLES`] evenly spaced angles of its level.
fn embed_angle(grid: &SweepGrid, j: u32, a: Complex64) -> bool {
    let n = grid.angles(j).len();
    let step = n / n.min(EMBED_ANGLES);
    let theta = a.arg().rem_euclid(std::f64::consts::TAU);
    let k = (theta * n as f64 / std::f64::consts::TAU).round() as usize % n;
    k % step == 0
}

/// Slope of `ln max_θ μ(S(a))` against `ln(1-|a|)` on levels 8..=16, or 0
/// when μ puts no mass on enough of those squares.
pub fn measure_exponent(mu: &DiscMeasure) -> f64 {
    let angles = if mu.is_rotation_invariant() { 1 } else { 16 };
    let pts: Vec<(f64, f64)> = (8..=16)
        .filter_map(|j| {
            let m = (0..angles)
                .map(|k| mu.mass_on_square(SweepGrid::point(j, std::f64::consts::TAU * k as f64 / angles as f64)))
                .fold(0.0, f64::max);
            (m > 0.0).then(|| (-(j as f64) * std::f64::consts::LN_2, m.ln()))
        })
        .collect();
    if pts.len() < 3 {
        return 0.0;
    }
    crate::stats::ls_slope(&pts).unwrap_or(0.0).max(0.0)
}

fn check_point(a: Complex64) -> Result<()> {
    if a.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("point {a} is outside the open disc")))
    }
}

/// `β + |C₂| + 2` with `β` the tail exponent of ω and `C₂` the envelope
/// exponent of Ψ. Decreasing Ψ need extra decay, not less, hence `|C₂|`.
pub fn lemma_gamma(beta: f64, psi: &ScaleFunction) -> Result<f64> {
    let c2 = growth_envelope(psi)?.big_c2;
    let gamma = beta + c2.abs() + 2.0;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Parameter(format!("default gamma {gamma} is not positive")));
    }
    Ok(gamma)
}
