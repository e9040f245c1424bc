//! Scenario pipelines, verdict summaries, report files and the built-in
//! catalog.

use std::fmt::Write as _;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::carleson::CarlesonContext;
use crate::config::{parse_config, parse_scale, parse_weight, ConfigFile, Expectations, FunctionSpec, Scenario, Theorem};
use crate::error::{Error, Result};
use crate::funcspace::AnalyticFunction;
use crate::measures::DiscMeasure;
use crate::operators::OperatorContext;
use crate::scale::{check_class_l, growth_envelope, ScaleFunction, ScaleThresholds};
use crate::stats::{Band, Membership};
use crate::sweep::{Boundedness, SweepEntry, SweepGrid, SweepReport, Vanishing};
use crate::weights::{check_d, psi_tail_compare, zygmund_transform, DoublingConfig, RadialWeight};

/// Default max/min limit of the lemma-check bands.
pub const DEFAULT_BAND_LIMIT: f64 = 10.0;

/// Levels of the test-function flatness sweep in lemma checks.
pub const FLATNESS_LEVELS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    pub fn token(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
        }
    }

    /// Fail dominates inconclusive, which dominates pass.
    fn and(self, other: Outcome) -> Outcome {
        match (self, other) {
            (Outcome::Fail, _) | (_, Outcome::Fail) => Outcome::Fail,
            (Outcome::Inconclusive, _) | (_, Outcome::Inconclusive) => Outcome::Inconclusive,
            _ => Outcome::Pass,
        }
    }
}

/// One line of `summary.txt`. `outcome` is present only when the scenario
/// declares an expectation or its pipeline failed.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictSummary {
    pub scenario: String,
    pub theorem: Theorem,
    pub verdict: String,
    pub numbers: Vec<(String, String)>,
    pub outcome: Option<Outcome>,
    pub error: Option<String>,
}

impl VerdictSummary {
    fn failed(s: &Scenario, message: String) -> Self {
        Self {
            scenario: s.name.clone(),
            theorem: s.theorem,
            verdict: "error".into(),
            numbers: Vec::new(),
            outcome: Some(Outcome::Fail),
            error: Some(message),
        }
    }

    pub fn number(&self, key: &str) -> Option<&str> {
        self.numbers.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// `key=value` pairs separated by single spaces; the error message, if
    /// any, comes last and may contain spaces.
    pub fn to_line(&self) -> String {
        let mut line = format!("scenario={} theorem={} verdict={}", self.scenario, self.theorem, self.verdict);
        for (k, v) in &self.numbers {
            let _ = write!(line, " {k}={v}");
        }
        if let Some(o) = self.outcome {
            let _ = write!(line, " result={}", o.token());
        }
        if let Some(e) = &self.error {
            let _ = write!(line, " error={}", e.replace('\n', " "));
        }
        line
    }
}

/// Summary plus the sweep CSV, when the pipeline produces one.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub summary: VerdictSummary,
    pub csv: Option<String>,
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.6e}")
    }
}

fn band_str(b: Option<Band>) -> String {
    match b {
        Some(b) => format!("{},{}", num(b.min), num(b.max)),
        None => "nan".into(),
    }
}

fn csv_of(report: &SweepReport) -> Result<String> {
    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is ascii"))
}

/// Realizes the function specs; test functions use `ctx`'s normalization.
pub fn resolve_functions(specs: &[FunctionSpec], ctx: &CarlesonContext, seed: u64) -> Result<Vec<AnalyticFunction>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    for spec in specs {
        match spec {
            FunctionSpec::Poly(c) => out.push(AnalyticFunction::polynomial(c.clone())),
            FunctionSpec::TestFn { a, gamma } => out.push(ctx.test_function(*a, gamma.unwrap_or(ctx.gamma()))?),
            FunctionSpec::Random { count, degree } => {
                for _ in 0..*count {
                    out.push(random_polynomial(&mut rng, *degree));
                }
            }
        }
    }
    Ok(out)
}

/// Coefficients uniform in `[-1, 1]²`.
pub fn random_polynomial<R: Rng>(rng: &mut R, degree: usize) -> AnalyticFunction {
    let coeffs = (0..=degree)
        .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    AnalyticFunction::polynomial(coeffs)
}

fn expect_flag(expected: Option<bool>, positive: bool, negative: bool) -> Option<Outcome> {
    expected.map(|e| match (positive, negative) {
        (true, _) if e => Outcome::Pass,
        (_, true) if !e => Outcome::Pass,
        (false, false) => Outcome::Inconclusive,
        _ => Outcome::Fail,
    })
}

fn combine(parts: impl IntoIterator<Item = Option<Outcome>>) -> Option<Outcome> {
    parts.into_iter().flatten().reduce(Outcome::and)
}

/// Outcomes shared by the two sweep pipelines.
fn sweep_outcome(expect: &Expectations, report: &SweepReport) -> Option<Outcome> {
    combine([
        expect_flag(
            expect.bounded,
            report.verdict_bounded == Boundedness::Bounded,
            report.verdict_bounded == Boundedness::Unbounded,
        ),
        expect_flag(
            expect.vanishing,
            report.verdict_vanishing == Vanishing::Vanishing,
            report.verdict_vanishing == Vanishing::NotVanishing,
        ),
        expect.slope.map(|t| if t.accepts(report.boundary_exponent) { Outcome::Pass } else { Outcome::Fail }),
        expect.sup.map(|t| if t.accepts(report.global_sup_estimate) { Outcome::Pass } else { Outcome::Fail }),
    ])
}

fn sweep_numbers(report: &SweepReport) -> Vec<(String, String)> {
    vec![
        ("bounded".into(), report.verdict_bounded.to_string()),
        ("vanishing".into(), report.verdict_vanishing.to_string()),
        ("sup".into(), num(report.global_sup_estimate)),
        ("slope".into(), num(report.boundary_exponent)),
        ("last_max".into(), num(report.annulus_maxima.last().map_or(f64::NAN, |m| m.1))),
        ("points".into(), report.entries.len().to_string()),
        ("failures".into(), report.failures.to_string()),
    ]
}

/// Band of a column over its finite positive entries.
fn column_band(entries: &[SweepEntry], f: impl Fn(&SweepEntry) -> f64) -> Option<Band> {
    Band::from_values(entries.iter().map(f).filter(|v| v.is_finite() && *v > 0.0))
}

fn unsupported(what: &str, keys: &[(&str, bool)]) -> Result<()> {
    for (k, used) in keys {
        if *used {
            return Err(Error::Parameter(format!("expect.{k} does not apply to {what}")));
        }
    }
    Ok(())
}

fn embedding_pipeline(s: &Scenario) -> Result<ScenarioOutput> {
    unsupported("embedding scenarios", &[("member", s.expect.member.is_some()), ("band", s.expect.band.is_some())])?;
    let omega = s.weight.clone().expect("validated at parse time");
    let mut ctx = CarlesonContext::new(omega, s.scale.clone(), s.phi().clone(), s.measure()?, s.p, s.q)?;
    if let Some(r) = s.disc_radius {
        ctx = ctx.with_disc_radius(r)?;
    }
    if let Some(g) = s.gamma {
        ctx = ctx.with_gamma(g)?;
    }
    let grid = SweepGrid::with_cap(s.levels, s.angular_cap)?;
    let report = ctx.sweep(&grid, s.test_functions);
    let mut numbers = sweep_numbers(&report);
    if s.test_functions {
        numbers.push(("gamma".into(), num(ctx.embedding_gamma())));
        numbers.push(("fa_norm_band".into(), band_str(column_band(&report.entries, |e| e.fa_norm_p))));
        numbers.push(("embed_lb_band".into(), band_str(column_band(&report.entries, |e| e.embed_lb_ratio))));
    }
    if !s.functions.is_empty() {
        let corpus = resolve_functions(&s.functions, &ctx, s.seed)?;
        numbers.push(("corpus_size".into(), corpus.len().to_string()));
        numbers.push(("embedding_estimate".into(), num(ctx.embedding_norm_estimate(&corpus)?)));
    }
    let verdict = match s.theorem {
        Theorem::EmbeddingCompact => report.verdict_vanishing.to_string(),
        _ => report.verdict_bounded.to_string(),
    };
    let outcome = sweep_outcome(&s.expect, &report);
    let mut warnings = ctx.warnings().to_vec();
    warnings.extend(report.warnings.iter().cloned());
    numbers.push(("warnings".into(), warnings.len().to_string()));
    Ok(ScenarioOutput {
        summary: VerdictSummary {
            scenario: s.name.clone(),
            theorem: s.theorem,
            verdict,
            numbers,
            outcome,
            error: None,
        },
        csv: Some(csv_of(&report)?),
    })
}

fn operator_pipeline(s: &Scenario) -> Result<ScenarioOutput> {
    unsupported("operator scenarios", &[("member", s.expect.member.is_some())])?;
    let omega = s.weight.clone().expect("validated at parse time");
    let nu = s.nu().cloned().expect("weight present");
    let g = s.symbol.clone().expect("validated at parse time");
    let ctx = OperatorContext::new(omega.clone(), nu, s.scale.clone(), s.phi().clone(), s.p, s.q, g)?;
    let grid = SweepGrid::with_cap(s.levels, s.angular_cap)?;
    let report = ctx.tg_sweep(&grid);
    let mut numbers = sweep_numbers(&report);
    let mut band_outcome = None;
    if !s.functions.is_empty() {
        let normalizer = CarlesonContext::new(omega.clone(), s.scale.clone(), s.scale.clone(), DiscMeasure::weighted_area(&omega), s.p, s.p)?;
        let corpus = resolve_functions(&s.functions, &normalizer, s.seed)?;
        let ratios = corpus
            .par_iter()
            .map(|f| ctx.littlewood_paley_ratio(f))
            .collect::<Result<Vec<f64>>>()?;
        let band = Band::from_values(ratios.iter().copied());
        numbers.push(("corpus_size".into(), corpus.len().to_string()));
        numbers.push(("lp_band".into(), band_str(band)));
        band_outcome = s.expect.band.map(|limit| match band {
            Some(b) if b.within(1.0 / limit, limit) => Outcome::Pass,
            _ => Outcome::Fail,
        });
    } else if s.expect.band.is_some() {
        return Err(Error::Parameter("expect.band needs a function corpus".into()));
    }
    numbers.push(("warnings".into(), (ctx.warnings().len() + report.warnings.len()).to_string()));
    let verdict = match s.theorem {
        Theorem::OperatorCompact => report.verdict_vanishing.to_string(),
        _ => report.verdict_bounded.to_string(),
    };
    Ok(ScenarioOutput {
        summary: VerdictSummary {
            scenario: s.name.clone(),
            theorem: s.theorem,
            verdict,
            numbers,
            outcome: combine([sweep_outcome(&s.expect, &report), band_outcome]),
            error: None,
        },
        csv: Some(csv_of(&report)?),
    })
}

/// Weight class verdict: 𝒟̂ and 𝒟̌ together.
pub fn weight_class(w: &RadialWeight) -> Result<(Membership, Vec<(String, String)>)> {
    let (dhat, dcheck) = check_d(w, &DoublingConfig::default())?;
    let verdict = match (dhat.verdict, dcheck.verdict) {
        (Membership::Member, Membership::Member) => Membership::Member,
        (Membership::NonMember, _) | (_, Membership::NonMember) => Membership::NonMember,
        _ => Membership::Inconclusive,
    };
    let numbers = vec![
        ("weight".into(), w.name().replace(' ', "_")),
        ("dhat".into(), dhat.verdict.to_string()),
        ("dhat_c".into(), num(dhat.constant_c)),
        ("dcheck".into(), dcheck.verdict.to_string()),
        ("dcheck_c".into(), num(dcheck.constant_c)),
        ("dcheck_k".into(), dcheck.constant_k.map_or("nan".into(), num)),
        ("beta".into(), num(dhat.exponent_beta)),
    ];
    Ok((verdict, numbers))
}

/// Class-𝓛 verdict with the envelope exponent when it exists.
pub fn scale_class(psi: &ScaleFunction) -> Result<(Membership, Vec<(String, String)>)> {
    let mut numbers = vec![("scale".into(), psi.name().replace(' ', "_"))];
    let report = match check_class_l(psi, &ScaleThresholds::default()) {
        Ok(r) => r,
        Err(Error::NotInClassL { c_up, c_down }) => {
            numbers.push(("monotone".into(), "non-member".into()));
            numbers.push(("c_up".into(), num(c_up)));
            numbers.push(("c_down".into(), num(c_down)));
            return Ok((Membership::NonMember, numbers));
        }
        Err(e) => return Err(e),
    };
    numbers.push(("monotone".into(), report.monotone.direction.to_string()));
    numbers.push(("monotone_c".into(), num(report.monotone.constant)));
    numbers.push(("square".into(), report.square.verdict.to_string()));
    numbers.push(("square_band".into(), band_str(Some(report.square.band))));
    if report.square.verdict == Membership::Member {
        if let Ok(env) = growth_envelope(psi) {
            numbers.push(("envelope_exponent".into(), num(env.big_c2)));
        }
    }
    Ok((report.square.verdict, numbers))
}

fn class_pipeline(s: &Scenario) -> Result<ScenarioOutput> {
    unsupported(
        "class checks",
        &[
            ("bounded", s.expect.bounded.is_some()),
            ("vanishing", s.expect.vanishing.is_some()),
            ("slope", s.expect.slope.is_some()),
            ("sup", s.expect.sup.is_some()),
            ("band", s.expect.band.is_some()),
        ],
    )?;
    let mut verdicts = Vec::new();
    let mut numbers = Vec::new();
    if let Some(w) = &s.weight {
        let (v, n) = weight_class(w)?;
        verdicts.push(v);
        numbers.extend(n);
    }
    if s.scale_given {
        let (v, n) = scale_class(&s.scale)?;
        verdicts.push(v);
        numbers.extend(n);
    }
    let verdict = if verdicts.iter().all(|v| *v == Membership::Member) {
        Membership::Member
    } else if verdicts.contains(&Membership::NonMember) {
        Membership::NonMember
    } else {
        Membership::Inconclusive
    };
    let outcome = expect_flag(s.expect.member, verdict == Membership::Member, verdict == Membership::NonMember);
    Ok(ScenarioOutput {
        summary: VerdictSummary {
            scenario: s.name.clone(),
            theorem: s.theorem,
            verdict: verdict.to_string(),
            numbers,
            outcome,
            error: None,
        },
        csv: None,
    })
}

/// Test-function flatness along the ray and the transform band; the CSV
/// carries `‖f_a‖^p` in its `fa_norm_p` column.
fn lemma_pipeline(s: &Scenario) -> Result<ScenarioOutput> {
    unsupported(
        "lemma checks",
        &[
            ("bounded", s.expect.bounded.is_some()),
            ("vanishing", s.expect.vanishing.is_some()),
            ("slope", s.expect.slope.is_some()),
            ("sup", s.expect.sup.is_some()),
            ("member", s.expect.member.is_some()),
        ],
    )?;
    let omega = s.weight.clone().expect("validated at parse time");
    let mut ctx = CarlesonContext::new(omega.clone(), s.scale.clone(), s.scale.clone(), DiscMeasure::weighted_area(&omega), s.p, s.p)?;
    if let Some(g) = s.gamma {
        ctx = ctx.with_gamma(g)?;
    }
    let levels: Vec<u32> = (0..=FLATNESS_LEVELS).collect();
    let norms = levels
        .par_iter()
        .map(|&j| {
            let a = SweepGrid::point(j, 0.0);
            ctx.source_norm_p(&ctx.test_function(a, ctx.gamma())?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let fa_band = Band::from_values(norms.iter().copied()).expect("levels are non-empty");

    let big_w = zygmund_transform(&omega, &s.scale)?;
    let (w_class, _) = weight_class(&big_w)?;
    let radii: Vec<f64> = levels.iter().map(|&j| SweepGrid::radius(j)).collect();
    let (_, transform_band) = psi_tail_compare(&omega, &s.scale, &radii)?;

    let limit = s.expect.band.unwrap_or(DEFAULT_BAND_LIMIT);
    let flat = fa_band.spread() <= limit && transform_band.spread() <= limit && w_class == Membership::Member;
    let verdict = if flat { "flat" } else { "not-flat" };
    let outcome = s.expect.band.map(|_| if flat { Outcome::Pass } else { Outcome::Fail });

    let mut csv = String::from(crate::sweep::CSV_HEADER);
    csv.push('\n');
    for (&j, &n) in levels.iter().zip(&norms) {
        let _ = writeln!(csv, "{j},{:.12e},{:.12e},nan,nan,{:.12e},nan", SweepGrid::radius(j), 0.0, n);
    }
    let numbers = vec![
        ("gamma".into(), num(ctx.gamma())),
        ("fa_norm_band".into(), band_str(Some(fa_band))),
        ("fa_norm_spread".into(), num(fa_band.spread())),
        ("transform_class".into(), w_class.to_string()),
        ("transform_band".into(), band_str(Some(transform_band))),
        ("transform_spread".into(), num(transform_band.spread())),
    ];
    Ok(ScenarioOutput {
        summary: VerdictSummary {
            scenario: s.name.clone(),
            theorem: s.theorem,
            verdict: verdict.into(),
            numbers,
            outcome,
            error: None,
        },
        csv: Some(csv),
    })
}

/// Runs one scenario; errors and panics become a failed summary.
pub fn run_scenario(s: &Scenario) -> ScenarioOutput {
    let result = catch_unwind(AssertUnwindSafe(|| match s.theorem {
        Theorem::EmbeddingBounded | Theorem::EmbeddingCompact => embedding_pipeline(s),
        Theorem::OperatorBounded | Theorem::OperatorCompact => operator_pipeline(s),
        Theorem::ClassChecks => class_pipeline(s),
        Theorem::LemmaChecks => lemma_pipeline(s),
    }));
    match result {
        Ok(Ok(out)) => out,
        Ok(Err(e)) => ScenarioOutput {
            summary: VerdictSummary::failed(s, e.to_string()),
            csv: None,
        },
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|m| m.to_string()))
                .unwrap_or_else(|| "panic".into());
            ScenarioOutput {
                summary: VerdictSummary::failed(s, format!("internal error: {msg}")),
                csv: None,
            }
        }
    }
}

/// 0 when every declared expectation passes, 1 on any failure, 2 on any
/// inconclusive verdict.
pub fn exit_code(summaries: &[VerdictSummary]) -> i32 {
    match summaries.iter().filter_map(|s| s.outcome).fold(Outcome::Pass, Outcome::and) {
        Outcome::Pass => 0,
        Outcome::Fail => 1,
        Outcome::Inconclusive => 2,
    }
}

/// Runs all scenarios in parallel and writes `<name>.csv` per sweep plus
/// `summary.txt` into `out_dir`.
pub fn run_config(cfg: &ConfigFile, out_dir: &Path) -> Result<Vec<VerdictSummary>> {
    fs::create_dir_all(out_dir)?;
    let outputs: Vec<ScenarioOutput> = cfg.scenarios.par_iter().map(run_scenario).collect();
    let mut summary = String::new();
    for (s, out) in cfg.scenarios.iter().zip(&outputs) {
        let csv_path = out_dir.join(format!("{}.csv", s.name));
        match &out.csv {
            Some(csv) => fs::write(&csv_path, csv)?,
            None if csv_path.exists() => fs::remove_file(&csv_path)?,
            None => {}
        }
        summary.push_str(&out.summary.to_line());
        summary.push('\n');
    }
    fs::write(out_dir.join("summary.txt"), summary)?;
    Ok(outputs.into_iter().map(|o| o.summary).collect())
}

/// Loads and runs a config file. The output directory is `out` if given,
/// else the file's `output_dir`, else `<config stem>-out` beside it.
pub fn run_path(path: &Path, out: Option<&Path>) -> Result<(Vec<VerdictSummary>, std::path::PathBuf)> {
    let cfg = ConfigFile::load(path)?;
    let dir = match (out, &cfg.output_dir) {
        (Some(o), _) => o.to_path_buf(),
        (None, Some(d)) => d.clone(),
        (None, None) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("bzcheck");
            path.with_file_name(format!("{stem}-out"))
        }
    };
    Ok((run_config(&cfg, &dir)?, dir))
}

/// A shipped scenario file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub config: &'static str,
}

impl CatalogEntry {
    pub fn parse(&self) -> Result<ConfigFile> {
        parse_config(self.config, Path::new("."))
    }
}

pub const CATALOG: [CatalogEntry; 8] = [
    CatalogEntry {
        name: "identity",
        description: "mu = omega dA, Phi = Psi, p = q: characteristic identically 1",
        config: include_str!("../scenarios/identity.conf"),
    },
    CatalogEntry {
        name: "power-family",
        description: "24 power weights and measures against the exponent criterion",
        config: include_str!("../scenarios/power-family.conf"),
    },
    CatalogEntry {
        name: "zygmund-boundary",
        description: "log-power scales on the critical power line",
        config: include_str!("../scenarios/zygmund-boundary.conf"),
    },
    CatalogEntry {
        name: "atom",
        description: "point masses: bounded and vanishing",
        config: include_str!("../scenarios/atom.conf"),
    },
    CatalogEntry {
        name: "sector",
        description: "area measures restricted to angular sectors",
        config: include_str!("../scenarios/sector.conf"),
    },
    CatalogEntry {
        name: "bloch-tg",
        description: "T_g with p = q and equal weights: Bloch and little Bloch symbols",
        config: include_str!("../scenarios/bloch-tg.conf"),
    },
    CatalogEntry {
        name: "lacunary-tg",
        description: "T_g with a lacunary symbol: bounded but not compact",
        config: include_str!("../scenarios/lacunary-tg.conf"),
    },
    CatalogEntry {
        name: "weight-class-zoo",
        description: "doubling and class-L diagnostics on members and non-members",
        config: include_str!("../scenarios/weight-class-zoo.conf"),
    },
];

/// Entries whose name contains `filter`; all entries for `None`.
pub fn catalog(filter: Option<&str>) -> Vec<CatalogEntry> {
    CATALOG
        .iter()
        .filter(|e| filter.is_none_or(|f| e.name.contains(f)))
        .copied()
        .collect()
}

/// `weight-check` report lines and verdict.
pub fn weight_check(spec: &str) -> Result<(Membership, Vec<(String, String)>)> {
    let w = parse_weight(spec, Path::new(".")).map_err(|m| Error::parse(0, m))?;
    weight_class(&w)
}

/// `scale-check` report lines and verdict.
pub fn scale_check(spec: &str) -> Result<(Membership, Vec<(String, String)>)> {
    let psi = parse_scale(spec, Path::new(".")).map_err(|m| Error::parse(0, m))?;
    scale_class(&psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> ConfigFile {
        parse_config(text, Path::new(".")).unwrap()
    }

    #[test]
    fn catalog_filters() {
        assert_eq!(catalog(None).len(), 8);
        let tg: Vec<&str> = catalog(Some("tg")).iter().map(|e| e.name).collect();
        assert_eq!(tg, vec!["bloch-tg", "lacunary-tg"]);
        assert!(catalog(Some("no-such-entry")).is_empty());
        for e in CATALOG {
            e.parse().unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }

    #[test]
    fn identity_passes() {
        let cfg = parse(
            "[scenario.identity]\nweight = power alpha=1\np = 2\nlevels = 10\ntest_functions = false\n\
             expect.bounded = true\nexpect.vanishing = false\nexpect.sup = 1 tol = 0.001\n",
        );
        let out = run_scenario(&cfg.scenarios[0]);
        assert_eq!(out.summary.outcome, Some(Outcome::Pass), "{}", out.summary.to_line());
        assert_eq!(out.summary.verdict, "bounded");
        assert!(out.csv.unwrap().starts_with(crate::sweep::CSV_HEADER));
    }

    #[test]
    fn no_expectation_means_no_result_field() {
        let cfg = parse("[scenario.a]\nweight = power alpha=0\np = 1\nlevels = 8\ntest_functions = false\n");
        let out = run_scenario(&cfg.scenarios[0]);
        assert_eq!(out.summary.outcome, None);
        assert!(!out.summary.to_line().contains("result="));
        assert_eq!(exit_code(&[out.summary]), 0);
    }

    #[test]
    fn failures_are_isolated() {
        // The loginvsq weight is rejected by the context; the sibling runs.
        let cfg = parse(
            "[scenario.bad]\nweight = loginvsq\np = 2\nlevels = 8\n\
             [scenario.good]\nweight = power alpha=0\np = 2\nlevels = 8\ntest_functions = false\nexpect.bounded = true\n",
        );
        let dir = tempfile::tempdir().unwrap();
        let s = run_config(&cfg, dir.path()).unwrap();
        assert_eq!(s[0].outcome, Some(Outcome::Fail));
        assert!(s[0].error.is_some());
        assert_eq!(s[1].outcome, Some(Outcome::Pass));
        assert_eq!(exit_code(&s), 1);
        assert!(dir.path().join("good.csv").exists());
        assert!(!dir.path().join("bad.csv").exists());
    }

    #[test]
    fn exit_code_ordering() {
        let mk = |o| VerdictSummary {
            scenario: "x".into(),
            theorem: Theorem::ClassChecks,
            verdict: "member".into(),
            numbers: vec![],
            outcome: o,
            error: None,
        };
        assert_eq!(exit_code(&[mk(Some(Outcome::Pass)), mk(None)]), 0);
        assert_eq!(exit_code(&[mk(Some(Outcome::Inconclusive)), mk(Some(Outcome::Pass))]), 2);
        assert_eq!(exit_code(&[mk(Some(Outcome::Inconclusive)), mk(Some(Outcome::Fail))]), 1);
    }

    #[test]
    fn class_checks_report() {
        let (v, n) = scale_check("logpow beta=1").unwrap();
        assert_eq!(v, Membership::Member);
        assert!(n.iter().any(|(k, _)| k == "envelope_exponent"));
        let (v, _) = weight_check("power alpha=1").unwrap();
        assert_eq!(v, Membership::Member);
        assert!(weight_check("power").is_err());
    }

    #[test]
    fn random_corpus_is_seeded() {
        let mut a = StdRng::seed_from_u64(3);
        let mut b = StdRng::seed_from_u64(3);
        assert_eq!(random_polynomial(&mut a, 5), random_polynomial(&mut b, 5));
    }
}
