//! Scenario files: line-oriented `key = value` pairs grouped under
//! `[scenario.<name>]` headers. `#` starts a comment. Keys before the first
//! header are global (`output_dir`, `seed`).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Sector;
use crate::measures::{AreaComponent, Atom, DiscMeasure};
use crate::operators::Symbol;
use crate::scale::ScaleFunction;
use crate::sweep::ANGULAR_CAP;
use crate::weights::{log_inv_square_regularized, RadialWeight};

pub const DEFAULT_LEVELS: u32 = 14;

/// Whitespace-separated two-column numeric table; `#` starts a comment.
pub fn parse_two_columns(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 2 {
            return Err(Error::parse(i + 1, "expected two columns"));
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|_| Error::parse(i + 1, format!("not a number: {s}")));
        rows.push((parse(cols[0])?, parse(cols[1])?));
    }
    Ok(rows)
}

/// Which result a scenario exercises; the tokens are the report labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    EmbeddingBounded,
    EmbeddingCompact,
    OperatorBounded,
    OperatorCompact,
    ClassChecks,
    LemmaChecks,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::EmbeddingBounded,
        Theorem::EmbeddingCompact,
        Theorem::OperatorBounded,
        Theorem::OperatorCompact,
        Theorem::ClassChecks,
        Theorem::LemmaChecks,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Theorem::EmbeddingBounded => "T1.1-bounded",
            Theorem::EmbeddingCompact => "T1.1-compact",
            Theorem::OperatorBounded => "T1.3-bounded",
            Theorem::OperatorCompact => "T1.3-compact",
            Theorem::ClassChecks => "class-checks",
            Theorem::LemmaChecks => "lemma-checks",
        }
    }

    pub fn is_operator(self) -> bool {
        matches!(self, Theorem::OperatorBounded | Theorem::OperatorCompact)
    }

    pub fn is_embedding(self) -> bool {
        matches!(self, Theorem::EmbeddingBounded | Theorem::EmbeddingCompact)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Unresolved function: test functions need the active `(ω, Ψ, p)` and
/// random corpora need the seed.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Poly(Vec<Complex64>),
    TestFn { a: Complex64, gamma: Option<f64> },
    Random { count: usize, degree: usize },
}

/// `value tol = width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub value: f64,
    pub tol: f64,
}

impl Target {
    pub fn accepts(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.tol
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Expectations {
    pub bounded: Option<bool>,
    pub vanishing: Option<bool>,
    pub slope: Option<Target>,
    pub sup: Option<Target>,
    pub member: Option<bool>,
    /// Upper limit on a max/min band.
    pub band: Option<f64>,
}

impl Expectations {
    pub fn is_empty(&self) -> bool {
        *self == Expectations::default()
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    /// Line of the section header.
    pub line: usize,
    pub theorem: Theorem,
    pub weight: Option<RadialWeight>,
    pub scale: ScaleFunction,
    pub target_scale: Option<ScaleFunction>,
    pub target_weight: Option<RadialWeight>,
    pub area: Vec<AreaComponent>,
    pub atoms: Vec<Atom>,
    pub functions: Vec<FunctionSpec>,
    pub symbol: Option<Symbol>,
    pub p: f64,
    pub q: f64,
    pub levels: u32,
    pub angular_cap: usize,
    pub disc_radius: Option<f64>,
    pub gamma: Option<f64>,
    pub test_functions: bool,
    pub seed: u64,
    pub expect: Expectations,
    /// Set when the scale was given explicitly; class checks skip it otherwise.
    pub scale_given: bool,
}

impl Scenario {
    /// `μ`, defaulting to `ω dA` when no component is declared.
    pub fn measure(&self) -> Result<DiscMeasure> {
        if self.area.is_empty() && self.atoms.is_empty() {
            let w = self.weight.as_ref().ok_or_else(|| Error::Parameter("no weight for the default measure".into()))?;
            return Ok(DiscMeasure::weighted_area(w));
        }
        DiscMeasure::new(self.area.clone(), self.atoms.clone())
    }

    pub fn phi(&self) -> &ScaleFunction {
        self.target_scale.as_ref().unwrap_or(&self.scale)
    }

    pub fn nu(&self) -> Option<&RadialWeight> {
        self.target_weight.as_ref().or(self.weight.as_ref())
    }
}

#[derive(Debug, Clone)]
pub struct ConfigFile {
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
    pub scenarios: Vec<Scenario>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        parse_config(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

/// `kind k1=v1 k2=v2 ...`.
fn split_spec(value: &str) -> std::result::Result<(String, BTreeMap<String, String>), String> {
    let mut tokens = value.split_whitespace();
    let kind = tokens.next().ok_or("empty specification")?.to_string();
    let mut params = BTreeMap::new();
    for tok in tokens {
        let (k, v) = tok.split_once('=').ok_or_else(|| format!("expected key=value, got '{tok}'"))?;
        if params.insert(k.to_string(), v.to_string()).is_some() {
            return Err(format!("duplicate parameter '{k}'"));
        }
    }
    Ok((kind, params))
}

struct Params {
    kind: String,
    map: BTreeMap<String, String>,
}

impl Params {
    fn new(value: &str) -> std::result::Result<Self, String> {
        let (kind, map) = split_spec(value)?;
        Ok(Self { kind, map })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn number(&mut self, key: &str) -> std::result::Result<f64, String> {
        let v = self.take(key).ok_or_else(|| format!("{} needs {key}=", self.kind))?;
        parse_number(&v)
    }

    fn number_or(&mut self, key: &str, default: f64) -> std::result::Result<f64, String> {
        match self.take(key) {
            Some(v) => parse_number(&v),
            None => Ok(default),
        }
    }

    fn finish(self) -> std::result::Result<(), String> {
        match self.map.keys().next() {
            Some(k) => Err(format!("unknown parameter '{k}' for {}", self.kind)),
            None => Ok(()),
        }
    }
}

fn parse_number(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: '{s}'"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not finite: '{s}'"))
    }
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(parse_number).collect()
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("expected true or false, got '{other}'")),
    }
}

fn parse_coeffs(p: &mut Params) -> std::result::Result<Vec<Complex64>, String> {
    let re = parse_list(&p.take("coeffs").ok_or("poly needs coeffs=")?)?;
    let im = match p.take("coeffs_im") {
        Some(s) => parse_list(&s)?,
        None => vec![0.0; re.len()],
    };
    if im.len() != re.len() {
        return Err(format!("coeffs has {} entries but coeffs_im has {}", re.len(), im.len()));
    }
    Ok(re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect())
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let path = Path::new(p);
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

fn lib_err(e: Error) -> String {
    e.to_string()
}

/// `power alpha=<f>` | `loginvsq` | `loginvsq-regularized` | `table path=<file>`.
pub fn parse_weight(value: &str, base: &Path) -> std::result::Result<RadialWeight, String> {
    let mut p = Params::new(value)?;
    let w = match p.kind.as_str() {
        "power" => RadialWeight::power(p.number("alpha")?).map_err(lib_err)?,
        "loginvsq" => RadialWeight::log_inv_square(),
        "loginvsq-regularized" => log_inv_square_regularized(),
        "table" => {
            let path = p.take("path").ok_or("table needs path=")?;
            RadialWeight::from_table_file(&resolve(base, &path)).map_err(lib_err)?
        }
        other => return Err(format!("unknown weight kind '{other}'")),
    };
    p.finish()?;
    Ok(w)
}

/// `const c=<f>` | `logpow beta=<f>` | `table path=<file>`.
pub fn parse_scale(value: &str, base: &Path) -> std::result::Result<ScaleFunction, String> {
    let mut p = Params::new(value)?;
    let s = match p.kind.as_str() {
        "const" => ScaleFunction::constant(p.number_or("c", 1.0)?).map_err(lib_err)?,
        "logpow" => ScaleFunction::log_power(p.number("beta")?),
        "table" => {
            let path = p.take("path").ok_or("table needs path=")?;
            ScaleFunction::from_table_file(&resolve(base, &path)).map_err(lib_err)?
        }
        other => return Err(format!("unknown scale kind '{other}'")),
    };
    p.finish()?;
    Ok(s)
}

pub enum Component {
    Area(AreaComponent),
    Atom(Atom),
}

/// `area weight=<weight-spec> [sector=θ1,θ2] [factor=<f>]` | `atom re= im= mass=`.
///
/// The nested weight spec is written with `:` in place of spaces, e.g.
/// `weight=power:alpha=1`.
pub fn parse_component(value: &str, base: &Path) -> std::result::Result<Component, String> {
    let mut p = Params::new(value)?;
    let c = match p.kind.as_str() {
        "area" => {
            let w = p.take("weight").ok_or("area needs weight=")?;
            let weight = parse_nested_weight(&w, &mut p, base)?;
            let sector = match p.take("sector") {
                Some(s) => {
                    let v = parse_list(&s)?;
                    if v.len() != 2 {
                        return Err("sector needs two angles".into());
                    }
                    Some(Sector::between(v[0], v[1]))
                }
                None => None,
            };
            let factor = p.number_or("factor", 1.0)?;
            Component::Area(AreaComponent { weight, sector, factor })
        }
        "atom" => {
            let z = Complex64::new(p.number("re")?, p.number_or("im", 0.0)?);
            let mass = p.number("mass")?;
            if !(z.norm() < 1.0) || !(mass > 0.0) {
                return Err(format!("atom needs |z| < 1 and mass > 0, got z = {z}, mass = {mass}"));
            }
            Component::Atom(Atom { z, mass })
        }
        other => return Err(format!("unknown measure component '{other}'")),
    };
    p.finish()?;
    Ok(c)
}

/// `weight=power` with a following `alpha=` also works, as does
/// `weight=power:alpha=1`.
fn parse_nested_weight(w: &str, p: &mut Params, base: &Path) -> std::result::Result<RadialWeight, String> {
    if w.contains(':') {
        return parse_weight(&w.replace(':', " "), base);
    }
    let mut spec = w.to_string();
    for key in ["alpha", "path"] {
        if let Some(v) = p.take(key) {
            spec.push_str(&format!(" {key}={v}"));
        }
    }
    parse_weight(&spec, base)
}

/// `poly coeffs=<c0,c1,...> [coeffs_im=...]` | `testfn a_re= a_im= [gamma=]` |
/// `random count=<n> degree=<d>`.
pub fn parse_function(value: &str) -> std::result::Result<FunctionSpec, String> {
    let mut p = Params::new(value)?;
    let f = match p.kind.as_str() {
        "poly" => FunctionSpec::Poly(parse_coeffs(&mut p)?),
        "testfn" => {
            let a = Complex64::new(p.number("a_re")?, p.number_or("a_im", 0.0)?);
            if !(a.norm() < 1.0) {
                return Err(format!("testfn needs |a| < 1, got {a}"));
            }
            let gamma = match p.take("gamma") {
                Some(g) => Some(parse_number(&g)?),
                None => None,
            };
            FunctionSpec::TestFn { a, gamma }
        }
        "random" => {
            let count = p.number("count")?;
            let degree = p.number("degree")?;
            if count < 1.0 || count.fract() != 0.0 || degree < 0.0 || degree.fract() != 0.0 {
                return Err("random needs a positive integer count and a nonnegative integer degree".into());
            }
            FunctionSpec::Random {
                count: count as usize,
                degree: degree as usize,
            }
        }
        other => return Err(format!("unknown function kind '{other}'")),
    };
    p.finish()?;
    Ok(f)
}

/// `poly coeffs=...` | `logsym` | `cauchy` | `lacunary K=<n>`.
pub fn parse_symbol(value: &str) -> std::result::Result<Symbol, String> {
    let mut p = Params::new(value)?;
    let g = match p.kind.as_str() {
        "poly" => Symbol::Polynomial(parse_coeffs(&mut p)?),
        "logsym" => Symbol::LogSym,
        "cauchy" => Symbol::Cauchy,
        "lacunary" => {
            let k = p.number("K")?;
            if k < 0.0 || k.fract() != 0.0 {
                return Err(format!("lacunary K must be a nonnegative integer, got {k}"));
            }
            Symbol::lacunary(k as u32).map_err(lib_err)?
        }
        other => return Err(format!("unknown symbol '{other}'")),
    };
    p.finish()?;
    Ok(g)
}

/// `x tol = y`.
fn parse_target(value: &str) -> std::result::Result<Target, String> {
    let (v, rest) = match value.split_once("tol") {
        Some((v, rest)) => (v, Some(rest)),
        None => (value, None),
    };
    let value = parse_number(v)?;
    let tol = match rest {
        Some(r) => {
            let r = r.trim().strip_prefix('=').ok_or("expected 'tol = <value>'")?;
            parse_number(r)?
        }
        None => 0.0,
    };
    if tol < 0.0 {
        return Err("tolerance must be nonnegative".into());
    }
    Ok(Target { value, tol })
}

#[derive(Default)]
struct Draft {
    name: String,
    line: usize,
    theorem: Option<Theorem>,
    weight: Option<RadialWeight>,
    scale: Option<ScaleFunction>,
    target_scale: Option<ScaleFunction>,
    target_weight: Option<RadialWeight>,
    area: Vec<AreaComponent>,
    atoms: Vec<Atom>,
    functions: Vec<FunctionSpec>,
    symbol: Option<Symbol>,
    p: Option<f64>,
    q: Option<f64>,
    levels: Option<u32>,
    angular_cap: Option<usize>,
    disc_radius: Option<f64>,
    gamma: Option<f64>,
    test_functions: Option<bool>,
    seed: Option<u64>,
    expect: Expectations,
}

impl Draft {
    fn set(&mut self, key: &str, value: &str, base: &Path) -> std::result::Result<(), String> {
        fn once<T>(slot: &mut Option<T>, key: &str, v: T) -> std::result::Result<(), String> {
            if slot.is_some() {
                return Err(format!("duplicate key '{key}'"));
            }
            *slot = Some(v);
            Ok(())
        }
        match key {
            "theorem" => {
                let t = Theorem::ALL
                    .into_iter()
                    .find(|t| t.token() == value)
                    .ok_or_else(|| format!("unknown theorem '{value}'"))?;
                once(&mut self.theorem, key, t)
            }
            "weight" => once(&mut self.weight, key, parse_weight(value, base)?),
            "scale" => once(&mut self.scale, key, parse_scale(value, base)?),
            "target_scale" => once(&mut self.target_scale, key, parse_scale(value, base)?),
            "target_weight" => once(&mut self.target_weight, key, parse_weight(value, base)?),
            "measure.component" => {
                match parse_component(value, base)? {
                    Component::Area(a) => self.area.push(a),
                    Component::Atom(a) => self.atoms.push(a),
                }
                Ok(())
            }
            "function" => {
                self.functions.push(parse_function(value)?);
                Ok(())
            }
            "g" => once(&mut self.symbol, key, parse_symbol(value)?),
            "p" => once(&mut self.p, key, parse_number(value)?),
            "q" => once(&mut self.q, key, parse_number(value)?),
            "levels" => once(&mut self.levels, key, parse_int(value)? as u32),
            "angular_cap" => once(&mut self.angular_cap, key, parse_int(value)? as usize),
            "disc_radius" => once(&mut self.disc_radius, key, parse_number(value)?),
            "gamma" => once(&mut self.gamma, key, parse_number(value)?),
            "test_functions" => once(&mut self.test_functions, key, parse_bool(value)?),
            "seed" => once(&mut self.seed, key, parse_int(value)?),
            "expect.bounded" => once(&mut self.expect.bounded, key, parse_bool(value)?),
            "expect.vanishing" => once(&mut self.expect.vanishing, key, parse_bool(value)?),
            "expect.member" => once(&mut self.expect.member, key, parse_bool(value)?),
            "expect.slope" => once(&mut self.expect.slope, key, parse_target(value)?),
            "expect.sup" => once(&mut self.expect.sup, key, parse_target(value)?),
            "expect.band" => once(&mut self.expect.band, key, parse_number(value)?),
            other => Err(format!("unknown key '{other}'")),
        }
    }

    fn finish(self, global_seed: u64) -> std::result::Result<Scenario, String> {
        let theorem = self.theorem.unwrap_or(match (&self.symbol, self.expect.vanishing.is_some() && self.expect.bounded.is_none()) {
            (Some(_), false) => Theorem::OperatorBounded,
            (Some(_), true) => Theorem::OperatorCompact,
            (None, false) => Theorem::EmbeddingBounded,
            (None, true) => Theorem::EmbeddingCompact,
        });
        let needs_p = theorem != Theorem::ClassChecks;
        let p = match self.p {
            Some(p) => p,
            None if needs_p => return Err("missing required key 'p'".into()),
            None => 1.0,
        };
        let q = self.q.unwrap_or(p);
        if !(p > 0.0 && q > 0.0) {
            return Err(format!("exponents must be positive, got p = {p}, q = {q}"));
        }
        if p > q {
            return Err(format!("p = {p} exceeds q = {q}"));
        }
        if needs_p && self.weight.is_none() {
            return Err("missing required key 'weight'".into());
        }
        if theorem == Theorem::ClassChecks && self.weight.is_none() && self.scale.is_none() {
            return Err("class checks need a weight or a scale".into());
        }
        if theorem.is_operator() && self.symbol.is_none() {
            return Err("operator scenarios need a symbol 'g'".into());
        }
        if !theorem.is_operator() && self.symbol.is_some() {
            return Err(format!("symbol 'g' is not used by {theorem}"));
        }
        if theorem.is_operator() && !(self.area.is_empty() && self.atoms.is_empty()) {
            return Err("operator scenarios take target_weight, not measure components".into());
        }
        let levels = self.levels.unwrap_or(DEFAULT_LEVELS);
        if !(8..=52).contains(&levels) {
            return Err(format!("levels must lie in 8..=52, got {levels}"));
        }
        let angular_cap = self.angular_cap.unwrap_or(ANGULAR_CAP);
        if angular_cap == 0 {
            return Err("angular_cap must be positive".into());
        }
        if let Some(r) = self.disc_radius {
            if !(r > 0.0 && r < 1.0) {
                return Err(format!("disc_radius must lie in (0, 1), got {r}"));
            }
        }
        if let Some(g) = self.gamma {
            if !(g > 0.0) {
                return Err(format!("gamma must be positive, got {g}"));
            }
        }
        let scale_given = self.scale.is_some();
        Ok(Scenario {
            name: self.name,
            line: self.line,
            theorem,
            weight: self.weight,
            scale: self.scale.unwrap_or_else(ScaleFunction::one),
            target_scale: self.target_scale,
            target_weight: self.target_weight,
            area: self.area,
            atoms: self.atoms,
            functions: self.functions,
            symbol: self.symbol,
            p,
            q,
            levels,
            angular_cap,
            disc_radius: self.disc_radius,
            gamma: self.gamma,
            test_functions: self.test_functions.unwrap_or(true),
            seed: self.seed.unwrap_or(global_seed),
            expect: self.expect,
            scale_given,
        })
    }
}

fn parse_int(s: &str) -> std::result::Result<u64, String> {
    s.trim().parse().map_err(|_| format!("not a nonnegative integer: '{s}'"))
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) && !name.starts_with('.')
}

/// Parses a whole file. Table paths resolve against `base`.
pub fn parse_config(text: &str, base: &Path) -> Result<ConfigFile> {
    let mut output_dir = None;
    let mut seed = 0u64;
    let mut drafts: Vec<Draft> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('[') {
            let h = h.strip_suffix(']').ok_or_else(|| Error::parse(line_no, "unterminated section header"))?;
            let name = h
                .trim()
                .strip_prefix("scenario.")
                .ok_or_else(|| Error::parse(line_no, format!("expected [scenario.<name>], got [{h}]")))?;
            if !valid_name(name) {
                return Err(Error::parse(line_no, format!("invalid scenario name '{name}'")));
            }
            if drafts.iter().any(|d| d.name == name) {
                return Err(Error::parse(line_no, format!("duplicate scenario '{name}'")));
            }
            drafts.push(Draft {
                name: name.to_string(),
                line: line_no,
                ..Draft::default()
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("expected 'key = value', got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        match drafts.last_mut() {
            Some(d) => d.set(key, value, base).map_err(|m| Error::parse(line_no, m))?,
            None => match key {
                "output_dir" => output_dir = Some(resolve(base, value)),
                "seed" => seed = parse_int(value).map_err(|m| Error::parse(line_no, m))?,
                other => return Err(Error::parse(line_no, format!("unknown global key '{other}'"))),
            },
        }
    }
    if drafts.is_empty() {
        return Err(Error::parse(0, "no scenarios"));
    }
    let scenarios = drafts
        .into_iter()
        .map(|d| {
            let line = d.line;
            let name = d.name.clone();
            d.finish(seed).map_err(|m| Error::parse(line, format!("scenario '{name}': {m}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConfigFile {
        output_dir,
        seed,
        scenarios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ConfigFile> {
        parse_config(text, Path::new("."))
    }

    #[test]
    fn identity_scenario() {
        let cfg = parse(
            "seed = 7\n[scenario.identity]\nweight = power alpha=1\np = 2\nexpect.bounded = true\nexpect.sup = 1.0 tol = 0.01\n",
        )
        .unwrap();
        let s = &cfg.scenarios[0];
        assert_eq!(s.name, "identity");
        assert_eq!(s.theorem, Theorem::EmbeddingBounded);
        assert_eq!((s.p, s.q, s.levels, s.seed), (2.0, 2.0, DEFAULT_LEVELS, 7));
        assert_eq!(s.expect.sup, Some(Target { value: 1.0, tol: 0.01 }));
        assert!(s.measure().unwrap().is_rotation_invariant());
    }

    #[test]
    fn missing_p_reports_header_line() {
        let err = parse("# comment\n[scenario.a]\nweight = power alpha=0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, ref message } if message.contains("'p'")), "{err}");
    }

    #[test]
    fn p_above_q_is_rejected() {
        assert!(parse("[scenario.a]\nweight = power alpha=0\np = 2\nq = 1\n").is_err());
    }

    #[test]
    fn bad_value_reports_its_line() {
        let err = parse("[scenario.a]\nweight = power alpha=0\np = 2\nscale = logpow beta=x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = parse("[scenario.a]\nweight = power gamma=1\np = 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn measure_components() {
        let cfg = parse(
            "[scenario.m]\nweight = power alpha=0\np = 1\nq = 2\n\
             measure.component = area weight=power alpha=2 sector=0,1.5 factor=3\n\
             measure.component = atom re=0.5 im=-0.25 mass=2\n\
             measure.component = area weight=power:alpha=1\n",
        )
        .unwrap();
        let s = &cfg.scenarios[0];
        assert_eq!(s.area.len(), 2);
        assert_eq!(s.area[0].factor, 3.0);
        assert_eq!(s.area[0].sector, Some(Sector::between(0.0, 1.5)));
        assert_eq!(s.atoms, vec![Atom { z: Complex64::new(0.5, -0.25), mass: 2.0 }]);
        assert!(!s.measure().unwrap().is_rotation_invariant());
    }

    #[test]
    fn operator_scenarios_infer_theorem() {
        let cfg = parse(
            "[scenario.a]\nweight = power alpha=1\np = 2\ng = lacunary K=3\nexpect.vanishing = true\n\
             [scenario.b]\nweight = power alpha=1\np = 2\ng = poly coeffs=0,1 coeffs_im=0,2\n",
        )
        .unwrap();
        assert_eq!(cfg.scenarios[0].theorem, Theorem::OperatorCompact);
        assert_eq!(cfg.scenarios[0].symbol, Some(Symbol::Lacunary(3)));
        assert_eq!(cfg.scenarios[1].theorem, Theorem::OperatorBounded);
        assert_eq!(
            cfg.scenarios[1].symbol,
            Some(Symbol::Polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 2.0)]))
        );
    }

    #[test]
    fn class_checks_need_no_exponent() {
        let cfg = parse("[scenario.z]\ntheorem = class-checks\nscale = logpow beta=-1\nexpect.member = true\n").unwrap();
        assert_eq!(cfg.scenarios[0].theorem, Theorem::ClassChecks);
        assert!(cfg.scenarios[0].scale_given);
        assert!(cfg.scenarios[0].weight.is_none());
    }

    #[test]
    fn functions_and_duplicates() {
        let cfg = parse(
            "[scenario.f]\nweight = power alpha=0\np = 2\nfunction = testfn a_re=0.5 a_im=0\nfunction = random count=3 degree=4\n",
        )
        .unwrap();
        assert_eq!(
            cfg.scenarios[0].functions,
            vec![
                FunctionSpec::TestFn { a: Complex64::new(0.5, 0.0), gamma: None },
                FunctionSpec::Random { count: 3, degree: 4 }
            ]
        );
        assert!(parse("[scenario.f]\nweight = power alpha=0\np = 2\np = 3\n").is_err());
        assert!(parse("[scenario.f]\np = 1\nweight = power alpha=0\n[scenario.f]\np = 1\nweight = power alpha=0\n").is_err());
        assert!(parse("[scenario.bad name]\n").is_err());
        assert!(parse("seed = 1\n").is_err());
    }

    #[test]
    fn table_paths_resolve_against_base() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("w.txt"), "0 1\n0.5 1\n0.9 1\n0.99 1\n").unwrap();
        let cfg = parse_config("[scenario.t]\nweight = table path=w.txt\np = 1\n", dir.path()).unwrap();
        let w = cfg.scenarios[0].weight.as_ref().unwrap();
        assert!((w.density(0.7) - 1.0).abs() < 1e-12);
    }
}
