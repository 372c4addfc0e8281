//! Experiment config: TOML with `[problem]`, `[run]`, `[sweep]` and `[ode]`
//! sections. Unknown keys are rejected and every error carries the line it
//! refers to.
//!
//! ```toml
//! [problem]
//! kind = "affine"        # zero | affine | saddle | skew2d | file
//! dim = 50
//! seed = 1
//! skew_fraction = 0.8
//!
//! [run]
//! methods = ["bforb", "brfob"]
//! lambda_fraction = 0.9  # or: lambda = 0.01
//! max_iters = 50000
//! tol = 1e-10
//! certify = true
//!
//! [sweep]
//! fractions = [0.5, 0.9]
//!
//! [ode]
//! flow = "dr"            # dr | ppa
//! lambda = 0.1
//! h_ode = 0.01
//! horizon = 200.0
//! ```

use std::fmt;
use std::ops::Range;
use std::path::PathBuf;

use serde::Deserialize;
use toml::Spanned;

use crate::solvers::Method;

/// A config problem with the line it was found on.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    Zero { dim: usize },
    Affine { dim: usize, seed: u64, skew_fraction: f64 },
    Saddle { m: usize, n: usize, seed: u64, alpha: f64, radius: f64 },
    /// 90° rotation `B` on `R²` with `A = C = 0`; forward-backward diverges on it.
    Skew2d,
    File { path: PathBuf },
}

impl ProblemSpec {
    /// Replaces the seed of generated instances.
    pub fn with_seed(mut self, new: u64) -> Self {
        match &mut self {
            ProblemSpec::Affine { seed, .. } | ProblemSpec::Saddle { seed, .. } => *seed = new,
            _ => {}
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaPolicy {
    Absolute(f64),
    /// Fraction of the method's guaranteed stepsize bound.
    Fraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaPolicy {
    Absolute(f64),
    /// `γ = ratio·λ`.
    Ratio(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub methods: Vec<Method>,
    pub lambda: LambdaPolicy,
    /// Required when `methods` contains FRDR.
    pub gamma: Option<GammaPolicy>,
    /// Relaxation for FoRB and RFoB; other methods ignore it.
    pub relaxation: Option<f64>,
    pub max_iters: usize,
    pub tol: f64,
    /// Every entry of `z_0`.
    pub z0: f64,
    pub certify: bool,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepGrid {
    Fractions(Vec<f64>),
    Values(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowKind {
    ProximalPoint,
    DouglasRachford,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSpec {
    pub flow: FlowKind,
    pub lambda: f64,
    pub h_ode: f64,
    pub horizon: f64,
    pub inner_tol: f64,
    pub inner_max_iters: usize,
    pub z0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub run: Option<RunSpec>,
    pub sweep: Option<SweepGrid>,
    pub ode: Option<OdeSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: Spanned<RawProblem>,
    run: Option<Spanned<RawRun>>,
    sweep: Option<Spanned<RawSweep>>,
    ode: Option<Spanned<RawOde>>,
}

type Field<T> = Option<Spanned<T>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    kind: Spanned<String>,
    dim: Field<usize>,
    seed: Field<u64>,
    skew_fraction: Field<f64>,
    m: Field<usize>,
    n: Field<usize>,
    alpha: Field<f64>,
    radius: Field<f64>,
    path: Field<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    methods: Spanned<Vec<Spanned<String>>>,
    lambda: Field<f64>,
    lambda_fraction: Field<f64>,
    gamma: Field<f64>,
    gamma_ratio: Field<f64>,
    h: Field<f64>,
    max_iters: Field<usize>,
    tol: Field<f64>,
    z0: Field<f64>,
    certify: Field<bool>,
    out: Field<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    fractions: Field<Vec<f64>>,
    values: Field<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOde {
    flow: Field<String>,
    lambda: Spanned<f64>,
    h_ode: Spanned<f64>,
    horizon: Spanned<f64>,
    inner_tol: Field<f64>,
    inner_max_iters: Field<usize>,
    z0: Field<f64>,
}

struct Checker<'t> {
    text: &'t str,
    errors: Vec<ConfigError>,
}

impl Checker<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        self.text[..span.start.min(self.text.len())].matches('\n').count() + 1
    }

    fn err(&mut self, span: Range<usize>, message: impl Into<String>) {
        let line = Some(self.line(span));
        self.errors.push(ConfigError {
            line,
            message: message.into(),
        });
    }

    fn required<T: Clone>(&mut self, f: &Field<T>, key: &str, section: &Range<usize>) -> Option<T> {
        match f {
            Some(v) => Some(v.get_ref().clone()),
            None => {
                self.err(section.clone(), format!("missing required key `{key}`"));
                None
            }
        }
    }

    fn unused<T>(&mut self, f: &Field<T>, key: &str, kind: &str) {
        if let Some(v) = f {
            self.err(v.span(), format!("key `{key}` does not apply to problem kind `{kind}`"));
        }
    }

    fn positive(&mut self, f: &Field<f64>, key: &str) -> Option<f64> {
        let v = f.as_ref()?;
        let x = *v.get_ref();
        if !(x > 0.0 && x.is_finite()) {
            self.err(v.span(), format!("`{key}` must be positive, got {x}"));
            return None;
        }
        Some(x)
    }
}

/// Parses and validates a config; all detected problems are returned together.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigErrors> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        ConfigErrors(vec![ConfigError {
            line,
            message: e.message().trim().to_string(),
        }])
    })?;
    let mut c = Checker {
        text,
        errors: Vec::new(),
    };
    let problem = problem_spec(&mut c, &raw.problem);
    let run = raw.run.as_ref().and_then(|r| run_spec(&mut c, r));
    let sweep = raw.sweep.as_ref().and_then(|s| sweep_grid(&mut c, s));
    let ode = raw.ode.as_ref().and_then(|o| ode_spec(&mut c, o));
    if !c.errors.is_empty() {
        return Err(ConfigErrors(c.errors));
    }
    Ok(ExperimentConfig {
        problem: problem.expect("no errors"),
        run,
        sweep,
        ode,
    })
}

fn problem_spec(c: &mut Checker<'_>, p: &Spanned<RawProblem>) -> Option<ProblemSpec> {
    let span = p.span();
    let p = p.get_ref();
    let kind = p.kind.get_ref().as_str();
    let seed = p.seed.as_ref().map(|s| *s.get_ref()).unwrap_or(0);
    let spec = match kind {
        "zero" | "skew2d" | "file" | "affine" | "saddle" => {
            if !matches!(kind, "affine" | "zero") {
                c.unused(&p.dim, "dim", kind);
            }
            if !matches!(kind, "affine" | "saddle") {
                c.unused(&p.seed, "seed", kind);
            }
            if kind != "affine" {
                c.unused(&p.skew_fraction, "skew_fraction", kind);
            }
            if kind != "saddle" {
                c.unused(&p.m, "m", kind);
                c.unused(&p.n, "n", kind);
                c.unused(&p.alpha, "alpha", kind);
                c.unused(&p.radius, "radius", kind);
            }
            if kind != "file" {
                c.unused(&p.path, "path", kind);
            }
            match kind {
                "zero" => ProblemSpec::Zero {
                    dim: c.required(&p.dim, "dim", &span)?,
                },
                "skew2d" => ProblemSpec::Skew2d,
                "file" => ProblemSpec::File {
                    path: PathBuf::from(c.required(&p.path, "path", &span)?),
                },
                "affine" => {
                    let skew_fraction = p.skew_fraction.as_ref().map(|s| *s.get_ref()).unwrap_or(0.8);
                    if !(0.0..=1.0).contains(&skew_fraction) {
                        c.err(p.skew_fraction.as_ref().unwrap().span(), "`skew_fraction` must lie in [0, 1]");
                    }
                    ProblemSpec::Affine {
                        dim: c.required(&p.dim, "dim", &span)?,
                        seed,
                        skew_fraction,
                    }
                }
                _ => {
                    let alpha = p.alpha.as_ref().map(|s| *s.get_ref()).unwrap_or(0.5);
                    if !(alpha >= 0.0) {
                        c.err(p.alpha.as_ref().unwrap().span(), "`alpha` must be nonnegative");
                    }
                    ProblemSpec::Saddle {
                        m: c.required(&p.m, "m", &span)?,
                        n: c.required(&p.n, "n", &span)?,
                        seed,
                        alpha,
                        radius: c.positive(&p.radius, "radius").unwrap_or(1.0),
                    }
                }
            }
        }
        other => {
            c.err(
                p.kind.span(),
                format!("unknown problem kind `{other}` (expected zero, affine, saddle, skew2d or file)"),
            );
            return None;
        }
    };
    for (f, key) in [(&p.dim, "dim"), (&p.m, "m"), (&p.n, "n")] {
        if let Some(v) = f {
            if *v.get_ref() == 0 {
                c.err(v.span(), format!("`{key}` must be at least 1"));
            }
        }
    }
    Some(spec)
}

fn run_spec(c: &mut Checker<'_>, r: &Spanned<RawRun>) -> Option<RunSpec> {
    let span = r.span();
    let r = r.get_ref();
    let mut methods = Vec::new();
    for m in r.methods.get_ref() {
        match m.get_ref().parse::<Method>() {
            Ok(method) if methods.contains(&method) => c.err(m.span(), format!("method `{method}` listed twice")),
            Ok(method) => methods.push(method),
            Err(e) => c.err(m.span(), e.to_string()),
        }
    }
    if r.methods.get_ref().is_empty() {
        c.err(r.methods.span(), "`methods` must not be empty");
    }
    let lambda = match (&r.lambda, &r.lambda_fraction) {
        (Some(_), Some(f)) => {
            c.err(f.span(), "give either `lambda` or `lambda_fraction`, not both");
            None
        }
        (Some(_), None) => c.positive(&r.lambda, "lambda").map(LambdaPolicy::Absolute),
        (None, Some(_)) => c.positive(&r.lambda_fraction, "lambda_fraction").map(LambdaPolicy::Fraction),
        (None, None) => {
            c.err(span.clone(), "missing required key `lambda` or `lambda_fraction`");
            None
        }
    };
    let gamma = match (&r.gamma, &r.gamma_ratio) {
        (Some(_), Some(g)) => {
            c.err(g.span(), "give either `gamma` or `gamma_ratio`, not both");
            None
        }
        (Some(_), None) => c.positive(&r.gamma, "gamma").map(GammaPolicy::Absolute),
        (None, Some(_)) => c.positive(&r.gamma_ratio, "gamma_ratio").map(GammaPolicy::Ratio),
        (None, None) => None,
    };
    if methods.contains(&Method::Frdr) && r.gamma.is_none() && r.gamma_ratio.is_none() {
        c.err(r.methods.span(), "method `frdr` needs `gamma` (or `gamma_ratio`)");
    }
    if !methods.contains(&Method::Frdr) {
        for g in [&r.gamma, &r.gamma_ratio].into_iter().flatten() {
            c.err(g.span(), "`gamma` only applies to method `frdr`");
        }
    }
    let relaxation = r.h.as_ref().map(|h| *h.get_ref());
    if let Some(h) = &r.h {
        if !(*h.get_ref() > 0.0 && *h.get_ref() <= 1.0) {
            c.err(h.span(), "`h` must lie in (0, 1]");
        } else if !methods.iter().any(|m| m.accepts_relaxation()) {
            c.err(h.span(), "`h` only applies to methods `forb` and `rfob`");
        }
    }
    let max_iters = r.max_iters.as_ref().map(|v| *v.get_ref()).unwrap_or(10_000);
    if let Some(v) = &r.max_iters {
        if *v.get_ref() == 0 {
            c.err(v.span(), "`max_iters` must be positive");
        }
    }
    let tol = c.positive(&r.tol, "tol").unwrap_or(1e-10);
    let z0 = r.z0.as_ref().map(|v| *v.get_ref()).unwrap_or(0.0);
    if !z0.is_finite() {
        c.err(r.z0.as_ref().unwrap().span(), "`z0` must be finite");
    }
    Some(RunSpec {
        methods,
        lambda: lambda?,
        gamma,
        relaxation,
        max_iters,
        tol,
        z0,
        certify: r.certify.as_ref().map(|v| *v.get_ref()).unwrap_or(false),
        out: r.out.as_ref().map(|v| PathBuf::from(v.get_ref())),
    })
}

fn sweep_grid(c: &mut Checker<'_>, s: &Spanned<RawSweep>) -> Option<SweepGrid> {
    let span = s.span();
    let s = s.get_ref();
    let (grid, field) = match (&s.fractions, &s.values) {
        (Some(f), None) => (SweepGrid::Fractions(f.get_ref().clone()), f),
        (None, Some(v)) => (SweepGrid::Values(v.get_ref().clone()), v),
        (Some(_), Some(v)) => {
            c.err(v.span(), "give either `fractions` or `values`, not both");
            return None;
        }
        (None, None) => {
            c.err(span, "missing required key `fractions` or `values`");
            return None;
        }
    };
    let entries = field.get_ref();
    if entries.is_empty() {
        c.err(field.span(), "sweep grid must not be empty");
        return None;
    }
    if entries.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        c.err(field.span(), "sweep grid entries must be positive");
        return None;
    }
    Some(grid)
}

fn ode_spec(c: &mut Checker<'_>, o: &Spanned<RawOde>) -> Option<OdeSpec> {
    let o = o.get_ref();
    let flow = match o.flow.as_ref().map(|f| (f.get_ref().as_str(), f.span())) {
        None | Some(("dr", _)) => FlowKind::DouglasRachford,
        Some(("ppa", _)) => FlowKind::ProximalPoint,
        Some((other, span)) => {
            c.err(span, format!("unknown flow `{other}` (expected dr or ppa)"));
            return None;
        }
    };
    let spanned = |v: &Spanned<f64>| Some(Spanned::new(v.span(), *v.get_ref()));
    let lambda = c.positive(&spanned(&o.lambda), "lambda");
    let h_ode = c.positive(&spanned(&o.h_ode), "h_ode");
    if let Some(h) = h_ode {
        if h > 1.0 {
            c.err(o.h_ode.span(), "`h_ode` must lie in (0, 1]");
        }
    }
    let horizon = c.positive(&spanned(&o.horizon), "horizon");
    let inner_tol = c.positive(&o.inner_tol, "inner_tol").unwrap_or(1e-10);
    let inner_max_iters = o.inner_max_iters.as_ref().map(|v| *v.get_ref()).unwrap_or(100_000);
    Some(OdeSpec {
        flow,
        lambda: lambda?,
        h_ode: h_ode?,
        horizon: horizon?,
        inner_tol,
        inner_max_iters,
        z0: o.z0.as_ref().map(|v| *v.get_ref()).unwrap_or(0.0),
    })
}
