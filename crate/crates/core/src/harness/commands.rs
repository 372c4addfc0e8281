use std::path::{Path, PathBuf};

use nalgebra::dmatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::artifacts::{
    fmt_f64, write_certificate_csv, write_flow_csv, write_json, write_sweep_csv, write_trace_csv, FlowRow, SweepRow,
};
use super::config::{ExperimentConfig, FlowKind, GammaPolicy, LambdaPolicy, ProblemSpec, RunSpec, SweepGrid};
use super::{thread_pool, HarnessError, Options, Outcome, EXIT_NONCONVERGENCE, EXIT_OK};
use crate::certificates::{certify, reference_point, CertificateReport, OmegaEvaluator};
use crate::dynamics::{simulate_dr_flow, simulate_ppa, FlowParams};
use crate::error::{Error, Result};
use crate::operator::{MonotoneOperator, ProblemTriple, Vector};
use crate::problems::{make_affine_instance, make_saddle_instance, Instance};
use crate::solvers::{max_stepsize, run, Method, SolverConfig, Status, StepBound, Trace};

/// A problem with the identifier used in artifact names.
pub struct BuiltProblem {
    pub id: String,
    pub problem: ProblemTriple,
}

pub fn build_problem(spec: &ProblemSpec, base_dir: &Path) -> Result<BuiltProblem> {
    Ok(match spec {
        ProblemSpec::Zero { dim } => BuiltProblem {
            id: format!("zero-d{dim}"),
            problem: ProblemTriple::zero(*dim).with_solution(Vector::zeros(*dim))?,
        },
        ProblemSpec::Affine { dim, seed, skew_fraction } => BuiltProblem {
            id: format!("affine-d{dim}-s{seed}"),
            problem: make_affine_instance(*dim, *seed, *skew_fraction)?.problem()?,
        },
        ProblemSpec::Saddle { m, n, seed, alpha, radius } => BuiltProblem {
            id: format!("saddle-m{m}-n{n}-s{seed}"),
            problem: make_saddle_instance(*m, *n, *seed, *alpha, *radius)?.problem().clone(),
        },
        ProblemSpec::Skew2d => {
            let rotation = MonotoneOperator::affine(dmatrix![0.0, -1.0; 1.0, 0.0], Vector::zeros(2))?;
            BuiltProblem {
                id: "skew2d".into(),
                problem: ProblemTriple::new(MonotoneOperator::zero(2), rotation, MonotoneOperator::zero(2))?
                    .with_solution(Vector::zeros(2))?,
            }
        }
        ProblemSpec::File { path } => {
            let full = if path.is_absolute() { path.clone() } else { base_dir.join(path) };
            let stem = full.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            BuiltProblem {
                id: format!("file-{stem}"),
                problem: Instance::load(&full)?.problem()?,
            }
        }
    })
}

/// Resolves `(λ, γ)` for one method. A fraction is taken of the method's
/// guaranteed bound; for FRDR with `γ = ratio·λ` the fixed point
/// `λ = f·γ/(1 + 2Lγ)` is solved in closed form.
pub fn resolve_stepsize(
    method: Method,
    lambda: LambdaPolicy,
    gamma: Option<GammaPolicy>,
    lipschitz: f64,
) -> Result<(f64, Option<f64>)> {
    let gamma = if method == Method::Frdr { Some(gamma.ok_or(Error::MissingGamma)?) } else { None };
    match (lambda, gamma) {
        (LambdaPolicy::Absolute(l), None) => Ok((l, None)),
        (LambdaPolicy::Absolute(l), Some(GammaPolicy::Absolute(g))) => Ok((l, Some(g))),
        (LambdaPolicy::Absolute(l), Some(GammaPolicy::Ratio(r))) => Ok((l, Some(r * l))),
        (LambdaPolicy::Fraction(f), Some(GammaPolicy::Ratio(r))) => {
            if !(lipschitz > 0.0) || f * r <= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "no stepsize satisfies lambda = {f}·gamma/(1 + 2L·gamma) with gamma = {r}·lambda"
                )));
            }
            let l = (f * r - 1.0) / (2.0 * lipschitz * r);
            Ok((l, Some(r * l)))
        }
        (LambdaPolicy::Fraction(f), g) => {
            let g = g.map(|g| match g {
                GammaPolicy::Absolute(g) => g,
                GammaPolicy::Ratio(_) => unreachable!("handled above"),
            });
            match max_stepsize(method, lipschitz, g)? {
                StepBound::Below(b) if b.is_finite() => Ok((f * b, g)),
                StepBound::Below(_) => Err(Error::InvalidParameter(
                    "lambda_fraction needs a positive Lipschitz constant".into(),
                )),
                StepBound::NotGuaranteed => Err(Error::InvalidParameter(format!(
                    "{method} has no guaranteed stepsize; give an absolute `lambda`"
                ))),
            }
        }
    }
}

fn out_dir(cfg: &ExperimentConfig, opts: &Options) -> std::io::Result<PathBuf> {
    let dir = opts
        .out
        .clone()
        .or_else(|| cfg.run.as_ref().and_then(|r| r.out.clone()).map(|o| opts.base_dir.join(o)))
        .unwrap_or_else(|| opts.base_dir.join("splitkit-out"));
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn problem_for(cfg: &ExperimentConfig, opts: &Options) -> Result<BuiltProblem> {
    let spec = match opts.seed_override {
        Some(s) => cfg.problem.clone().with_seed(s),
        None => cfg.problem.clone(),
    };
    build_problem(&spec, &opts.base_dir)
}

fn run_spec(cfg: &ExperimentConfig) -> std::result::Result<&RunSpec, HarnessError> {
    cfg.run.as_ref().ok_or_else(|| HarnessError::config("config has no [run] section"))
}

fn solver_config(spec: &RunSpec, method: Method, lambda: f64, gamma: Option<f64>, dim: usize, record: bool) -> SolverConfig {
    let mut c = SolverConfig::new(method, lambda, Vector::from_element(dim, spec.z0))
        .max_iters(spec.max_iters)
        .tol(spec.tol)
        .record(record);
    c.gamma = gamma;
    if method.accepts_relaxation() {
        if let Some(h) = spec.relaxation {
            c.relaxation = h;
        }
    }
    c
}

fn stem(id: &str, method: Method, lambda: f64) -> String {
    format!("{id}_{method}_lam{lambda:e}")
}

/// JSON summary of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub problem: String,
    pub method: Method,
    pub lambda: f64,
    pub gamma: Option<f64>,
    pub relaxation: f64,
    pub status: Status,
    pub iterations: usize,
    pub forward_evals: usize,
    pub resolvent_evals: usize,
    pub init_forward_evals: usize,
    pub init_resolvent_evals: usize,
    pub final_step_norm: Option<f64>,
    pub final_omega_residual: Option<f64>,
    pub final_dist_to_xstar: Option<f64>,
    pub warnings: Vec<String>,
    pub trace_file: String,
    pub certificate_file: Option<String>,
    pub certificate_passed: Option<bool>,
}

impl RunSummary {
    fn new(id: &str, trace: &Trace, relaxation: f64, trace_file: &Path) -> Self {
        let s = &trace.final_state;
        RunSummary {
            problem: id.to_string(),
            method: trace.method,
            lambda: trace.lambda,
            gamma: trace.gamma,
            relaxation,
            status: trace.status,
            iterations: trace.iterations(),
            forward_evals: s.forward_evals,
            resolvent_evals: s.resolvent_evals,
            init_forward_evals: s.init_forward_evals,
            init_resolvent_evals: s.init_resolvent_evals,
            final_step_norm: trace.records.last().map(|r| r.step_norm),
            final_omega_residual: trace.final_residual(),
            final_dist_to_xstar: trace.final_distance(),
            warnings: trace.warnings.clone(),
            trace_file: file_name(trace_file),
            certificate_file: None,
            certificate_passed: None,
        }
    }
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn describe(id: &str, t: &Trace) -> String {
    format!(
        "{id} {} lambda={} status={} iterations={} omega={}",
        t.method,
        fmt_f64(t.lambda),
        t.status,
        t.iterations(),
        t.final_residual().map(fmt_f64).unwrap_or_else(|| "-".into())
    )
}

/// Executes `jobs` on the worker pool, preserving order.
fn parallel<T: Send, R: Send>(jobs: Vec<T>, f: impl Fn(T) -> R + Sync + Send) -> std::result::Result<Vec<R>, HarnessError> {
    let pool = thread_pool()?;
    Ok(pool.install(|| jobs.into_par_iter().map(f).collect()))
}

pub fn cmd_run(cfg: &ExperimentConfig, opts: &Options) -> std::result::Result<Outcome, HarnessError> {
    let spec = run_spec(cfg)?;
    let built = problem_for(cfg, opts)?;
    let l = built.problem.lipschitz();
    let dim = built.problem.dim();
    let jobs = spec
        .methods
        .iter()
        .map(|&m| {
            let (lambda, gamma) = resolve_stepsize(m, spec.lambda, spec.gamma, l)?;
            Ok(solver_config(spec, m, lambda, gamma, dim, spec.certify))
        })
        .collect::<Result<Vec<_>>>()?;
    let out = out_dir(cfg, opts)?;
    let problem = &built.problem;
    let results = parallel(jobs, |c| {
        let h = c.relaxation;
        let trace = run(problem, c)?;
        let cert = if spec.certify {
            Some(certify(problem, &trace).map_err(|e| e.to_string()))
        } else {
            None
        };
        Ok::<_, Error>((trace, h, cert))
    })?;

    let mut outcome = Outcome::default();
    let mut ok = true;
    for r in results {
        let (trace, h, cert) = r?;
        let base = stem(&built.id, trace.method, trace.lambda);
        let trace_path = out.join(format!("{base}.csv"));
        write_trace_csv(&trace_path, &trace)?;
        let mut summary = RunSummary::new(&built.id, &trace, h, &trace_path);
        ok &= trace.status == Status::Converged;
        let mut line = describe(&built.id, &trace);
        match cert {
            Some(Ok(rep)) => {
                let paths = write_certificate(&out, &base, &rep)?;
                summary.certificate_file = Some(file_name(&paths[0]));
                summary.certificate_passed = Some(rep.passed());
                ok &= rep.passed();
                line.push_str(if rep.passed() { " certificate=pass" } else { " certificate=FAIL" });
                outcome.artifacts.extend(paths);
            }
            Some(Err(msg)) => summary.warnings.push(format!("certificate skipped: {msg}")),
            None => {}
        }
        let summary_path = out.join(format!("{base}.summary.json"));
        write_json(&summary_path, &summary)?;
        outcome.artifacts.push(trace_path);
        outcome.artifacts.push(summary_path);
        outcome.lines.push(line);
    }
    outcome.exit_code = if ok { EXIT_OK } else { EXIT_NONCONVERGENCE };
    Ok(outcome)
}

fn write_certificate(out: &Path, base: &str, rep: &CertificateReport) -> std::io::Result<Vec<PathBuf>> {
    let json = out.join(format!("{base}.certificate.json"));
    let csv = out.join(format!("{base}.certificate.csv"));
    write_json(&json, rep)?;
    write_certificate_csv(&csv, rep)?;
    Ok(vec![json, csv])
}

/// Runs every method at every grid point and writes one table. Rows that do
/// not converge are recorded, not treated as failures.
pub fn cmd_sweep(cfg: &ExperimentConfig, opts: &Options) -> std::result::Result<Outcome, HarnessError> {
    let spec = run_spec(cfg)?;
    let grid = cfg.sweep.as_ref().ok_or_else(|| HarnessError::config("config has no [sweep] section"))?;
    let built = problem_for(cfg, opts)?;
    let l = built.problem.lipschitz();
    let dim = built.problem.dim();
    let points: Vec<(LambdaPolicy, Option<f64>)> = match grid {
        SweepGrid::Fractions(f) => f.iter().map(|&f| (LambdaPolicy::Fraction(f), Some(f))).collect(),
        SweepGrid::Values(v) => v.iter().map(|&v| (LambdaPolicy::Absolute(v), None)).collect(),
    };
    if points.is_empty() {
        return Err(HarnessError::config("sweep grid must not be empty"));
    }
    let mut jobs = Vec::new();
    for &m in &spec.methods {
        for &(policy, fraction) in &points {
            let (lambda, gamma) = resolve_stepsize(m, policy, spec.gamma, l)?;
            jobs.push((solver_config(spec, m, lambda, gamma, dim, false), fraction));
        }
    }
    let out = out_dir(cfg, opts)?;
    let problem = &built.problem;
    let traces = parallel(jobs, |(c, fraction)| run(problem, c).map(|t| (t, fraction)))?;
    let mut rows = Vec::new();
    let mut outcome = Outcome::default();
    for r in traces {
        let (t, fraction) = r?;
        outcome.lines.push(describe(&built.id, &t));
        rows.push(SweepRow {
            method: t.method.to_string(),
            lambda: t.lambda,
            fraction,
            status: t.status.to_string(),
            iterations: t.iterations(),
            final_omega_residual: t.final_residual(),
        });
    }
    let path = out.join(format!("{}_sweep.csv", built.id));
    write_sweep_csv(&path, &rows)?;
    outcome.artifacts.push(path);
    outcome.exit_code = EXIT_OK;
    Ok(outcome)
}

/// Certifies BFoRB, BRFoB or (for `B = 0`) Douglas–Rachford runs. Exits 0
/// only if every certificate holds.
pub fn cmd_certify(cfg: &ExperimentConfig, opts: &Options) -> std::result::Result<Outcome, HarnessError> {
    let spec = run_spec(cfg)?;
    if let Some(m) = spec.methods.iter().find(|m| !matches!(m, Method::Bforb | Method::Brfob | Method::Dr)) {
        return Err(Error::InvalidParameter(format!("no certificate for {m}; use bforb, brfob or dr")).into());
    }
    let built = problem_for(cfg, opts)?;
    let l = built.problem.lipschitz();
    let dim = built.problem.dim();
    let jobs = spec
        .methods
        .iter()
        .map(|&m| {
            let (lambda, gamma) = resolve_stepsize(m, spec.lambda, spec.gamma, l)?;
            reference_point(&built.problem, lambda)?;
            Ok(solver_config(spec, m, lambda, gamma, dim, true))
        })
        .collect::<Result<Vec<_>>>()?;
    let out = out_dir(cfg, opts)?;
    let problem = &built.problem;
    let results = parallel(jobs, |c| {
        let trace = run(problem, c)?;
        let rep = certify(problem, &trace)?;
        Ok::<_, Error>((trace, rep))
    })?;
    let mut outcome = Outcome::default();
    let mut ok = true;
    for r in results {
        let (trace, rep) = r?;
        let base = stem(&built.id, trace.method, trace.lambda);
        let trace_path = out.join(format!("{base}.csv"));
        write_trace_csv(&trace_path, &trace)?;
        outcome.artifacts.push(trace_path);
        outcome.artifacts.extend(write_certificate(&out, &base, &rep)?);
        ok &= rep.passed();
        let s = &rep.summary;
        outcome.lines.push(format!(
            "{} {} lambda={} min_slack={} max_descent_violation={} {}",
            built.id,
            trace.method,
            fmt_f64(trace.lambda),
            fmt_f64(s.min_lemma_slack),
            fmt_f64(s.max_descent_violation),
            if rep.passed() { "pass" } else { "FAIL" }
        ));
    }
    outcome.exit_code = if ok { EXIT_OK } else { EXIT_NONCONVERGENCE };
    Ok(outcome)
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowSummary {
    pub problem: String,
    pub flow: &'static str,
    pub lambda: f64,
    pub h_ode: f64,
    pub horizon: f64,
    pub steps: usize,
    pub inner_iterations: usize,
    pub terminal_omega_residual: f64,
    pub terminal_dist_to_xstar: Option<f64>,
    pub trace_file: String,
}

pub fn cmd_flow(cfg: &ExperimentConfig, opts: &Options) -> std::result::Result<Outcome, HarnessError> {
    let ode = cfg.ode.as_ref().ok_or_else(|| HarnessError::config("config has no [ode] section"))?;
    let built = problem_for(cfg, opts)?;
    let p = &built.problem;
    let mut params = FlowParams::new(ode.lambda, ode.h_ode, ode.horizon);
    params.inner_tol = ode.inner_tol;
    params.inner_max_iters = ode.inner_max_iters;
    let start = Vector::from_element(p.dim(), ode.z0);
    let (flow, name, omega) = match ode.flow {
        FlowKind::DouglasRachford => (simulate_dr_flow(p, &params, &start), "dr", OmegaEvaluator::new(p, ode.lambda)?),
        FlowKind::ProximalPoint => (simulate_ppa(p, &params, &start), "ppa", OmegaEvaluator::without_a(p, ode.lambda)?),
    };
    let flow = flow.map_err(|e| match e {
        e @ Error::InnerSolver { .. } => HarnessError::Failed(e.to_string()),
        e => e.into(),
    })?;
    // The proximal point flow ignores A, so x* is only its target when A = 0.
    let x_star = p.x_star().filter(|_| ode.flow == FlowKind::DouglasRachford || p.a.is_zero());
    let mut rows = Vec::with_capacity(flow.states.len());
    for (j, (t, s)) in flow.times.iter().zip(&flow.states).enumerate() {
        let step_norm = if j == 0 { 0.0 } else { (s - &flow.states[j - 1]).norm() };
        rows.push(FlowRow {
            t: *t,
            step_norm,
            omega_residual: omega.residual(s)?,
            dist_to_xstar: x_star.map(|xs| (&flow.primal()[j] - xs).norm()),
        });
    }
    let out = out_dir(cfg, opts)?;
    let base = format!("{}_flow-{name}_lam{:e}", built.id, ode.lambda);
    let csv = out.join(format!("{base}.csv"));
    write_flow_csv(&csv, &rows)?;
    let last = rows.last().expect("initial state");
    let summary = FlowSummary {
        problem: built.id.clone(),
        flow: name,
        lambda: ode.lambda,
        h_ode: ode.h_ode,
        horizon: ode.horizon,
        steps: flow.states.len() - 1,
        inner_iterations: flow.inner_iterations,
        terminal_omega_residual: last.omega_residual,
        terminal_dist_to_xstar: last.dist_to_xstar,
        trace_file: file_name(&csv),
    };
    let json = out.join(format!("{base}.summary.json"));
    write_json(&json, &summary)?;
    Ok(Outcome {
        exit_code: EXIT_OK,
        lines: vec![format!(
            "{} flow-{name} lambda={} T={} omega={}",
            built.id,
            fmt_f64(ode.lambda),
            fmt_f64(ode.horizon),
            fmt_f64(last.omega_residual)
        )],
        artifacts: vec![csv, json],
    })
}
