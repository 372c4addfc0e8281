//! Executable convergence certificates.
//!
//! The descent inequalities behind BFoRB and BRFoB hold for every monotone
//! problem. This module evaluates them along recorded runs, together with the
//! fixed-point residual used as the solution-quality metric everywhere else.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{check_dim, ProblemTriple, Resolvent, Vector};
use crate::solvers::{IterateHistory, Method, Trace};

/// Prepared evaluator of the fixed-point residual
/// `r(z) = ‖J_{λC}(2x − z − λB(x)) − x‖` with `x = J_{λA}(z)`.
///
/// `r(z) = 0` exactly when `J_{λA}(z)` solves `0 ∈ (A + B + C)(x)`.
pub struct OmegaEvaluator<'a> {
    problem: &'a ProblemTriple,
    lambda: f64,
    /// `None` evaluates the two-operator residual, treating `A` as zero.
    ja: Option<Resolvent>,
    jc: Resolvent,
}

impl<'a> OmegaEvaluator<'a> {
    pub fn new(problem: &'a ProblemTriple, lambda: f64) -> Result<Self> {
        Ok(OmegaEvaluator {
            problem,
            lambda,
            ja: Some(problem.a.resolvent_map(lambda)?),
            jc: problem.c.resolvent_map(lambda)?,
        })
    }

    /// Residual of `0 ∈ (B + C)(x)`, for methods that do not use `A`.
    pub fn without_a(problem: &'a ProblemTriple, lambda: f64) -> Result<Self> {
        Ok(OmegaEvaluator {
            problem,
            lambda,
            ja: None,
            jc: problem.c.resolvent_map(lambda)?,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Returns `(r(z), J_{λA}(z))`.
    pub fn evaluate(&self, z: &Vector) -> Result<(f64, Vector)> {
        let x = match &self.ja {
            Some(ja) => ja.apply_unchecked(z)?,
            None => z.clone(),
        };
        let bx = self.problem.b.forward_unchecked(&x);
        let mut w = &x * 2.0 - z;
        w.axpy(-self.lambda, &bx, 1.0);
        let y = self.jc.apply_unchecked(&w)?;
        Ok(((y - &x).norm(), x))
    }

    pub fn residual(&self, z: &Vector) -> Result<f64> {
        Ok(self.evaluate(z)?.0)
    }
}

/// One-off fixed-point residual of `z` for stepsize `lambda`.
pub fn omega_residual(problem: &ProblemTriple, lambda: f64, z: &Vector) -> Result<f64> {
    check_dim(problem.dim(), z)?;
    OmegaEvaluator::new(problem, lambda)?.residual(z)
}

/// A point `z` with `x = J_{λA}(z)` solving the inclusion, so that `z ∈ Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoint {
    pub z: Vector,
    pub x: Vector,
    pub lambda: f64,
}

/// Tolerance for `J_{λA}(z) = x` when building a reference point.
pub const REFERENCE_TOL: f64 = 1e-10;

/// Shadow point of the problem's known solution for stepsize `lambda`.
///
/// Uses the stored shadow if it was recorded for the same `lambda`; otherwise
/// `z = x* + λa` with `a ∈ A(x*)`, taking `a = A(x*)` when `A` is single-valued or
/// `a = −(B + C)(x*)` when `C` is.
pub fn reference_point(problem: &ProblemTriple, lambda: f64) -> Result<ReferencePoint> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    if let Some(s) = problem.z_star() {
        if s.lambda == lambda {
            let x = problem.x_star().cloned().ok_or(Error::UnavailableGroundTruth)?;
            return Ok(ReferencePoint {
                z: s.z.clone(),
                x,
                lambda,
            });
        }
    }
    let x = problem.x_star().ok_or(Error::UnavailableGroundTruth)?.clone();
    let a = if problem.a.has_forward() {
        problem.a.forward(&x)?
    } else if problem.c.has_forward() {
        -(problem.b.forward(&x)? + problem.c.forward(&x)?)
    } else {
        return Err(Error::UnavailableGroundTruth);
    };
    let z = &x + a * lambda;
    let back = problem.a.resolvent_map(lambda)?.apply(&z)?;
    let err = (&back - &x).norm();
    if err > REFERENCE_TOL * (1.0 + x.norm()) {
        return Err(Error::InvalidParameter(format!(
            "reference point check failed: ‖J(z) − x*‖ = {err:e}"
        )));
    }
    Ok(ReferencePoint { z, x, lambda })
}

fn check_lambda(r: &ReferencePoint, lambda: f64) -> Result<()> {
    if r.lambda != lambda {
        return Err(Error::InvalidParameter(format!(
            "reference point was built for lambda = {}, not {lambda}",
            r.lambda
        )));
    }
    Ok(())
}

fn check_all(dim: usize, vs: &[&Vector]) -> Result<()> {
    vs.iter().try_for_each(|v| check_dim(dim, v))
}

fn sq(v: Vector) -> f64 {
    v.norm_squared()
}

/// Iterates entering one BFoRB descent inequality at iteration `k`.
#[derive(Debug, Clone, Copy)]
pub struct BforbWindow<'v> {
    pub z_k: &'v Vector,
    pub z_next: &'v Vector,
    pub y_k: &'v Vector,
    pub y_prev: &'v Vector,
    pub y_prev2: &'v Vector,
}

/// Iterates entering `φ_k` for BFoRB.
#[derive(Debug, Clone, Copy)]
pub struct BforbPhiWindow<'v> {
    pub z_k: &'v Vector,
    pub z_prev: &'v Vector,
    pub z_prev2: &'v Vector,
    pub y_prev: &'v Vector,
    pub y_prev2: &'v Vector,
}

/// Iterates entering one BRFoB descent inequality at iteration `k`.
#[derive(Debug, Clone, Copy)]
pub struct BrfobWindow<'v> {
    pub z_next: &'v Vector,
    pub z_k: &'v Vector,
    pub z_prev: &'v Vector,
    pub y_k: &'v Vector,
    pub y_prev: &'v Vector,
    pub y_prev2: &'v Vector,
    pub y_prev3: &'v Vector,
}

/// Iterates entering `φ_k` for BRFoB.
#[derive(Debug, Clone, Copy)]
pub struct BrfobPhiWindow<'v> {
    pub z_k: &'v Vector,
    pub z_prev: &'v Vector,
    pub z_prev2: &'v Vector,
    pub z_prev3: &'v Vector,
    pub y_prev: &'v Vector,
    pub y_prev2: &'v Vector,
    pub y_prev3: &'v Vector,
}

// Kernels below take B-values precomputed so bulk certification evaluates B
// once per iterate.

fn bforb_slack_kernel(
    w: &BforbWindow<'_>,
    r: &ReferencePoint,
    lambda: f64,
    (b_k, b_prev, b_prev2): (&Vector, &Vector, &Vector),
) -> f64 {
    let d_old = b_prev - b_prev2;
    let d_new = b_k - b_prev;
    let rhs = sq(w.z_k - &r.z)
        + 2.0 * lambda * d_old.dot(&(&r.x - w.y_prev))
        + 2.0 * lambda * d_old.dot(&(w.y_prev - w.y_k));
    let lhs = sq(w.z_next - &r.z) + 2.0 * lambda * d_new.dot(&(&r.x - w.y_k)) + sq(w.z_next - w.z_k);
    rhs - lhs
}

fn bforb_phi_kernel(w: &BforbPhiWindow<'_>, r: &ReferencePoint, lambda: f64, l: f64, (b_prev, b_prev2): (&Vector, &Vector)) -> f64 {
    sq(w.z_k - &r.z)
        + 2.0 * lambda * (b_prev - b_prev2).dot(&(&r.x - w.y_prev))
        + 0.75 * sq(w.z_k - w.z_prev)
        + 2.0 * lambda * l * sq(w.z_prev - w.z_prev2)
}

/// `ȳ_{k−1}`, the B-values of `ȳ_{k−1}` and `ȳ_{k−2}`, and `B(x)`.
struct BrfobValues<'v> {
    ybar_prev: &'v Vector,
    b_ybar_prev: &'v Vector,
    b_ybar_prev2: &'v Vector,
    b_x: &'v Vector,
}

fn brfob_slack_kernel(w: &BrfobWindow<'_>, r: &ReferencePoint, lambda: f64, v: &BrfobValues<'_>) -> f64 {
    let zbar = w.z_k * 2.0 - w.z_prev;
    let rhs = sq(w.z_k - &r.z)
        + 2.0 * lambda * (v.b_ybar_prev2 - v.b_x).dot(&(w.y_prev - w.y_prev2))
        + sq(w.z_k - w.z_prev)
        + 2.0 * lambda * (v.b_ybar_prev - v.b_ybar_prev2).dot(&(v.ybar_prev - w.y_k));
    let lhs = sq(w.z_next - &r.z)
        + 2.0 * lambda * (v.b_ybar_prev - v.b_x).dot(&(w.y_k - w.y_prev))
        + 2.0 * sq(w.z_next - w.z_k)
        + sq(w.z_next - zbar);
    rhs - lhs
}

fn brfob_phi_kernel(w: &BrfobPhiWindow<'_>, r: &ReferencePoint, lambda: f64, l: f64, b_ybar_prev2: &Vector, b_x: &Vector) -> f64 {
    let ll = lambda * l;
    let zbar_prev = w.z_prev * 2.0 - w.z_prev2;
    sq(w.z_k - &r.z)
        + 2.0 * lambda * (b_ybar_prev2 - b_x).dot(&(w.y_prev - w.y_prev2))
        + (1.0 + 22.0 * ll) * sq(w.z_k - w.z_prev)
        + (47.0 / 3.0) * ll * sq(w.z_prev - w.z_prev2)
        + (14.0 / 3.0) * ll * sq(w.z_prev2 - w.z_prev3)
        + (7.0 / 11.0) * sq(w.z_k - zbar_prev)
}

/// Right-hand side minus left-hand side of the BFoRB descent inequality. It is
/// nonnegative for every monotone problem regardless of `λ`.
pub fn lemma_bforb_slack(problem: &ProblemTriple, w: &BforbWindow<'_>, r: &ReferencePoint, lambda: f64) -> Result<f64> {
    check_lambda(r, lambda)?;
    check_all(problem.dim(), &[w.z_k, w.z_next, w.y_k, w.y_prev, w.y_prev2, &r.z, &r.x])?;
    let b = |v: &Vector| problem.b.forward(v);
    Ok(bforb_slack_kernel(w, r, lambda, (&b(w.y_k)?, &b(w.y_prev)?, &b(w.y_prev2)?)))
}

/// `φ_k = ‖z_k−z‖² + 2λ⟨B(y_{k−1})−B(y_{k−2}), x−y_{k−1}⟩ + ¾‖z_k−z_{k−1}‖² + 2λL‖z_{k−1}−z_{k−2}‖²`.
pub fn phi_bforb(problem: &ProblemTriple, w: &BforbPhiWindow<'_>, r: &ReferencePoint, lambda: f64, l: f64) -> Result<f64> {
    check_lambda(r, lambda)?;
    check_all(problem.dim(), &[w.z_k, w.z_prev, w.z_prev2, w.y_prev, w.y_prev2, &r.z, &r.x])?;
    let b = |v: &Vector| problem.b.forward(v);
    Ok(bforb_phi_kernel(w, r, lambda, l, (&b(w.y_prev)?, &b(w.y_prev2)?)))
}

/// Right-hand side minus left-hand side of the BRFoB descent inequality, with
/// reflections `ȳ_j = 2y_j − y_{j−1}` and `z̄_k = 2z_k − z_{k−1}`.
pub fn lemma_brfob_slack(problem: &ProblemTriple, w: &BrfobWindow<'_>, r: &ReferencePoint, lambda: f64) -> Result<f64> {
    check_lambda(r, lambda)?;
    check_all(problem.dim(), &[w.z_next, w.z_k, w.z_prev, w.y_k, w.y_prev, w.y_prev2, w.y_prev3, &r.z, &r.x])?;
    let ybar_prev = w.y_prev * 2.0 - w.y_prev2;
    let ybar_prev2 = w.y_prev2 * 2.0 - w.y_prev3;
    let b = |v: &Vector| problem.b.forward(v);
    let v = BrfobValues {
        b_ybar_prev: &b(&ybar_prev)?,
        b_ybar_prev2: &b(&ybar_prev2)?,
        b_x: &b(&r.x)?,
        ybar_prev: &ybar_prev,
    };
    Ok(brfob_slack_kernel(w, r, lambda, &v))
}

/// BRFoB Lyapunov value
/// `‖z_k−z‖² + 2λ⟨B(ȳ_{k−2})−B(x), y_{k−1}−y_{k−2}⟩ + (1+22λL)‖z_k−z_{k−1}‖²
///  + (47/3)λL‖z_{k−1}−z_{k−2}‖² + (14/3)λL‖z_{k−2}−z_{k−3}‖² + (7/11)‖z_k−z̄_{k−1}‖²`.
pub fn phi_brfob(problem: &ProblemTriple, w: &BrfobPhiWindow<'_>, r: &ReferencePoint, lambda: f64, l: f64) -> Result<f64> {
    check_lambda(r, lambda)?;
    check_all(problem.dim(), &[w.z_k, w.z_prev, w.z_prev2, w.z_prev3, w.y_prev, w.y_prev2, w.y_prev3, &r.z, &r.x])?;
    let ybar_prev2 = w.y_prev2 * 2.0 - w.y_prev3;
    let b = |v: &Vector| problem.b.forward(v);
    Ok(brfob_phi_kernel(w, r, lambda, l, &b(&ybar_prev2)?, &b(&r.x)?))
}

/// Per-step check of `φ_{k+1} + ε‖z_{k+1} − z_k‖² ≤ φ_k` and of its telescoped
/// form `φ_{k+1} + ε Σ_{i≤k} ‖z_{i+1} − z_i‖² ≤ φ_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentReport {
    pub epsilon: f64,
    /// `max(0, φ_{k+1} + ε s_k² − φ_k)`.
    pub violations: Vec<f64>,
    /// `max(0, φ_{k+1} + ε Σ_{i≤k} s_i² − φ_0)`.
    pub telescoped_violations: Vec<f64>,
    pub max_violation: f64,
    pub max_telescoped_violation: f64,
}

/// `phis` holds `φ_0..=φ_N` and `z_steps` the step norms `s_0..s_{N−1}`.
pub fn descent_report(phis: &[f64], z_steps: &[f64], epsilon: f64) -> Result<DescentReport> {
    if phis.len() != z_steps.len() + 1 {
        return Err(Error::Alignment(format!(
            "{} Lyapunov values need {} step norms, got {}",
            phis.len(),
            phis.len().saturating_sub(1),
            z_steps.len()
        )));
    }
    let mut violations = Vec::with_capacity(z_steps.len());
    let mut telescoped = Vec::with_capacity(z_steps.len());
    let mut acc = 0.0;
    for (k, &s) in z_steps.iter().enumerate() {
        violations.push((phis[k + 1] + epsilon * s * s - phis[k]).max(0.0));
        acc += s * s;
        telescoped.push((phis[k + 1] + epsilon * acc - phis[0]).max(0.0));
    }
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    Ok(DescentReport {
        epsilon,
        max_violation: max(&violations),
        max_telescoped_violation: max(&telescoped),
        violations,
        telescoped_violations: telescoped,
    })
}

/// Relative tolerance applied to all certificate checks.
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Worst-case values over the non-warm-up indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub min_lemma_slack: f64,
    pub max_descent_violation: f64,
    pub max_telescoped_violation: f64,
    pub max_lower_bound_violation: f64,
    /// `1e-9·(1 + ‖z_0‖²)`.
    pub slack_tolerance: f64,
    /// `1e-9·(1 + φ_w)` with `w` the first index after warm-up.
    pub descent_tolerance: f64,
    /// Whether `λ` is inside the range where the Lyapunov argument applies.
    pub descent_applies: bool,
    pub lemma_holds: bool,
    pub descent_holds: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub method: Method,
    pub lambda: f64,
    pub lipschitz: f64,
    pub epsilon: f64,
    /// Indices `k < warmup` depend on the virtual history before `z_0` and are
    /// excluded from the summary.
    pub warmup: usize,
    /// One-step inequality slack for `k = 0..N−1`.
    pub lemma_slacks: Vec<f64>,
    /// `φ_k` for `k = 0..=N`.
    pub phi: Vec<f64>,
    pub descent: DescentReport,
    /// `max(0, c‖z_k − z‖² − φ_k)` for `k = 0..=N`.
    pub lower_bound_violations: Vec<f64>,
    /// `c` in the lower bound `φ_k ≥ c‖z_k − z‖²`.
    pub lower_bound_constant: f64,
    pub summary: CertificateSummary,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.summary.passed
    }
}

/// Number of leading indices whose inequalities involve the virtual history
/// `z_{−j} := z_0`, `y_{−3} := y_{−2}`.
pub fn warmup_len(method: Method) -> usize {
    match method {
        Method::Bforb => 2,
        Method::Brfob => 3,
        _ => 0,
    }
}

/// Evaluates the certificate of `trace` against the problem's ground truth.
/// The trace must carry its iterate history and come from BFoRB, BRFoB, or DR
/// (the latter only for `B = 0`).
pub fn certify(problem: &ProblemTriple, trace: &Trace) -> Result<CertificateReport> {
    let hist = trace.history.as_ref().ok_or_else(|| {
        Error::InvalidParameter("certification needs a run with recorded history".into())
    })?;
    let r = reference_point(problem, trace.lambda)?;
    match trace.method {
        Method::Bforb => Ok(certify_bforb(problem, hist, &r)),
        Method::Brfob => Ok(certify_brfob(problem, hist, &r)),
        Method::Dr if problem.b.is_zero() => Ok(certify_dr(hist, &r)),
        Method::Dr => Err(Error::InvalidParameter(
            "Douglas–Rachford certificates need B = 0".into(),
        )),
        m => Err(Error::InvalidParameter(format!("no certificate for {m}"))),
    }
}

/// Recorded iterates with backfilled virtual history.
struct Backfilled<'h> {
    hist: &'h IterateHistory,
}

impl Backfilled<'_> {
    fn z(&self, k: isize) -> &Vector {
        &self.hist.z[k.max(0) as usize]
    }

    fn y(&self, k: isize) -> &Vector {
        self.hist.y_at(k.max(-2)).expect("y history")
    }

    fn steps(&self) -> usize {
        self.hist.y.len()
    }

    fn step_norms(&self) -> Vec<f64> {
        self.hist.z.windows(2).map(|w| (&w[1] - &w[0]).norm()).collect()
    }
}

fn lower_bounds(hist: &IterateHistory, phi: &[f64], r: &ReferencePoint, c: f64) -> Vec<f64> {
    hist.z
        .iter()
        .zip(phi)
        .map(|(z, &p)| (c * sq(z - &r.z) - p).max(0.0))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    method: Method,
    lambda: f64,
    l: f64,
    epsilon: f64,
    hist: &IterateHistory,
    lemma_slacks: Vec<f64>,
    phi: Vec<f64>,
    lower_bound_constant: f64,
    r: &ReferencePoint,
) -> CertificateReport {
    let warmup = warmup_len(method);
    let descent = descent_report(&phi, &Backfilled { hist }.step_norms(), epsilon).expect("aligned");
    let lower = lower_bounds(hist, &phi, r, lower_bound_constant);

    let w = warmup.min(phi.len() - 1);
    // Descent is re-telescoped from the first index after warm-up.
    let post = descent_report(&phi[w..], &Backfilled { hist }.step_norms()[w..], epsilon).expect("aligned");
    let tail = |v: &[f64], from: usize| v.iter().skip(from).copied().fold(0.0, f64::max);

    let z0 = &hist.z[0];
    let slack_tolerance = CERTIFICATE_TOL * (1.0 + z0.norm_squared());
    let descent_tolerance = CERTIFICATE_TOL * (1.0 + phi[w].abs());
    let min_lemma_slack = lemma_slacks.iter().skip(warmup).copied().fold(f64::INFINITY, f64::min);
    let max_lower_bound_violation = tail(&lower, warmup.max(1));
    let descent_applies = epsilon > 0.0;
    let lemma_holds = !(min_lemma_slack < -slack_tolerance);
    let descent_holds = post.max_violation <= descent_tolerance
        && post.max_telescoped_violation <= descent_tolerance
        && max_lower_bound_violation <= descent_tolerance;
    let summary = CertificateSummary {
        min_lemma_slack,
        max_descent_violation: post.max_violation,
        max_telescoped_violation: post.max_telescoped_violation,
        max_lower_bound_violation,
        slack_tolerance,
        descent_tolerance,
        descent_applies,
        lemma_holds,
        descent_holds,
        passed: lemma_holds && (!descent_applies || descent_holds),
    };
    CertificateReport {
        method,
        lambda,
        lipschitz: l,
        epsilon,
        warmup,
        lemma_slacks,
        phi,
        descent,
        lower_bound_violations: lower,
        lower_bound_constant,
        summary,
    }
}

/// BFoRB certificate with `ε = 1/4 − 2λL` and lower bound `φ_k ≥ ¾‖z_k − z‖²`.
pub fn certify_bforb(problem: &ProblemTriple, hist: &IterateHistory, r: &ReferencePoint) -> CertificateReport {
    let lambda = r.lambda;
    let l = problem.lipschitz();
    let h = Backfilled { hist };
    let n = h.steps() as isize;
    // B(y_j) for j = -2..n-1, stored at j + 2.
    let by: Vec<Vector> = (-2..n).into_par_iter().map(|j| problem.b.forward_unchecked(h.y(j))).collect();
    let bv = |j: isize| &by[(j + 2) as usize];

    let lemma: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let w = BforbWindow {
                z_k: h.z(k),
                z_next: h.z(k + 1),
                y_k: h.y(k),
                y_prev: h.y(k - 1),
                y_prev2: h.y(k - 2),
            };
            bforb_slack_kernel(&w, r, lambda, (bv(k), bv(k - 1), bv(k - 2)))
        })
        .collect();
    let phi: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let w = BforbPhiWindow {
                z_k: h.z(k),
                z_prev: h.z(k - 1),
                z_prev2: h.z(k - 2),
                y_prev: h.y(k - 1),
                y_prev2: h.y(k - 2),
            };
            bforb_phi_kernel(&w, r, lambda, l, (bv(k - 1), bv(k - 2)))
        })
        .collect();
    assemble(Method::Bforb, lambda, l, 0.25 - 2.0 * lambda * l, hist, lemma, phi, 0.75, r)
}

/// BRFoB certificate with `ε = 1 − 22λL` and lower bound `φ_k ≥ (6/11)‖z_k − z‖²`.
pub fn certify_brfob(problem: &ProblemTriple, hist: &IterateHistory, r: &ReferencePoint) -> CertificateReport {
    let lambda = r.lambda;
    let l = problem.lipschitz();
    let h = Backfilled { hist };
    let n = h.steps() as isize;
    // ȳ_j = 2y_j − y_{j−1} and B(ȳ_j) for j = -2..n-1, stored at j + 2.
    let ybar: Vec<Vector> = (-2..n).map(|j| h.y(j) * 2.0 - h.y(j - 1)).collect();
    let bybar: Vec<Vector> = ybar.par_iter().map(|v| problem.b.forward_unchecked(v)).collect();
    let b_x = problem.b.forward_unchecked(&r.x);
    let at = |j: isize| (j + 2) as usize;

    let lemma: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let w = BrfobWindow {
                z_next: h.z(k + 1),
                z_k: h.z(k),
                z_prev: h.z(k - 1),
                y_k: h.y(k),
                y_prev: h.y(k - 1),
                y_prev2: h.y(k - 2),
                y_prev3: h.y(k - 3),
            };
            let v = BrfobValues {
                ybar_prev: &ybar[at(k - 1)],
                b_ybar_prev: &bybar[at(k - 1)],
                b_ybar_prev2: &bybar[at(k - 2)],
                b_x: &b_x,
            };
            brfob_slack_kernel(&w, r, lambda, &v)
        })
        .collect();
    let phi: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let w = BrfobPhiWindow {
                z_k: h.z(k),
                z_prev: h.z(k - 1),
                z_prev2: h.z(k - 2),
                z_prev3: h.z(k - 3),
                y_prev: h.y(k - 1),
                y_prev2: h.y(k - 2),
                y_prev3: h.y(k - 3),
            };
            brfob_phi_kernel(&w, r, lambda, l, &bybar[at(k - 2)], &b_x)
        })
        .collect();
    assemble(Method::Brfob, lambda, l, 1.0 - 22.0 * lambda * l, hist, lemma, phi, 6.0 / 11.0, r)
}

/// Douglas–Rachford (`B = 0`) certificate: Fejér slack
/// `‖z_k−z‖² − ‖z_{k+1}−z‖² − ‖z_{k+1}−z_k‖²`, `φ_k = ‖z_k − z‖²`, `ε = 1`.
pub fn certify_dr(hist: &IterateHistory, r: &ReferencePoint) -> CertificateReport {
    let lemma = hist
        .z
        .windows(2)
        .map(|w| sq(&w[0] - &r.z) - sq(&w[1] - &r.z) - sq(&w[1] - &w[0]))
        .collect();
    let phi = hist.z.iter().map(|z| sq(z - &r.z)).collect();
    assemble(Method::Dr, r.lambda, 0.0, 1.0, hist, lemma, phi, 1.0, r)
}
