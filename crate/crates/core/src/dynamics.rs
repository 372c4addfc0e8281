//! Explicit-Euler simulation of the continuous-time flows whose
//! discretisations are the splitting methods:
//!
//! - proximal point flow `ẋ = J_{λ(B+C)}(x) − x`,
//! - Douglas–Rachford flow `ż = J_{λ(B+C)}(2x − z) − x` with `x = J_{λA}(z)`.
//!
//! With `h_ode = 1` one Euler step of either flow is one iteration of the
//! corresponding discrete method, which is what [`discretization_gap`] compares.

use crate::error::{Error, Result};
use crate::operator::{check_dim, Matrix, ProblemTriple, Resolvent, Vector};
use crate::solvers::IterateHistory;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    pub lambda: f64,
    /// Euler step in `(0, 1]`.
    pub h_ode: f64,
    /// Final time `T`.
    pub horizon: f64,
    /// Fixed-point residual at which the inner resolvent solve stops.
    pub inner_tol: f64,
    pub inner_max_iters: usize,
}

impl FlowParams {
    pub fn new(lambda: f64, h_ode: f64, horizon: f64) -> Self {
        FlowParams {
            lambda,
            h_ode,
            horizon,
            inner_tol: 1e-10,
            inner_max_iters: 100_000,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {}", self.lambda)));
        }
        if !(self.h_ode > 0.0 && self.h_ode <= 1.0) {
            return Err(Error::InvalidParameter(format!("h_ode must lie in (0, 1], got {}", self.h_ode)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!("horizon must be positive, got {}", self.horizon)));
        }
        if !(self.inner_tol > 0.0) || self.inner_max_iters == 0 {
            return Err(Error::InvalidParameter("inner solver needs positive tolerance and budget".into()));
        }
        Ok(())
    }

    /// Number of Euler steps, `round(T / h_ode)`.
    pub fn steps(&self) -> usize {
        (self.horizon / self.h_ode).round() as usize
    }
}

/// Sampled trajectory at `t_j = j·h_ode`.
#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub times: Vec<f64>,
    /// `x(t_j)` for the proximal point flow, `z(t_j)` for the Douglas–Rachford flow.
    pub states: Vec<Vector>,
    /// `x(t_j) = J_{λA}(z(t_j))` for the Douglas–Rachford flow.
    pub shadows: Option<Vec<Vector>>,
    pub h_ode: f64,
    pub lambda: f64,
    pub inner_tol: f64,
    /// Inner iterations summed over the trajectory (0 when solved directly).
    pub inner_iterations: usize,
}

impl FlowTrajectory {
    /// The solution estimate along the trajectory.
    pub fn primal(&self) -> &[Vector] {
        self.shadows.as_deref().unwrap_or(&self.states)
    }

    pub fn terminal(&self) -> &Vector {
        self.states.last().expect("trajectory has at least the initial state")
    }
}

/// `J_{λ(B+C)}` prepared for repeated evaluation.
pub enum SumResolvent<'a> {
    /// `B` and `C` affine: `(I + λ(M_B + M_C))u = w − λ(b_B + b_C)` by LU.
    Direct {
        lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
        shift: Vector,
    },
    /// Forward-reflected-backward on the strongly monotone inclusion
    /// `0 ∈ (λB + I − w)(u) + λC(u)`.
    Iterative {
        problem: &'a ProblemTriple,
        lambda: f64,
        /// Inner step `0.45 / (1 + λL)`, below the `1/(2·Lip)` bound.
        step: f64,
        /// `J_{step·λC}`.
        j_inner: Resolvent,
        /// `J_{λC}`, used for the stopping residual.
        j_check: Resolvent,
        tol: f64,
        max_iters: usize,
    },
}

/// Result of one inner solve.
#[derive(Debug, Clone)]
pub struct InnerSolve {
    pub u: Vector,
    pub iterations: usize,
    pub residual: f64,
}

impl<'a> SumResolvent<'a> {
    pub fn new(problem: &'a ProblemTriple, lambda: f64, inner_tol: f64, inner_max_iters: usize) -> Result<Self> {
        if let (Some((mb, bb)), Some((mc, bc))) = (problem.b.as_affine(), problem.c.as_affine()) {
            let dim = problem.dim();
            let lu = (Matrix::identity(dim, dim) + (mb + mc) * lambda).lu();
            if !lu.is_invertible() {
                return Err(Error::Singular("I + λ(M_B + M_C) is not invertible".into()));
            }
            return Ok(SumResolvent::Direct {
                lu,
                shift: (bb + bc) * lambda,
            });
        }
        let step = 0.45 / (1.0 + lambda * problem.lipschitz());
        Ok(SumResolvent::Iterative {
            problem,
            lambda,
            step,
            j_inner: problem.c.resolvent_map(step * lambda)?,
            j_check: problem.c.resolvent_map(lambda)?,
            tol: inner_tol,
            max_iters: inner_max_iters,
        })
    }

    /// `J_{λ(B+C)}(w)`, started from `guess` when iterative.
    pub fn solve(&self, w: &Vector, guess: Option<&Vector>) -> Result<InnerSolve> {
        match self {
            SumResolvent::Direct { lu, shift } => {
                let u = lu
                    .solve(&(w - shift))
                    .ok_or_else(|| Error::Singular("LU solve failed".into()))?;
                Ok(InnerSolve {
                    u,
                    iterations: 0,
                    residual: 0.0,
                })
            }
            SumResolvent::Iterative {
                problem,
                lambda,
                step,
                j_inner,
                j_check,
                tol,
                max_iters,
            } => {
                let f = |u: &Vector| problem.b.forward_unchecked(u) * *lambda + u - w;
                let residual = |u: &Vector| -> Result<f64> {
                    let mut v = w.clone();
                    v.axpy(-lambda, &problem.b.forward_unchecked(u), 1.0);
                    Ok((j_check.apply_unchecked(&v)? - u).norm())
                };
                let mut u = guess.cloned().unwrap_or_else(|| w.clone());
                let mut fu = f(&u);
                let mut fu_prev = fu.clone();
                let mut r = residual(&u)?;
                let mut it = 0;
                while r > *tol {
                    if it == *max_iters || !r.is_finite() {
                        return Err(Error::InnerSolver {
                            time: f64::NAN,
                            residual: r,
                            iterations: it,
                        });
                    }
                    let mut v = u.clone();
                    v.axpy(-2.0 * step, &fu, 1.0);
                    v.axpy(*step, &fu_prev, 1.0);
                    u = j_inner.apply_unchecked(&v)?;
                    fu_prev = std::mem::replace(&mut fu, f(&u));
                    it += 1;
                    r = residual(&u)?;
                }
                Ok(InnerSolve {
                    u,
                    iterations: it,
                    residual: r,
                })
            }
        }
    }
}

/// One-off `J_{λ(B+C)}(w)` with inner tolerance `inner_tol` and the default
/// budget of `10⁵` inner iterations.
pub fn resolvent_sum(problem: &ProblemTriple, lambda: f64, w: &Vector, inner_tol: f64) -> Result<Vector> {
    check_dim(problem.dim(), w)?;
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    Ok(SumResolvent::new(problem, lambda, inner_tol, 100_000)?.solve(w, None)?.u)
}

fn stamp(err: Error, time: f64) -> Error {
    match err {
        Error::InnerSolver { residual, iterations, .. } => Error::InnerSolver {
            time,
            residual,
            iterations,
        },
        e => e,
    }
}

/// Proximal point flow for `0 ∈ (B + C)(x)`; `A` is ignored.
pub fn simulate_ppa(problem: &ProblemTriple, params: &FlowParams, x0: &Vector) -> Result<FlowTrajectory> {
    params.validate()?;
    check_dim(problem.dim(), x0)?;
    let j = SumResolvent::new(problem, params.lambda, params.inner_tol, params.inner_max_iters)?;
    let h = params.h_ode;
    let steps = params.steps();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x0.clone());
    let mut x = x0.clone();
    let mut guess: Option<Vector> = None;
    let mut inner = 0;
    for step in 0..steps {
        let t = step as f64 * h;
        let s = j.solve(&x, guess.as_ref()).map_err(|e| stamp(e, t))?;
        inner += s.iterations;
        x.axpy(h, &(&s.u - &x), 1.0);
        guess = Some(s.u);
        times.push((step + 1) as f64 * h);
        states.push(x.clone());
    }
    Ok(FlowTrajectory {
        times,
        states,
        shadows: None,
        h_ode: h,
        lambda: params.lambda,
        inner_tol: params.inner_tol,
        inner_iterations: inner,
    })
}

/// Douglas–Rachford flow for `0 ∈ (A + B + C)(x)`, one resolvent of `A` and
/// one of `B + C` per Euler step.
pub fn simulate_dr_flow(problem: &ProblemTriple, params: &FlowParams, z0: &Vector) -> Result<FlowTrajectory> {
    params.validate()?;
    check_dim(problem.dim(), z0)?;
    let ja = problem.a.resolvent_map(params.lambda)?;
    let j = SumResolvent::new(problem, params.lambda, params.inner_tol, params.inner_max_iters)?;
    let h = params.h_ode;
    let steps = params.steps();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut shadows = Vec::with_capacity(steps + 1);
    let mut z = z0.clone();
    let mut x = ja.apply_unchecked(&z)?;
    times.push(0.0);
    states.push(z.clone());
    shadows.push(x.clone());
    let mut guess: Option<Vector> = None;
    let mut inner = 0;
    for step in 0..steps {
        let t = step as f64 * h;
        let s = j.solve(&(&x * 2.0 - &z), guess.as_ref()).map_err(|e| stamp(e, t))?;
        inner += s.iterations;
        z.axpy(h, &(&s.u - &x), 1.0);
        x = ja.apply_unchecked(&z)?;
        guess = Some(s.u);
        times.push((step + 1) as f64 * h);
        states.push(z.clone());
        shadows.push(x.clone());
    }
    Ok(FlowTrajectory {
        times,
        states,
        shadows: Some(shadows),
        h_ode: h,
        lambda: params.lambda,
        inner_tol: params.inner_tol,
        inner_iterations: inner,
    })
}

/// `‖x_flow(k) − x_k‖` at `k = 0, stride, 2·stride, …`, aligning iteration `k`
/// with time `t = k`. The discrete sequence is the primal estimate of the
/// recorded run (`x_k` for three-operator methods, the iterate otherwise).
pub fn discretization_gap(flow: &FlowTrajectory, history: &IterateHistory, stride: usize) -> Result<Vec<(usize, f64)>> {
    let discrete = history.primal();
    if stride == 0 {
        return Err(Error::Alignment("stride must be positive".into()));
    }
    if stride > discrete.len() {
        return Err(Error::Alignment(format!(
            "stride {stride} exceeds the {} recorded iterates",
            discrete.len()
        )));
    }
    let per_unit = 1.0 / flow.h_ode;
    let steps_per_unit = per_unit.round() as usize;
    if (per_unit - steps_per_unit as f64).abs() > 1e-9 * per_unit {
        return Err(Error::Alignment(format!(
            "h_ode = {} does not divide unit time",
            flow.h_ode
        )));
    }
    let continuous = flow.primal();
    if continuous[0].len() != discrete[0].len() {
        return Err(Error::Alignment(format!(
            "flow dimension {} differs from iterate dimension {}",
            continuous[0].len(),
            discrete[0].len()
        )));
    }
    Ok((0..discrete.len())
        .step_by(stride)
        .take_while(|k| k * steps_per_unit < continuous.len())
        .map(|k| (k, (&continuous[k * steps_per_unit] - &discrete[k]).norm()))
        .collect())
}
