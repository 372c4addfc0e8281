use crate::certificates::OmegaEvaluator;
use crate::error::{Error, Result};
use crate::operator::{check_dim, ProblemTriple, Resolvent, Vector};

use super::{max_stepsize, InitialHistory, Method, SolverConfig, SolverState, StepBound};

/// A validated configuration bound to a problem, with resolvents prepared.
pub struct Solver<'a> {
    problem: &'a ProblemTriple,
    config: SolverConfig,
    /// `J_{λA}`.
    ja: Resolvent,
    /// `J_{λC}`, or `J_{γC}` for FRDR.
    jc: Resolvent,
    omega: OmegaEvaluator<'a>,
    warnings: Vec<String>,
}

impl<'a> Solver<'a> {
    pub fn new(problem: &'a ProblemTriple, config: SolverConfig) -> Result<Self> {
        let dim = problem.dim();
        let SolverConfig {
            method,
            lambda,
            gamma,
            relaxation: h,
            ..
        } = config;
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
        }
        if !(h > 0.0 && h <= 1.0) {
            return Err(Error::InvalidParameter(format!("relaxation must lie in (0, 1], got {h}")));
        }
        if h != 1.0 && !method.accepts_relaxation() {
            return Err(Error::InvalidParameter(format!("{method} takes no relaxation parameter")));
        }
        if config.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be positive".into()));
        }
        if !(config.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", config.tol)));
        }
        check_dim(dim, &config.z0)?;
        if let InitialHistory::Explicit { prev, prev2 } = &config.history {
            check_dim(dim, prev)?;
            check_dim(dim, prev2)?;
        }

        let lip = problem.lipschitz();
        let bound = max_stepsize(method, lip, gamma)?;
        let mut warnings = Vec::new();
        if config.enforce_bound {
            match bound {
                StepBound::Below(b) if lambda >= b => warnings.push(format!(
                    "lambda = {lambda:e} is not below the guaranteed bound {b:e} for {method}"
                )),
                StepBound::NotGuaranteed if !problem.b.is_zero() && method != Method::Dr => {
                    warnings.push(format!(
                        "{method} has no stepsize guarantee for a merely monotone Lipschitz B"
                    ))
                }
                _ => {}
            }
            if let (Method::Frdr, Some(g)) = (method, gamma) {
                if g <= lambda {
                    warnings.push(format!("gamma = {g:e} should exceed lambda = {lambda:e}"));
                }
            }
        }

        let ja = problem.a.resolvent_map(lambda)?;
        let jc = problem.c.resolvent_map(gamma.unwrap_or(lambda))?;
        let omega = if method.ignores_a() {
            OmegaEvaluator::without_a(problem, lambda)?
        } else {
            OmegaEvaluator::new(problem, lambda)?
        };
        Ok(Solver {
            problem,
            config,
            ja,
            jc,
            omega,
            warnings,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn problem(&self) -> &ProblemTriple {
        self.problem
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub(crate) fn omega(&self) -> &OmegaEvaluator<'a> {
        &self.omega
    }

    fn b(&self, v: &Vector) -> Vector {
        self.problem.b.forward_unchecked(v)
    }

    /// Initial state from `z0` and the configured history.
    pub fn init_state(&self) -> Result<SolverState> {
        let z0 = self.config.z0.clone();
        let dim = z0.len();
        let zeros = Vector::zeros(dim);
        let mut s = SolverState {
            k: 0,
            z: z0.clone(),
            x: z0.clone(),
            y: z0.clone(),
            y_prev: zeros.clone(),
            y_prev2: zeros.clone(),
            b_y_prev: zeros.clone(),
            b_y_prev2: zeros.clone(),
            x_prev: z0.clone(),
            b_x: zeros.clone(),
            b_x_prev: zeros.clone(),
            u: zeros,
            forward_evals: 0,
            resolvent_evals: 0,
            init_forward_evals: 0,
            init_resolvent_evals: 0,
        };
        match self.config.method {
            Method::Bforb | Method::Brfob => {
                let (p, p2, warm) = match &self.config.history {
                    InitialHistory::WarmStart => {
                        let x0 = self.ja.apply_unchecked(&z0)?;
                        s.init_resolvent_evals += 1;
                        (x0.clone(), x0, true)
                    }
                    InitialHistory::Explicit { prev, prev2 } => (prev.clone(), prev2.clone(), false),
                };
                if self.config.method == Method::Bforb {
                    s.b_y_prev = self.b(&p);
                    s.b_y_prev2 = if warm { s.b_y_prev.clone() } else { self.b(&p2) };
                    s.init_forward_evals += if warm { 1 } else { 2 };
                }
                s.y_prev = p;
                s.y_prev2 = p2;
            }
            Method::Forb | Method::Rfob | Method::Frdr => {
                if let InitialHistory::Explicit { prev, .. } = &self.config.history {
                    s.x_prev = prev.clone();
                }
                if self.config.method != Method::Rfob {
                    s.b_x = self.b(&s.x);
                    s.b_x_prev = if s.x_prev == s.x { s.b_x.clone() } else { self.b(&s.x_prev) };
                    s.init_forward_evals += if s.x_prev == s.x { 1 } else { 2 };
                }
            }
            Method::Fb | Method::DavisYin | Method::Dr => {}
        }
        Ok(s)
    }

    /// Advances `state` by one iteration of the configured method.
    pub fn step(&self, s: &mut SolverState) -> Result<()> {
        match self.config.method {
            Method::Bforb => self.bforb_step(s)?,
            Method::Brfob => self.brfob_step(s)?,
            Method::Forb => self.forb_step(s)?,
            Method::Rfob => self.rfob_step(s)?,
            Method::Fb => self.fb_step(s)?,
            Method::DavisYin => self.davis_yin_step(s)?,
            Method::Frdr => self.frdr_step(s)?,
            Method::Dr => self.dr_step(s)?,
        }
        s.k += 1;
        Ok(())
    }

    /// `x = J_{λA}(z)`, `y = J_{λC}(2x − z − 2λB(y_{k−1}) + λB(y_{k−2}))`, `z⁺ = z + y − x`.
    fn bforb_step(&self, s: &mut SolverState) -> Result<()> {
        let lambda = self.config.lambda;
        let x = self.ja.apply_unchecked(&s.z)?;
        let mut w = &x * 2.0 - &s.z;
        w.axpy(-2.0 * lambda, &s.b_y_prev, 1.0);
        w.axpy(lambda, &s.b_y_prev2, 1.0);
        let y = self.jc.apply_unchecked(&w)?;
        let by = self.b(&y);
        s.z = &s.z + &y - &x;
        s.b_y_prev2 = std::mem::replace(&mut s.b_y_prev, by);
        s.y_prev2 = std::mem::replace(&mut s.y_prev, y.clone());
        s.x = x;
        s.y = y;
        s.forward_evals += 1;
        s.resolvent_evals += 2;
        Ok(())
    }

    /// As BFoRB with the reflection moved into the argument: `λB(2y_{k−1} − y_{k−2})`.
    fn brfob_step(&self, s: &mut SolverState) -> Result<()> {
        let lambda = self.config.lambda;
        let x = self.ja.apply_unchecked(&s.z)?;
        let ybar = &s.y_prev * 2.0 - &s.y_prev2;
        let mut w = &x * 2.0 - &s.z;
        w.axpy(-lambda, &self.b(&ybar), 1.0);
        let y = self.jc.apply_unchecked(&w)?;
        s.z = &s.z + &y - &x;
        s.y_prev2 = std::mem::replace(&mut s.y_prev, y.clone());
        s.x = x;
        s.y = y;
        s.forward_evals += 1;
        s.resolvent_evals += 2;
        Ok(())
    }

    /// `x⁺ = (1−h)x + h·J_{λC}(x − λB(x) − (λ/h)(B(x) − B(x_{k−1})))`.
    fn forb_step(&self, s: &mut SolverState) -> Result<()> {
        let lambda = self.config.lambda;
        let h = self.config.relaxation;
        let mut w = s.x.clone();
        if h == 1.0 {
            w.axpy(-2.0 * lambda, &s.b_x, 1.0);
            w.axpy(lambda, &s.b_x_prev, 1.0);
        } else {
            w.axpy(-lambda, &s.b_x, 1.0);
            w.axpy(-lambda / h, &(&s.b_x - &s.b_x_prev), 1.0);
        }
        let p = self.jc.apply_unchecked(&w)?;
        let next = relax(&s.x, p, h);
        let b_next = self.b(&next);
        s.b_x_prev = std::mem::replace(&mut s.b_x, b_next);
        self.advance_two_operator(s, next);
        s.forward_evals += 1;
        s.resolvent_evals += 1;
        Ok(())
    }

    /// `x⁺ = (1−h)x + h·J_{λC}(x − λB(x + (x − x_{k−1})/h))`.
    fn rfob_step(&self, s: &mut SolverState) -> Result<()> {
        let lambda = self.config.lambda;
        let h = self.config.relaxation;
        let arg = if h == 1.0 {
            &s.x * 2.0 - &s.x_prev
        } else {
            &s.x + (&s.x - &s.x_prev) / h
        };
        let mut w = s.x.clone();
        w.axpy(-lambda, &self.b(&arg), 1.0);
        let p = self.jc.apply_unchecked(&w)?;
        let next = relax(&s.x, p, h);
        self.advance_two_operator(s, next);
        s.forward_evals += 1;
        s.resolvent_evals += 1;
        Ok(())
    }

    /// `x⁺ = J_{λC}(x − λB(x))`.
    fn fb_step(&self, s: &mut SolverState) -> Result<()> {
        let mut w = s.x.clone();
        w.axpy(-self.config.lambda, &self.b(&s.x), 1.0);
        let next = self.jc.apply_unchecked(&w)?;
        self.advance_two_operator(s, next);
        s.forward_evals += 1;
        s.resolvent_evals += 1;
        Ok(())
    }

    /// `x = J_{λA}(z)`, `y = J_{λC}(2x − z − λB(x))`, `z⁺ = z + y − x`.
    fn davis_yin_step(&self, s: &mut SolverState) -> Result<()> {
        let x = self.ja.apply_unchecked(&s.z)?;
        let mut w = &x * 2.0 - &s.z;
        w.axpy(-self.config.lambda, &self.b(&x), 1.0);
        let y = self.jc.apply_unchecked(&w)?;
        s.z = &s.z + &y - &x;
        s.x = x;
        s.y = y;
        s.forward_evals += 1;
        s.resolvent_evals += 2;
        Ok(())
    }

    /// `x = J_{λA}(z)`, `y = J_{λC}(2x − z)`, `z⁺ = z + y − x`; `B` is not used.
    fn dr_step(&self, s: &mut SolverState) -> Result<()> {
        let x = self.ja.apply_unchecked(&s.z)?;
        let w = &x * 2.0 - &s.z;
        let y = self.jc.apply_unchecked(&w)?;
        s.z = &s.z + &y - &x;
        s.x = x;
        s.y = y;
        s.resolvent_evals += 2;
        Ok(())
    }

    /// Dual-variable form:
    /// `x⁺ = J_{λA}(x − λu − 2λB(x) + λB(x_{k−1}))`, `y⁺ = J_{γC}(2x⁺ − x + γu)`,
    /// `u⁺ = u + (2x⁺ − x − y⁺)/γ`.
    ///
    /// The dual shift and update use `γ`, so that fixed points satisfy
    /// `u ∈ C(x)` and `−u − B(x) ∈ A(x)`; with `λ` in both places the limit
    /// would solve `0 ∈ A + B + (γ/λ)C` instead.
    fn frdr_step(&self, s: &mut SolverState) -> Result<()> {
        let lambda = self.config.lambda;
        let gamma = self.jc.lambda();
        let mut w = s.x.clone();
        w.axpy(-lambda, &s.u, 1.0);
        w.axpy(-2.0 * lambda, &s.b_x, 1.0);
        w.axpy(lambda, &s.b_x_prev, 1.0);
        let next = self.ja.apply_unchecked(&w)?;
        let reflected = &next * 2.0 - &s.x;
        let mut v = reflected.clone();
        v.axpy(gamma, &s.u, 1.0);
        let y = self.jc.apply_unchecked(&v)?;
        s.u.axpy(1.0 / gamma, &(reflected - &y), 1.0);
        let b_next = self.b(&next);
        s.b_x_prev = std::mem::replace(&mut s.b_x, b_next);
        s.y = y;
        self.advance_two_operator(s, next);
        s.forward_evals += 1;
        s.resolvent_evals += 2;
        Ok(())
    }

    fn advance_two_operator(&self, s: &mut SolverState, next: Vector) {
        s.x_prev = std::mem::replace(&mut s.x, next);
        s.z.copy_from(&s.x);
    }

    /// Point whose fixed-point residual measures progress, together with the
    /// current primal estimate: `z` for three-operator methods, the iterate for
    /// two-operator methods, and the shadow `x − λ(u + B(x))` for FRDR.
    pub(crate) fn governing_point(&self, s: &SolverState) -> Vector {
        match self.config.method {
            Method::Frdr => {
                let mut z = s.x.clone();
                z.axpy(-self.config.lambda, &(&s.u + &s.b_x), 1.0);
                z
            }
            _ => s.z.clone(),
        }
    }
}

fn relax(x: &Vector, p: Vector, h: f64) -> Vector {
    if h == 1.0 {
        p
    } else {
        x * (1.0 - h) + p * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{Matrix, MonotoneOperator};
    use crate::solvers::{run, Status};
    use nalgebra::{dmatrix, dvector};

    fn scalar(v: f64) -> Vector {
        dvector![v]
    }

    /// `A = C = 0`, `B = I` on the line.
    fn identity_b() -> ProblemTriple {
        ProblemTriple::new(
            MonotoneOperator::zero(1),
            MonotoneOperator::identity(1),
            MonotoneOperator::zero(1),
        )
        .unwrap()
    }

    fn one_step(p: &ProblemTriple, cfg: SolverConfig) -> SolverState {
        let solver = Solver::new(p, cfg).unwrap();
        let mut s = solver.init_state().unwrap();
        solver.step(&mut s).unwrap();
        s
    }

    fn explicit(prev: f64, prev2: f64) -> InitialHistory {
        InitialHistory::Explicit {
            prev: scalar(prev),
            prev2: scalar(prev2),
        }
    }

    #[test]
    fn bforb_hand_step() {
        let p = identity_b();
        let s = one_step(&p, SolverConfig::new(Method::Bforb, 0.1, scalar(1.0)).history(explicit(1.0, 1.0)));
        assert_eq!(s.x[0], 1.0);
        assert!((s.y[0] - 0.9).abs() < 1e-15);
        assert!((s.z[0] - 0.9).abs() < 1e-15);
        assert_eq!((s.forward_evals, s.resolvent_evals), (1, 2));
        assert_eq!(s.b_y_prev[0], s.y[0]);
    }

    #[test]
    fn bforb_scalar_a() {
        let p = ProblemTriple::new(
            MonotoneOperator::identity(1),
            MonotoneOperator::zero(1),
            MonotoneOperator::zero(1),
        )
        .unwrap();
        let s = one_step(&p, SolverConfig::new(Method::Bforb, 1.0, scalar(2.0)));
        // (1 + 1)x = 2
        assert_eq!(s.x[0], 1.0);
        assert_eq!(s.y[0], 0.0);
        assert_eq!(s.z[0], 1.0);
    }

    #[test]
    fn brfob_hand_step() {
        let p = identity_b();
        let s = one_step(&p, SolverConfig::new(Method::Brfob, 0.1, scalar(1.0)).history(explicit(1.0, 1.0)));
        assert!((s.y[0] - 0.9).abs() < 1e-15);
        assert!((s.z[0] - 0.9).abs() < 1e-15);
        assert_eq!((s.forward_evals, s.resolvent_evals), (1, 2));
    }

    #[test]
    fn forb_hand_steps() {
        let p = identity_b();
        let s = one_step(&p, SolverConfig::new(Method::Forb, 0.1, scalar(1.0)));
        assert!((s.x[0] - 0.9).abs() < 1e-15);
        let s = one_step(&p, SolverConfig::new(Method::Forb, 0.1, scalar(1.0)).relaxation(0.5));
        assert!((s.x[0] - 0.95).abs() < 1e-15);
    }

    #[test]
    fn rfob_hand_steps() {
        let p = identity_b();
        let s = one_step(&p, SolverConfig::new(Method::Rfob, 0.1, scalar(1.0)).history(explicit(0.8, 0.8)));
        assert!((s.x[0] - 0.88).abs() < 1e-15);
        let s = one_step(&p, SolverConfig::new(Method::Rfob, 0.1, scalar(1.0)).relaxation(0.5));
        assert!((s.x[0] - 0.95).abs() < 1e-15);
    }

    #[test]
    fn rfob_stationary_at_zero() {
        let p = identity_b();
        let s = one_step(&p, SolverConfig::new(Method::Rfob, 0.3, scalar(0.0)));
        assert_eq!(s.x[0], 0.0);
    }

    #[test]
    fn fb_and_davis_yin_hand_steps() {
        let p = identity_b();
        assert!((one_step(&p, SolverConfig::new(Method::Fb, 0.1, scalar(1.0))).x[0] - 0.9).abs() < 1e-15);
        assert!((one_step(&p, SolverConfig::new(Method::DavisYin, 0.1, scalar(1.0))).z[0] - 0.9).abs() < 1e-15);
        assert_eq!(one_step(&p, SolverConfig::new(Method::Fb, 0.1, scalar(0.0))).x[0], 0.0);
    }

    #[test]
    fn fb_grows_on_rotation() {
        let rot = MonotoneOperator::affine(dmatrix![0.0, -1.0; 1.0, 0.0], Vector::zeros(2)).unwrap();
        let p = ProblemTriple::new(MonotoneOperator::zero(2), rot, MonotoneOperator::zero(2)).unwrap();
        let lambda = 0.3;
        let solver = Solver::new(&p, SolverConfig::new(Method::Fb, lambda, dvector![1.0, 0.5])).unwrap();
        let mut s = solver.init_state().unwrap();
        for _ in 0..20 {
            let before = s.x.norm();
            solver.step(&mut s).unwrap();
            let ratio = s.x.norm() / before;
            assert!((ratio - (1.0_f64 + lambda * lambda).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn frdr_hand_step() {
        let p = identity_b();
        let s = one_step(&p, SolverConfig::new(Method::Frdr, 0.1, scalar(1.0)).gamma(0.2));
        assert!((s.x[0] - 0.9).abs() < 1e-15);
        assert!((s.y[0] - 0.8).abs() < 1e-15);
        assert!(s.u[0].abs() < 1e-13);
        assert_eq!((s.forward_evals, s.resolvent_evals), (1, 2));
    }

    #[test]
    fn frdr_limit_solves_the_unscaled_inclusion() {
        let inst = crate::problems::make_affine_instance(10, 7, 0.8).unwrap();
        let p = inst.problem().unwrap();
        let l = p.lipschitz();
        let gamma = 1.3 / l;
        let lambda = 0.9 * gamma / (1.0 + 2.0 * l * gamma);
        let cfg = SolverConfig::new(Method::Frdr, lambda, Vector::zeros(10)).gamma(gamma).max_iters(100_000).tol(1e-13);
        let t = run(&p, cfg).unwrap();
        assert_eq!(t.status, Status::Converged);
        assert!(t.final_distance().unwrap() <= 1e-8 * (1.0 + inst.x_star.norm()));
        assert!(t.final_residual().unwrap() <= 1e-10);
    }

    #[test]
    fn frdr_without_b_moves_by_dual() {
        let p = ProblemTriple::zero(1);
        let solver = Solver::new(&p, SolverConfig::new(Method::Frdr, 0.5, scalar(2.0)).gamma(1.0)).unwrap();
        let mut s = solver.init_state().unwrap();
        s.u = scalar(0.4);
        solver.step(&mut s).unwrap();
        assert_eq!(s.x[0], 2.0 - 0.5 * 0.4);
        let mut s = solver.init_state().unwrap();
        solver.step(&mut s).unwrap();
        assert_eq!((s.x[0], s.u[0]), (2.0, 0.0));
    }

    #[test]
    fn zeroth_iteration_converges_on_zero_problem() {
        let p = ProblemTriple::zero(3);
        for m in Method::ALL {
            let mut cfg = SolverConfig::new(m, 0.5, dvector![1.0, -2.0, 3.0]);
            if m == Method::Frdr {
                cfg = cfg.gamma(1.0);
            }
            let t = run(&p, cfg).unwrap();
            assert_eq!(t.status, Status::Converged, "{m}");
            assert_eq!(t.iterations(), 1);
            assert_eq!(t.final_state.z, dvector![1.0, -2.0, 3.0]);
        }
    }

    #[test]
    fn update_identity_is_exact() {
        let m = dmatrix![1.0, -2.0; 2.0, 0.5];
        let b = MonotoneOperator::affine(m, dvector![0.3, -0.1]).unwrap();
        let a = MonotoneOperator::l1(2, 0.2).unwrap();
        let c = MonotoneOperator::box_symmetric(2, 1.0).unwrap();
        let p = ProblemTriple::new(a, b, c).unwrap();
        for m in [Method::Bforb, Method::Brfob, Method::DavisYin] {
            let solver = Solver::new(&p, SolverConfig::new(m, 0.01, dvector![2.0, -1.0])).unwrap();
            let mut s = solver.init_state().unwrap();
            for _ in 0..50 {
                let z = s.z.clone();
                solver.step(&mut s).unwrap();
                assert_eq!(s.z, &z + &s.y - &s.x);
            }
        }
    }

    #[test]
    fn one_forward_evaluation_per_iteration() {
        let b = MonotoneOperator::affine(dmatrix![0.2, -1.0; 1.0, 0.2], Vector::zeros(2)).unwrap();
        let p = ProblemTriple::new(MonotoneOperator::identity(2), b, MonotoneOperator::zero(2)).unwrap();
        for m in [Method::Bforb, Method::Brfob, Method::Forb, Method::Rfob] {
            let t = run(&p, SolverConfig::new(m, 0.02, dvector![1.0, 1.0]).max_iters(37).tol(1e-300)).unwrap();
            assert_eq!(t.forward_evals(), t.iterations(), "{m}");
            assert!(t.final_state.init_forward_evals <= 1);
        }
    }

    #[test]
    fn stationary_at_shadow_point() {
        // 0 ∈ (A + B + C)(x) with A = I, B = rotation + offset, C = 0.
        let mb = dmatrix![0.0, -1.0; 1.0, 0.0];
        let bb = dvector![1.0, 2.0];
        let total = Matrix::identity(2, 2) + &mb;
        let x_star = -total.lu().solve(&bb).unwrap();
        let lambda = 0.04;
        let z_star = &x_star * (1.0 + lambda);
        let b = MonotoneOperator::affine(mb, bb).unwrap();
        let p = ProblemTriple::new(MonotoneOperator::identity(2), b, MonotoneOperator::zero(2))
            .unwrap()
            .with_solution(x_star.clone())
            .unwrap()
            .with_shadow(z_star.clone(), lambda)
            .unwrap();
        for m in [Method::Bforb, Method::Brfob] {
            let solver = Solver::new(&p, SolverConfig::new(m, lambda, z_star.clone())).unwrap();
            let mut s = solver.init_state().unwrap();
            for _ in 0..100 {
                solver.step(&mut s).unwrap();
                assert!((&s.z - &z_star).norm() < 1e-12, "{m}");
            }
        }
    }

    #[test]
    fn warnings_and_validation() {
        let p = identity_b();
        let s = Solver::new(&p, SolverConfig::new(Method::Bforb, 0.2, scalar(1.0))).unwrap();
        assert_eq!(s.warnings().len(), 1);
        let s = Solver::new(&p, SolverConfig::new(Method::Bforb, 0.2, scalar(1.0)).enforce_bound(false)).unwrap();
        assert!(s.warnings().is_empty());
        let s = Solver::new(&p, SolverConfig::new(Method::Frdr, 0.5, scalar(1.0)).gamma(0.4)).unwrap();
        assert_eq!(s.warnings().len(), 2);
        assert!(Solver::new(&p, SolverConfig::new(Method::Frdr, 0.1, scalar(1.0))).is_err());
        assert!(Solver::new(&p, SolverConfig::new(Method::Bforb, 0.1, scalar(1.0)).relaxation(0.5)).is_err());
        assert!(Solver::new(&p, SolverConfig::new(Method::Forb, 0.1, scalar(1.0)).relaxation(1.5)).is_err());
        assert!(Solver::new(&p, SolverConfig::new(Method::Fb, -0.1, scalar(1.0))).is_err());
        assert!(Solver::new(&p, SolverConfig::new(Method::Fb, 0.1, dvector![1.0, 2.0])).is_err());
        assert!(Solver::new(&p, SolverConfig::new(Method::Bforb, 0.1, scalar(1.0)).history(InitialHistory::Explicit {
            prev: dvector![1.0, 2.0],
            prev2: scalar(0.0)
        }))
        .is_err());
    }

    #[test]
    fn skew_fb_is_flagged_diverged() {
        let rot = MonotoneOperator::affine(dmatrix![0.0, -1.0; 1.0, 0.0], Vector::zeros(2)).unwrap();
        let p = ProblemTriple::new(MonotoneOperator::zero(2), rot, MonotoneOperator::zero(2)).unwrap();
        let t = run(&p, SolverConfig::new(Method::Fb, 0.5, dvector![1.0, 0.0]).max_iters(1_000_000)).unwrap();
        assert_eq!(t.status, Status::Diverged);
        let grows = t.records.windows(2).all(|w| w[1].step_norm > w[0].step_norm);
        assert!(grows);
    }
}
