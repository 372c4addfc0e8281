use crate::error::Result;
use crate::operator::{ProblemTriple, Vector};

use super::{IterateHistory, IterationRecord, Method, Solver, SolverConfig, Status, Trace};

/// Norm growth beyond `DIVERGENCE_FACTOR·(1 + ‖z_0‖)` counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e12;

/// Runs `config` on `problem` until the stopping rule, `max_iters`, or divergence.
pub fn run(problem: &ProblemTriple, config: SolverConfig) -> Result<Trace> {
    Solver::new(problem, config)?.run()
}

impl Solver<'_> {
    pub fn run(&self) -> Result<Trace> {
        let cfg = self.config();
        let method = cfg.method;
        let x_star = self.problem().x_star().cloned();
        let mut state = self.init_state()?;
        let limit = DIVERGENCE_FACTOR * (1.0 + cfg.z0.norm());
        let three_op = method.tracks_governing_sequence();

        let mut history = cfg.record_history.then(|| IterateHistory {
            z: vec![state.z.clone()],
            u: if method == Method::Frdr { vec![state.u.clone()] } else { Vec::new() },
            y_init: matches!(method, Method::Bforb | Method::Brfob)
                .then(|| (state.y_prev.clone(), state.y_prev2.clone())),
            ..IterateHistory::default()
        });

        let mut records = Vec::new();
        let mut status = Status::MaxIters;
        let (_, mut solution) = self.omega().evaluate(&self.governing_point(&state))?;
        if !three_op {
            solution = state.x.clone();
        }
        for k in 0..cfg.max_iters {
            let z_before: Vector = state.z.clone();
            let u_before = (method == Method::Frdr).then(|| state.u.clone());
            self.step(&mut state)?;

            let dz = (&state.z - &z_before).norm_squared();
            let step_norm = match &u_before {
                Some(u) => {
                    let g = cfg.gamma.unwrap_or(cfg.lambda);
                    (dz + g * g * (&state.u - u).norm_squared()).sqrt()
                }
                None => dz.sqrt(),
            };
            let (omega, x_est) = self.omega().evaluate(&self.governing_point(&state))?;
            let primal = if three_op { x_est } else { state.x.clone() };
            let dist = x_star.as_ref().map(|xs| (&primal - xs).norm());

            if let Some(h) = history.as_mut() {
                h.z.push(state.z.clone());
                if three_op {
                    h.x.push(state.x.clone());
                    h.y.push(state.y.clone());
                }
                if method == Method::Frdr {
                    h.u.push(state.u.clone());
                }
            }
            records.push(IterationRecord {
                k,
                step_norm,
                omega_residual: omega,
                dist_to_solution: dist,
            });

            let znorm = state.z.norm();
            let finite = step_norm.is_finite()
                && omega.is_finite()
                && state.z.iter().chain(state.u.iter()).all(|v| v.is_finite());
            if !finite || znorm > limit {
                status = Status::Diverged;
                break;
            }
            solution = primal;
            if step_norm <= cfg.tol * (1.0 + z_before.norm()) {
                status = Status::Converged;
                break;
            }
        }

        Ok(Trace {
            method,
            lambda: cfg.lambda,
            gamma: cfg.gamma,
            records,
            status,
            warnings: self.warnings().to_vec(),
            final_state: state,
            solution,
            history,
        })
    }
}
