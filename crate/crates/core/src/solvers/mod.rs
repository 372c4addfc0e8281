//! Splitting iterations behind a uniform step/run interface.
//!
//! Three-operator methods (`bforb`, `brfob`, `davis-yin`, `dr`) iterate a
//! governing sequence `z_k` with `x_k = J_{λA}(z_k)`. Two-operator methods
//! (`fb`, `forb`, `rfob`) ignore `A` and iterate `x_k` directly. `frdr` iterates
//! `(x_k, u_k)` with separate resolvent parameters `λ` for `A` and `γ` for `C`.

mod run;
mod steps;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::Vector;

pub use run::run;
pub use steps::Solver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Forward-backward.
    Fb,
    /// Forward-reflected-backward, optionally relaxed.
    Forb,
    /// Reflected-forward-backward, optionally relaxed.
    Rfob,
    DavisYin,
    /// Forward-reflected-Douglas–Rachford.
    Frdr,
    /// Backward-forward-reflected-backward.
    Bforb,
    /// Backward-reflected-forward-backward.
    Brfob,
    /// Douglas–Rachford.
    Dr,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Fb,
        Method::Forb,
        Method::Rfob,
        Method::DavisYin,
        Method::Frdr,
        Method::Bforb,
        Method::Brfob,
        Method::Dr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Fb => "fb",
            Method::Forb => "forb",
            Method::Rfob => "rfob",
            Method::DavisYin => "davis-yin",
            Method::Frdr => "frdr",
            Method::Bforb => "bforb",
            Method::Brfob => "brfob",
            Method::Dr => "dr",
        }
    }

    /// Methods driven by `z_k` through `x_k = J_{λA}(z_k)`.
    pub fn tracks_governing_sequence(self) -> bool {
        matches!(self, Method::DavisYin | Method::Bforb | Method::Brfob | Method::Dr)
    }

    /// Two-operator methods that do not use `A`.
    pub fn ignores_a(self) -> bool {
        matches!(self, Method::Fb | Method::Forb | Method::Rfob)
    }

    pub fn accepts_relaxation(self) -> bool {
        matches!(self, Method::Forb | Method::Rfob)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Method::ALL
            .into_iter()
            .find(|m| m.name() == key || (key == "davisyin" && *m == Method::DavisYin))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method `{s}`")))
    }
}

/// Supremum of stepsizes for which convergence is guaranteed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepBound {
    /// `λ` must be strictly below this value.
    Below(f64),
    /// Convergence needs assumptions beyond monotonicity and Lipschitz
    /// continuity (typically cocoercivity of `B`).
    NotGuaranteed,
}

impl StepBound {
    pub fn value(self) -> Option<f64> {
        match self {
            StepBound::Below(v) => Some(v),
            StepBound::NotGuaranteed => None,
        }
    }
}

/// Stepsize bound for `method` given the Lipschitz constant of `B`.
/// `gamma` must be supplied exactly when `method` is FRDR.
pub fn max_stepsize(method: Method, lipschitz: f64, gamma: Option<f64>) -> Result<StepBound> {
    if !(lipschitz >= 0.0 && lipschitz.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Lipschitz constant must be finite and nonnegative, got {lipschitz}"
        )));
    }
    match (method, gamma) {
        (Method::Frdr, None) => return Err(Error::MissingGamma),
        (Method::Frdr, Some(g)) => {
            if !(g > 0.0) {
                return Err(Error::InvalidParameter(format!("gamma must be positive, got {g}")));
            }
            return Ok(StepBound::Below(g / (1.0 + 2.0 * lipschitz * g)));
        }
        (m, Some(_)) => {
            return Err(Error::InvalidParameter(format!("gamma does not apply to {m}")));
        }
        _ => {}
    }
    Ok(match method {
        Method::Bforb => StepBound::Below(1.0 / (8.0 * lipschitz)),
        Method::Brfob => StepBound::Below(1.0 / (22.0 * lipschitz)),
        Method::Forb => StepBound::Below(1.0 / (2.0 * lipschitz)),
        _ => StepBound::NotGuaranteed,
    })
}

/// Initial history for methods that look back in time.
///
/// For `bforb`/`brfob` the pair is `(y_{-1}, y_{-2})`; for `forb`, `rfob` and
/// `frdr` only `prev` is used, as `x_{-1}`.
#[derive(Debug, Clone, Default)]
pub enum InitialHistory {
    /// `y_{-1} = y_{-2} = J_{λA}(z_0)`, respectively `x_{-1} = x_0`.
    #[default]
    WarmStart,
    Explicit { prev: Vector, prev2: Vector },
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub method: Method,
    pub lambda: f64,
    /// FRDR resolvent parameter for `C`.
    pub gamma: Option<f64>,
    /// Relaxation `h ∈ (0, 1]`; only FoRB and RFoB accept `h ≠ 1`.
    pub relaxation: f64,
    pub max_iters: usize,
    /// Stop once the successive change is at most `tol·(1 + ‖z_k‖)`.
    pub tol: f64,
    pub z0: Vector,
    pub history: InitialHistory,
    /// Record a warning when `λ` is outside the guaranteed range.
    pub enforce_bound: bool,
    /// Keep every iterate in [`Trace::history`].
    pub record_history: bool,
}

impl SolverConfig {
    pub fn new(method: Method, lambda: f64, z0: Vector) -> Self {
        SolverConfig {
            method,
            lambda,
            gamma: None,
            relaxation: 1.0,
            max_iters: 10_000,
            tol: 1e-10,
            z0,
            history: InitialHistory::WarmStart,
            enforce_bound: true,
            record_history: false,
        }
    }

    pub fn gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }

    pub fn relaxation(mut self, h: f64) -> Self {
        self.relaxation = h;
        self
    }

    pub fn max_iters(mut self, n: usize) -> Self {
        self.max_iters = n;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn history(mut self, history: InitialHistory) -> Self {
        self.history = history;
        self
    }

    pub fn record(mut self, on: bool) -> Self {
        self.record_history = on;
        self
    }

    pub fn enforce_bound(mut self, on: bool) -> Self {
        self.enforce_bound = on;
        self
    }
}

/// Iterate state. Which fields are live depends on the method:
///
/// - `z`: governing sequence of the three-operator methods (`z_{k}` after `k` steps).
/// - `x`, `y`: the most recent `x_k`, `y_k`; for two-operator methods and FRDR
///   `x` is the iterate itself.
/// - `y_prev`, `y_prev2`: `y_{k-1}`, `y_{k-2}` (BFoRB, BRFoB).
/// - `b_y_prev`, `b_y_prev2`: cached `B(y_{k-1})`, `B(y_{k-2})` (BFoRB).
/// - `x_prev`, `b_x`, `b_x_prev`: `x_{k-1}` and cached `B(x_k)`, `B(x_{k-1})`
///   (FB, FoRB, RFoB, FRDR).
/// - `u`: FRDR dual variable.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub k: usize,
    pub z: Vector,
    pub x: Vector,
    pub y: Vector,
    pub y_prev: Vector,
    pub y_prev2: Vector,
    pub b_y_prev: Vector,
    pub b_y_prev2: Vector,
    pub x_prev: Vector,
    pub b_x: Vector,
    pub b_x_prev: Vector,
    pub u: Vector,
    /// Forward evaluations of `B` made by steps.
    pub forward_evals: usize,
    /// Resolvent evaluations made by steps.
    pub resolvent_evals: usize,
    /// Evaluations spent building the initial history.
    pub init_forward_evals: usize,
    pub init_resolvent_evals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIters,
    /// A non-finite entry appeared or the iterates left the `1e12·(1+‖z_0‖)` ball.
    Diverged,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Converged => "converged",
            Status::MaxIters => "max_iters",
            Status::Diverged => "diverged",
        })
    }
}

/// One row of a trace: the state after step `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    /// `‖z_{k+1} − z_k‖` (iterate change for two-operator methods).
    pub step_norm: f64,
    /// Fixed-point residual of the new governing point, see
    /// [`omega_residual`](crate::certificates::omega_residual).
    pub omega_residual: f64,
    /// `‖J_{λA}(z_{k+1}) − x*‖` when the problem carries `x*`.
    pub dist_to_solution: Option<f64>,
}

/// Every iterate of a run, for certificates and flow comparisons.
#[derive(Debug, Clone, Default)]
pub struct IterateHistory {
    /// Governing sequence `z_0..=z_N` (the iterates `x_0..=x_N` for two-operator
    /// methods and FRDR).
    pub z: Vec<Vector>,
    /// `x_0..x_{N-1}` for three-operator methods.
    pub x: Vec<Vector>,
    /// `y_0..y_{N-1}`.
    pub y: Vec<Vector>,
    /// FRDR `u_0..=u_N`.
    pub u: Vec<Vector>,
    /// `(y_{-1}, y_{-2})` used to start BFoRB/BRFoB.
    pub y_init: Option<(Vector, Vector)>,
}

impl IterateHistory {
    /// `y_k` for `k ≥ -2`.
    pub fn y_at(&self, k: isize) -> Option<&Vector> {
        match k {
            -1 => self.y_init.as_ref().map(|p| &p.0),
            -2 => self.y_init.as_ref().map(|p| &p.1),
            k if k >= 0 => self.y.get(k as usize),
            _ => None,
        }
    }

    /// Sequence approximating the solution at each iteration: `x_k` for
    /// three-operator methods, the iterates themselves otherwise.
    pub fn primal(&self) -> &[Vector] {
        if self.x.is_empty() {
            &self.z
        } else {
            &self.x
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub method: Method,
    pub lambda: f64,
    pub gamma: Option<f64>,
    pub records: Vec<IterationRecord>,
    pub status: Status,
    pub warnings: Vec<String>,
    pub final_state: SolverState,
    /// `J_{λA}` of the final governing point.
    pub solution: Vector,
    pub history: Option<IterateHistory>,
}

impl Trace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.records.last().map(|r| r.omega_residual)
    }

    pub fn final_distance(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.dist_to_solution)
    }

    /// First `k` whose distance to `x*` is at most `threshold`.
    pub fn first_within(&self, threshold: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.dist_to_solution.is_some_and(|d| d <= threshold))
            .map(|r| r.k)
    }

    pub fn forward_evals(&self) -> usize {
        self.final_state.forward_evals
    }

    pub fn resolvent_evals(&self) -> usize {
        self.final_state.resolvent_evals
    }
}
