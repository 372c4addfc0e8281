//! Monotone operator splitting in finite dimensions.
//!
//! `splitkit` solves inclusions `0 ∈ (A + B + C)(x)` where `A` and `C` are
//! maximally monotone operators accessed through their resolvents and `B` is
//! single-valued, monotone and Lipschitz but not necessarily cocoercive.
//!
//! The crate is organised as:
//!
//! - [`operator`]: the operator abstraction, closed-form resolvents and the
//!   [`ProblemTriple`](operator::ProblemTriple) bundling `(A, B, C)`.
//! - [`solvers`]: backward-forward-reflected-backward, backward-reflected-forward-backward,
//!   Davis–Yin, Douglas–Rachford, forward-backward, forward-reflected-backward,
//!   reflected-forward-backward and forward-reflected-Douglas–Rachford iterations.
//! - [`certificates`]: per-iteration descent inequalities and Lyapunov sequences
//!   evaluated along recorded runs.
//! - [`problems`]: seeded affine and saddle-point instances with ground truth.
//! - [`dynamics`]: explicit-Euler simulation of the proximal point and
//!   Douglas–Rachford flows.
//! - [`harness`]: config-driven experiment runner behind the `splitkit` binary.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod certificates;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod operator;
pub mod problems;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};
pub use operator::{Matrix, MonotoneOperator, ProblemTriple, Vector};
pub use solvers::{Method, Solver, SolverConfig, Status, Trace};
