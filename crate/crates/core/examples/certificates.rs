//! Evaluate the per-iteration descent inequalities along recorded runs.
//!
//! Inside the stepsize bounds the Lyapunov sequences decrease monotonically.
//! At `λ = 2/L` BFoRB diverges, yet its one-step inequality still holds: that
//! lemma does not depend on the stepsize.
//!
//! ```bash
//! cargo run --release --example certificates
//! ```

use splitkit::certificates::certify;
use splitkit::problems::make_affine_instance;
use splitkit::{Method, SolverConfig, Vector};

fn main() -> splitkit::Result<()> {
    let problem = make_affine_instance(20, 5, 0.8)?.problem()?;
    let l = problem.lipschitz();
    let cases = [
        (Method::Bforb, 0.9 / (8.0 * l)),
        (Method::Brfob, 0.9 / (22.0 * l)),
        (Method::Bforb, 2.0 / l),
    ];
    for (method, lambda) in cases {
        let cfg = SolverConfig::new(method, lambda, Vector::zeros(20)).max_iters(1000).record(true);
        let trace = splitkit::solvers::run(&problem, cfg)?;
        let report = certify(&problem, &trace)?;
        let s = &report.summary;
        println!(
            "{method} lambda*L={:.4} status={} eps={:+.4} min_slack={:.3e} descent_violation={:.3e} lower_bound_violation={:.3e} passed={}",
            lambda * l,
            trace.status,
            report.epsilon,
            s.min_lemma_slack,
            s.max_descent_violation,
            s.max_lower_bound_violation,
            report.passed()
        );
        if !s.descent_applies {
            println!("  (eps <= 0: descent is not claimed at this stepsize, only the lemma)");
        }
    }
    Ok(())
}
